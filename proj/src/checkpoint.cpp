#include "fairseg/checkpoint.hpp"

#include <fstream>

#include <json.hpp>

#include "fairseg/errors.hpp"

namespace fairseg {

using nlohmann::json;

std::string checkpoint_to_json(const ModelParams& params, const RunMeta& meta) {
  json j;
  j["version"] = kCheckpointVersion;
  j["arch"] = {
      {"input_channels", kInputChannels},
      {"hidden_channels", kHiddenChannels},
      {"kernel", kConvKernel},
      {"num_classes", params.num_classes},
  };
  j["weights"] = {
      {"conv1_weights", params.conv1_weights},
      {"conv1_bias", params.conv1_bias},
      {"conv2_weights", params.conv2_weights},
      {"conv2_bias", params.conv2_bias},
  };
  j["meta"] = {
      {"mode", meta.mode},
      {"schedule", meta.schedule},
      {"fairness", meta.fairness},
      {"epochs", meta.epochs},
      {"seed", meta.seed},
      {"batch_size", meta.batch_size},
      {"learning_rate", meta.learning_rate},
      {"sigma_r", meta.sigma_r},
  };
  return j.dump(2) + "\n";
}

void save_checkpoint(const ModelParams& params, const RunMeta& meta,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  const std::string s = checkpoint_to_json(params, meta);
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
  if (!out.flush()) throw IoError("write failure on " + path.string());
}

namespace {

std::vector<double> read_array(const json& weights, const char* key, size_t expect) {
  if (!weights.contains(key)) throw CheckpointError(std::string("missing weights.") + key);
  const json& arr = weights.at(key);
  if (!arr.is_array())
    throw CheckpointError(std::string("weights.") + key + " is not an array");
  if (arr.size() != expect)
    throw CheckpointError(std::string("weights.") + key + " has length " +
                          std::to_string(arr.size()) + ", expected " + std::to_string(expect));
  std::vector<double> out;
  out.reserve(expect);
  for (const json& v : arr) {
    if (!v.is_number()) throw CheckpointError(std::string("weights.") + key + " holds a non-number");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw CheckpointError("invalid checkpoint JSON: " + std::string(e.what()));
  }

  if (!j.contains("version") || !j.at("version").is_number_integer())
    throw CheckpointError("checkpoint has no integer version field");
  if (j.at("version").get<int>() != kCheckpointVersion)
    throw CheckpointError("unsupported checkpoint version " + j.at("version").dump() +
                          " (expected " + std::to_string(kCheckpointVersion) + ")");

  if (!j.contains("arch") || !j.contains("weights") || !j.contains("meta"))
    throw CheckpointError("checkpoint is missing arch/weights/meta");
  const json& arch = j.at("arch");
  for (const char* key : {"input_channels", "hidden_channels", "kernel", "num_classes"})
    if (!arch.contains(key)) throw CheckpointError(std::string("arch is missing ") + key);
  if (arch.at("input_channels").get<int>() != kInputChannels ||
      arch.at("hidden_channels").get<int>() != kHiddenChannels ||
      arch.at("kernel").get<int>() != kConvKernel)
    throw CheckpointError("arch mismatch: checkpoint was written for a different network");
  const int num_classes = arch.at("num_classes").get<int>();
  if (num_classes <= 0) throw CheckpointError("arch.num_classes must be positive");

  Checkpoint ckpt;
  ckpt.params.num_classes = num_classes;
  const json& w = j.at("weights");
  ckpt.params.conv1_weights =
      read_array(w, "conv1_weights", static_cast<size_t>(kHiddenChannels) * kInputChannels * 9);
  ckpt.params.conv1_bias = read_array(w, "conv1_bias", kHiddenChannels);
  ckpt.params.conv2_weights =
      read_array(w, "conv2_weights", static_cast<size_t>(num_classes) * kHiddenChannels);
  ckpt.params.conv2_bias = read_array(w, "conv2_bias", num_classes);

  const json& m = j.at("meta");
  for (const char* key : {"mode", "schedule", "epochs", "seed"})
    if (!m.contains(key)) throw CheckpointError(std::string("meta is missing ") + key);
  ckpt.meta.mode = m.at("mode").get<std::string>();
  ckpt.meta.schedule = m.at("schedule").get<std::string>();
  ckpt.meta.epochs = m.at("epochs").get<int>();
  ckpt.meta.seed = m.at("seed").get<uint64_t>();
  ckpt.meta.fairness = m.value("fairness", std::string("variance"));
  ckpt.meta.batch_size = m.value("batch_size", 0);
  ckpt.meta.learning_rate = m.value("learning_rate", 0.0);
  ckpt.meta.sigma_r = m.value("sigma_r", 0.0);
  return ckpt;
}

}  // namespace fairseg
