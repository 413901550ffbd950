#include "fairseg/trainer.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

#include "fairseg/errors.hpp"
#include "fairseg/kernels.hpp"
#include "fairseg/metrics.hpp"
#include "fairseg/rng.hpp"

namespace fairseg {

TrainMode parse_train_mode(const std::string& token) {
  if (token == "single") return TrainMode::single;
  if (token == "multi") return TrainMode::multi;
  throw ConfigError("unknown mode `" + token + "` (valid: single|multi)");
}

std::string to_string(TrainMode mode) {
  return mode == TrainMode::single ? "single" : "multi";
}

AdamState make_adam_state(const ModelParams& params) {
  AdamState s;
  s.m = zero_gradients(params);
  s.v = zero_gradients(params);
  return s;
}

void adam_step(ModelParams& params, const GradientSet& grads, AdamState& state,
               const AdamHyper& hyper) {
  state.step += 1;
  const auto t = static_cast<double>(state.step);
  const double bc1 = 1.0 / (1.0 - std::pow(hyper.beta1, t));
  const double bc2 = 1.0 / (1.0 - std::pow(hyper.beta2, t));
  const auto& k = kernels::active();
  const auto run = [&](std::vector<double>& p, std::vector<double>& m,
                       std::vector<double>& v, const std::vector<double>& g) {
    if (p.size() != g.size() || p.size() != m.size() || p.size() != v.size())
      throw ConfigError("adam_step: tensor shapes differ");
    k.adam_update(p.data(), m.data(), v.data(), g.data(), p.size(), hyper.lr,
                  hyper.beta1, hyper.beta2, hyper.eps, bc1, bc2);
  };
  run(params.conv1_weights, state.m.conv1_weights, state.v.conv1_weights, grads.conv1_weights);
  run(params.conv1_bias, state.m.conv1_bias, state.v.conv1_bias, grads.conv1_bias);
  run(params.conv2_weights, state.m.conv2_weights, state.v.conv2_weights, grads.conv2_weights);
  run(params.conv2_bias, state.m.conv2_bias, state.v.conv2_bias, grads.conv2_bias);
}

namespace {

void validate_config(const TrainConfig& cfg, const std::vector<DatasetRecord>& dataset) {
  if (dataset.empty()) throw ConfigError("training dataset is empty");
  if (cfg.epochs < 1) throw ConfigError("epochs must be >= 1");
  if (cfg.batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (cfg.adam.lr < 0) throw ConfigError("learning rate must be >= 0");
  if (cfg.sigma_r < 0) throw ConfigError("sigma_r must be >= 0");
  const int h = dataset[0].image.height, w = dataset[0].image.width;
  const int c = dataset[0].mask.num_classes;
  for (const DatasetRecord& rec : dataset) {
    validate(rec);
    if (rec.image.height != h || rec.image.width != w || rec.mask.num_classes != c)
      throw ConfigError("dataset samples have mixed shapes (sample " + rec.sample_id + ")");
  }
}

std::vector<std::string> resolve_attributes(const TrainConfig& cfg,
                                            const std::vector<DatasetRecord>& dataset) {
  std::vector<std::string> names =
      cfg.attributes.empty() ? attribute_names(dataset[0].attributes) : cfg.attributes;
  if (names.empty())
    throw ConfigError("fairness loss needs at least one attribute; dataset has none");
  for (const std::string& n : names)
    if (dataset[0].attributes.value_of(n) < 0)
      throw ConfigError("attribute `" + n + "` not present in dataset");
  return names;
}

double mean_train_miou(const ModelParams& params,
                       const std::vector<DatasetRecord>& dataset) {
  double sum = 0.0;
  for (const DatasetRecord& rec : dataset)
    sum += miou(predict(params, rec.image), rec.mask).miou;
  return sum / static_cast<double>(dataset.size());
}

}  // namespace

TrainResult train(const TrainConfig& cfg, const std::vector<DatasetRecord>& dataset) {
  validate_config(cfg, dataset);
  const std::vector<std::string> attributes = resolve_attributes(cfg, dataset);

  ScheduleConfig schedule = cfg.schedule;
  schedule.total_epochs = cfg.epochs;
  if (cfg.mode == TrainMode::multi) validate(schedule);

  const int num_classes = dataset[0].mask.num_classes;
  ModelParams params = init_params(cfg.seed, num_classes);
  AdamState adam = make_adam_state(params);

  const size_t n = dataset.size();
  const uint64_t shuffle_domain = Rng::substream_seed(cfg.seed, rng_streams::kEpochShuffle);
  const uint64_t noise_domain = Rng::substream_seed(cfg.seed, rng_streams::kBatchNoise);

  TrainResult result;
  result.log.reserve(cfg.epochs);

  std::vector<size_t> order(n);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    const ScheduleWeights weights = cfg.mode == TrainMode::single
                                        ? ScheduleWeights{1.0, 0.0, 0.0}
                                        : weights_at(schedule, epoch);

    std::iota(order.begin(), order.end(), 0);
    Rng shuffle_rng = Rng::substream(shuffle_domain, static_cast<uint64_t>(epoch));
    for (size_t i = n - 1; i > 0; --i) {
      const size_t j = shuffle_rng.bounded(i + 1);
      std::swap(order[i], order[j]);
    }

    const uint64_t epoch_noise = Rng::substream_seed(noise_domain, static_cast<uint64_t>(epoch));
    double sum_acc = 0.0, sum_rob = 0.0, sum_fair = 0.0, sum_total = 0.0;
    size_t batch_count = 0;

    for (size_t start = 0; start < n; start += cfg.batch_size) {
      const size_t end = std::min(n, start + static_cast<size_t>(cfg.batch_size));
      std::vector<LogitMap> logits;
      std::vector<const MaskTensor*> gts;
      std::vector<const AttributeRecord*> attrs;
      logits.reserve(end - start);
      for (size_t i = start; i < end; ++i) {
        const DatasetRecord& rec = dataset[order[i]];
        logits.push_back(forward(params, rec.image));
        gts.push_back(&rec.mask);
        attrs.push_back(&rec.attributes);
      }

      LossOptions opt;
      opt.fairness = cfg.fairness;
      opt.sigma_r = cfg.sigma_r;
      opt.noise_seed = Rng::substream_seed(epoch_noise, batch_count);
      opt.attributes = attributes;

      const TotalLoss tl = total_loss(logits, gts, attrs, weights, opt);
      if (!std::isfinite(tl.breakdown.l_total))
        throw Error("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                    std::to_string(batch_count) + " (training diverged)");

      GradientSet grads = zero_gradients(params);
      for (size_t i = start; i < end; ++i) {
        const DatasetRecord& rec = dataset[order[i]];
        accumulate(grads, backward(params, rec.image, tl.dlogits[i - start]));
      }
      adam_step(params, grads, adam, cfg.adam);

      sum_acc += tl.breakdown.l_acc;
      sum_rob += tl.breakdown.l_rob;
      sum_fair += tl.breakdown.l_fair;
      sum_total += tl.breakdown.l_total;
      ++batch_count;
    }

    EpochLogRow row;
    row.epoch = epoch;
    row.alpha = weights.alpha;
    row.beta = weights.beta;
    row.gamma = weights.gamma;
    const auto bc = static_cast<double>(batch_count);
    row.mean_l_acc = sum_acc / bc;
    row.mean_l_rob = sum_rob / bc;
    row.mean_l_fair = sum_fair / bc;
    row.mean_l_total = sum_total / bc;
    row.train_miou = mean_train_miou(params, dataset);
    row.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    result.log.push_back(row);
  }

  result.params = std::move(params);
  return result;
}

}  // namespace fairseg
