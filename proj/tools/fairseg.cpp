// fairseg command line: dataset generation, training, robustness and
// fairness evaluation, schedule plotting, gradient checking.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairseg/checkpoint.hpp"
#include "fairseg/datagen.hpp"
#include "fairseg/dataset.hpp"
#include "fairseg/errors.hpp"
#include "fairseg/format.hpp"
#include "fairseg/gradcheck.hpp"
#include "fairseg/kernels.hpp"
#include "fairseg/manifest.hpp"
#include "fairseg/report.hpp"
#include "fairseg/svg.hpp"
#include "fairseg/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw fairseg::IoError("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out.flush()) throw fairseg::IoError("write failure on " + path.string());
}

std::string kernels_token() {
  return fairseg::kernels::backend_name(fairseg::kernels::active_backend());
}

struct GenArgs {
  std::string out;
  int count = 100;
  uint64_t seed = 42;
  int size = 64;
  double bias_contrast = 0.5;
  double bias_noise = 0.05;
};

int run_gen(const GenArgs& a) {
  fairseg::GenConfig cfg;
  cfg.count = a.count;
  cfg.seed = a.seed;
  cfg.size = a.size;
  cfg.bias_contrast = a.bias_contrast;
  cfg.bias_noise_sigma = a.bias_noise;

  const auto records = fairseg::generate_dataset(cfg);
  const fs::path dir(a.out);
  fs::create_directories(dir);
  fairseg::save_dataset(records, dir);
  write_text(dir / "gen_config.json", fairseg::gen_config_to_json(cfg));

  std::vector<fs::path> outputs{dir / "attributes.csv", dir / "gen_config.json"};
  for (const auto& rec : records) {
    outputs.push_back(dir / "images" / (rec.sample_id + ".ppm"));
    outputs.push_back(dir / "masks" / (rec.sample_id + ".pgm"));
  }
  const json config{{"count", cfg.count},         {"size", cfg.size},
                    {"seed", cfg.seed},           {"bias_contrast", cfg.bias_contrast},
                    {"bias_noise", cfg.bias_noise_sigma}, {"kernels", kernels_token()}};
  fairseg::write_manifest(dir, "gen", config, {}, outputs);
  std::cout << "generated " << records.size() << " samples in " << dir.string() << "\n";
  return 0;
}

struct TrainArgs {
  std::string data;
  std::string out;
  std::string mode = "multi";
  std::string schedule = "linear";
  std::string fairness = "variance";
  int epochs = 30;
  int batch = 8;
  double lr = 1e-3;
  double sigma_r = 0.1;
  uint64_t seed = 42;
  bool schedule_given = false;
};

int run_train(const TrainArgs& a) {
  if (a.mode == "single" && a.schedule_given)
    std::cerr << "warning: --schedule is ignored in single mode\n";

  fairseg::TrainConfig cfg;
  cfg.mode = fairseg::parse_train_mode(a.mode);
  cfg.schedule.kind = fairseg::parse_schedule_kind(a.schedule);
  cfg.fairness = fairseg::parse_fairness_variant(a.fairness);
  cfg.epochs = a.epochs;
  cfg.batch_size = a.batch;
  cfg.adam.lr = a.lr;
  cfg.sigma_r = a.sigma_r;
  cfg.seed = a.seed;

  const fs::path data_dir(a.data);
  const int classes = fairseg::dataset_class_count(data_dir);
  const auto dataset = fairseg::load_dataset(data_dir, classes);
  const auto result = fairseg::train(cfg, dataset);

  const fs::path dir(a.out);
  fs::create_directories(dir);
  fairseg::RunMeta meta;
  meta.mode = a.mode;
  meta.schedule = a.schedule;
  meta.fairness = a.fairness;
  meta.epochs = a.epochs;
  meta.seed = a.seed;
  meta.batch_size = a.batch;
  meta.learning_rate = a.lr;
  meta.sigma_r = a.sigma_r;
  fairseg::save_checkpoint(result.params, meta, dir / "checkpoint.json");
  write_text(dir / "train_log.csv", fairseg::train_log_csv(result.log));

  const json config{{"data", a.data},       {"mode", a.mode},     {"schedule", a.schedule},
                    {"fairness", a.fairness}, {"epochs", a.epochs}, {"batch", a.batch},
                    {"lr", a.lr},           {"sigma_r", a.sigma_r}, {"seed", a.seed},
                    {"kernels", kernels_token()}};
  fairseg::write_manifest(dir, "train", config, {a.data},
                          {dir / "checkpoint.json", dir / "train_log.csv"});
  std::cout << "trained " << a.epochs << " epochs; final train miou "
            << fairseg::format_double(result.log.back().train_miou) << "\n";
  return 0;
}

struct EvalArgs {
  std::string ckpt;
  std::string data;
  std::string out;
  std::string severities = "0.1,0.3,0.5";
  uint64_t seed = 42;
};

int run_eval(const EvalArgs& a) {
  const auto ckpt = fairseg::load_checkpoint(a.ckpt);
  const fs::path data_dir(a.data);
  const int classes = fairseg::dataset_class_count(data_dir, ckpt.params.num_classes);
  fairseg::ensure_class_match(ckpt.params, classes);
  const auto dataset = fairseg::load_dataset(data_dir, classes);
  const std::vector<double> severities = fairseg::parse_double_list(a.severities);
  for (double s : severities)
    if (!(s >= 0.0 && s <= 1.0)) throw fairseg::ConfigError("severity outside [0,1]");

  const auto rows = fairseg::perturbation_sweep(ckpt.params, dataset, severities, a.seed);
  const fs::path dir(a.out);
  fs::create_directories(dir);
  write_text(dir / "report.csv", fairseg::eval_csv(rows));

  const json config{{"ckpt", a.ckpt},
                    {"data", a.data},
                    {"severities", a.severities},
                    {"seed", a.seed},
                    {"kernels", kernels_token()}};
  fairseg::write_manifest(dir, "eval", config, {a.ckpt, a.data}, {dir / "report.csv"});
  std::cout << "wrote " << rows.size() << " rows to " << (dir / "report.csv").string() << "\n";
  return 0;
}

struct FairnessArgs {
  std::string ckpt;
  std::string data;
  std::string out;
  std::string attributes;  // comma list; empty = all
};

int run_fairness(const FairnessArgs& a) {
  const auto ckpt = fairseg::load_checkpoint(a.ckpt);
  const fs::path data_dir(a.data);
  const int classes = fairseg::dataset_class_count(data_dir, ckpt.params.num_classes);
  fairseg::ensure_class_match(ckpt.params, classes);
  const auto dataset = fairseg::load_dataset(data_dir, classes);

  std::vector<std::string> names;
  if (!a.attributes.empty()) {
    std::string cur;
    for (char c : a.attributes + ",") {
      if (c == ',') {
        if (!cur.empty()) names.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
  }

  const auto rows = fairseg::fairness_report(ckpt.params, dataset, names);
  const fs::path dir(a.out);
  fs::create_directories(dir);
  write_text(dir / "fairness.csv", fairseg::fairness_csv(rows));

  const json config{{"ckpt", a.ckpt},
                    {"data", a.data},
                    {"attributes", a.attributes},
                    {"kernels", kernels_token()}};
  fairseg::write_manifest(dir, "fairness-report", config, {a.ckpt, a.data},
                          {dir / "fairness.csv"});
  std::cout << "wrote " << rows.size() << " rows to " << (dir / "fairness.csv").string() << "\n";
  return 0;
}

struct ScheduleArgs {
  std::string schedule = "linear";
  int epochs = 30;
  std::string out;
};

int run_schedule_plot(const ScheduleArgs& a) {
  fairseg::ScheduleConfig cfg;
  cfg.kind = fairseg::parse_schedule_kind(a.schedule);
  cfg.total_epochs = a.epochs;
  const auto rows = fairseg::schedule_table(cfg);

  const fs::path dir(a.out);
  fs::create_directories(dir);
  write_text(dir / "schedule.csv", fairseg::schedule_csv(rows));
  write_text(dir / "schedule.svg", fairseg::schedule_svg(rows));

  const json config{{"schedule", a.schedule}, {"epochs", a.epochs}};
  fairseg::write_manifest(dir, "schedule-plot", config, {},
                          {dir / "schedule.csv", dir / "schedule.svg"});
  std::cout << "wrote schedule.csv and schedule.svg to " << dir.string() << "\n";
  return 0;
}

struct GradcheckArgs {
  uint64_t seed = 42;
  std::string fairness = "variance";
  bool corrupt = false;
};

int run_gradcheck(const GradcheckArgs& a) {
  const auto rep = fairseg::gradcheck(a.seed, fairseg::parse_fairness_variant(a.fairness),
                                      a.corrupt);
  std::cout << "gradcheck: max_rel_error=" << fairseg::format_double(rep.max_rel_error)
            << " over " << rep.checked << " parameters (worst " << rep.worst_coordinate
            << ")\n";
  std::cout << (rep.pass ? "PASS" : "FAIL") << "\n";
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale fairness/robustness segmentation laboratory"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* cmd_gen = app.add_subcommand("gen", "generate a synthetic dataset directory");
  cmd_gen->add_option("--out", gen.out, "output dataset directory")->required();
  cmd_gen->add_option("--count", gen.count, "number of samples");
  cmd_gen->add_option("--seed", gen.seed, "generation seed");
  cmd_gen->add_option("--size", gen.size, "image side length");
  cmd_gen->add_option("--bias-contrast", gen.bias_contrast,
                      "contrast reduction for the dark_skin subgroup, in [0,1]");
  cmd_gen->add_option("--bias-noise", gen.bias_noise,
                      "noise sigma added to dark_skin samples");

  TrainArgs tr;
  auto* cmd_train = app.add_subcommand("train", "train a segmentation model");
  cmd_train->add_option("--data", tr.data, "dataset directory")->required();
  cmd_train->add_option("--out", tr.out, "output directory")->required();
  cmd_train->add_option("--mode", tr.mode, "training mode")
      ->check(CLI::IsMember({"single", "multi"}));
  auto* sched_opt = cmd_train->add_option("--schedule", tr.schedule, "homotopy schedule")
                        ->check(CLI::IsMember({"linear", "sigmoid", "piecewise"}));
  cmd_train->add_option("--fairness", tr.fairness, "fairness loss variant")
      ->check(CLI::IsMember({"variance", "pergroup"}));
  cmd_train->add_option("--epochs", tr.epochs, "training epochs");
  cmd_train->add_option("--batch", tr.batch, "batch size");
  cmd_train->add_option("--lr", tr.lr, "Adam learning rate");
  cmd_train->add_option("--sigma-r", tr.sigma_r, "robustness logit-noise sigma");
  cmd_train->add_option("--seed", tr.seed, "run seed");

  EvalArgs ev;
  auto* cmd_eval = app.add_subcommand("eval", "perturbation sweep report");
  cmd_eval->add_option("--ckpt", ev.ckpt, "checkpoint path")->required();
  cmd_eval->add_option("--data", ev.data, "dataset directory")->required();
  cmd_eval->add_option("--out", ev.out, "output directory")->required();
  cmd_eval->add_option("--severities", ev.severities, "comma-separated severities");
  cmd_eval->add_option("--seed", ev.seed, "perturbation seed");

  FairnessArgs fr;
  auto* cmd_fair = app.add_subcommand("fairness-report", "per-attribute subgroup report");
  cmd_fair->add_option("--ckpt", fr.ckpt, "checkpoint path")->required();
  cmd_fair->add_option("--data", fr.data, "dataset directory")->required();
  cmd_fair->add_option("--out", fr.out, "output directory")->required();
  cmd_fair->add_option("--attributes", fr.attributes,
                       "comma-separated attribute names (default: all)");

  ScheduleArgs sc;
  auto* cmd_sched = app.add_subcommand("schedule-plot", "emit schedule CSV and SVG chart");
  cmd_sched->add_option("--schedule", sc.schedule, "homotopy schedule")
      ->check(CLI::IsMember({"linear", "sigmoid", "piecewise"}));
  cmd_sched->add_option("--epochs", sc.epochs, "epoch count");
  cmd_sched->add_option("--out", sc.out, "output directory")->required();

  GradcheckArgs gc;
  auto* cmd_gc = app.add_subcommand("gradcheck", "finite-difference gradient verification");
  cmd_gc->add_option("--seed", gc.seed, "fixture seed");
  cmd_gc->add_option("--fairness", gc.fairness, "fairness loss variant")
      ->check(CLI::IsMember({"variance", "pergroup"}));
  cmd_gc->add_flag("--corrupt", gc.corrupt, "corrupt the analytic gradient (debug)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit 0
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (cmd_gen->parsed()) return run_gen(gen);
    if (cmd_train->parsed()) {
      tr.schedule_given = sched_opt->count() > 0;
      return run_train(tr);
    }
    if (cmd_eval->parsed()) return run_eval(ev);
    if (cmd_fair->parsed()) return run_fairness(fr);
    if (cmd_sched->parsed()) return run_schedule_plot(sc);
    if (cmd_gc->parsed()) return run_gradcheck(gc);
  } catch (const fairseg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
