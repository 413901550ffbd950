#include "fairseg/homotopy.hpp"

#include <cmath>

#include "fairseg/errors.hpp"

namespace fairseg {

ScheduleKind parse_schedule_kind(const std::string& token) {
  if (token == "linear") return ScheduleKind::linear;
  if (token == "sigmoid") return ScheduleKind::sigmoid;
  if (token == "piecewise") return ScheduleKind::piecewise;
  throw ConfigError("unknown schedule kind `" + token + "` (valid: linear|sigmoid|piecewise)");
}

std::string to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::linear: return "linear";
    case ScheduleKind::sigmoid: return "sigmoid";
    case ScheduleKind::piecewise: return "piecewise";
  }
  return "linear";
}

void validate(const ScheduleConfig& cfg) {
  if (cfg.total_epochs < 1) throw ConfigError("schedule total_epochs must be >= 1");
  const double end_sum = cfg.alpha_end + cfg.beta_end + cfg.gamma_end;
  if (std::abs(end_sum - 1.0) > 1e-9)
    throw ConfigError("schedule end weights must sum to 1");
  if (cfg.kind == ScheduleKind::sigmoid && !(cfg.sigmoid_steepness > 0))
    throw ConfigError("sigmoid steepness must be positive");
  if (cfg.kind == ScheduleKind::piecewise) {
    if (cfg.stages.empty()) throw ConfigError("piecewise schedule needs at least one stage");
    if (cfg.stages.front().threshold > 0.0)
      throw ConfigError("first piecewise stage must start at threshold 0");
    double prev = -1.0;
    for (const auto& st : cfg.stages) {
      if (st.threshold <= prev) throw ConfigError("piecewise thresholds must be strictly ascending");
      prev = st.threshold;
      const double sum = st.weights.alpha + st.weights.beta + st.weights.gamma;
      if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("piecewise stage weights must sum to 1");
    }
  }
}

namespace {

ScheduleWeights interpolate(const ScheduleConfig& cfg, double s) {
  ScheduleWeights w;
  w.alpha = cfg.alpha_start + (cfg.alpha_end - cfg.alpha_start) * s;
  w.beta = cfg.beta_end * s;
  w.gamma = cfg.gamma_end * s;
  return w;
}

}  // namespace

ScheduleWeights weights_at(const ScheduleConfig& cfg, int t) {
  validate(cfg);
  if (t < 0 || t >= cfg.total_epochs)
    throw ConfigError("epoch index " + std::to_string(t) + " outside [0, " +
                      std::to_string(cfg.total_epochs) + ")");
  const double s = cfg.total_epochs == 1
                       ? 0.0
                       : static_cast<double>(t) / static_cast<double>(cfg.total_epochs - 1);
  switch (cfg.kind) {
    case ScheduleKind::linear:
      return interpolate(cfg, s);
    case ScheduleKind::sigmoid: {
      const double k = cfg.sigmoid_steepness;
      const auto f = [k](double x) { return 1.0 / (1.0 + std::exp(-k * (x - 0.5))); };
      // normalized so the endpoints land exactly on the linear endpoints
      const double fhat = (f(s) - f(0.0)) / (f(1.0) - f(0.0));
      return interpolate(cfg, fhat);
    }
    case ScheduleKind::piecewise: {
      ScheduleWeights w = cfg.stages.front().weights;
      for (const auto& st : cfg.stages)
        if (st.threshold <= s) w = st.weights;
      return w;
    }
  }
  return {};
}

std::vector<ScheduleWeights> schedule_table(const ScheduleConfig& cfg) {
  validate(cfg);
  std::vector<ScheduleWeights> rows;
  rows.reserve(cfg.total_epochs);
  for (int t = 0; t < cfg.total_epochs; ++t) rows.push_back(weights_at(cfg, t));
  return rows;
}

}  // namespace fairseg
