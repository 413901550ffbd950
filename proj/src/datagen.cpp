#include "fairseg/datagen.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "fairseg/errors.hpp"
#include "fairseg/rng.hpp"

namespace fairseg {

void validate(const GenConfig& cfg) {
  if (cfg.count < 1) throw ConfigError("count must be >= 1");
  if (cfg.size < 16) throw ConfigError("size must be >= 16");
  if (cfg.class_count != seg_class::kCount)
    throw ConfigError("class_count is fixed at " + std::to_string(seg_class::kCount));
  if (cfg.attribute_probs.empty()) throw ConfigError("attribute_probs must not be empty");
  for (const auto& [name, p] : cfg.attribute_probs)
    if (!(p >= 0.0 && p <= 1.0))
      throw ConfigError("attribute probability for `" + name + "` outside [0,1]");
  if (!(cfg.bias_contrast >= 0.0 && cfg.bias_contrast <= 1.0))
    throw ConfigError("bias_contrast outside [0,1]");
  if (cfg.bias_noise_sigma < 0.0) throw ConfigError("bias_noise_sigma must be >= 0");
}

namespace {

struct Rgb {
  double r, g, b;
};

Rgb jitter(Rng& rng, Rgb base, double amount = 0.03) {
  const auto c = [&](double v) {
    v += rng.uniform(-amount, amount);
    return std::clamp(v, 0.0, 1.0);
  };
  return {c(base.r), c(base.g), c(base.b)};
}

void paint(ImageTensor& img, MaskTensor& mask, int y, int x, const Rgb& col, int label) {
  img.at(y, x, 0) = col.r;
  img.at(y, x, 1) = col.g;
  img.at(y, x, 2) = col.b;
  mask.at(y, x) = static_cast<uint8_t>(label);
}

bool in_ellipse(double px, double py, double cx, double cy, double ax, double ay) {
  const double dx = (px - cx) / ax;
  const double dy = (py - cy) / ay;
  return dx * dx + dy * dy <= 1.0;
}

std::string sample_id(int index, int count) {
  size_t width = std::to_string(count - 1).size();
  width = std::max<size_t>(width, 4);
  std::string digits = std::to_string(index);
  return "s" + std::string(width - digits.size(), '0') + digits;
}

DatasetRecord generate_sample(const GenConfig& cfg, uint64_t domain, int index) {
  Rng rng = Rng::substream(domain, static_cast<uint64_t>(index));
  const int n = cfg.size;

  // draw order is frozen: attributes, colors, geometry, then bias noise
  AttributeRecord attrs;
  attrs.sample_id = sample_id(index, cfg.count);
  for (const auto& [name, p] : cfg.attribute_probs)
    attrs.attributes.emplace_back(name, rng.uniform() < p ? 1 : 0);
  const bool dark = attrs.value_of("dark_skin") == 1;
  const bool hat = attrs.value_of("wearing_hat") == 1;
  const bool big_eyes = attrs.value_of("big_eyes") == 1;
  const bool smiling = attrs.value_of("smiling") == 1;

  const Rgb bg = jitter(rng, {0.10, 0.15, 0.30}, 0.02);
  Rgb skin = jitter(rng, {0.85, 0.65, 0.45}, 0.02);
  const Rgb hair = jitter(rng, {0.50, 0.32, 0.10}, 0.02);
  const Rgb hat_col = jitter(rng, {0.12, 0.65, 0.25}, 0.02);
  const Rgb eye = jitter(rng, {0.97, 0.97, 0.99}, 0.01);
  const Rgb mouth = jitter(rng, {0.88, 0.08, 0.18}, 0.02);
  if (dark) {
    const double keep = 1.0 - cfg.bias_contrast;
    skin = {bg.r + (skin.r - bg.r) * keep, bg.g + (skin.g - bg.g) * keep,
            bg.b + (skin.b - bg.b) * keep};
  }

  const double cx = n * (0.5 + rng.uniform(-0.03, 0.03));
  const double cy = n * (0.52 + rng.uniform(-0.03, 0.03));
  const double ax = n * rng.uniform(0.26, 0.30);
  const double ay = n * rng.uniform(0.33, 0.37);
  double eye_r = n * rng.uniform(0.068, 0.080);
  if (big_eyes) eye_r *= 1.5;
  double mouth_w = ax * rng.uniform(0.38, 0.44);
  if (smiling) mouth_w *= 1.4;
  const double mouth_h = ay * rng.uniform(0.14, 0.16);

  const double eye_dx = 0.42 * ax;
  const double eye_y = cy - 0.22 * ay;
  const double mouth_y = cy + 0.45 * ay;
  const double hair_ax = 1.18 * ax, hair_ay = 1.12 * ay;
  const double hair_cut = cy - 0.30 * ay;
  const double hat_top = cy - 1.22 * ay, hat_bot = cy - 0.62 * ay;
  const double hat_x0 = cx - 1.12 * ax, hat_x1 = cx + 1.12 * ax;

  ImageTensor img = make_image(n, n);
  MaskTensor mask = make_mask(n, n, cfg.class_count);

  // last drawn wins: background, skin, hair, hat, eyes, mouth
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const double px = x + 0.5, py = y + 0.5;
      paint(img, mask, y, x, bg, seg_class::kBackground);
      if (in_ellipse(px, py, cx, cy, ax, ay)) paint(img, mask, y, x, skin, seg_class::kSkin);
      if (py < hair_cut && in_ellipse(px, py, cx, cy, hair_ax, hair_ay))
        paint(img, mask, y, x, hair, seg_class::kHair);
      if (hat && py >= hat_top && py <= hat_bot && px >= hat_x0 && px <= hat_x1)
        paint(img, mask, y, x, hat_col, seg_class::kHat);
      if (in_ellipse(px, py, cx - eye_dx, eye_y, eye_r, eye_r) ||
          in_ellipse(px, py, cx + eye_dx, eye_y, eye_r, eye_r))
        paint(img, mask, y, x, eye, seg_class::kEyes);
      if (in_ellipse(px, py, cx, mouth_y, mouth_w, mouth_h))
        paint(img, mask, y, x, mouth, seg_class::kMouth);
    }
  }

  if (dark && cfg.bias_noise_sigma > 0) {
    for (double& v : img.data)
      v = std::clamp(v + rng.normal(0.0, cfg.bias_noise_sigma), 0.0, 1.0);
  }

  DatasetRecord rec;
  rec.sample_id = attrs.sample_id;
  rec.image = std::move(img);
  rec.mask = std::move(mask);
  rec.attributes = std::move(attrs);
  return rec;
}

}  // namespace

std::vector<DatasetRecord> generate_dataset(const GenConfig& cfg) {
  validate(cfg);
  const uint64_t domain = Rng::substream_seed(cfg.seed, rng_streams::kDatagenSample);
  std::vector<DatasetRecord> records;
  records.reserve(cfg.count);
  for (int i = 0; i < cfg.count; ++i) records.push_back(generate_sample(cfg, domain, i));
  return records;
}

std::pair<std::vector<DatasetRecord>, std::vector<DatasetRecord>> split_dataset(
    const std::vector<DatasetRecord>& records, double train_fraction, uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw ConfigError("train_fraction must be in (0,1)");
  const size_t n = records.size();
  if (n < 2) throw ConfigError("need at least 2 records to split");
  const auto n_train =
      static_cast<size_t>(std::llround(train_fraction * static_cast<double>(n)));
  if (n_train == 0 || n_train == n)
    throw ConfigError("split would leave one side empty");

  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng = Rng::substream(seed, rng_streams::kSplit);
  for (size_t i = n - 1; i > 0; --i) {
    const size_t j = rng.bounded(i + 1);
    std::swap(order[i], order[j]);
  }

  std::pair<std::vector<DatasetRecord>, std::vector<DatasetRecord>> out;
  out.first.reserve(n_train);
  out.second.reserve(n - n_train);
  for (size_t i = 0; i < n; ++i) {
    if (i < n_train)
      out.first.push_back(records[order[i]]);
    else
      out.second.push_back(records[order[i]]);
  }
  return out;
}

std::string gen_config_to_json(const GenConfig& cfg) {
  nlohmann::json probs = nlohmann::json::array();
  for (const auto& [name, p] : cfg.attribute_probs) probs.push_back({{"name", name}, {"p", p}});
  nlohmann::json j{
      {"count", cfg.count},
      {"size", cfg.size},
      {"seed", cfg.seed},
      {"class_count", cfg.class_count},
      {"attribute_probs", probs},
      {"bias_contrast", cfg.bias_contrast},
      {"bias_noise_sigma", cfg.bias_noise_sigma},
  };
  return j.dump(2) + "\n";
}

GenConfig gen_config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("invalid gen config JSON: " + std::string(e.what()));
  }
  GenConfig cfg;
  cfg.count = j.value("count", cfg.count);
  cfg.size = j.value("size", cfg.size);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.class_count = j.value("class_count", cfg.class_count);
  cfg.bias_contrast = j.value("bias_contrast", cfg.bias_contrast);
  cfg.bias_noise_sigma = j.value("bias_noise_sigma", cfg.bias_noise_sigma);
  if (j.contains("attribute_probs")) {
    cfg.attribute_probs.clear();
    for (const auto& e : j.at("attribute_probs"))
      cfg.attribute_probs.emplace_back(e.at("name").get<std::string>(), e.at("p").get<double>());
  }
  validate(cfg);
  return cfg;
}

}  // namespace fairseg
