#include "fairseg/dataset.hpp"

#include <fstream>

#include <json.hpp>

#include "fairseg/errors.hpp"
#include "fairseg/netpbm.hpp"

namespace fairseg {

void validate(const DatasetRecord& rec) {
  validate(rec.image);
  if (rec.image.height != rec.mask.height || rec.image.width != rec.mask.width)
    throw ConfigError("image and mask dimensions differ for sample " + rec.sample_id);
  if (rec.attributes.sample_id != rec.sample_id)
    throw ConfigError("attribute record id mismatch for sample " + rec.sample_id);
}

void save_dataset(const std::vector<DatasetRecord>& records,
                  const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "images");
  fs::create_directories(dir / "masks");
  std::vector<AttributeRecord> attrs;
  attrs.reserve(records.size());
  for (const DatasetRecord& rec : records) {
    validate(rec);
    write_image(rec.image, dir / "images" / (rec.sample_id + ".ppm"));
    write_mask(rec.mask, dir / "masks" / (rec.sample_id + ".pgm"));
    attrs.push_back(rec.attributes);
  }
  write_attributes(attrs, dir / "attributes.csv");
}

std::vector<DatasetRecord> load_dataset(const std::filesystem::path& dir,
                                        int num_classes) {
  const std::vector<AttributeRecord> attrs = read_attributes(dir / "attributes.csv");
  std::vector<DatasetRecord> records;
  records.reserve(attrs.size());
  for (const AttributeRecord& rec : attrs) {
    DatasetRecord r;
    r.sample_id = rec.sample_id;
    r.image = read_image(dir / "images" / (rec.sample_id + ".ppm"));
    r.mask = read_mask(dir / "masks" / (rec.sample_id + ".pgm"), num_classes);
    r.attributes = rec;
    validate(r);
    records.push_back(std::move(r));
  }
  return records;
}

int dataset_class_count(const std::filesystem::path& dir, int fallback) {
  const std::filesystem::path cfg = dir / "gen_config.json";
  if (!std::filesystem::exists(cfg)) return fallback;
  std::ifstream in(cfg);
  if (!in) throw IoError("cannot open " + cfg.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("invalid gen_config.json: " + std::string(e.what()));
  }
  if (!j.contains("class_count")) return fallback;
  return j.at("class_count").get<int>();
}

}  // namespace fairseg
