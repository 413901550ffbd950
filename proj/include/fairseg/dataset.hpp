#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fairseg/attributes.hpp"
#include "fairseg/tensor.hpp"

namespace fairseg {

struct DatasetRecord {
  std::string sample_id;
  ImageTensor image;
  MaskTensor mask;
  AttributeRecord attributes;
};

void validate(const DatasetRecord& rec);

// Directory layout: images/{id}.ppm, masks/{id}.pgm, attributes.csv.
// Row order of attributes.csv defines the record order.
void save_dataset(const std::vector<DatasetRecord>& records,
                  const std::filesystem::path& dir);
std::vector<DatasetRecord> load_dataset(const std::filesystem::path& dir,
                                        int num_classes);

// Reads class_count from gen_config.json when the directory has one,
// otherwise returns fallback.
int dataset_class_count(const std::filesystem::path& dir, int fallback = 6);

}  // namespace fairseg
