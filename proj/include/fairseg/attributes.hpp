#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace fairseg {

// Named binary demographic attributes of one sample. All records of a
// dataset share the same ordered name list.
struct AttributeRecord {
  std::string sample_id;
  std::vector<std::pair<std::string, uint8_t>> attributes;

  // -1 when the attribute is absent.
  int value_of(const std::string& name) const {
    for (const auto& [n, v] : attributes)
      if (n == name) return v;
    return -1;
  }
};

std::vector<std::string> attribute_names(const AttributeRecord& rec);

// CSV with header `id,<name>,...`; cells strictly 0 or 1. Parse errors carry
// the 1-based line number. Row order is preserved.
std::vector<AttributeRecord> read_attributes(const std::filesystem::path& path);
void write_attributes(const std::vector<AttributeRecord>& records,
                      const std::filesystem::path& path);

}  // namespace fairseg
