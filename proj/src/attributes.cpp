#include "fairseg/attributes.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "fairseg/errors.hpp"

namespace fairseg {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}

}  // namespace

std::vector<std::string> attribute_names(const AttributeRecord& rec) {
  std::vector<std::string> names;
  names.reserve(rec.attributes.size());
  for (const auto& [n, v] : rec.attributes) names.push_back(n);
  return names;
}

std::vector<AttributeRecord> read_attributes(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty attribute file: " + path.string());
  const std::vector<std::string> header = split_csv_line(line);
  if (header.empty() || header[0] != "id")
    throw FormatError("line 1: first column must be `id`");
  std::set<std::string> seen_names;
  for (size_t i = 1; i < header.size(); ++i) {
    if (header[i].empty()) throw FormatError("line 1: empty attribute name in column " + std::to_string(i + 1));
    if (!seen_names.insert(header[i]).second)
      throw FormatError("line 1: duplicate attribute name `" + header[i] + "`");
  }

  std::vector<AttributeRecord> records;
  std::set<std::string> seen_ids;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() && in.eof()) break;  // tolerate one trailing newline
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw FormatError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(header.size()) + " cells, found " +
                        std::to_string(cells.size()));
    if (cells[0].empty())
      throw FormatError("line " + std::to_string(line_no) + ": empty id");
    if (!seen_ids.insert(cells[0]).second)
      throw FormatError("line " + std::to_string(line_no) + ": duplicate id `" + cells[0] + "`");
    AttributeRecord rec;
    rec.sample_id = cells[0];
    for (size_t i = 1; i < cells.size(); ++i) {
      if (cells[i] != "0" && cells[i] != "1")
        throw FormatError("line " + std::to_string(line_no) + ": non-binary cell `" + cells[i] +
                          "` in column " + std::to_string(i + 1));
      rec.attributes.emplace_back(header[i], cells[i] == "1" ? 1 : 0);
    }
    records.push_back(std::move(rec));
  }
  return records;
}

void write_attributes(const std::vector<AttributeRecord>& records,
                      const std::filesystem::path& path) {
  std::ostringstream out;
  if (records.empty()) {
    out << "id\n";
  } else {
    out << "id";
    for (const auto& [n, v] : records[0].attributes) out << "," << n;
    out << "\n";
    const auto names = attribute_names(records[0]);
    for (const auto& rec : records) {
      if (attribute_names(rec) != names)
        throw ConfigError("records do not share one ordered attribute name list (sample `" +
                          rec.sample_id + "`)");
      out << rec.sample_id;
      for (const auto& [n, v] : rec.attributes) out << "," << static_cast<int>(v);
      out << "\n";
    }
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  const std::string s = out.str();
  f.write(s.data(), static_cast<std::streamsize>(s.size()));
  if (!f.flush()) throw IoError("write failure on " + path.string());
}

}  // namespace fairseg
