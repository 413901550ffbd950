#include "fairseg/netpbm.hpp"

#include <fstream>
#include <string>

#include "fairseg/errors.hpp"

namespace fairseg {
namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure on " + path.string());
  return data;
}

void spit(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("write failure on " + path.string());
}

bool is_pbm_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

// Skips whitespace and '#'-to-end-of-line comments, then parses a decimal
// token. `what` names the field for error messages.
long parse_header_int(const std::string& d, size_t& pos, const char* what) {
  while (pos < d.size()) {
    if (is_pbm_space(d[pos])) {
      ++pos;
    } else if (d[pos] == '#') {
      while (pos < d.size() && d[pos] != '\n') ++pos;
    } else {
      break;
    }
  }
  if (pos >= d.size())
    throw FormatError(std::string("unexpected end of header while reading ") + what +
                      " at byte " + std::to_string(pos));
  if (d[pos] < '0' || d[pos] > '9')
    throw FormatError(std::string("malformed ") + what + " at byte " + std::to_string(pos));
  long v = 0;
  while (pos < d.size() && d[pos] >= '0' && d[pos] <= '9') {
    v = v * 10 + (d[pos] - '0');
    if (v > 1'000'000'000L)
      throw FormatError(std::string(what) + " out of range at byte " + std::to_string(pos));
    ++pos;
  }
  return v;
}

// Common P5/P6 header handling; returns the payload offset.
size_t parse_header(const std::string& d, const char* magic, long& w, long& h) {
  if (d.size() < 2 || d[0] != magic[0] || d[1] != magic[1])
    throw FormatError(std::string("bad magic at byte 0: expected ") + magic);
  size_t pos = 2;
  w = parse_header_int(d, pos, "width");
  h = parse_header_int(d, pos, "height");
  const size_t maxval_at = pos;
  const long maxval = parse_header_int(d, pos, "maxval");
  if (maxval != 255)
    throw FormatError("unsupported maxval " + std::to_string(maxval) + " at byte " +
                      std::to_string(maxval_at) + " (only 255)");
  if (w <= 0 || h <= 0)
    throw FormatError("non-positive dimensions " + std::to_string(w) + "x" + std::to_string(h));
  if (pos >= d.size() || !is_pbm_space(d[pos]))
    throw FormatError("expected single whitespace before payload at byte " + std::to_string(pos));
  return pos + 1;
}

}  // namespace

ImageTensor read_image(const std::filesystem::path& path) {
  const std::string d = slurp(path);
  long w = 0, h = 0;
  const size_t payload = parse_header(d, "P6", w, h);
  const size_t need = static_cast<size_t>(w) * h * 3;
  if (d.size() - payload < need)
    throw FormatError("truncated payload at byte " + std::to_string(d.size()) + ": expected " +
                      std::to_string(need) + " bytes from byte " + std::to_string(payload) +
                      ", found " + std::to_string(d.size() - payload));
  ImageTensor img = make_image(static_cast<int>(h), static_cast<int>(w));
  for (size_t i = 0; i < need; ++i)
    img.data[i] = static_cast<unsigned char>(d[payload + i]) / 255.0;
  return img;
}

void write_image(const ImageTensor& img, const std::filesystem::path& path) {
  validate(img);
  std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.reserve(out.size() + img.data.size());
  for (double v : img.data) out.push_back(static_cast<char>(quantize_channel(v)));
  spit(path, out);
}

MaskTensor read_mask(const std::filesystem::path& path, int num_classes) {
  if (num_classes <= 0) throw ConfigError("num_classes must be positive");
  const std::string d = slurp(path);
  long w = 0, h = 0;
  const size_t payload = parse_header(d, "P5", w, h);
  const size_t need = static_cast<size_t>(w) * h;
  if (d.size() - payload < need)
    throw FormatError("truncated payload at byte " + std::to_string(d.size()) + ": expected " +
                      std::to_string(need) + " bytes from byte " + std::to_string(payload) +
                      ", found " + std::to_string(d.size() - payload));
  MaskTensor mask = make_mask(static_cast<int>(h), static_cast<int>(w), num_classes);
  for (size_t i = 0; i < need; ++i) {
    const auto label = static_cast<unsigned char>(d[payload + i]);
    if (label >= num_classes)
      throw FormatError("label " + std::to_string(label) + " >= num_classes " +
                        std::to_string(num_classes) + " at pixel index " + std::to_string(i));
    mask.labels[i] = label;
  }
  return mask;
}

void write_mask(const MaskTensor& mask, const std::filesystem::path& path) {
  std::string out = "P5\n" + std::to_string(mask.width) + " " + std::to_string(mask.height) + "\n255\n";
  out.reserve(out.size() + mask.labels.size());
  for (uint8_t l : mask.labels) out.push_back(static_cast<char>(l));
  spit(path, out);
}

}  // namespace fairseg
