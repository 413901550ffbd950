#include "fairseg/manifest.hpp"

#include <fstream>

#include "fairseg/errors.hpp"

namespace fairseg {

uint64_t fnv1a64(const void* data, size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  uint64_t h = 0xcbf29ce484222325ULL;
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string file_hash_hex(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for hashing");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const uint64_t h = fnv1a64(bytes.data(), bytes.size());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const nlohmann::json& config,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::filesystem::path>& outputs) {
  nlohmann::json hashes;
  for (const std::filesystem::path& out : outputs) {
    const auto rel = std::filesystem::relative(out, dir);
    hashes[rel.generic_string()] = file_hash_hex(out);
  }
  nlohmann::json j{
      {"command", command},
      {"config", config},
      {"inputs", inputs},
      {"outputs", hashes},
  };
  const std::filesystem::path tmp = dir / "manifest.json.tmp";
  const std::filesystem::path final_path = dir / "manifest.json";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    const std::string s = j.dump(2) + "\n";
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
    if (!out.flush()) throw IoError("write failure on " + tmp.string());
  }
  std::filesystem::rename(tmp, final_path);
}

}  // namespace fairseg
