#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace fairseg {

// FNV-1a 64-bit content hash, hex-encoded. Used for manifest integrity and
// byte-identity checks; not cryptographic.
uint64_t fnv1a64(const void* data, size_t len);
std::string file_hash_hex(const std::filesystem::path& path);

// Writes `manifest.json` into `dir` atomically (temp file + rename):
// command, resolved config, input paths, and a relative-path -> hash map of
// every emitted artifact.
void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const nlohmann::json& config,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::filesystem::path>& outputs);

}  // namespace fairseg
