#pragma once

#include <stdexcept>
#include <string>

namespace fairseg {

// Base class for every error the library raises on purpose. The CLI maps
// these to exit code 1; anything else escaping main is a bug.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input bytes (PPM/PGM/CSV). Messages carry the byte offset or
// line number of the first offending byte.
class FormatError : public Error {
public:
  using Error::Error;
};

// Filesystem-level failures (unreadable/unwritable paths).
class IoError : public Error {
public:
  using Error::Error;
};

// Invalid configuration values or flag combinations.
class ConfigError : public Error {
public:
  using Error::Error;
};

// Checkpoint schema violations (version, shapes, arch mismatch).
class CheckpointError : public Error {
public:
  using Error::Error;
};

// Metric evaluation on degenerate inputs (e.g. empty score list).
class EvalError : public Error {
public:
  using Error::Error;
};

}  // namespace fairseg
