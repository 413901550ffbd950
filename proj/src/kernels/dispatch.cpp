#include <cstdlib>
#include <string>

#include "fairseg/errors.hpp"
#include "fairseg/kernels.hpp"

namespace fairseg::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

Backend detect() {
  if (const char* env = std::getenv("FAIRSEG_KERNELS")) {
    const std::string v(env);
    if (v == "scalar") return Backend::scalar;
    if (v == "avx2") {
      if (!avx2_available())
        throw ConfigError("FAIRSEG_KERNELS=avx2 requested but AVX2 is unavailable");
      return Backend::avx2;
    }
    if (!v.empty() && v != "auto")
      throw ConfigError("FAIRSEG_KERNELS must be scalar, avx2, or auto (got '" + v + "')");
  }
  return avx2_available() ? Backend::avx2 : Backend::scalar;
}

Backend& current() {
  static Backend b = detect();
  return b;
}

}  // namespace

bool avx2_available() { return avx2_table() != nullptr && cpu_has_avx2(); }

Backend active_backend() { return current(); }

void set_backend(Backend b) {
  if (b == Backend::avx2 && !avx2_available())
    throw ConfigError("AVX2 kernel backend is unavailable on this machine/build");
  current() = b;
}

const Table& active() {
  return current() == Backend::avx2 ? *avx2_table() : scalar_table();
}

std::string backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

}  // namespace fairseg::kernels
