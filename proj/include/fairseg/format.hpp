#pragma once

#include <charconv>
#include <string>
#include <vector>

#include "fairseg/errors.hpp"

namespace fairseg {

// Shortest decimal that round-trips the exact binary64 value. Integral
// values keep a trailing ".0" so CSV cells are unambiguously real-valued.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, res.ptr);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    throw FormatError("not a number: `" + s + "`");
  return v;
}

// Comma-separated doubles, e.g. "0.1,0.3,0.5".
inline std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(parse_double(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(parse_double(cur));
  return out;
}

}  // namespace fairseg
