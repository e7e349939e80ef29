#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "cliquesel/errors.hpp"

// Locale-independent number formatting. to_chars shortest form round-trips
// exactly, which keeps emitted files byte-stable across runs.
namespace cliquesel::csvio {

inline std::string format_double(double x) {
  char buf[64];
  std::to_chars_result r = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, r.ptr);
}

inline std::string format_int(long long x) {
  char buf[32];
  std::to_chars_result r = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, r.ptr);
}

inline double parse_double(std::string_view s, const char* what) {
  double x = 0.0;
  std::from_chars_result r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw SchemaMismatch(std::string(what) + ": bad number '" + std::string(s) + "'");
  return x;
}

inline long long parse_int(std::string_view s, const char* what) {
  long long x = 0;
  std::from_chars_result r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw SchemaMismatch(std::string(what) + ": bad integer '" + std::string(s) + "'");
  return x;
}

// Plain comma split; fields in our schemas never contain commas or quotes.
inline std::vector<std::string> split_fields(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  size_t start = 0;
  for (size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == sep) {
      out.emplace_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

inline std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back(sep);
    out += parts[i];
  }
  return out;
}

}  // namespace cliquesel::csvio
