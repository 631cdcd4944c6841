#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace pwdg {

// Shortest decimal form that round-trips to the same binary64 value.
// Used for mesh files and CSV output so results are byte-deterministic
// across runs and platforms with the same FP behaviour.
inline std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_int(long long v) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace pwdg
