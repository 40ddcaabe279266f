#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace bulletsum {

// Invalid parameters or flags. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data. The CLI maps this to exit code 1.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Half-open time span [start_s, end_s) in seconds.
struct Interval {
  double start_s = 0.0;
  double end_s = 0.0;
};

inline bool operator==(const Interval& a, const Interval& b) {
  return a.start_s == b.start_s && a.end_s == b.end_s;
}

namespace detail {

// Fixed-precision decimal rendering; keeps file output byte-stable.
inline std::string format_fixed(double value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, value);
  return buf;
}

inline std::string format_time(double seconds) { return format_fixed(seconds, 3); }
inline std::string format_score(double value) { return format_fixed(value, 6); }

}  // namespace detail

}  // namespace bulletsum
