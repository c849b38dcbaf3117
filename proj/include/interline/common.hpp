#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace interline {

/// All internal times are seconds.
using Seconds = double;

inline constexpr double kSecondsPerHour = 3600.0;

/// Precondition or mathematical domain violation (unstable queue, bad fleet input, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid configuration. `path` points at the offending field, e.g. "scenario.routes[2].headway".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Metric could not be computed (too few records, ...).
class MetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed-precision decimal rendering used by every text writer so output is byte-stable.
inline std::string format_fixed(double value, int precision = 6) {
  if (value == 0.0) value = 0.0;  // folds -0.0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, value);
  return buf;
}

}  // namespace interline
