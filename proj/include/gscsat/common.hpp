#pragma once

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gscsat {

using NodeId = std::int32_t;
using KbId = std::int32_t;

inline constexpr NodeId kNoNode = -1;

/// Raised for malformed or inconsistent configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an input violates a documented precondition or invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact positive rational in (0, 1], used for compression ratios.
struct Ratio {
  std::int64_t num = 1;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

Ratio make_ratio(std::int64_t num, std::int64_t den);
/// Parses "p/q" or an integer "1".
Ratio parse_ratio(std::string_view text);
std::string format_ratio(Ratio r);

/// Shortest round-trip decimal representation.
inline std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text);
std::int64_t parse_integer(std::string_view text);

}  // namespace gscsat
