#include "gscsat/common.hpp"

#include <numeric>

#include "gscsat/rng.hpp"

namespace gscsat {

Ratio make_ratio(std::int64_t num, std::int64_t den) {
  if (num <= 0 || den <= 0 || num > den) {
    throw ValidationError("compression ratio must lie in (0, 1]: " + std::to_string(num) + "/" +
                          std::to_string(den));
  }
  const std::int64_t g = std::gcd(num, den);
  return Ratio{num / g, den / g};
}

Ratio parse_ratio(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return make_ratio(parse_integer(text), 1);
  }
  return make_ratio(parse_integer(text.substr(0, slash)), parse_integer(text.substr(slash + 1)));
}

std::string format_ratio(Ratio r) {
  if (r.den == 1) return std::to_string(r.num);
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

double parse_number(std::string_view text) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ValidationError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::int64_t parse_integer(std::string_view text) {
  std::int64_t v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ValidationError("not an integer: '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t substream_seed(std::uint64_t seed, std::string_view name) {
  // FNV-1a over the name, then mixed with the run seed.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return mix64(seed ^ mix64(h));
}

}  // namespace gscsat
