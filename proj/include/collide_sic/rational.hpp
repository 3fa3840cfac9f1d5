// Exact rational arithmetic for rates, duty factors and throughputs.
// Note: boost::rational in C++20 mode recurses forever on rational == int,
// so equality tests compare against Rational values or the numerator.
#pragma once

#include <boost/rational.hpp>

#include <charconv>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "collide_sic/error.hpp"

namespace collide_sic {

/// Always stored in lowest terms with a positive denominator.
using Rational = boost::rational<std::int64_t>;

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

namespace detail {

inline std::int64_t parse_integer(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last) {
    throw ConfigError("malformed rational '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace detail

/// Parses "p/q" or a bare integer "p".  Floating-point syntax is rejected.
inline Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(detail::parse_integer(text, text));
  const auto num = detail::parse_integer(text.substr(0, slash), text);
  const auto den = detail::parse_integer(text.substr(slash + 1), text);
  if (den <= 0) throw ConfigError("rational '" + std::string(text) + "' needs a positive denominator");
  return Rational(num, den);
}

/// Comma-separated list of rationals, e.g. "1/6,1/3,1/2".
inline std::vector<Rational> parse_rational_list(std::string_view text) {
  std::vector<Rational> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const auto token = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    out.push_back(parse_rational(token));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline Rational sum(std::span<const Rational> values) {
  return std::accumulate(values.begin(), values.end(), Rational(0));
}

}  // namespace collide_sic
