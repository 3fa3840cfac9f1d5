// GF(2^8) arithmetic with the polynomial x^8 + x^4 + x^3 + x^2 + 1 (0x11d).
#pragma once

#include <array>
#include <cstdint>

namespace collide_sic::gf256 {

namespace detail {

struct Tables {
  std::array<std::uint8_t, 512> exp{};
  std::array<std::uint8_t, 256> log{};
};

constexpr Tables make_tables() {
  Tables t{};
  unsigned x = 1;
  for (unsigned i = 0; i < 255; ++i) {
    t.exp[i] = static_cast<std::uint8_t>(x);
    t.log[x] = static_cast<std::uint8_t>(i);
    x <<= 1;
    if (x & 0x100U) x ^= 0x11dU;
  }
  for (unsigned i = 255; i < 512; ++i) t.exp[i] = t.exp[i - 255];
  return t;
}

inline constexpr Tables kTables = make_tables();

}  // namespace detail

constexpr std::uint8_t add(std::uint8_t a, std::uint8_t b) { return a ^ b; }

constexpr std::uint8_t mul(std::uint8_t a, std::uint8_t b) {
  if (a == 0 || b == 0) return 0;
  return detail::kTables.exp[detail::kTables.log[a] + detail::kTables.log[b]];
}

/// a must be nonzero.
constexpr std::uint8_t inv(std::uint8_t a) { return detail::kTables.exp[255 - detail::kTables.log[a]]; }

constexpr std::uint8_t div(std::uint8_t a, std::uint8_t b) { return mul(a, inv(b)); }

constexpr std::uint8_t pow(std::uint8_t a, unsigned e) {
  std::uint8_t r = 1;
  for (unsigned i = 0; i < e; ++i) r = mul(r, a);
  return r;
}

}  // namespace collide_sic::gf256
