// Periodic binary protocol sequences and sets of them.
#pragma once

#include <bit>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "collide_sic/error.hpp"
#include "collide_sic/rational.hpp"

namespace collide_sic {

/// Default cap on exhaustive enumerations (shift tuples, SIC runs).
inline constexpr std::uint64_t kDefaultWorkBudget = 10'000'000;

/// One relative shift per user, each in [0, L).
using ShiftVector = std::vector<std::size_t>;

/// A (0,1) sequence of period L >= 1, packed into 64-bit words.
/// Bit n of the sequence lives in word n / 64 at bit n % 64.
class BinarySequence {
 public:
  BinarySequence() : BinarySequence(std::vector<std::uint8_t>{0}) {}

  explicit BinarySequence(std::span<const std::uint8_t> bits) : period_(bits.size()) {
    if (bits.empty()) throw ConfigError("protocol sequence needs period >= 1");
    words_.assign((period_ + 63) / 64, 0);
    for (std::size_t n = 0; n < period_; ++n) {
      if (bits[n] > 1) throw ConfigError("protocol sequence entries must be 0 or 1");
      if (bits[n]) words_[n / 64] |= std::uint64_t{1} << (n % 64);
    }
    for (auto w : words_) weight_ += static_cast<std::size_t>(std::popcount(w));
  }

  explicit BinarySequence(const std::vector<std::uint8_t>& bits)
      : BinarySequence(std::span<const std::uint8_t>(bits)) {}

  BinarySequence(std::initializer_list<std::uint8_t> bits)
      : BinarySequence(std::vector<std::uint8_t>(bits)) {}

  /// "110110" style literal.
  static BinarySequence from_string(std::string_view text) {
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char c : text) {
      if (c != '0' && c != '1') throw ConfigError("sequence literal may only contain 0 and 1");
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return BinarySequence(bits);
  }

  std::size_t period() const noexcept { return period_; }
  std::size_t weight() const noexcept { return weight_; }
  Rational duty_factor() const {
    return Rational(static_cast<std::int64_t>(weight_), static_cast<std::int64_t>(period_));
  }

  bool operator[](std::size_t n) const noexcept { return (words_[n / 64] >> (n % 64)) & 1U; }

  /// Value at an arbitrary (possibly negative) index, reduced modulo the period.
  bool at(std::int64_t n) const noexcept {
    const auto L = static_cast<std::int64_t>(period_);
    return (*this)[static_cast<std::size_t>(((n % L) + L) % L)];
  }

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  std::vector<std::uint8_t> bits() const {
    std::vector<std::uint8_t> out(period_);
    for (std::size_t n = 0; n < period_; ++n) out[n] = (*this)[n];
    return out;
  }

  std::string to_string() const {
    std::string out(period_, '0');
    for (std::size_t n = 0; n < period_; ++n)
      if ((*this)[n]) out[n] = '1';
    return out;
  }

  friend bool operator==(const BinarySequence&, const BinarySequence&) = default;

 private:
  std::size_t period_ = 0;
  std::vector<std::uint64_t> words_;
  std::size_t weight_ = 0;
};

/// result(n) = seq((n - tau) mod L).
inline BinarySequence cyclic_shift(const BinarySequence& seq, std::int64_t tau) {
  const auto L = seq.period();
  std::vector<std::uint8_t> bits(L);
  for (std::size_t n = 0; n < L; ++n) bits[n] = seq.at(static_cast<std::int64_t>(n) - tau);
  return BinarySequence(bits);
}

/// Repeats the sequence `times` times.
inline BinarySequence repeat(const BinarySequence& seq, std::size_t times) {
  std::vector<std::uint8_t> bits;
  bits.reserve(seq.period() * times);
  const auto one = seq.bits();
  for (std::size_t r = 0; r < times; ++r) bits.insert(bits.end(), one.begin(), one.end());
  return BinarySequence(bits);
}

/// M >= 1 sequences sharing one period L.
class SequenceSet {
 public:
  explicit SequenceSet(std::vector<BinarySequence> sequences) : sequences_(std::move(sequences)) {
    if (sequences_.empty()) throw ConfigError("sequence set needs at least one sequence");
    for (const auto& s : sequences_) {
      if (s.period() != sequences_.front().period()) {
        throw ConfigError("all sequences in a set must share one period (got " +
                          std::to_string(sequences_.front().period()) + " and " +
                          std::to_string(s.period()) + "); use expand_to_common_period");
      }
    }
  }

  std::size_t size() const noexcept { return sequences_.size(); }
  std::size_t period() const noexcept { return sequences_.front().period(); }
  const BinarySequence& operator[](std::size_t i) const { return sequences_[i]; }
  const std::vector<BinarySequence>& sequences() const noexcept { return sequences_; }
  auto begin() const noexcept { return sequences_.begin(); }
  auto end() const noexcept { return sequences_.end(); }

  std::vector<Rational> duty_factors() const {
    std::vector<Rational> out;
    out.reserve(size());
    for (const auto& s : sequences_) out.push_back(s.duty_factor());
    return out;
  }

  friend bool operator==(const SequenceSet&, const SequenceSet&) = default;

 private:
  std::vector<BinarySequence> sequences_;
};

/// Repeats every sequence up to the LCM of the periods.
inline SequenceSet expand_to_common_period(std::span<const BinarySequence> sequences) {
  if (sequences.empty()) throw ConfigError("sequence set needs at least one sequence");
  std::size_t lcm = 1;
  for (const auto& s : sequences) lcm = std::lcm(lcm, s.period());
  std::vector<BinarySequence> out;
  out.reserve(sequences.size());
  for (const auto& s : sequences) out.push_back(repeat(s, lcm / s.period()));
  return SequenceSet(std::move(out));
}

/// Number of shift vectors in [0, L)^M, saturating on overflow.
inline long double shift_space_size(std::size_t period, std::size_t users) {
  long double total = 1;
  for (std::size_t i = 0; i < users; ++i) total *= static_cast<long double>(period);
  return total;
}

/// Decodes a linear index into a shift vector, last user varying fastest.
inline ShiftVector shift_vector_at(std::uint64_t index, std::size_t period, std::size_t users) {
  ShiftVector taus(users);
  for (std::size_t i = users; i-- > 0;) {
    taus[i] = static_cast<std::size_t>(index % period);
    index /= period;
  }
  return taus;
}

}  // namespace collide_sic
