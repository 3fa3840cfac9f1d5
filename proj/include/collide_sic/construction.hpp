// Minimum-period SI sequence sets for arbitrary rational duty factors.
//
// Users are processed in list order.  For user i with duty factor r_i/d_i a
// G-array of (d_1 * ... * d_{i-1}) rows and d_i columns is filled with exactly
// r_i ones per row.  Reading the array column by column gives a row vector of
// length d_1 * ... * d_i, which is repeated until it reaches the common period
// d_1 * ... * d_M.
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "collide_sic/correlation.hpp"
#include "collide_sic/error.hpp"
#include "collide_sic/plan.hpp"
#include "collide_sic/rational.hpp"
#include "collide_sic/sequence.hpp"

namespace collide_sic {

enum class FillPolicy { canonical_left, seeded_random };

/// Row-major 0/1 array.
struct GArray {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> cells;

  std::uint8_t at(std::size_t r, std::size_t c) const { return cells[r * cols + c]; }
  std::size_t row_weight(std::size_t r) const {
    return static_cast<std::size_t>(std::count(cells.begin() + r * cols, cells.begin() + (r + 1) * cols, 1));
  }
};

struct ConstructionLayout {
  FillPolicy policy = FillPolicy::canonical_left;
  std::uint64_t seed = 0;
  std::vector<GArray> arrays;  ///< one per user, in construction order
};

/// Fills every G-array either with ones in the first r_i columns or with a
/// seeded random r_i-subset per row.
inline ConstructionLayout make_layout(std::span<const Rational> duty_factors,
                                      FillPolicy policy = FillPolicy::canonical_left, std::uint64_t seed = 0) {
  ConstructionLayout layout{policy, seed, {}};
  std::mt19937_64 rng(seed);
  std::uint64_t rows = 1;
  for (const auto& p : duty_factors) {
    if (p < 0 || p > 1) throw ConfigError("duty factor " + to_string(p) + " outside [0, 1]");
    const auto r = static_cast<std::size_t>(p.numerator());
    const auto d = static_cast<std::size_t>(p.denominator());
    GArray g{rows, d, std::vector<std::uint8_t>(rows * d, 0)};
    std::vector<std::uint8_t> row(d, 0);
    std::fill_n(row.begin(), r, 1);
    for (std::size_t i = 0; i < rows; ++i) {
      if (policy == FillPolicy::seeded_random) std::shuffle(row.begin(), row.end(), rng);
      std::copy(row.begin(), row.end(), g.cells.begin() + static_cast<std::ptrdiff_t>(i * d));
    }
    layout.arrays.push_back(std::move(g));
    if (__builtin_mul_overflow(rows, static_cast<std::uint64_t>(d), &rows))
      throw ConfigError("sequence period overflows 64 bits");
  }
  return layout;
}

struct BuildOptions {
  /// Re-check the result exhaustively with check_si_set.
  bool validate = true;
  std::uint64_t budget = kDefaultWorkBudget;
};

inline SequenceSet build_si_set(std::span<const Rational> duty_factors, const ConstructionLayout& layout,
                                const BuildOptions& opts = {}) {
  if (duty_factors.empty()) throw ConfigError("need at least one duty factor");
  if (layout.arrays.size() != duty_factors.size())
    throw LayoutError("layout has " + std::to_string(layout.arrays.size()) + " arrays for " +
                      std::to_string(duty_factors.size()) + " users");
  const auto period = min_period_bound(duty_factors);

  std::vector<BinarySequence> sequences;
  std::uint64_t rows = 1;
  for (std::size_t i = 0; i < duty_factors.size(); ++i) {
    const auto& p = duty_factors[i];
    const auto& g = layout.arrays[i];
    const auto r = static_cast<std::size_t>(p.numerator());
    const auto d = static_cast<std::size_t>(p.denominator());
    if (g.rows != rows || g.cols != d || g.cells.size() != rows * d)
      throw LayoutError("G-array " + std::to_string(i) + " must be " + std::to_string(rows) + " x " +
                        std::to_string(d));
    for (std::size_t row = 0; row < rows; ++row)
      if (g.row_weight(row) != r)
        throw LayoutError("G-array " + std::to_string(i) + " row " + std::to_string(row) + " must hold exactly " +
                          std::to_string(r) + " ones");

    std::vector<std::uint8_t> block;
    block.reserve(rows * d);
    for (std::size_t col = 0; col < d; ++col)
      for (std::size_t row = 0; row < rows; ++row) block.push_back(g.at(row, col));
    std::vector<std::uint8_t> bits;
    bits.reserve(period);
    while (bits.size() < period) bits.insert(bits.end(), block.begin(), block.end());
    sequences.emplace_back(bits);
    rows *= d;
  }

  SequenceSet set(std::move(sequences));
  if (opts.validate) {
    const auto check = check_si_set(set, SiCheckOptions{opts.budget, 0, 0});
    if (!check.holds) throw InternalError("constructed sequence set is not shift-invariant");
  }
  return set;
}

inline SequenceSet build_si_set(std::span<const Rational> duty_factors,
                                FillPolicy policy = FillPolicy::canonical_left, std::uint64_t seed = 0,
                                const BuildOptions& opts = {}) {
  return build_si_set(duty_factors, make_layout(duty_factors, policy, seed), opts);
}

}  // namespace collide_sic
