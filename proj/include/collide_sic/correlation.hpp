// Generalized Hamming cross-correlation of protocol sequences and the
// shift-invariance (SI) / throughput-invariance (TI) checks built on it.
//
// A correlation query picks a subset A of users, a mark bit b_j per member and
// a shift tau_j per member.  Its value is the number of slots n in [0, L) with
// s_{A_j}(n - tau_j) == b_j for every member j.  Marks are packed into a
// MarkMask, bit j belonging to subset[j].
//
// Counting is done on 64-bit words: every (user, shift) row is precomputed
// once, complemented on the fly for zero marks, ANDed and popcounted.
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "collide_sic/error.hpp"
#include "collide_sic/sequence.hpp"

namespace collide_sic {

using MarkMask = std::uint64_t;

inline MarkMask marks_from_bits(std::span<const int> bits) {
  if (bits.size() > 64) throw InvalidQuery("at most 64 marks fit a mark mask");
  MarkMask mask = 0;
  for (std::size_t j = 0; j < bits.size(); ++j) {
    if (bits[j] != 0 && bits[j] != 1) throw InvalidQuery("marks must be 0 or 1");
    if (bits[j]) mask |= MarkMask{1} << j;
  }
  return mask;
}

inline MarkMask marks_from_bits(std::initializer_list<int> bits) {
  return marks_from_bits(std::span<const int>(bits.begin(), bits.size()));
}

inline MarkMask all_ones(std::size_t count) {
  return count >= 64 ? ~MarkMask{0} : (MarkMask{1} << count) - 1;
}

struct CorrelationQuery {
  std::vector<std::size_t> subset;  ///< distinct user indices, 0-based
  MarkMask marks = 0;
  std::vector<std::int64_t> shifts;  ///< one per subset member, reduced mod L
};

namespace detail {

inline void validate_subset(const SequenceSet& set, std::span<const std::size_t> subset) {
  if (subset.size() > 64) throw InvalidQuery("correlation subsets are limited to 64 users");
  std::vector<bool> seen(set.size(), false);
  for (auto u : subset) {
    if (u >= set.size()) {
      throw InvalidQuery("user index " + std::to_string(u) + " out of range for " +
                         std::to_string(set.size()) + " users");
    }
    if (seen[u]) throw InvalidQuery("user index " + std::to_string(u) + " repeated in subset");
    seen[u] = true;
  }
}

inline std::size_t reduce_shift(std::int64_t tau, std::size_t period) {
  const auto L = static_cast<std::int64_t>(period);
  return static_cast<std::size_t>(((tau % L) + L) % L);
}

/// Every cyclic shift of every sequence of a set, packed into words.
class ShiftTable {
 public:
  explicit ShiftTable(const SequenceSet& set)
      : period_(set.period()), words_per_row_((period_ + 63) / 64), users_(set.size()) {
    rows_.assign(users_ * period_ * words_per_row_, 0);
    for (std::size_t u = 0; u < users_; ++u) {
      const auto& seq = set[u];
      for (std::size_t tau = 0; tau < period_; ++tau) {
        auto* row = &rows_[(u * period_ + tau) * words_per_row_];
        for (std::size_t n = 0; n < period_; ++n) {
          if (seq[(n + period_ - tau) % period_]) row[n / 64] |= std::uint64_t{1} << (n % 64);
        }
      }
    }
    valid_.assign(words_per_row_, ~std::uint64_t{0});
    if (period_ % 64 != 0) valid_.back() = (std::uint64_t{1} << (period_ % 64)) - 1;
  }

  std::size_t period() const noexcept { return period_; }

  /// Correlation of `subset` under `marks` at `shifts` (all already reduced).
  std::size_t count(std::span<const std::size_t> subset, MarkMask marks,
                    std::span<const std::size_t> shifts) const noexcept {
    std::size_t total = 0;
    for (std::size_t w = 0; w < words_per_row_; ++w) {
      std::uint64_t acc = valid_[w];
      for (std::size_t j = 0; j < subset.size() && acc; ++j) {
        const std::uint64_t word = rows_[(subset[j] * period_ + shifts[j]) * words_per_row_ + w];
        acc &= ((marks >> j) & 1U) ? word : ~word;
      }
      total += static_cast<std::size_t>(std::popcount(acc & valid_[w]));
    }
    return total;
  }

 private:
  std::size_t period_;
  std::size_t words_per_row_;
  std::size_t users_;
  std::vector<std::uint64_t> rows_;
  std::vector<std::uint64_t> valid_;
};

/// Odometer over [0, L)^k starting at all-zero; returns false after the last tuple.
inline bool next_tuple(std::span<std::size_t> tuple, std::size_t period, std::size_t first = 0) {
  for (std::size_t i = tuple.size(); i-- > first;) {
    if (++tuple[i] < period) return true;
    tuple[i] = 0;
  }
  return false;
}

inline long double power(std::size_t base, std::size_t exp) {
  return shift_space_size(base, exp);
}

}  // namespace detail

/// H(b_A; tau_A; A).  An empty subset counts every slot.
inline std::size_t cross_correlation(const SequenceSet& set, const CorrelationQuery& query) {
  detail::validate_subset(set, query.subset);
  if (query.shifts.size() != query.subset.size())
    throw InvalidQuery("need exactly one shift per subset member");
  if (query.subset.size() < 64 && (query.marks >> query.subset.size()) != 0)
    throw InvalidQuery("marks set beyond the subset size");
  const auto L = set.period();
  std::size_t total = 0;
  for (std::size_t n = 0; n < L; ++n) {
    bool match = true;
    for (std::size_t j = 0; j < query.subset.size() && match; ++j) {
      const bool bit = set[query.subset[j]].at(static_cast<std::int64_t>(n) - query.shifts[j]);
      match = bit == static_cast<bool>((query.marks >> j) & 1U);
    }
    total += match;
  }
  return total;
}

struct SiCheckOptions {
  std::uint64_t budget = kDefaultWorkBudget;
  /// Random shift tuples to test when the exhaustive space exceeds the
  /// budget.  Zero means refuse instead.  Sampling can only falsify.
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Two shift tuples on which one correlation takes different values.
struct SiViolation {
  std::vector<std::size_t> subset;
  MarkMask marks = 0;
  ShiftVector reference_shifts;
  std::size_t reference_value = 0;
  ShiftVector witness_shifts;
  std::size_t witness_value = 0;
};

struct SiCheckResult {
  bool holds = true;
  bool exhaustive = true;
  std::optional<SiViolation> violation;
  explicit operator bool() const noexcept { return holds; }
};

namespace detail {

// Rotating every shift by the same amount rotates the slot index and leaves the
// count unchanged, so the first member's shift is pinned to 0.
inline SiCheckResult si_for(const ShiftTable& table, std::span<const std::size_t> subset, MarkMask marks,
                            const SiCheckOptions& opts, std::mt19937_64& rng) {
  SiCheckResult result;
  if (subset.size() <= 1) return result;
  const auto L = table.period();
  std::vector<std::size_t> taus(subset.size(), 0);
  const auto reference = table.count(subset, marks, taus);
  auto record = [&](std::size_t value) {
    result.holds = false;
    result.violation = SiViolation{{subset.begin(), subset.end()}, marks, ShiftVector(subset.size(), 0),
                                   reference, taus, value};
  };
  if (power(L, subset.size() - 1) <= static_cast<long double>(opts.budget)) {
    while (next_tuple(taus, L, 1)) {
      const auto value = table.count(subset, marks, taus);
      if (value != reference) {
        record(value);
        return result;
      }
    }
    return result;
  }
  if (opts.samples == 0) {
    throw BudgetExceeded("exhaustive shift-invariance check", power(L, subset.size() - 1), opts.budget);
  }
  result.exhaustive = false;
  std::uniform_int_distribution<std::size_t> pick(0, L - 1);
  for (std::uint64_t s = 0; s < opts.samples; ++s) {
    for (std::size_t j = 1; j < taus.size(); ++j) taus[j] = pick(rng);
    const auto value = table.count(subset, marks, taus);
    if (value != reference) {
      record(value);
      return result;
    }
  }
  return result;
}

}  // namespace detail

/// Whether H(marks; . ; subset) is constant over all shift tuples.
inline SiCheckResult check_si_for(const SequenceSet& set, std::span<const std::size_t> subset, MarkMask marks,
                                  const SiCheckOptions& opts = {}) {
  detail::validate_subset(set, subset);
  detail::ShiftTable table(set);
  std::mt19937_64 rng(opts.seed);
  return detail::si_for(table, subset, marks, opts, rng);
}

inline bool is_si_for(const SequenceSet& set, std::span<const std::size_t> subset, MarkMask marks,
                      const SiCheckOptions& opts = {}) {
  return check_si_for(set, subset, marks, opts).holds;
}

/// Every subset of users, all-one marks.  Subsets are visited by increasing
/// size, lexicographically within a size, and the first violation is returned.
inline SiCheckResult check_si_set(const SequenceSet& set, const SiCheckOptions& opts = {}) {
  detail::ShiftTable table(set);
  std::mt19937_64 rng(opts.seed);
  SiCheckResult overall;
  const auto M = set.size();
  for (std::size_t k = 2; k <= M; ++k) {
    std::vector<std::size_t> subset(k);
    std::iota(subset.begin(), subset.end(), 0);
    while (true) {
      auto r = detail::si_for(table, subset, all_ones(k), opts, rng);
      overall.exhaustive = overall.exhaustive && r.exhaustive;
      if (!r.holds) {
        r.exhaustive = overall.exhaustive;
        return r;
      }
      // next k-combination of [0, M)
      std::size_t i = k;
      while (i-- > 0 && subset[i] == M - k + i) {
      }
      if (i == static_cast<std::size_t>(-1)) break;
      ++subset[i];
      for (std::size_t j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
    }
  }
  return overall;
}

inline bool is_si_set(const SequenceSet& set, const SiCheckOptions& opts = {}) {
  return check_si_set(set, opts).holds;
}

/// Full-set correlations whose marks contain exactly one 1.
inline SiCheckResult check_ti_set(const SequenceSet& set, const SiCheckOptions& opts = {}) {
  detail::ShiftTable table(set);
  std::mt19937_64 rng(opts.seed);
  std::vector<std::size_t> everyone(set.size());
  std::iota(everyone.begin(), everyone.end(), 0);
  SiCheckResult overall;
  for (std::size_t h = 0; h < set.size(); ++h) {
    auto r = detail::si_for(table, everyone, MarkMask{1} << h, opts, rng);
    overall.exhaustive = overall.exhaustive && r.exhaustive;
    if (!r.holds) {
      r.exhaustive = overall.exhaustive;
      return r;
    }
  }
  return overall;
}

inline bool is_ti_set(const SequenceSet& set, const SiCheckOptions& opts = {}) {
  return check_ti_set(set, opts).holds;
}

/// Sum of H over all L^|A| shift tuples against L * prod_j H(b_j; tau_j; {j}).
/// Brute force on purpose: this is a self-test of the counting code.
inline bool check_lemma1(const SequenceSet& set, std::span<const std::size_t> subset, MarkMask marks,
                         std::uint64_t budget = kDefaultWorkBudget) {
  detail::validate_subset(set, subset);
  const auto L = set.period();
  if (detail::power(L, subset.size()) > static_cast<long double>(budget))
    throw BudgetExceeded("shift-sum identity brute force", detail::power(L, subset.size()), budget);
  detail::ShiftTable table(set);
  std::vector<std::size_t> taus(subset.size(), 0);
  unsigned __int128 lhs = 0;
  do {
    lhs += table.count(subset, marks, taus);
  } while (detail::next_tuple(taus, L));
  unsigned __int128 rhs = L;
  for (std::size_t j = 0; j < subset.size(); ++j) {
    const auto w = set[subset[j]].weight();
    rhs *= ((marks >> j) & 1U) ? w : L - w;
  }
  return lhs == rhs;
}

struct Lemma3Report {
  /// First mark vector (in mask order, bit i = user i) whose full-set
  /// correlation is positive and constant over every shift vector.
  std::optional<MarkMask> condition_i_witness;
  std::optional<std::size_t> witness_value;
  /// Every subset under every mark vector is SI.
  bool condition_ii_holds = true;
  std::optional<SiViolation> condition_ii_violation;
  /// The two conditions agree (witness found iff condition (ii) holds).
  bool equivalent = true;
};

/// Searches condition (i) and checks condition (ii) independently, both exhaustively.
inline Lemma3Report check_lemma3(const SequenceSet& set, std::uint64_t budget = kDefaultWorkBudget) {
  const auto M = set.size();
  const auto L = set.period();
  if (M > 20) throw BudgetExceeded("constant-correlation check", detail::power(2, M), budget);
  // condition (i): 2^M mark vectors; condition (ii): at most 3^M (subset, marks) pairs
  const long double work = (detail::power(2, M) + detail::power(3, M)) * detail::power(L, M - 1);
  if (work > static_cast<long double>(budget)) throw BudgetExceeded("constant-correlation check", work, budget);

  detail::ShiftTable table(set);
  Lemma3Report report;
  std::vector<std::size_t> everyone(M);
  std::iota(everyone.begin(), everyone.end(), 0);
  for (MarkMask b = 0; b < (MarkMask{1} << M) && !report.condition_i_witness; ++b) {
    std::vector<std::size_t> taus(M, 0);
    const auto reference = table.count(everyone, b, taus);
    bool ok = reference > 0;
    while (ok && detail::next_tuple(taus, L, 1)) ok = table.count(everyone, b, taus) == reference;
    if (ok) {
      report.condition_i_witness = b;
      report.witness_value = reference;
    }
  }

  SiCheckOptions opts{budget, 0, 0};
  std::mt19937_64 rng(0);
  for (MarkMask members = 1; members < (MarkMask{1} << M) && report.condition_ii_holds; ++members) {
    std::vector<std::size_t> subset;
    for (std::size_t u = 0; u < M; ++u)
      if ((members >> u) & 1U) subset.push_back(u);
    for (MarkMask b = 0; b < (MarkMask{1} << subset.size()); ++b) {
      auto r = detail::si_for(table, subset, b, opts, rng);
      if (!r.holds) {
        report.condition_ii_holds = false;
        report.condition_ii_violation = std::move(r.violation);
        break;
      }
    }
  }
  report.equivalent = report.condition_i_witness.has_value() == report.condition_ii_holds;
  return report;
}

/// H(b) + H(b') == H over A \ {flip_user} where b and b' differ only at
/// flip_user.  Exhaustive over all L^|A| tuples inside the budget, otherwise
/// `opts.samples` random tuples.
inline bool check_complement_identity(const SequenceSet& set, std::span<const std::size_t> subset, MarkMask marks,
                                      std::size_t flip_user, const SiCheckOptions& opts = {}) {
  detail::validate_subset(set, subset);
  const auto it = std::find(subset.begin(), subset.end(), flip_user);
  if (it == subset.end()) throw InvalidQuery("flip index must be a member of the subset");
  const auto j_star = static_cast<std::size_t>(it - subset.begin());
  const auto L = set.period();
  detail::ShiftTable table(set);

  std::vector<std::size_t> reduced;
  MarkMask reduced_marks = 0;
  for (std::size_t j = 0; j < subset.size(); ++j) {
    if (j == j_star) continue;
    if ((marks >> j) & 1U) reduced_marks |= MarkMask{1} << reduced.size();
    reduced.push_back(subset[j]);
  }
  const MarkMask flipped = marks ^ (MarkMask{1} << j_star);

  std::vector<std::size_t> taus(subset.size(), 0);
  std::vector<std::size_t> reduced_taus(reduced.size());
  auto holds_at = [&] {
    for (std::size_t j = 0, r = 0; j < subset.size(); ++j)
      if (j != j_star) reduced_taus[r++] = taus[j];
    return table.count(subset, marks, taus) + table.count(subset, flipped, taus) ==
           table.count(reduced, reduced_marks, reduced_taus);
  };

  if (detail::power(L, subset.size()) <= static_cast<long double>(opts.budget)) {
    do {
      if (!holds_at()) return false;
    } while (detail::next_tuple(taus, L));
    return true;
  }
  if (opts.samples == 0)
    throw BudgetExceeded("complement identity check", detail::power(L, subset.size()), opts.budget);
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<std::size_t> pick(0, L - 1);
  for (std::uint64_t s = 0; s < opts.samples; ++s) {
    for (auto& t : taus) t = pick(rng);
    if (!holds_at()) return false;
  }
  return true;
}

}  // namespace collide_sic
