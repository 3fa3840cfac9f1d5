// Blind shift identification from the idle / success / collision pattern.
//
// Exhaustive pattern matching over all L^M shift vectors.  The true shift
// vector always matches, so the candidate list is never empty for a trace the
// set actually produced; more than one candidate means the pattern alone is
// ambiguous.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "collide_sic/channel.hpp"
#include "collide_sic/correlation.hpp"
#include "collide_sic/error.hpp"
#include "collide_sic/sequence.hpp"

namespace collide_sic {

/// Shift vectors (lexicographic order) whose kind pattern matches every observed slot.
inline std::vector<ShiftVector> identify_shifts(std::span<const SlotKind> kinds, const SequenceSet& set,
                                                std::uint64_t budget = kDefaultWorkBudget) {
  const auto L = set.period();
  const auto M = set.size();
  if (kinds.size() < L)
    throw ConfigError("identification needs at least one full period (" + std::to_string(L) + " slots)");
  if (shift_space_size(L, M) > static_cast<long double>(budget))
    throw BudgetExceeded("blind shift identification", shift_space_size(L, M), budget);

  std::vector<SlotKind> observed(L);
  for (std::size_t t = 0; t < L; ++t) observed[t] = kinds[t];
  for (std::size_t t = L; t < kinds.size(); ++t)
    if (kinds[t] != observed[t % L]) throw TraceMismatch("observed kind pattern is not periodic in L");

  std::vector<ShiftVector> candidates;
  ShiftVector taus(M, 0);
  std::vector<std::size_t> counts(L);
  do {
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t u = 0; u < M; ++u)
      for (std::size_t t = 0; t < L; ++t) counts[t] += set[u][(t + L - taus[u]) % L];
    bool match = true;
    for (std::size_t t = 0; t < L && match; ++t) match = kind_of(counts[t]) == observed[t];
    if (match) candidates.push_back(taus);
  } while (detail::next_tuple(taus, L));

  if (candidates.empty()) throw TraceMismatch("no shift vector reproduces the observed kind pattern");
  return candidates;
}

}  // namespace collide_sic
