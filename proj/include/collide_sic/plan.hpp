// Duty-factor planning for rate vectors on the capacity boundary.
//
// For a decode order (q_1, ..., q_M), q_1 decoding first, user q_k gets
//
//     p_{q_k} = R_{q_k} / (1 - sum_{j > k} R_{q_j}),
//
// so q_1 always ends up with duty factor 1 when every rate is positive.
// The shortest SI period for a plan is the product of the reduced duty-factor
// denominators.
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "collide_sic/error.hpp"
#include "collide_sic/rational.hpp"

namespace collide_sic {

using RateVector = std::vector<Rational>;

struct DutyFactorPlan {
  std::vector<std::size_t> permutation;  ///< decode order, 0-based user indices
  std::vector<Rational> duty_factors;    ///< indexed by user
  std::uint64_t period = 1;

  friend bool operator==(const DutyFactorPlan&, const DutyFactorPlan&) = default;
};

/// Product of reduced denominators; zero duty factors contribute 1.
inline std::uint64_t min_period_bound(std::span<const Rational> duty_factors) {
  std::uint64_t period = 1;
  for (const auto& p : duty_factors) {
    if (p < 0 || p > 1) throw ConfigError("duty factor " + to_string(p) + " outside [0, 1]");
    if (p.numerator() == 0) continue;
    const auto d = static_cast<std::uint64_t>(p.denominator());
    if (__builtin_mul_overflow(period, d, &period)) throw ConfigError("sequence period overflows 64 bits");
  }
  return period;
}

namespace detail {

inline void require_boundary(std::span<const Rational> rates) {
  if (rates.empty()) throw ConfigError("rate vector needs at least one user");
  for (const auto& r : rates)
    if (r < 0 || r > 1) throw ConfigError("rate " + to_string(r) + " outside [0, 1]");
  if (sum(rates) != Rational(1)) throw BoundaryViolation("rates must sum to 1 (got " + to_string(sum(rates)) + ")");
}

inline void require_permutation(std::span<const std::size_t> perm, std::size_t users) {
  if (perm.size() != users) throw ConfigError("permutation must list every user exactly once");
  std::vector<bool> seen(users, false);
  for (auto u : perm) {
    if (u >= users || seen[u]) throw ConfigError("permutation must list every user exactly once");
    seen[u] = true;
  }
}

}  // namespace detail

inline DutyFactorPlan plan_duty_factors(std::span<const Rational> rates, std::span<const std::size_t> permutation) {
  detail::require_boundary(rates);
  detail::require_permutation(permutation, rates.size());

  DutyFactorPlan plan;
  plan.permutation.assign(permutation.begin(), permutation.end());
  plan.duty_factors.assign(rates.size(), Rational(0));
  Rational later = 0;  // sum of rates decoded after position k
  for (std::size_t k = permutation.size(); k-- > 0;) {
    const auto user = permutation[k];
    const auto rate = rates[user];
    if (rate.numerator() != 0) {
      const Rational p = rate / (1 - later);
      if (p > 1) throw InternalError("planned duty factor " + to_string(p) + " exceeds 1");
      plan.duty_factors[user] = p;
    }
    later += rate;
  }
  plan.period = min_period_bound(plan.duty_factors);
  return plan;
}

struct PlanOptions {
  /// Refuse to enumerate permutations of more positive-rate users than this.
  std::size_t max_users = 10;
};

/// One plan per ordering of the positive-rate users (zero-rate users are
/// appended in index order), deduplicated by duty-factor vector, sorted by
/// period and then lexicographically by permutation.
inline std::vector<DutyFactorPlan> enumerate_plans(std::span<const Rational> rates, const PlanOptions& opts = {}) {
  detail::require_boundary(rates);
  std::vector<std::size_t> active;
  std::vector<std::size_t> silent;
  for (std::size_t u = 0; u < rates.size(); ++u) (rates[u].numerator() != 0 ? active : silent).push_back(u);
  if (active.size() > opts.max_users) {
    long double count = 1;
    for (std::size_t k = 2; k <= active.size(); ++k) count *= static_cast<long double>(k);
    throw BudgetExceeded("plan enumeration over " + std::to_string(active.size()) + "! permutations", count,
                         static_cast<std::uint64_t>(opts.max_users));
  }

  std::vector<DutyFactorPlan> plans;
  std::vector<std::size_t> perm;
  do {
    perm = active;
    perm.insert(perm.end(), silent.begin(), silent.end());
    auto plan = plan_duty_factors(rates, perm);
    const bool duplicate = std::any_of(plans.begin(), plans.end(), [&](const DutyFactorPlan& seen) {
      return seen.duty_factors == plan.duty_factors;
    });
    if (!duplicate) plans.push_back(std::move(plan));
  } while (std::next_permutation(active.begin(), active.end()));

  std::stable_sort(plans.begin(), plans.end(), [](const DutyFactorPlan& a, const DutyFactorPlan& b) {
    if (a.period != b.period) return a.period < b.period;
    return a.permutation < b.permutation;
  });
  return plans;
}

}  // namespace collide_sic
