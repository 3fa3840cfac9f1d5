// Exhaustive verification harness: shift sweeps under ideal SIC, the
// achievability pipeline, necessity falsification, minimum-period search,
// the no-SIC baseline and capacity-region data.
#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "collide_sic/channel.hpp"
#include "collide_sic/construction.hpp"
#include "collide_sic/correlation.hpp"
#include "collide_sic/error.hpp"
#include "collide_sic/parallel.hpp"
#include "collide_sic/plan.hpp"
#include "collide_sic/rational.hpp"
#include "collide_sic/sequence.hpp"
#include "collide_sic/sic.hpp"

namespace collide_sic {

struct SweepOptions {
  std::uint64_t budget = kDefaultWorkBudget;
  /// Shift vectors to sample when L^M exceeds the budget (0 = refuse).
  /// Samples are stratified over tau_1.
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t periods = 0;  ///< trace length W in periods; 0 means M + 2
  std::size_t jobs = 0;     ///< worker threads; 0 means hardware concurrency
  bool keep_outcomes = false;
};

/// What one shift vector did.
struct ShiftOutcome {
  ShiftVector shifts;
  bool success = false;
  bool rates_exact = false;
  std::vector<std::size_t> order;
  bool one_user_per_iteration = true;
  std::vector<std::optional<std::size_t>> decode_iteration;
  std::vector<std::size_t> t_counts;
  std::vector<std::optional<std::int64_t>> delays;
  std::vector<Rational> decoded_per_period;
  bool delay_bound_holds = true;

  bool achieved() const noexcept { return success && rates_exact; }
  friend bool operator==(const ShiftOutcome&, const ShiftOutcome&) = default;
};

struct VerificationReport {
  RateVector rates;
  std::optional<DutyFactorPlan> plan;
  std::vector<BinarySequence> sequences;
  std::vector<CodingParams> coding;
  std::size_t period = 0;
  std::size_t periods = 0;

  long double shift_space = 0;  ///< L^M
  std::uint64_t runs = 0;
  std::uint64_t achieved = 0;
  bool exhaustive = true;

  /// Every run decoded every block at exactly L * R_i source packets per period.
  bool verdict = false;
  std::optional<ShiftOutcome> counterexample;

  /// Iteration-1 user and its clean-packet count are the same in every run.
  bool first_iteration_constant = false;
  std::optional<std::size_t> first_iteration_user;
  std::size_t first_iteration_count = 0;
  bool first_iteration_matches_rate = false;

  bool iteration_order_unique = false;
  std::vector<std::size_t> iteration_order;
  bool one_user_per_iteration = true;

  /// Decode delay of the k-th-iteration user is at most kL in every run.
  bool delay_bound_holds = true;
  std::optional<ShiftOutcome> delay_violation;
  std::vector<std::int64_t> max_delay;

  /// Decoded source packets per period never exceed L in total.
  bool rate_ceiling_holds = true;

  std::vector<ShiftOutcome> outcomes;
};

namespace detail {

inline std::vector<UserConfig> make_users(const SequenceSet& set, std::span<const CodingParams> coding) {
  if (coding.size() != set.size()) throw ConfigError("need one coding configuration per sequence");
  std::vector<UserConfig> users;
  users.reserve(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) users.push_back({set[i], coding[i], 0});
  validate_users(users);
  return users;
}

inline std::vector<Rational> target_per_period(std::span<const Rational> rates, std::size_t period) {
  std::vector<Rational> out;
  for (const auto& r : rates) out.push_back(r * static_cast<std::int64_t>(period));
  return out;
}

inline ShiftOutcome outcome_of(const SicReport& report, std::span<const Rational> target, std::size_t period) {
  ShiftOutcome out;
  out.shifts = report.shifts;
  out.success = report.success;
  out.order = report.decode_order();
  out.decode_iteration = report.decode_iteration;
  out.t_counts = report.t_counts;
  out.delays = report.decode_delays;
  out.decoded_per_period = report.decoded_per_period;
  out.rates_exact = std::equal(target.begin(), target.end(), report.decoded_per_period.begin(),
                               report.decoded_per_period.end());
  for (std::size_t i = 1; i < report.iterations.size(); ++i)
    if (report.iterations[i].iteration == report.iterations[i - 1].iteration) out.one_user_per_iteration = false;
  for (std::size_t u = 0; u < out.delays.size(); ++u)
    if (out.delays[u] && *out.delays[u] > static_cast<std::int64_t>(*out.decode_iteration[u] * period))
      out.delay_bound_holds = false;
  return out;
}

inline std::optional<std::pair<std::size_t, std::size_t>> first_iteration_of(const ShiftOutcome& o) {
  for (std::size_t u = 0; u < o.decode_iteration.size(); ++u)
    if (o.decode_iteration[u] == std::size_t{1}) return std::pair{u, o.t_counts[u]};
  return std::nullopt;
}

/// Per-chunk partial result, merged in chunk order.
struct SweepAccumulator {
  std::uint64_t runs = 0;
  std::uint64_t achieved = 0;
  std::optional<ShiftOutcome> first_failure;
  std::optional<ShiftOutcome> first_delay_violation;
  bool have_reference = false;
  std::optional<std::pair<std::size_t, std::size_t>> first_iteration;
  bool first_iteration_constant = true;
  std::vector<std::size_t> order;
  bool order_unique = true;
  bool one_user_per_iteration = true;
  bool rate_ceiling = true;
  std::vector<std::int64_t> max_delay;
  std::vector<ShiftOutcome> outcomes;

  void add(ShiftOutcome o, std::size_t period, bool keep) {
    ++runs;
    if (o.achieved()) ++achieved;
    else if (!first_failure) first_failure = o;
    if (!o.delay_bound_holds && !first_delay_violation) first_delay_violation = o;
    one_user_per_iteration = one_user_per_iteration && o.one_user_per_iteration;
    Rational total(0);
    for (const auto& r : o.decoded_per_period) total += r;
    if (total > Rational(static_cast<std::int64_t>(period))) rate_ceiling = false;
    max_delay.resize(o.delays.size(), 0);
    for (std::size_t u = 0; u < o.delays.size(); ++u)
      if (o.delays[u]) max_delay[u] = std::max(max_delay[u], *o.delays[u]);
    const auto first = first_iteration_of(o);
    if (!have_reference) {
      have_reference = true;
      first_iteration = first;
      order = o.order;
    } else {
      if (first != first_iteration) first_iteration_constant = false;
      if (o.order != order) order_unique = false;
    }
    if (keep) outcomes.push_back(std::move(o));
  }

  void merge(SweepAccumulator&& other) {
    if (other.runs == 0) return;
    runs += other.runs;
    achieved += other.achieved;
    if (!first_failure) first_failure = std::move(other.first_failure);
    if (!first_delay_violation) first_delay_violation = std::move(other.first_delay_violation);
    one_user_per_iteration = one_user_per_iteration && other.one_user_per_iteration;
    rate_ceiling = rate_ceiling && other.rate_ceiling;
    max_delay.resize(std::max(max_delay.size(), other.max_delay.size()), 0);
    for (std::size_t u = 0; u < other.max_delay.size(); ++u) max_delay[u] = std::max(max_delay[u], other.max_delay[u]);
    if (!have_reference) {
      have_reference = true;
      first_iteration = other.first_iteration;
      first_iteration_constant = other.first_iteration_constant;
      order = std::move(other.order);
      order_unique = other.order_unique;
    } else {
      first_iteration_constant =
          first_iteration_constant && other.first_iteration_constant && other.first_iteration == first_iteration;
      order_unique = order_unique && other.order_unique && other.order == order;
    }
    outcomes.insert(outcomes.end(), std::make_move_iterator(other.outcomes.begin()),
                    std::make_move_iterator(other.outcomes.end()));
  }
};

inline ShiftVector sampled_shift(std::uint64_t sample, std::size_t period, std::size_t users, std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(sample), static_cast<std::uint32_t>(sample >> 32)};
  std::mt19937_64 rng(seq);
  ShiftVector taus(users);
  taus[0] = static_cast<std::size_t>(sample % period);
  for (std::size_t i = 1; i < users; ++i) taus[i] = static_cast<std::size_t>(rng() % period);
  return taus;
}

}  // namespace detail

/// Genie-mode SIC over every shift vector in [0, L)^M (or a stratified sample).
inline VerificationReport sweep_all_shifts(const SequenceSet& set, std::span<const CodingParams> coding,
                                           std::span<const Rational> rates, const SweepOptions& opts = {}) {
  if (rates.size() != set.size()) throw ConfigError("need one rate per sequence");
  const auto base_users = detail::make_users(set, coding);
  const auto L = set.period();
  const auto M = set.size();

  VerificationReport report;
  report.rates.assign(rates.begin(), rates.end());
  report.sequences = set.sequences();
  report.coding.assign(coding.begin(), coding.end());
  report.period = L;
  report.periods = opts.periods == 0 ? M + 2 : opts.periods;
  report.shift_space = shift_space_size(L, M);

  std::uint64_t count = 0;
  if (report.shift_space <= static_cast<long double>(opts.budget)) {
    count = static_cast<std::uint64_t>(report.shift_space);
  } else if (opts.samples > 0) {
    report.exhaustive = false;
    count = opts.samples;
  } else {
    throw BudgetExceeded("shift sweep over L^M shift vectors", report.shift_space, opts.budget);
  }

  const auto target = detail::target_per_period(rates, L);
  const auto horizon = report.periods * L;
  const std::uint64_t chunk = 512;
  std::vector<detail::SweepAccumulator> parts((count + chunk - 1) / chunk);
  parallel_chunks(count, chunk, opts.jobs, [&](std::uint64_t c, std::uint64_t begin, std::uint64_t end) {
    auto users = base_users;
    auto& acc = parts[c];
    for (auto index = begin; index < end; ++index) {
      const auto taus = report.exhaustive ? shift_vector_at(index, L, M) : detail::sampled_shift(index, L, M, opts.seed);
      for (std::size_t u = 0; u < M; ++u) users[u].shift = taus[u];
      const auto trace = simulate_trace(users, horizon);
      acc.add(detail::outcome_of(sic_receive(trace, users), target, L), L, opts.keep_outcomes);
    }
  });
  detail::SweepAccumulator total;
  for (auto& p : parts) total.merge(std::move(p));

  report.runs = total.runs;
  report.achieved = total.achieved;
  report.verdict = total.runs > 0 && total.achieved == total.runs;
  report.counterexample = std::move(total.first_failure);
  report.first_iteration_constant = total.first_iteration && total.first_iteration_constant;
  if (total.first_iteration) {
    report.first_iteration_user = total.first_iteration->first;
    report.first_iteration_count = total.first_iteration->second;
    report.first_iteration_matches_rate =
        report.first_iteration_constant &&
        Rational(static_cast<std::int64_t>(report.first_iteration_count)) == target[total.first_iteration->first];
  }
  report.iteration_order_unique = total.order_unique;
  report.iteration_order = std::move(total.order);
  report.one_user_per_iteration = total.one_user_per_iteration;
  report.delay_bound_holds = !total.first_delay_violation;
  report.delay_violation = std::move(total.first_delay_violation);
  report.max_delay = std::move(total.max_delay);
  report.rate_ceiling_holds = total.rate_ceiling;
  report.outcomes = std::move(total.outcomes);
  return report;
}

/// n_i = w_i and m_i = L * R_i; throws when L * R_i is not an integer.
inline std::vector<CodingParams> derive_coding(const SequenceSet& set, std::span<const Rational> rates,
                                               std::size_t packet_size = 1) {
  if (rates.size() != set.size()) throw ConfigError("need one rate per sequence");
  std::vector<CodingParams> coding;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto m = rates[i] * static_cast<std::int64_t>(set.period());
    if (m.denominator() != 1)
      throw ConfigError("L * R_" + std::to_string(i + 1) + " = " + to_string(m) + " is not an integer");
    coding.push_back({set[i].weight(), static_cast<std::size_t>(m.numerator()), packet_size});
  }
  return coding;
}

struct AchieveOptions {
  SweepOptions sweep;
  FillPolicy fill = FillPolicy::canonical_left;
  std::uint64_t fill_seed = 0;
};

/// Plan (minimum period) -> construction -> coding -> full sweep.
inline VerificationReport achievability_check(std::span<const Rational> rates, const AchieveOptions& opts = {}) {
  const auto plans = enumerate_plans(rates);
  const auto& plan = plans.front();
  const auto set = build_si_set(plan.duty_factors, opts.fill, opts.fill_seed,
                                BuildOptions{true, opts.sweep.budget});
  const auto coding = derive_coding(set, rates);
  auto report = sweep_all_shifts(set, coding, rates, opts.sweep);
  report.plan = plan;
  return report;
}

struct NecessityReport {
  bool duty_condition_holds = false;
  std::optional<DutyFactorPlan> matching_plan;
  bool si_holds = false;
  std::optional<SiViolation> si_violation;
  /// Every block of some user carries fewer coded packets than L * R_i, so
  /// no shift vector can work.
  bool weight_deficit = false;
  /// First shift vector (lexicographic) at which the target rates fail.
  std::optional<ShiftVector> witness;
  std::optional<VerificationReport> sweep;
};

inline NecessityReport necessity_falsifier(const SequenceSet& set, std::span<const Rational> rates,
                                           const SweepOptions& opts = {}) {
  NecessityReport report;
  const auto duty = set.duty_factors();
  for (const auto& plan : enumerate_plans(rates)) {
    if (plan.duty_factors == duty) {
      report.duty_condition_holds = true;
      report.matching_plan = plan;
      break;
    }
  }
  const auto si = check_si_set(set, SiCheckOptions{opts.budget, 0, 0});
  report.si_holds = si.holds;
  report.si_violation = si.violation;

  auto coding = derive_coding(set, rates);
  for (const auto& c : coding)
    if (c.m > c.n) report.weight_deficit = true;
  if (report.weight_deficit) {
    report.witness = ShiftVector(set.size(), 0);
    return report;
  }
  report.sweep = sweep_all_shifts(set, coding, rates, opts);
  if (report.sweep->counterexample) report.witness = report.sweep->counterexample->shifts;
  return report;
}

// ---------------------------------------------------------------------------
// Minimum-period search

struct MinPeriodOptions {
  std::size_t lmax = 6;
  /// Only enumerate weight vectors L * p from some planner permutation.
  bool prune = true;
  std::uint64_t budget = kDefaultWorkBudget;
  std::size_t jobs = 0;
};

struct PeriodStats {
  std::size_t period = 0;
  /// False when some L * R_i is not an integer: one block per period cannot
  /// carry that rate, so the period is skipped.
  bool rate_integral = false;
  std::size_t weight_vectors = 0;
  std::uint64_t tuples = 0;  ///< sequence tuples tested (rotation classes)
  std::uint64_t achievers = 0;
  std::optional<std::vector<BinarySequence>> example;
};

struct MinPeriodResult {
  std::optional<std::size_t> minimum;
  bool pruned = true;
  long double estimate = 0;  ///< SIC runs the search may take
  std::vector<PeriodStats> periods;
};

namespace detail {

/// Smallest rotation representatives of all L-bit words of weight w.
inline std::vector<std::uint64_t> necklaces(std::size_t L, std::size_t w) {
  std::vector<std::uint64_t> out;
  const std::uint64_t full = L == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << L) - 1;
  for (std::uint64_t x = 0; x <= full; ++x) {
    if (static_cast<std::size_t>(std::popcount(x)) != w) continue;
    bool smallest = true;
    for (std::size_t r = 1; r < L && smallest; ++r) {
      const auto rot = ((x >> r) | (x << (L - r))) & full;
      if (rot < x) smallest = false;
    }
    if (smallest) out.push_back(x);
  }
  return out;
}

inline BinarySequence sequence_of_word(std::uint64_t x, std::size_t L) {
  std::vector<std::uint8_t> bits(L);
  for (std::size_t n = 0; n < L; ++n) bits[n] = static_cast<std::uint8_t>((x >> n) & 1U);
  return BinarySequence(bits);
}

struct PeriodPlan {
  std::size_t period = 0;
  bool rate_integral = false;
  std::vector<std::size_t> m;
  std::vector<std::vector<std::size_t>> weight_vectors;
  std::vector<std::vector<std::vector<std::uint64_t>>> words;  ///< per weight vector, per user
  std::uint64_t tuples = 0;
};

/// True when the tuple reaches the target under every shift vector with tau_1 = 0.
inline bool achieves(std::vector<UserConfig>& users, std::span<const Rational> target, std::size_t L) {
  const auto M = users.size();
  ShiftVector taus(M, 0);
  do {
    for (std::size_t u = 0; u < M; ++u) users[u].shift = taus[u];
    const auto trace = simulate_trace(users, L);
    const auto report = sic_receive(trace, users);
    if (!report.success || !std::equal(target.begin(), target.end(), report.decoded_per_period.begin())) return false;
  } while (next_tuple(taus, L, 1));
  return true;
}

}  // namespace detail

/// Smallest L <= lmax for which some M-tuple of period-L sequences reaches the
/// rates under every shift vector.  Cyclic rotations of a sequence are covered
/// by the shift sweep, so one representative per rotation class is tested, and
/// a common rotation of all shifts changes nothing, so tau_1 is pinned to 0.
inline MinPeriodResult min_period_search(std::span<const Rational> rates, const MinPeriodOptions& opts = {}) {
  detail::require_boundary(rates);
  const auto M = rates.size();
  if (opts.lmax == 0) throw ConfigError("lmax must be at least 1");
  if (opts.lmax > 24) throw BudgetExceeded("minimum-period search beyond L = 24", detail::power(2, opts.lmax), opts.budget);

  MinPeriodResult result;
  result.pruned = opts.prune;
  std::vector<detail::PeriodPlan> periods;
  const auto plans = opts.prune ? enumerate_plans(rates) : std::vector<DutyFactorPlan>{};
  for (std::size_t L = 1; L <= opts.lmax; ++L) {
    detail::PeriodPlan pp;
    pp.period = L;
    pp.rate_integral = true;
    for (const auto& r : rates) {
      const auto m = r * static_cast<std::int64_t>(L);
      if (m.denominator() != 1) pp.rate_integral = false;
      else pp.m.push_back(static_cast<std::size_t>(m.numerator()));
    }
    if (pp.rate_integral) {
      if (opts.prune) {
        for (const auto& plan : plans) {
          std::vector<std::size_t> w;
          for (const auto& p : plan.duty_factors) {
            const auto x = p * static_cast<std::int64_t>(L);
            if (x.denominator() != 1) break;
            w.push_back(static_cast<std::size_t>(x.numerator()));
          }
          if (w.size() == M && std::find(pp.weight_vectors.begin(), pp.weight_vectors.end(), w) == pp.weight_vectors.end())
            pp.weight_vectors.push_back(std::move(w));
        }
      } else {
        std::vector<std::size_t> w(pp.m);
        while (true) {
          pp.weight_vectors.push_back(w);
          std::size_t i = M;
          while (i-- > 0) {
            if (w[i] < L) {
              ++w[i];
              break;
            }
            w[i] = pp.m[i];
          }
          if (i == static_cast<std::size_t>(-1)) break;
        }
      }
      std::vector<std::vector<std::uint64_t>> cache(L + 1);
      std::vector<bool> cached(L + 1, false);
      for (const auto& w : pp.weight_vectors) {
        std::vector<std::vector<std::uint64_t>> per_user;
        std::uint64_t tuples = 1;
        for (auto wi : w) {
          if (!cached[wi]) {
            cache[wi] = detail::necklaces(L, wi);
            cached[wi] = true;
          }
          per_user.push_back(cache[wi]);
          tuples *= per_user.back().size();
        }
        pp.tuples += tuples;
        pp.words.push_back(std::move(per_user));
      }
    }
    result.estimate += static_cast<long double>(pp.tuples) * detail::power(L, M - 1);
    periods.push_back(std::move(pp));
  }
  if (result.estimate > static_cast<long double>(opts.budget))
    throw BudgetExceeded("minimum-period search", result.estimate, opts.budget);

  for (auto& pp : periods) {
    PeriodStats stats;
    stats.period = pp.period;
    stats.rate_integral = pp.rate_integral;
    stats.weight_vectors = pp.weight_vectors.size();
    stats.tuples = pp.tuples;
    const auto L = pp.period;
    const auto target = detail::target_per_period(rates, L);
    for (std::size_t v = 0; v < pp.weight_vectors.size(); ++v) {
      const auto& words = pp.words[v];
      std::uint64_t tuples = 1;
      for (const auto& list : words) tuples *= list.size();
      const std::uint64_t chunk = 64;
      struct Part {
        std::uint64_t achievers = 0;
        std::optional<std::vector<BinarySequence>> example;
      };
      std::vector<Part> parts((tuples + chunk - 1) / chunk);
      parallel_chunks(tuples, chunk, opts.jobs, [&](std::uint64_t c, std::uint64_t begin, std::uint64_t end) {
        for (auto index = begin; index < end; ++index) {
          std::vector<UserConfig> users(M);
          auto rest = index;
          for (std::size_t u = M; u-- > 0;) {
            const auto& list = words[u];
            users[u].sequence = detail::sequence_of_word(list[rest % list.size()], L);
            rest /= list.size();
            users[u].coding = {pp.weight_vectors[v][u], pp.m[u], 1};
          }
          if (detail::achieves(users, target, L)) {
            ++parts[c].achievers;
            if (!parts[c].example) {
              std::vector<BinarySequence> seqs;
              for (const auto& u : users) seqs.push_back(u.sequence);
              parts[c].example = std::move(seqs);
            }
          }
        }
      });
      for (auto& p : parts) {
        stats.achievers += p.achievers;
        if (!stats.example && p.example) stats.example = std::move(p.example);
      }
    }
    const bool found = stats.achievers > 0;
    result.periods.push_back(std::move(stats));
    if (found) {
      result.minimum = pp.period;
      break;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Receiver without SIC

struct BaselineOptions {
  std::uint64_t budget = kDefaultWorkBudget;
  std::size_t jobs = 0;
};

struct BaselineReport {
  std::size_t period = 0;
  std::uint64_t runs = 0;
  /// Per-user packets per slot over all shift vectors.
  std::vector<Rational> mean;
  std::vector<Rational> worst;
  std::vector<Rational> best;
  Rational aggregate_mean{0};
  Rational aggregate_worst{0};
  Rational aggregate_best{0};
  bool shift_invariant = false;
  /// p_i * prod_{j != i} (1 - p_j)
  std::vector<Rational> predicted;
  bool matches_prediction = false;
};

inline std::vector<Rational> basic_prediction(std::span<const Rational> duty) {
  std::vector<Rational> out;
  for (std::size_t i = 0; i < duty.size(); ++i) {
    Rational c = duty[i];
    for (std::size_t j = 0; j < duty.size(); ++j)
      if (j != i) c *= Rational(1) - duty[j];
    out.push_back(c);
  }
  return out;
}

inline BaselineReport baseline_throughput(const SequenceSet& set, const BaselineOptions& opts = {}) {
  const auto L = set.period();
  const auto M = set.size();
  const auto space = shift_space_size(L, M);
  if (space > static_cast<long double>(opts.budget)) throw BudgetExceeded("baseline sweep", space, opts.budget);
  const auto count = static_cast<std::uint64_t>(space);

  std::vector<UserConfig> base;
  for (std::size_t i = 0; i < M; ++i) base.push_back({set[i], {set[i].weight(), 0, 1}, 0});

  struct Part {
    std::vector<std::uint64_t> sum, worst, best;
    std::uint64_t total_worst = ~std::uint64_t{0}, total_best = 0;
  };
  const std::uint64_t chunk = 1024;
  std::vector<Part> parts((count + chunk - 1) / chunk);
  parallel_chunks(count, chunk, opts.jobs, [&](std::uint64_t c, std::uint64_t begin, std::uint64_t end) {
    auto users = base;
    auto& part = parts[c];
    part.sum.assign(M, 0);
    part.worst.assign(M, ~std::uint64_t{0});
    part.best.assign(M, 0);
    for (auto index = begin; index < end; ++index) {
      const auto taus = shift_vector_at(index, L, M);
      for (std::size_t u = 0; u < M; ++u) users[u].shift = taus[u];
      const auto received = basic_receive(simulate_trace(users, L), users).received;
      std::uint64_t total = 0;
      for (std::size_t u = 0; u < M; ++u) {
        part.sum[u] += received[u];
        part.worst[u] = std::min<std::uint64_t>(part.worst[u], received[u]);
        part.best[u] = std::max<std::uint64_t>(part.best[u], received[u]);
        total += received[u];
      }
      part.total_worst = std::min(part.total_worst, total);
      part.total_best = std::max(part.total_best, total);
    }
  });

  std::vector<std::uint64_t> sum(M, 0), worst(M, ~std::uint64_t{0}), best(M, 0);
  std::uint64_t total_worst = ~std::uint64_t{0}, total_best = 0;
  for (const auto& p : parts) {
    for (std::size_t u = 0; u < M; ++u) {
      sum[u] += p.sum[u];
      worst[u] = std::min(worst[u], p.worst[u]);
      best[u] = std::max(best[u], p.best[u]);
    }
    total_worst = std::min(total_worst, p.total_worst);
    total_best = std::max(total_best, p.total_best);
  }

  BaselineReport report;
  report.period = L;
  report.runs = count;
  const auto slots = static_cast<std::int64_t>(L);
  report.shift_invariant = true;
  for (std::size_t u = 0; u < M; ++u) {
    // sum / (count * L) without overflowing the product
    Rational mean(static_cast<std::int64_t>(sum[u]), static_cast<std::int64_t>(count));
    mean /= slots;
    report.mean.push_back(mean);
    report.worst.emplace_back(static_cast<std::int64_t>(worst[u]), slots);
    report.best.emplace_back(static_cast<std::int64_t>(best[u]), slots);
    report.aggregate_mean += mean;
    if (worst[u] != best[u]) report.shift_invariant = false;
  }
  report.aggregate_worst = Rational(static_cast<std::int64_t>(total_worst), slots);
  report.aggregate_best = Rational(static_cast<std::int64_t>(total_best), slots);
  const auto duty = set.duty_factors();
  report.predicted = basic_prediction(duty);
  report.matches_prediction = report.shift_invariant && report.mean == report.predicted;
  return report;
}

// ---------------------------------------------------------------------------
// Capacity region data

using CapacityPoint = std::vector<Rational>;

struct RegionPoint {
  Rational parameter{0};  ///< p_1 on the M = 2 grid, vertex index otherwise
  CapacityPoint sic;
  CapacityPoint basic;    ///< empty for M >= 3
};

/// M = 2: for p_1 = k / resolution, the SIC boundary point (p_1, 1 - p_1)
/// paired with the basic-model point p_i * (1 - p_j).  M >= 3: the simplex
/// vertices of the SIC boundary only.
inline std::vector<RegionPoint> region_boundary(std::size_t users, std::size_t resolution) {
  if (users == 0) throw ConfigError("need at least one user");
  std::vector<RegionPoint> points;
  if (users != 2) {
    for (std::size_t i = 0; i < users; ++i) {
      RegionPoint point;
      point.parameter = Rational(static_cast<std::int64_t>(i + 1));
      point.sic.assign(users, Rational(0));
      point.sic[i] = Rational(1);
      points.push_back(std::move(point));
    }
    return points;
  }
  if (resolution == 0) throw ConfigError("resolution must be at least 1");
  const auto res = static_cast<std::int64_t>(resolution);
  for (std::int64_t k = 0; k <= res; ++k) {
    const Rational p1(k, res);
    const Rational p2 = Rational(1) - p1;
    const std::vector<Rational> duty{p1, p2};
    points.push_back({p1, {p1, p2}, basic_prediction(duty)});
  }
  return points;
}

}  // namespace collide_sic
