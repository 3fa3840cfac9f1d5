// File formats: sequence sets, plan sidecars, report JSON, CSV and trace dumps.
//
// User indices are 1-based in every external format; rationals are "p/q"
// strings.  Emission is deterministic so reruns are byte-identical.
#pragma once

#include <cstdio>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "collide_sic/channel.hpp"
#include "collide_sic/correlation.hpp"
#include "collide_sic/error.hpp"
#include "collide_sic/plan.hpp"
#include "collide_sic/rational.hpp"
#include "collide_sic/sequence.hpp"
#include "collide_sic/sic.hpp"
#include "collide_sic/verify.hpp"

namespace collide_sic {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json rationals_json(std::span<const Rational> values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(to_string(v));
  return out;
}

inline Json one_based(std::span<const std::size_t> indices) {
  Json out = Json::array();
  for (auto i : indices) out.push_back(i + 1);
  return out;
}

inline Json mark_bits(MarkMask marks, std::size_t count) {
  Json out = Json::array();
  for (std::size_t j = 0; j < count; ++j) out.push_back((marks >> j) & 1U);
  return out;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string decimal(const Rational& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", to_double(r));
  return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Sequence files: {"period": L, "sequences": [[0,1,...], ...]}

inline SequenceSet parse_sequence_json(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("sequence file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("sequence file must be a JSON object");
  for (const auto& item : doc.items())
    if (item.key() != "period" && item.key() != "sequences")
      throw ConfigError("sequence file has unknown key \"" + item.key() + "\"");
  if (!doc.contains("period") || !doc["period"].is_number_unsigned() || doc["period"].get<std::uint64_t>() == 0)
    throw ConfigError("\"period\" must be a positive integer");
  const auto L = doc["period"].get<std::size_t>();
  if (!doc.contains("sequences") || !doc["sequences"].is_array() || doc["sequences"].empty())
    throw ConfigError("\"sequences\" must be a non-empty array");

  std::vector<BinarySequence> seqs;
  std::size_t row = 0;
  for (const auto& r : doc["sequences"]) {
    ++row;
    if (!r.is_array() || r.size() != L)
      throw ConfigError("sequence " + std::to_string(row) + " must hold exactly " + std::to_string(L) + " entries");
    std::vector<std::uint8_t> bits;
    bits.reserve(L);
    for (const auto& v : r) {
      if (!v.is_number_integer() || (v.get<std::int64_t>() != 0 && v.get<std::int64_t>() != 1))
        throw ConfigError("sequence " + std::to_string(row) + " has an entry other than 0 or 1");
      bits.push_back(static_cast<std::uint8_t>(v.get<std::int64_t>()));
    }
    seqs.emplace_back(bits);
  }
  return SequenceSet(std::move(seqs));
}

inline SequenceSet read_sequence_file(const std::string& path) { return parse_sequence_json(detail::read_text(path)); }

/// One row per line, so files stay readable and diffable.
inline std::string sequence_json(const SequenceSet& set) {
  std::ostringstream out;
  out << "{\n  \"period\": " << set.period() << ",\n  \"sequences\": [\n";
  for (std::size_t i = 0; i < set.size(); ++i) {
    out << "    [";
    for (std::size_t n = 0; n < set.period(); ++n) out << (n ? "," : "") << int{set[i][n]};
    out << "]" << (i + 1 < set.size() ? "," : "") << "\n";
  }
  out << "  ]\n}\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Plan sidecar: {"permutation": [...], "duty_factors": ["p/q", ...], "period": L}

inline Json plan_json(const DutyFactorPlan& plan) {
  Json out;
  out["permutation"] = detail::one_based(plan.permutation);
  out["duty_factors"] = detail::rationals_json(plan.duty_factors);
  out["period"] = plan.period;
  return out;
}

inline DutyFactorPlan parse_plan_json(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("plan file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("permutation") || !doc.contains("duty_factors") || !doc.contains("period"))
    throw ConfigError("plan file needs \"permutation\", \"duty_factors\" and \"period\"");
  DutyFactorPlan plan;
  for (const auto& v : doc["permutation"]) {
    if (!v.is_number_unsigned() || v.get<std::size_t>() == 0) throw ConfigError("permutation entries are 1-based");
    plan.permutation.push_back(v.get<std::size_t>() - 1);
  }
  for (const auto& v : doc["duty_factors"]) {
    if (!v.is_string()) throw ConfigError("duty factors must be \"p/q\" strings");
    plan.duty_factors.push_back(parse_rational(v.get<std::string>()));
  }
  if (!doc["period"].is_number_unsigned()) throw ConfigError("\"period\" must be a positive integer");
  plan.period = doc["period"].get<std::uint64_t>();
  detail::require_permutation(plan.permutation, plan.duty_factors.size());
  return plan;
}

// ---------------------------------------------------------------------------
// Reports

inline Json si_violation_json(const SiViolation& v) {
  Json out;
  out["subset"] = detail::one_based(v.subset);
  out["marks"] = detail::mark_bits(v.marks, v.subset.size());
  out["reference_shifts"] = v.reference_shifts;
  out["reference_value"] = v.reference_value;
  out["witness_shifts"] = v.witness_shifts;
  out["witness_value"] = v.witness_value;
  return out;
}

inline Json si_result_json(const SiCheckResult& r) {
  Json out;
  out["holds"] = r.holds;
  out["exhaustive"] = r.exhaustive;
  out["violation"] = r.violation ? si_violation_json(*r.violation) : Json(nullptr);
  return out;
}

inline Json lemma3_json(const Lemma3Report& r, std::size_t users) {
  Json out;
  out["condition_i_witness"] = r.condition_i_witness ? detail::mark_bits(*r.condition_i_witness, users) : Json(nullptr);
  out["witness_value"] = r.witness_value ? Json(*r.witness_value) : Json(nullptr);
  out["condition_ii_holds"] = r.condition_ii_holds;
  out["condition_ii_violation"] =
      r.condition_ii_violation ? si_violation_json(*r.condition_ii_violation) : Json(nullptr);
  out["equivalent"] = r.equivalent;
  return out;
}

inline Json sic_report_json(const SicReport& r) {
  Json out;
  out["success"] = r.success;
  out["shifts"] = r.shifts;
  out["decode_order"] = detail::one_based(r.decode_order());
  Json iterations = Json::array();
  for (const auto& it : r.iterations) {
    Json blocks = Json::array();
    for (const auto& b : it.blocks) blocks.push_back({{"block", b.block}, {"positions", b.positions}});
    iterations.push_back({{"iteration", it.iteration}, {"user", it.user + 1}, {"blocks", std::move(blocks)}});
  }
  out["iterations"] = std::move(iterations);
  Json users = Json::array();
  for (std::size_t u = 0; u < r.decoded_blocks.size(); ++u) {
    Json user;
    user["user"] = u + 1;
    user["decoded_blocks"] = r.decoded_blocks[u];
    user["total_blocks"] = r.total_blocks[u];
    user["decode_iteration"] = r.decode_iteration[u] ? Json(*r.decode_iteration[u]) : Json(nullptr);
    user["t_count"] = r.t_counts[u];
    user["decode_delay"] = r.decode_delays[u] ? Json(*r.decode_delays[u]) : Json(nullptr);
    user["decoded_per_period"] = to_string(r.decoded_per_period[u]);
    users.push_back(std::move(user));
  }
  out["users"] = std::move(users);
  return out;
}

inline Json shift_outcome_json(const ShiftOutcome& o) {
  Json out;
  out["shifts"] = o.shifts;
  out["success"] = o.success;
  out["rates_exact"] = o.rates_exact;
  out["decode_order"] = detail::one_based(o.order);
  out["t_counts"] = o.t_counts;
  Json delays = Json::array();
  for (const auto& d : o.delays) delays.push_back(d ? Json(*d) : Json(nullptr));
  out["decode_delays"] = std::move(delays);
  out["decoded_per_period"] = detail::rationals_json(o.decoded_per_period);
  return out;
}

inline Json coding_json(std::span<const CodingParams> coding) {
  Json out = Json::array();
  for (const auto& c : coding) out.push_back({{"n", c.n}, {"m", c.m}});
  return out;
}

inline Json verification_json(const VerificationReport& r) {
  Json out;
  out["verdict"] = r.verdict;
  out["rates"] = detail::rationals_json(r.rates);
  out["plan"] = r.plan ? plan_json(*r.plan) : Json(nullptr);
  Json seqs = Json::array();
  for (const auto& s : r.sequences) seqs.push_back(s.to_string());
  out["sequences"] = std::move(seqs);
  out["coding"] = coding_json(r.coding);
  out["period"] = r.period;
  out["periods"] = r.periods;
  out["exhaustive"] = r.exhaustive;
  out["runs"] = r.runs;
  out["achieved"] = r.achieved;
  out["counterexample"] = r.counterexample ? shift_outcome_json(*r.counterexample) : Json(nullptr);
  out["first_iteration"] = {
      {"constant", r.first_iteration_constant},
      {"user", r.first_iteration_user ? Json(*r.first_iteration_user + 1) : Json(nullptr)},
      {"count", r.first_iteration_count},
      {"matches_rate", r.first_iteration_matches_rate}};
  out["iteration_order_unique"] = r.iteration_order_unique;
  out["iteration_order"] = detail::one_based(r.iteration_order);
  out["one_user_per_iteration"] = r.one_user_per_iteration;
  out["delay_bound_holds"] = r.delay_bound_holds;
  out["delay_violation"] = r.delay_violation ? shift_outcome_json(*r.delay_violation) : Json(nullptr);
  out["max_delay"] = r.max_delay;
  out["rate_ceiling_holds"] = r.rate_ceiling_holds;
  if (!r.outcomes.empty()) {
    Json outcomes = Json::array();
    for (const auto& o : r.outcomes) outcomes.push_back(shift_outcome_json(o));
    out["outcomes"] = std::move(outcomes);
  }
  return out;
}

inline Json necessity_json(const NecessityReport& r) {
  Json out;
  out["witness"] = r.witness ? Json(*r.witness) : Json(nullptr);
  out["duty_condition_holds"] = r.duty_condition_holds;
  out["matching_plan"] = r.matching_plan ? plan_json(*r.matching_plan) : Json(nullptr);
  out["si_holds"] = r.si_holds;
  out["si_violation"] = r.si_violation ? si_violation_json(*r.si_violation) : Json(nullptr);
  out["weight_deficit"] = r.weight_deficit;
  out["sweep"] = r.sweep ? verification_json(*r.sweep) : Json(nullptr);
  return out;
}

inline Json min_period_json(const MinPeriodResult& r) {
  Json out;
  out["minimum"] = r.minimum ? Json(*r.minimum) : Json(nullptr);
  out["pruned"] = r.pruned;
  out["estimate"] = static_cast<double>(r.estimate);
  Json periods = Json::array();
  for (const auto& p : r.periods) {
    Json item;
    item["period"] = p.period;
    item["rate_integral"] = p.rate_integral;
    item["weight_vectors"] = p.weight_vectors;
    item["tuples"] = p.tuples;
    item["achievers"] = p.achievers;
    if (p.example) {
      Json seqs = Json::array();
      for (const auto& s : *p.example) seqs.push_back(s.to_string());
      item["example"] = std::move(seqs);
    } else {
      item["example"] = nullptr;
    }
    periods.push_back(std::move(item));
  }
  out["periods"] = std::move(periods);
  return out;
}

inline Json baseline_json(const BaselineReport& r) {
  Json out;
  out["period"] = r.period;
  out["runs"] = r.runs;
  out["mean"] = detail::rationals_json(r.mean);
  out["worst"] = detail::rationals_json(r.worst);
  out["best"] = detail::rationals_json(r.best);
  out["aggregate_mean"] = to_string(r.aggregate_mean);
  out["aggregate_worst"] = to_string(r.aggregate_worst);
  out["aggregate_best"] = to_string(r.aggregate_best);
  out["shift_invariant"] = r.shift_invariant;
  out["predicted"] = detail::rationals_json(r.predicted);
  out["matches_prediction"] = r.matches_prediction;
  return out;
}

inline Json region_json(const std::vector<RegionPoint>& points) {
  Json out = Json::array();
  for (const auto& p : points) {
    Json item;
    item["parameter"] = to_string(p.parameter);
    item["sic"] = detail::rationals_json(p.sic);
    item["basic"] = p.basic.empty() ? Json(nullptr) : detail::rationals_json(p.basic);
    out.push_back(std::move(item));
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV (decimals, for plotting only)

inline std::string region_csv(const std::vector<RegionPoint>& points, std::size_t users) {
  std::ostringstream out;
  if (users == 2) {
    out << "p1,sic_C1,sic_C2,basic_C1,basic_C2\n";
    for (const auto& p : points)
      out << detail::decimal(p.parameter) << ',' << detail::decimal(p.sic[0]) << ',' << detail::decimal(p.sic[1]) << ','
          << detail::decimal(p.basic[0]) << ',' << detail::decimal(p.basic[1]) << '\n';
    return out.str();
  }
  out << "vertex";
  for (std::size_t i = 1; i <= users; ++i) out << ",C" << i;
  out << '\n';
  for (const auto& p : points) {
    out << to_string(p.parameter);
    for (const auto& c : p.sic) out << ',' << detail::decimal(c);
    out << '\n';
  }
  return out.str();
}

inline std::string baseline_csv(const BaselineReport& r, std::span<const Rational> duty) {
  std::ostringstream out;
  out << "user,duty,mean,worst,best,predicted\n";
  for (std::size_t u = 0; u < r.mean.size(); ++u)
    out << u + 1 << ',' << detail::decimal(duty[u]) << ',' << detail::decimal(r.mean[u]) << ','
        << detail::decimal(r.worst[u]) << ',' << detail::decimal(r.best[u]) << ',' << detail::decimal(r.predicted[u])
        << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Trace dump: one JSON object per slot

inline void write_trace_jsonl(std::ostream& out, const ChannelTrace& trace, bool with_truth) {
  for (std::size_t t = 0; t < trace.slots.size(); ++t) {
    const auto& slot = trace.slots[t];
    Json line;
    line["t"] = t;
    line["kind"] = to_string(slot.kind);
    if (with_truth) {
      Json truth = Json::array();
      for (const auto& c : slot.truth) truth.push_back({c.user + 1, c.block, c.position});
      line["truth"] = std::move(truth);
    }
    out << line.dump() << '\n';
  }
}

}  // namespace collide_sic
