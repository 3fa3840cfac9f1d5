// collide-sic: command-line front end.
//
// Exit codes: 0 ok / verdict true, 1 verdict false, 2 usage or configuration
// error, 3 work budget refused.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "collide_sic.hpp"

namespace cs = collide_sic;

namespace {

struct Global {
  std::optional<std::uint64_t> budget;
  std::size_t jobs = 0;
  std::string output;

  std::uint64_t work_budget() const {
    if (budget) return *budget;
    if (const char* env = std::getenv("COLLIDE_SIC_BUDGET")) {
      std::uint64_t value = 0;
      const std::string_view text(env);
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc{} || ptr != text.data() + text.size() || value == 0)
        throw cs::ConfigError("COLLIDE_SIC_BUDGET must be a positive integer, got '" + std::string(text) + "'");
      return value;
    }
    return cs::kDefaultWorkBudget;
  }
};

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cs::ConfigError("cannot write " + path);
  out << text;
}

std::string dump(const cs::Json& j) { return j.dump(2) + "\n"; }

std::vector<std::size_t> parse_index_list(const std::string& text, const char* what) {
  std::vector<std::size_t> out;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size())
      throw cs::ConfigError(std::string("malformed ") + what + " '" + text + "'");
    out.push_back(value);
  }
  return out;
}

cs::RateVector rates_for(const std::string& text, std::size_t users) {
  auto rates = cs::parse_rational_list(text);
  if (users != 0 && rates.size() != users)
    throw cs::ConfigError("expected " + std::to_string(users) + " rates, got " + std::to_string(rates.size()));
  return rates;
}

std::string join_one_based(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i] + 1);
  return s;
}

cs::FillPolicy fill_of(const std::string& fill) {
  return fill == "random" ? cs::FillPolicy::seeded_random : cs::FillPolicy::canonical_left;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shift-invariant protocol sequences and zero-error SIC verification"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--budget", g.budget, "Work budget (overrides COLLIDE_SIC_BUDGET)")->check(CLI::PositiveNumber);
  app.add_option("--jobs", g.jobs, "Worker threads for sweeps (0 = all cores)");
  app.add_option("-o,--output", g.output, "Write the report here instead of stdout");

  // construct
  std::string rates_text, perm_text, fill = "canonical", plan_out;
  std::uint64_t seed = 0;
  auto* construct = app.add_subcommand("construct", "Plan duty factors and build a minimum-period SI set");
  construct->add_option("--rates", rates_text, "Target rates p/q,...")->required();
  construct->add_option("--perm", perm_text, "Decode order q_1,...,q_M (1-based); default: minimum period");
  construct->add_option("--fill", fill, "G-array fill")->check(CLI::IsMember({"canonical", "random"}));
  construct->add_option("--seed", seed, "Seed for --fill random");
  construct->add_option("--plan-out", plan_out, "Write the plan sidecar here");

  // check
  std::string file;
  std::uint64_t samples = 0;
  auto* check = app.add_subcommand("check", "Report SI/TI, duty factors and the counting self-tests");
  check->add_option("file", file, "Sequence file")->required();
  check->add_option("--samples", samples, "Sample shift tuples when over budget");
  check->add_option("--seed", seed, "Sampling seed");

  // simulate
  std::string shifts_text, mode = "genie", trace_out;
  bool random_shifts = false, concrete = false, genie_dump = false;
  std::size_t periods = 0, packet_size = 16;
  auto* simulate = app.add_subcommand("simulate", "Run one channel trace through the SIC receiver");
  simulate->add_option("file", file, "Sequence file")->required();
  simulate->add_option("--rates", rates_text, "Target rates p/q,...")->required();
  auto* shifts_opt = simulate->add_option("--shifts", shifts_text, "Relative shifts t1,...,tM");
  auto* random_opt = simulate->add_flag("--random-shifts", random_shifts, "Draw shifts from --seed");
  shifts_opt->excludes(random_opt);
  simulate->add_option("--seed", seed, "Seed for --random-shifts and payloads");
  simulate->add_option("--mode", mode, "Receiver mode")->check(CLI::IsMember({"genie", "blind"}));
  simulate->add_option("--periods", periods, "Trace length W in periods (default M + 2)");
  simulate->add_flag("--concrete", concrete, "Carry real payloads through the erasure code");
  simulate->add_option("--packet-size", packet_size, "Bytes per packet in --concrete mode")->check(CLI::PositiveNumber);
  simulate->add_option("--trace-out", trace_out, "Write the slot trace as JSON lines");
  simulate->add_flag("--genie-dump", genie_dump, "Include ground-truth contributors in the trace dump");

  // sweep
  bool keep = false;
  auto* sweep = app.add_subcommand("sweep", "Genie SIC over every shift vector");
  sweep->add_option("file", file, "Sequence file")->required();
  sweep->add_option("--rates", rates_text, "Target rates p/q,...")->required();
  sweep->add_option("--periods", periods, "Trace length W in periods (default M + 2)");
  sweep->add_option("--samples", samples, "Stratified sample size when L^M exceeds the budget");
  sweep->add_option("--seed", seed, "Sampling seed");
  sweep->add_flag("--keep-outcomes", keep, "List every shift vector's outcome");

  // achieve
  auto* achieve = app.add_subcommand("achieve", "Plan, construct and sweep in one go");
  achieve->add_option("--rates", rates_text, "Target rates p/q,...")->required();
  achieve->add_option("--fill", fill, "G-array fill")->check(CLI::IsMember({"canonical", "random"}));
  achieve->add_option("--seed", seed, "Seed for --fill random and sampling");
  achieve->add_option("--periods", periods, "Trace length W in periods (default M + 2)");
  achieve->add_option("--samples", samples, "Stratified sample size when L^M exceeds the budget");

  // falsify
  auto* falsify = app.add_subcommand("falsify", "Look for a shift vector that defeats the target rates");
  falsify->add_option("file", file, "Sequence file")->required();
  falsify->add_option("--rates", rates_text, "Target rates p/q,...")->required();
  falsify->add_option("--periods", periods, "Trace length W in periods (default M + 2)");

  // search-min-period
  std::size_t lmax = 6;
  bool no_prune = false;
  auto* search = app.add_subcommand("search-min-period", "Smallest period any sequence tuple achieves the rates at");
  search->add_option("--rates", rates_text, "Target rates p/q,...")->required();
  search->add_option("--lmax", lmax, "Largest period to try")->check(CLI::PositiveNumber);
  search->add_flag("--no-prune", no_prune, "Enumerate every weight vector, not just planner duty factors");

  // region
  std::size_t users = 2, resolution = 100;
  std::string format = "json";
  auto* region = app.add_subcommand("region", "Capacity-region boundary data");
  region->add_option("--m", users, "Number of users")->check(CLI::PositiveNumber);
  region->add_option("--resolution", resolution, "Grid steps on p_1 (M = 2)")->check(CLI::PositiveNumber);
  region->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  // baseline
  auto* baseline = app.add_subcommand("baseline", "Throughput without SIC over every shift vector");
  baseline->add_option("file", file, "Sequence file")->required();
  baseline->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const auto budget = g.work_budget();
    cs::SweepOptions sweep_opts;
    sweep_opts.budget = budget;
    sweep_opts.samples = samples;
    sweep_opts.seed = seed;
    sweep_opts.periods = periods;
    sweep_opts.jobs = g.jobs;
    sweep_opts.keep_outcomes = keep;

    if (*construct) {
      const auto rates = rates_for(rates_text, 0);
      cs::DutyFactorPlan plan;
      if (perm_text.empty()) {
        plan = cs::enumerate_plans(rates).front();
      } else {
        auto perm = parse_index_list(perm_text, "permutation");
        for (auto& q : perm) {
          if (q == 0) throw cs::ConfigError("permutation entries are 1-based");
          --q;
        }
        plan = cs::plan_duty_factors(rates, perm);
      }
      const auto set = cs::build_si_set(plan.duty_factors, fill_of(fill), seed, cs::BuildOptions{true, budget});
      emit(cs::sequence_json(set), g.output);
      if (!plan_out.empty()) emit(dump(cs::plan_json(plan)), plan_out);
      auto& log = g.output.empty() ? std::cerr : std::cout;
      log << "permutation (" << join_one_based(plan.permutation) << ") period " << plan.period << "\n";
      return 0;
    }

    if (*check) {
      const auto set = cs::read_sequence_file(file);
      const cs::SiCheckOptions si_opts{budget, samples, seed};
      const auto si = cs::check_si_set(set, si_opts);
      const auto ti = cs::check_ti_set(set, si_opts);
      cs::Json out;
      out["period"] = set.period();
      out["users"] = set.size();
      cs::Json weights = cs::Json::array();
      for (const auto& s : set) weights.push_back(s.weight());
      out["weights"] = std::move(weights);
      out["duty_factors"] = cs::detail::rationals_json(set.duty_factors());
      out["si"] = cs::si_result_json(si);
      out["ti"] = cs::si_result_json(ti);

      // Shift-sum identity on every subset and mark vector, if the brute force fits the budget.
      const auto M = set.size();
      long double lemma1_work = 0;
      for (std::size_t k = 1; k <= M && M <= 20; ++k)
        lemma1_work += cs::detail::power(2 * set.period(), k) * cs::detail::power(2, M);
      cs::Json lemma1;
      if (M <= 20 && lemma1_work <= static_cast<long double>(budget)) {
        std::uint64_t checked = 0;
        bool holds = true;
        for (cs::MarkMask members = 1; members < (cs::MarkMask{1} << M); ++members) {
          std::vector<std::size_t> subset;
          for (std::size_t u = 0; u < M; ++u)
            if ((members >> u) & 1U) subset.push_back(u);
          for (cs::MarkMask b = 0; b < (cs::MarkMask{1} << subset.size()); ++b, ++checked)
            holds = cs::check_lemma1(set, subset, b, budget) && holds;
        }
        lemma1 = {{"checked", checked}, {"holds", holds}};
      } else {
        lemma1 = {{"checked", 0}, {"holds", nullptr}, {"skipped", "over budget"}};
      }
      out["lemma1"] = std::move(lemma1);
      try {
        out["lemma3"] = cs::lemma3_json(cs::check_lemma3(set, budget), M);
      } catch (const cs::BudgetExceeded& e) {
        out["lemma3"] = {{"skipped", e.what()}};
      }
      emit(dump(out), g.output);
      return si.holds ? 0 : 1;
    }

    if (*simulate) {
      const auto set = cs::read_sequence_file(file);
      const auto rates = rates_for(rates_text, set.size());
      const auto coding = cs::derive_coding(set, rates, concrete ? packet_size : 1);
      auto users_cfg = cs::detail::make_users(set, coding);
      std::vector<std::size_t> taus;
      if (random_shifts) {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, set.period() - 1);
        for (std::size_t u = 0; u < set.size(); ++u) taus.push_back(pick(rng));
      } else if (!shifts_text.empty()) {
        taus = parse_index_list(shifts_text, "shift list");
      } else {
        throw cs::ConfigError("simulate needs --shifts or --random-shifts");
      }
      if (taus.size() != set.size())
        throw cs::ConfigError("expected " + std::to_string(set.size()) + " shifts, got " + std::to_string(taus.size()));
      for (std::size_t u = 0; u < set.size(); ++u) users_cfg[u].shift = taus[u];
      cs::detail::validate_users(users_cfg);

      const auto W = periods == 0 ? set.size() + 2 : periods;
      const auto trace = cs::simulate_trace(users_cfg, W * set.period(), cs::TraceOptions{concrete, seed});
      if (!trace_out.empty()) {
        std::ofstream dump_file(trace_out, std::ios::binary);
        if (!dump_file) throw cs::ConfigError("cannot write " + trace_out);
        cs::write_trace_jsonl(dump_file, trace, genie_dump);
      }

      cs::Json out;
      out["mode"] = mode;
      out["periods"] = W;
      out["concrete"] = concrete;
      try {
        const auto report =
            cs::sic_receive(trace, users_cfg, mode == "blind" ? cs::SicMode::blind : cs::SicMode::genie, budget);
        out["report"] = cs::sic_report_json(report);
        if (concrete) out["payload_match"] = report.decoded_sources == trace.sources;
        emit(dump(out), g.output);
        return report.success ? 0 : 1;
      } catch (const cs::AmbiguousIdentification& e) {
        out["report"] = nullptr;
        out["ambiguous"] = e.candidates();
        emit(dump(out), g.output);
        return 1;
      }
    }

    if (*sweep) {
      const auto set = cs::read_sequence_file(file);
      const auto rates = rates_for(rates_text, set.size());
      const auto report = cs::sweep_all_shifts(set, cs::derive_coding(set, rates), rates, sweep_opts);
      emit(dump(cs::verification_json(report)), g.output);
      return report.verdict ? 0 : 1;
    }

    if (*achieve) {
      cs::AchieveOptions opts;
      opts.sweep = sweep_opts;
      opts.fill = fill_of(fill);
      opts.fill_seed = seed;
      const auto report = cs::achievability_check(rates_for(rates_text, 0), opts);
      emit(dump(cs::verification_json(report)), g.output);
      return report.verdict ? 0 : 1;
    }

    if (*falsify) {
      const auto set = cs::read_sequence_file(file);
      const auto rates = rates_for(rates_text, set.size());
      const auto report = cs::necessity_falsifier(set, rates, sweep_opts);
      emit(dump(cs::necessity_json(report)), g.output);
      return report.witness ? 1 : 0;
    }

    if (*search) {
      cs::MinPeriodOptions opts{lmax, !no_prune, budget, g.jobs};
      const auto result = cs::min_period_search(rates_for(rates_text, 0), opts);
      std::cerr << "search space: " << static_cast<double>(result.estimate) << " SIC runs\n";
      emit(dump(cs::min_period_json(result)), g.output);
      return result.minimum ? 0 : 1;
    }

    if (*region) {
      const auto points = cs::region_boundary(users, resolution);
      emit(format == "csv" ? cs::region_csv(points, users) : dump(cs::region_json(points)), g.output);
      return 0;
    }

    if (*baseline) {
      const auto set = cs::read_sequence_file(file);
      const auto report = cs::baseline_throughput(set, cs::BaselineOptions{budget, g.jobs});
      emit(format == "csv" ? cs::baseline_csv(report, set.duty_factors()) : dump(cs::baseline_json(report)), g.output);
      return 0;
    }
  } catch (const cs::BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
