// Plans rates (1/6, 1/3, 1/2), builds the SI set, pushes real payloads through
// the channel at a few shift vectors and prints what the SIC receiver did.
#include <iostream>
#include <vector>

#include "collide_sic.hpp"

using namespace collide_sic;

int main() {
  const RateVector rates{Rational(1, 6), Rational(1, 3), Rational(1, 2)};
  const auto plan = enumerate_plans(rates).front();
  const auto set = build_si_set(plan.duty_factors);
  const auto coding = derive_coding(set, rates, 8);

  std::cout << "period " << set.period() << "\n";
  for (std::size_t i = 0; i < set.size(); ++i)
    std::cout << "  user " << i + 1 << "  p=" << to_string(plan.duty_factors[i]) << "  " << set[i].to_string()
              << "  (n,m)=(" << coding[i].n << "," << coding[i].m << ")\n";

  for (const ShiftVector& taus : {ShiftVector{0, 0, 0}, ShiftVector{2, 5, 1}, ShiftVector{4, 3, 3}}) {
    std::vector<UserConfig> users;
    for (std::size_t i = 0; i < set.size(); ++i) users.push_back({set[i], coding[i], taus[i]});
    const auto trace = simulate_trace(users, 5 * set.period(), TraceOptions{true, 42});
    const auto report = sic_receive(trace, users);

    std::cout << "\nshifts (" << taus[0] << "," << taus[1] << "," << taus[2] << ")  kinds:";
    for (std::size_t t = 0; t < set.period(); ++t) std::cout << ' ' << to_string(trace.slots[t].kind);
    std::cout << "\n";
    std::size_t last = 0;
    for (const auto& it : report.iterations) {
      if (it.iteration == last) continue;
      last = it.iteration;
      std::cout << "  iteration " << it.iteration << ": user " << it.user + 1 << " decodes "
                << report.t_counts[it.user] << " clean packet(s) per block, delay " << *report.decode_delays[it.user]
                << " slots\n";
    }
    std::cout << "  payloads recovered: " << (report.decoded_sources == trace.sources ? "all" : "NOT all") << "\n";
  }
}
