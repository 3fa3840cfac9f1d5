#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "collide_sic/channel.hpp"
#include "collide_sic/construction.hpp"
#include "collide_sic/correlation.hpp"
#include "collide_sic/identify.hpp"
#include "collide_sic/plan.hpp"
#include "collide_sic/sic.hpp"

using namespace collide_sic;

namespace {

std::vector<UserConfig> three_users(ShiftVector taus = {0, 0, 0}, std::size_t packet_size = 1) {
  return {{BinarySequence::from_string("111111"), {6, 1, packet_size}, taus[0]},
          {BinarySequence::from_string("110110"), {4, 2, packet_size}, taus[1]},
          {BinarySequence::from_string("101010"), {3, 3, packet_size}, taus[2]}};
}

std::vector<SlotKind> kinds_of(const std::string& pattern) {
  std::vector<SlotKind> out;
  for (char c : pattern) out.push_back(c == 'I' ? SlotKind::idle : c == 'S' ? SlotKind::success : SlotKind::collision);
  return out;
}

std::vector<UserConfig> random_users(std::mt19937_64& rng, std::size_t M, std::size_t L) {
  std::vector<UserConfig> users;
  for (std::size_t u = 0; u < M; ++u) {
    std::vector<std::uint8_t> bits(L);
    for (auto& b : bits) b = rng() & 1U;
    BinarySequence s(bits);
    const auto w = s.weight();
    users.push_back({s, {w, w == 0 ? 0 : rng() % (w + 1), 1}, rng() % L});
  }
  return users;
}

}  // namespace

TEST(SimulateTrace, ThreeUserKinds) {
  const auto users = three_users();
  const auto trace = simulate_trace(users, 6);
  EXPECT_EQ(trace.kinds(), kinds_of("CCCCCS"));
  ASSERT_EQ(trace.slots[5].truth.size(), 1u);
  EXPECT_EQ(trace.slots[5].truth[0], (Contribution{0, 0, 5}));
}

TEST(SimulateTrace, AllOnesCases) {
  std::vector<UserConfig> one{{BinarySequence::from_string("1111"), {4, 4, 1}, 2}};
  for (auto k : simulate_trace(one, 8).kinds()) EXPECT_EQ(k, SlotKind::success);
  std::vector<UserConfig> two{{BinarySequence::from_string("111"), {3, 1, 1}, 0},
                              {BinarySequence::from_string("111"), {3, 1, 1}, 1}};
  for (auto k : simulate_trace(two, 9).kinds()) EXPECT_EQ(k, SlotKind::collision);
}

TEST(SimulateTrace, ConfigurationErrors) {
  std::vector<UserConfig> mixed{{BinarySequence::from_string("10"), {1, 1, 1}, 0},
                                {BinarySequence::from_string("100"), {1, 1, 1}, 0}};
  EXPECT_THROW(simulate_trace(mixed, 6), ConfigError);
  EXPECT_THROW(simulate_trace(three_users(), 7), ConfigError);
  EXPECT_THROW(simulate_trace(three_users(), 0), ConfigError);
  EXPECT_THROW(simulate_trace(three_users({0, 6, 0}), 6), ConfigError);
  auto wrong_n = three_users();
  wrong_n[1].coding.n = 5;
  EXPECT_THROW(simulate_trace(wrong_n, 6), ConfigError);
  auto wrong_m = three_users();
  wrong_m[2].coding.m = 4;
  EXPECT_THROW(simulate_trace(wrong_m, 6), ParameterError);
}

TEST(SimulateTrace, BlocksFollowLocalPeriods) {
  // every user's transmissions, in its own time order, are numbered (jn + pos)
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t L = 2 + rng() % 7;
    auto users = random_users(rng, 3, L);
    const std::size_t W = 1 + rng() % 4;
    const auto trace = simulate_trace(users, W * L);
    for (std::size_t u = 0; u < users.size(); ++u) {
      std::size_t k = 0;
      for (std::size_t local = 0; local < W * L; ++local) {
        const auto t = (local + users[u].shift) % (W * L);
        const bool sends = users[u].sequence[local % L];
        std::size_t found = 0;
        for (const auto& c : trace.slots[t].truth) {
          if (c.user != u) continue;
          ++found;
          EXPECT_EQ(c.block, k / users[u].coding.n);
          EXPECT_EQ(c.position, k % users[u].coding.n);
        }
        EXPECT_EQ(found, sends ? 1u : 0u);
        k += sends;
      }
    }
    for (const auto& s : trace.slots) EXPECT_EQ(s.kind, kind_of(s.truth.size()));
  }
}

TEST(SicReceive, ThreeUserHandTrace) {
  const auto users = three_users();
  const auto trace = simulate_trace(users, 5 * 6);
  const auto r = sic_receive(trace, users);
  EXPECT_TRUE(r.success);
  EXPECT_EQ(r.decode_order(), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(r.t_counts, (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_EQ(r.decoded_per_period, (std::vector<Rational>{Rational(1), Rational(2), Rational(3)}));
  // slot 5 decodes user 1; slots 1 and 3 free up user 2; then slots 0, 2, 4 for user 3
  ASSERT_GE(r.iterations.size(), 3u);
  EXPECT_EQ(r.iterations[0].iteration, 1u);
  EXPECT_EQ(r.iterations[0].user, 0u);
  EXPECT_EQ(r.iterations[0].blocks[0].positions, (std::vector<std::size_t>{5}));
  EXPECT_EQ(r.iterations[1].user, 1u);
  EXPECT_EQ(r.iterations[1].blocks[0].positions, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(r.iterations[2].user, 2u);
  EXPECT_EQ(r.iterations[2].blocks[0].positions, (std::vector<std::size_t>{0, 1, 2}));
  for (std::size_t u = 0; u < 3; ++u) {
    EXPECT_EQ(r.decode_iteration[u], u + 1);
    EXPECT_EQ(r.decode_delays[u], 6);
    EXPECT_EQ(r.decoded_blocks[u], 5u);
  }
}

TEST(SicReceive, TwoAlwaysOnUsersDecodeNothing) {
  std::vector<UserConfig> two{{BinarySequence::from_string("11"), {2, 1, 1}, 0},
                              {BinarySequence::from_string("11"), {2, 1, 1}, 1}};
  const auto r = sic_receive(simulate_trace(two, 8), two);
  EXPECT_FALSE(r.success);
  EXPECT_TRUE(r.iterations.empty());
  EXPECT_EQ(r.decoded_blocks, (std::vector<std::size_t>{0, 0}));
}

TEST(SicReceive, DisjointNonSiSetSucceeds) {
  std::vector<UserConfig> users{{BinarySequence::from_string("10"), {1, 1, 1}, 0},
                                {BinarySequence::from_string("10"), {1, 1, 1}, 1}};
  const auto r = sic_receive(simulate_trace(users, 4), users);
  EXPECT_TRUE(r.success);
  users[1].shift = 0;
  EXPECT_FALSE(sic_receive(simulate_trace(users, 4), users).success);
}

TEST(SicReceive, SilentAndZeroRateUsers) {
  std::vector<UserConfig> users{{BinarySequence::from_string("111"), {3, 1, 1}, 0},
                                {BinarySequence::from_string("000"), {0, 0, 1}, 1},
                                {BinarySequence::from_string("100"), {1, 0, 1}, 2}};
  const auto r = sic_receive(simulate_trace(users, 9, {true, 3}), users);
  EXPECT_TRUE(r.success);
  EXPECT_EQ(r.total_blocks[1], 0u);
  EXPECT_FALSE(r.decode_iteration[1]);
  EXPECT_EQ(r.decode_iteration[2], 1u);  // m = 0: nothing to wait for
  EXPECT_EQ(r.decoded_per_period[1], Rational(0));
}

TEST(SicReceive, GenieDeterminismAndConcretePayloads) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const ShiftVector taus{rng() % 6, rng() % 6, rng() % 6};
    const auto users = three_users(taus, 5);
    const auto trace = simulate_trace(users, 30, {true, rng()});
    const auto a = sic_receive(trace, users);
    const auto b = sic_receive(trace, users);
    EXPECT_EQ(a, b);
    EXPECT_TRUE(a.success);
    EXPECT_EQ(a.decoded_sources, trace.sources);

    const auto symbolic = sic_receive(simulate_trace(users, 30), users);
    EXPECT_EQ(symbolic.iterations, a.iterations);
    EXPECT_EQ(symbolic.decode_delays, a.decode_delays);
  }
}

TEST(SicReceive, FirstIterationMatchesOneHotCorrelation) {
  std::mt19937_64 rng(41);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t M = 2 + rng() % 2;
    const std::size_t L = 2 + rng() % 6;
    auto users = random_users(rng, M, L);
    const auto trace = simulate_trace(users, 2 * L);
    const auto r = sic_receive(trace, users);
    const auto set = sequence_set_of(users);
    std::vector<std::size_t> everyone(M);
    std::iota(everyone.begin(), everyone.end(), 0);
    std::vector<std::int64_t> taus;
    for (const auto& u : users) taus.push_back(static_cast<std::int64_t>(u.shift));
    for (std::size_t u = 0; u < M; ++u) {
      if (r.decode_iteration[u] != std::size_t{1} || users[u].coding.n == 0) continue;
      EXPECT_EQ(r.t_counts[u], cross_correlation(set, {everyone, MarkMask{1} << u, taus}));
      ++checked;
    }
    Rational total(0);
    for (const auto& d : r.decoded_per_period) total += d;
    EXPECT_LE(total, Rational(static_cast<std::int64_t>(L)));
  }
  EXPECT_GT(checked, 100);
}

TEST(SicReceive, AchieverFirstUserIsTheFullDutyUser) {
  const auto rates = RateVector{Rational(1, 4), Rational(1, 4), Rational(1, 2)};
  const auto plan = enumerate_plans(rates).front();
  const auto set = build_si_set(plan.duty_factors);
  std::vector<UserConfig> users;
  for (std::size_t i = 0; i < 3; ++i)
    users.push_back({set[i], {set[i].weight(), static_cast<std::size_t>((rates[i] * static_cast<std::int64_t>(set.period())).numerator()), 1}, 0});
  const auto L = set.period();
  for (std::size_t a = 0; a < L; ++a)
    for (std::size_t b = 0; b < L; ++b) {
      users[1].shift = a;
      users[2].shift = b;
      const auto r = sic_receive(simulate_trace(users, 5 * L), users);
      ASSERT_TRUE(r.success);
      EXPECT_EQ(set[r.decode_order().front()].weight(), L);
    }
}

TEST(SicReceive, ConcreteRejectsLongBlocks) {
  std::vector<std::uint8_t> bits(300, 1);
  std::vector<UserConfig> users{{BinarySequence(bits), {300, 1, 1}, 0}};
  EXPECT_THROW(simulate_trace(users, 300, {true, 0}), FieldCapacityError);
  const auto trace = simulate_trace(users, 300);
  EXPECT_TRUE(sic_receive(trace, users).success);
}

TEST(SicReceive, TraceMustMatchUsers) {
  const auto users = three_users();
  const auto trace = simulate_trace(users, 6);
  std::vector<UserConfig> fewer(users.begin(), users.begin() + 2);
  EXPECT_THROW(sic_receive(trace, fewer), ConfigError);
  const std::vector<std::size_t> bad{0, 0, 6};
  EXPECT_THROW(sic_receive_with_shifts(trace, users, bad), ConfigError);
}

TEST(BasicReceive, Examples) {
  const auto users = three_users();
  const auto b = basic_receive(simulate_trace(users, 6), users);
  EXPECT_EQ(b.received, (std::vector<std::size_t>{1, 0, 0}));

  std::vector<UserConfig> one{{BinarySequence::from_string("11111"), {5, 5, 1}, 3}};
  EXPECT_EQ(basic_receive(simulate_trace(one, 10), one).received_per_period[0], Rational(5));

  const auto set = build_si_set(RateVector(3, Rational(1, 3)));
  ASSERT_EQ(set.period(), 27u);
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<UserConfig> u;
    for (std::size_t i = 0; i < 3; ++i) u.push_back({set[i], {9, 0, 1}, rng() % 27});
    const auto r = basic_receive(simulate_trace(u, 27), u);
    EXPECT_EQ(r.received, (std::vector<std::size_t>{4, 4, 4}));
  }
}

TEST(BasicReceive, NeverBeatsSic) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 300; ++trial) {
    auto users = random_users(rng, 3, 2 + rng() % 6);
    for (auto& u : users) u.coding.m = u.coding.n == 0 ? 0 : 1;
    const auto trace = simulate_trace(users, 3 * users[0].sequence.period());
    const auto basic = basic_receive(trace, users);
    const auto sic = sic_receive(trace, users);
    for (std::size_t u = 0; u < users.size(); ++u) {
      // a block with a clean packet always decodes when m = 1
      if (basic.received[u] > 0) {
        EXPECT_EQ(sic.decoded_blocks[u], sic.total_blocks[u]);
      }
    }
  }
}

TEST(IdentifyShifts, SoundnessAndDegenerateSingleUser) {
  const auto users = three_users();
  const auto set = sequence_set_of(users);
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = 0; b < 6; ++b)
      for (std::size_t c = 0; c < 6; ++c) {
        const auto u = three_users({a, b, c});
        const auto candidates = identify_shifts(simulate_trace(u, 6).kinds(), set);
        EXPECT_NE(std::find(candidates.begin(), candidates.end(), ShiftVector{a, b, c}), candidates.end());
      }
  const SequenceSet one({BinarySequence::from_string("1111")});
  EXPECT_EQ(identify_shifts(kinds_of("SSSS"), one).size(), 4u);
}

TEST(IdentifyShifts, Errors) {
  const auto set = sequence_set_of(three_users());
  EXPECT_THROW(identify_shifts(kinds_of("CCC"), set), ConfigError);
  EXPECT_THROW(identify_shifts(kinds_of("IIIIII"), set), TraceMismatch);
  EXPECT_THROW(identify_shifts(kinds_of("CCCCCSCCCCCC"), set), TraceMismatch);
  EXPECT_THROW(identify_shifts(kinds_of("CCCCCS"), set, 10), BudgetExceeded);
}

TEST(BlindMode, AgreesWithGenieWheneverIdentificationIsUnique) {
  std::mt19937_64 rng(71);
  int unique = 0, ambiguous = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t L = 3 + rng() % 5;
    auto users = random_users(rng, 2 + rng() % 2, L);
    const auto trace = simulate_trace(users, 3 * L, {true, rng()});
    const auto candidates = identify_shifts(trace.kinds(), sequence_set_of(users));
    if (candidates.size() == 1) {
      ++unique;
      EXPECT_EQ(sic_receive(trace, users, SicMode::blind), sic_receive(trace, users, SicMode::genie));
    } else {
      ++ambiguous;
      try {
        sic_receive(trace, users, SicMode::blind);
        ADD_FAILURE() << "expected ambiguity";
      } catch (const AmbiguousIdentification& e) {
        EXPECT_EQ(e.candidates(), candidates);
      }
    }
  }
  EXPECT_GT(unique, 20);
  EXPECT_GT(ambiguous, 20);
}

TEST(SlotKinds, ConservationUnderCancellation) {
  std::mt19937_64 rng(81);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t L = 2 + rng() % 6;
    auto users = random_users(rng, 4, L);
    const auto trace = simulate_trace(users, L);
    for (const auto& slot : trace.slots) {
      const auto k = slot.truth.size();
      EXPECT_EQ(slot.kind, kind_of(k));
      if (k >= 2) {
        EXPECT_EQ(kind_of(k - 1), k == 2 ? SlotKind::success : SlotKind::collision);
      }
    }
  }
}
