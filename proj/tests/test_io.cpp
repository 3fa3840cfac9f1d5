#include <gtest/gtest.h>

#include <sstream>

#include "collide_sic/construction.hpp"
#include "collide_sic/io.hpp"

using namespace collide_sic;

TEST(SequenceFile, ParsesAndRoundTrips) {
  const auto set = parse_sequence_json(R"({"period": 4, "sequences": [[1,0,1,0],[1,1,0,0]]})");
  EXPECT_EQ(set.period(), 4u);
  EXPECT_EQ(set[1], BinarySequence::from_string("1100"));
  EXPECT_EQ(parse_sequence_json(sequence_json(set)), set);

  const auto big = build_si_set(RateVector{Rational(1, 3), Rational(2, 5), Rational(1, 1)});
  EXPECT_EQ(parse_sequence_json(sequence_json(big)), big);
}

TEST(SequenceFile, StrictParsing) {
  const char* bad[] = {
      "not json",
      "[1,2]",
      R"({"period": 2})",
      R"({"period": 0, "sequences": [[]]})",
      R"({"period": 2, "sequences": []})",
      R"({"period": 2, "sequences": [[1,0],[1]]})",
      R"({"period": 2, "sequences": [[1,2]]})",
      R"({"period": 2, "sequences": [[1,true]]})",
      R"({"period": 2, "sequences": [[1,0.5]]})",
      R"({"period": -2, "sequences": [[1,0]]})",
      R"({"period": 2, "sequences": [[1,0]], "extra": 1})",
  };
  for (const auto* text : bad) EXPECT_THROW(parse_sequence_json(text), ConfigError) << text;
  EXPECT_THROW(read_sequence_file("/nonexistent/file.json"), ConfigError);
}

TEST(PlanFile, RoundTrip) {
  const auto plan = plan_duty_factors(RateVector{Rational(1, 6), Rational(1, 3), Rational(1, 2)},
                                      std::vector<std::size_t>{1, 0, 2});
  const auto j = plan_json(plan);
  EXPECT_EQ(j["permutation"], Json::parse("[2,1,3]"));
  EXPECT_EQ(parse_plan_json(j.dump()), plan);
  EXPECT_THROW(parse_plan_json(R"({"permutation":[0],"duty_factors":["1"],"period":1})"), ConfigError);
  EXPECT_THROW(parse_plan_json(R"({"permutation":[1,1],"duty_factors":["1","1/2"],"period":2})"), ConfigError);
  EXPECT_THROW(parse_plan_json(R"({"permutation":[1]})"), ConfigError);
}

TEST(Reports, SicReportIsOneBased) {
  std::vector<UserConfig> users{{BinarySequence::from_string("111111"), {6, 1, 1}, 0},
                                {BinarySequence::from_string("110110"), {4, 2, 1}, 0},
                                {BinarySequence::from_string("101010"), {3, 3, 1}, 0}};
  const auto r = sic_receive(simulate_trace(users, 30), users);
  const auto j = sic_report_json(r);
  EXPECT_EQ(j["decode_order"], Json::parse("[1,2,3]"));
  EXPECT_EQ(j["iterations"][0]["user"], 1);
  EXPECT_EQ(j["users"][2]["decoded_per_period"], "3");
  EXPECT_EQ(j["users"][2]["decode_iteration"], 3);
}

TEST(Reports, VerificationJsonIsStable) {
  const auto a = verification_json(achievability_check(RateVector(3, Rational(1, 3)))).dump();
  const auto b = verification_json(achievability_check(RateVector(3, Rational(1, 3)))).dump();
  EXPECT_EQ(a, b);
  const auto j = Json::parse(a);
  EXPECT_EQ(j["verdict"], true);
  EXPECT_EQ(j["rates"], Json::parse(R"(["1/3","1/3","1/3"])"));
  EXPECT_TRUE(j["counterexample"].is_null());
  EXPECT_FALSE(j.contains("outcomes"));
}

TEST(Csv, RegionAndBaseline) {
  const auto csv = region_csv(region_boundary(2, 2), 2);
  EXPECT_EQ(csv, "p1,sic_C1,sic_C2,basic_C1,basic_C2\n0,0,1,0,1\n0.5,0.5,0.5,0.25,0.25\n1,1,0,1,0\n");
  EXPECT_EQ(region_csv(region_boundary(3, 1), 3), "vertex,C1,C2,C3\n1,1,0,0\n2,0,1,0\n3,0,0,1\n");

  const auto set = SequenceSet({BinarySequence::from_string("111"), BinarySequence::from_string("100")});
  const auto r = baseline_throughput(set);
  EXPECT_EQ(baseline_csv(r, set.duty_factors()),
            "user,duty,mean,worst,best,predicted\n1,1,0.666666666667,0.666666666667,0.666666666667,0.666666666667\n"
            "2,0.333333333333,0,0,0,0\n");
}

TEST(TraceDump, JsonLines) {
  std::vector<UserConfig> users{{BinarySequence::from_string("10"), {1, 1, 1}, 0},
                                {BinarySequence::from_string("11"), {2, 1, 1}, 1}};
  const auto trace = simulate_trace(users, 2);
  std::ostringstream plain, truth;
  write_trace_jsonl(plain, trace, false);
  write_trace_jsonl(truth, trace, true);
  EXPECT_EQ(plain.str(), "{\"t\":0,\"kind\":\"collision\"}\n{\"t\":1,\"kind\":\"success\"}\n");
  EXPECT_EQ(truth.str(),
            "{\"t\":0,\"kind\":\"collision\",\"truth\":[[1,0,0],[2,0,1]]}\n{\"t\":1,\"kind\":\"success\",\"truth\":[[2,0,0]]}\n");
}
