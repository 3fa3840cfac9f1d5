#include <gtest/gtest.h>

#include <bit>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "collide_sic/erasure.hpp"
#include "collide_sic/gf256.hpp"

using namespace collide_sic;

namespace {

SourceBlock random_source(std::mt19937_64& rng, std::size_t m, std::size_t size, std::uint64_t id = 0) {
  SourceBlock s{id, {}, false};
  for (std::size_t i = 0; i < m; ++i) {
    Packet p(size);
    for (auto& b : p) b = static_cast<std::uint8_t>(rng());
    s.packets.push_back(p);
  }
  return s;
}

std::vector<CodedPacket> pick(const CodedBlock& block, const std::vector<std::size_t>& positions) {
  std::vector<CodedPacket> out;
  for (auto p : positions) out.push_back(block.packets[p]);
  return out;
}

Packet from_hex(const std::string& hex) {
  Packet out;
  for (std::size_t i = 0; i + 1 < hex.size(); i += 2) out.push_back(static_cast<std::uint8_t>(std::stoul(hex.substr(i, 2), nullptr, 16)));
  return out;
}

std::uint8_t slow_mul(std::uint8_t a, std::uint8_t b) {
  unsigned r = 0, x = a;
  for (; b; b >>= 1) {
    if (b & 1U) r ^= x;
    x <<= 1;
    if (x & 0x100U) x ^= 0x11DU;
  }
  return static_cast<std::uint8_t>(r);
}

}  // namespace

TEST(Gf256, MultiplyMatchesBitwiseAndInverts) {
  for (unsigned a = 0; a < 256; ++a)
    for (unsigned b = 0; b < 256; ++b)
      ASSERT_EQ(gf256::mul(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)),
                slow_mul(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)));
  for (unsigned a = 1; a < 256; ++a) EXPECT_EQ(gf256::mul(static_cast<std::uint8_t>(a), gf256::inv(static_cast<std::uint8_t>(a))), 1);
  EXPECT_EQ(gf256::pow(0, 0), 1);
}

TEST(Encode, IdentityWhenMEqualsN) {
  std::mt19937_64 rng(1);
  const auto src = random_source(rng, 3, 5);
  const auto coded = encode({3, 3, 5}, src);
  ASSERT_EQ(coded.packets.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(coded.packets[i].payload, src.packets[i]);
}

TEST(Encode, RepetitionWhenMIsOne) {
  std::mt19937_64 rng(2);
  const CodingParams params{6, 1, 4};
  const auto src = random_source(rng, 1, 4);
  const auto coded = encode(params, src);
  for (std::size_t pos = 0; pos < 6; ++pos) {
    EXPECT_EQ(coded.packets[pos].payload, src.packets[0]);
    EXPECT_EQ(decode(params, pick(coded, {pos})), src);
  }
}

TEST(Decode, FourTwoExamples) {
  std::mt19937_64 rng(3);
  const CodingParams params{4, 2, 8};
  const auto src = random_source(rng, 2, 8);
  const auto coded = encode(params, src);
  EXPECT_EQ(decode(params, pick(coded, {2, 3})), src);
  EXPECT_EQ(decode(params, pick(coded, {0, 1})), src);
  EXPECT_EQ(decode(params, pick(coded, {1, 3})), src);
  EXPECT_THROW(decode(params, pick(coded, {2})), InsufficientPackets);
  // duplicates do not count twice
  EXPECT_THROW(decode(params, pick(coded, {3, 3})), InsufficientPackets);
}

TEST(Decode, InsufficientPacketsCarriesCounts) {
  try {
    decode({5, 3, 1}, {});
    FAIL();
  } catch (const InsufficientPackets& e) {
    EXPECT_EQ(e.have(), 0u);
    EXPECT_EQ(e.need(), 3u);
  }
}

TEST(Reencode, MatchesEncodeAndRegeneratesBlock) {
  std::mt19937_64 rng(4);
  const CodingParams params{6, 1, 3};
  const auto src = random_source(rng, 1, 3);
  const auto coded = encode(params, src);
  EXPECT_EQ(reencode_from_source(params, src), coded);
  const auto decoded = decode(params, pick(coded, {4}));
  EXPECT_EQ(reencode_from_source(params, decoded), coded);
  const auto silent = reencode_from_source({0, 0, 1}, SourceBlock{});
  EXPECT_TRUE(silent.packets.empty());
}

TEST(Mds, ExhaustiveRoundTripUpToTen) {
  std::mt19937_64 rng(5);
  for (std::size_t n = 0; n <= 10; ++n) {
    for (std::size_t m = 0; m <= n; ++m) {
      const CodingParams params{n, m, 3};
      const ErasureCoder coder(params);
      const auto src = random_source(rng, m, 3, n * 16 + m);
      const auto coded = coder.encode(src);
      for (std::size_t i = 0; i < m; ++i) ASSERT_EQ(coded.packets[i].payload, src.packets[i]);
      for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != m) continue;
        std::vector<CodedPacket> got;
        for (std::size_t p = 0; p < n; ++p)
          if ((mask >> p) & 1U) got.push_back(coded.packets[p]);
        const auto out = coder.decode(got, src.block_id);
        ASSERT_EQ(out.packets, src.packets) << "n=" << n << " m=" << m << " mask=" << mask;
      }
    }
  }
}

TEST(Mds, SymbolicAndConcretePredicatesAgree) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + rng() % 12;
    const std::size_t m = rng() % (n + 1);
    const ErasureCoder coder({n, m, 2});
    const auto src = random_source(rng, m, 2);
    const auto coded = coder.encode(src);
    std::vector<std::size_t> positions;
    const auto k = rng() % (n + 3);
    for (std::size_t i = 0; i < k; ++i) positions.push_back(rng() % n);
    bool concrete_ok = true;
    try {
      EXPECT_EQ(coder.decode(pick(coded, positions)).packets, src.packets);
    } catch (const InsufficientPackets&) {
      concrete_ok = false;
    }
    bool symbolic_ok = true;
    try {
      coder.decode(pick(coded, positions), 0, true);
    } catch (const InsufficientPackets&) {
      symbolic_ok = false;
    }
    EXPECT_EQ(concrete_ok, symbolic_ok);
    EXPECT_EQ(concrete_ok, coder.decodable(positions));
  }
}

TEST(Encode, DeterministicAndSymbolic) {
  std::mt19937_64 rng(7);
  const CodingParams params{9, 4, 6};
  const auto src = random_source(rng, 4, 6);
  EXPECT_EQ(encode(params, src), encode(params, src));
  const auto sym = encode(params, SourceBlock{3, {}, true});
  EXPECT_TRUE(sym.symbolic);
  ASSERT_EQ(sym.packets.size(), 9u);
  for (std::size_t i = 0; i < 9; ++i) {
    EXPECT_EQ(sym.packets[i].position, i);
    EXPECT_TRUE(sym.packets[i].payload.empty());
  }
}

TEST(Encode, ParameterErrors) {
  EXPECT_THROW(ErasureCoder({3, 4, 1}), ParameterError);
  EXPECT_THROW(ErasureCoder({3, 2, 0}), ParameterError);
  const ErasureCoder big({300, 2, 1});
  SourceBlock src{0, {Packet{1}, Packet{2}}, false};
  EXPECT_THROW(big.encode(src), FieldCapacityError);
  EXPECT_NO_THROW(big.encode(SourceBlock{0, {}, true}));
  EXPECT_THROW(encode({4, 2, 2}, SourceBlock{0, {Packet{1, 2}}, false}), ParameterError);
  const auto coded = encode({4, 2, 1}, SourceBlock{0, {Packet{1}, Packet{2}}, false});
  std::vector<CodedPacket> bad{{7, Packet{1}}, {1, Packet{2}}};
  EXPECT_THROW(decode({4, 2, 1}, bad), ParameterError);
  EXPECT_NO_THROW(ErasureCoder({255, 100, 1}).encode(SourceBlock{0, std::vector<Packet>(100, Packet{9}), false}));
}

TEST(Fixtures, MatchLagrangeReferenceVectors) {
  std::ifstream in(std::string(FIXTURE_DIR) + "/rs_vectors.txt");
  ASSERT_TRUE(in);
  std::string line;
  int cases = 0;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::size_t n = 0, m = 0, size = 0;
    std::string src_hex, coded_hex;
    fields >> n >> m >> size >> src_hex >> coded_hex;
    const auto src_bytes = from_hex(src_hex);
    const auto coded_bytes = from_hex(coded_hex);
    SourceBlock src{0, {}, false};
    for (std::size_t i = 0; i < m; ++i)
      src.packets.emplace_back(src_bytes.begin() + static_cast<std::ptrdiff_t>(i * size),
                               src_bytes.begin() + static_cast<std::ptrdiff_t>((i + 1) * size));
    const CodingParams params{n, m, size};
    const auto coded = encode(params, src);
    for (std::size_t j = 0; j < n; ++j) {
      const Packet expect(coded_bytes.begin() + static_cast<std::ptrdiff_t>(j * size),
                          coded_bytes.begin() + static_cast<std::ptrdiff_t>((j + 1) * size));
      EXPECT_EQ(coded.packets[j].payload, expect) << "n=" << n << " m=" << m << " position " << j;
    }
    // last m positions decode back to the source
    std::vector<CodedPacket> tail(coded.packets.end() - static_cast<std::ptrdiff_t>(m), coded.packets.end());
    EXPECT_EQ(decode(params, tail).packets, src.packets);
    ++cases;
  }
  EXPECT_GE(cases, 9);
}
