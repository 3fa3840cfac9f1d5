// Systematic (n, m) erasure code over GF(2^8): any m of the n coded packets
// recover the m source packets.
//
// The generator is G = V * V_top^{-1}, where V is the n x m Vandermonde matrix
// on the points 0, 1, ..., n-1 and V_top its first m rows.  Every m x m
// submatrix of V is invertible, hence so is every m-row submatrix of G, and
// the first m rows of G are the identity.  Coding is bytewise, so packets may
// have any common size.
//
// Symbolic blocks carry no payload; decoding them is the threshold test
// "at least m distinct positions", which is exactly when concrete decoding
// succeeds.
#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "collide_sic/error.hpp"
#include "collide_sic/gf256.hpp"

namespace collide_sic {

struct CodingParams {
  std::size_t n = 0;            ///< coded packets per block
  std::size_t m = 0;            ///< source packets per block
  std::size_t packet_size = 1;  ///< bytes per packet

  friend bool operator==(const CodingParams&, const CodingParams&) = default;
};

/// Largest block length supported by the byte-field code.
inline constexpr std::size_t kMaxConcreteBlockLength = 255;

using Packet = std::vector<std::uint8_t>;

struct SourceBlock {
  std::uint64_t block_id = 0;
  std::vector<Packet> packets;
  bool symbolic = false;

  friend bool operator==(const SourceBlock&, const SourceBlock&) = default;
};

struct CodedPacket {
  std::size_t position = 0;  ///< 0 .. n-1 within the block
  Packet payload;

  friend bool operator==(const CodedPacket&, const CodedPacket&) = default;
};

struct CodedBlock {
  std::uint64_t block_id = 0;
  std::vector<CodedPacket> packets;
  bool symbolic = false;

  friend bool operator==(const CodedBlock&, const CodedBlock&) = default;
};

namespace detail {

using Matrix = std::vector<std::vector<std::uint8_t>>;

/// Gauss-Jordan inverse; throws InternalError on a singular input.
inline Matrix invert(Matrix a) {
  const auto k = a.size();
  Matrix inv(k, std::vector<std::uint8_t>(k, 0));
  for (std::size_t i = 0; i < k; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    while (pivot < k && a[pivot][col] == 0) ++pivot;
    if (pivot == k) throw InternalError("singular generator submatrix");
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    const auto scale = gf256::inv(a[col][col]);
    for (std::size_t j = 0; j < k; ++j) {
      a[col][j] = gf256::mul(a[col][j], scale);
      inv[col][j] = gf256::mul(inv[col][j], scale);
    }
    for (std::size_t r = 0; r < k; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const auto f = a[r][col];
      for (std::size_t j = 0; j < k; ++j) {
        a[r][j] ^= gf256::mul(f, a[col][j]);
        inv[r][j] ^= gf256::mul(f, inv[col][j]);
      }
    }
  }
  return inv;
}

}  // namespace detail

class ErasureCoder {
 public:
  explicit ErasureCoder(CodingParams params) : params_(params) {
    if (params_.m > params_.n)
      throw ParameterError("source block length m=" + std::to_string(params_.m) + " exceeds n=" +
                           std::to_string(params_.n));
    if (params_.packet_size == 0) throw ParameterError("packet_size must be at least 1");
    if (params_.n <= kMaxConcreteBlockLength) build_generator();
  }

  const CodingParams& params() const noexcept { return params_; }

  /// Coefficients of coded packet `position` over the m source packets.
  std::span<const std::uint8_t> generator_row(std::size_t position) const {
    require_concrete();
    return generator_[position];
  }

  CodedBlock encode(const SourceBlock& source) const {
    CodedBlock out{source.block_id, {}, source.symbolic};
    if (source.symbolic) {
      for (std::size_t pos = 0; pos < params_.n; ++pos) out.packets.push_back({pos, {}});
      return out;
    }
    require_concrete();
    if (source.packets.size() != params_.m)
      throw ParameterError("source block holds " + std::to_string(source.packets.size()) +
                           " packets, expected m=" + std::to_string(params_.m));
    for (const auto& p : source.packets)
      if (p.size() != params_.packet_size) throw ParameterError("source packet size differs from packet_size");
    out.packets.reserve(params_.n);
    for (std::size_t pos = 0; pos < params_.n; ++pos) {
      Packet coded(params_.packet_size, 0);
      const auto& row = generator_[pos];
      for (std::size_t j = 0; j < params_.m; ++j) {
        if (row[j] == 0) continue;
        for (std::size_t b = 0; b < params_.packet_size; ++b) coded[b] ^= gf256::mul(row[j], source.packets[j][b]);
      }
      out.packets.push_back({pos, std::move(coded)});
    }
    return out;
  }

  /// Regenerates all n coded packets of a decoded block, for cancellation.
  CodedBlock reencode_from_source(const SourceBlock& source) const { return encode(source); }

  /// Distinct positions are what count; duplicates are ignored.
  SourceBlock decode(std::span<const CodedPacket> received, std::uint64_t block_id = 0, bool symbolic = false) const {
    std::vector<const CodedPacket*> chosen;
    std::vector<bool> seen(params_.n, false);
    for (const auto& p : received) {
      if (p.position >= params_.n)
        throw ParameterError("coded packet position " + std::to_string(p.position) + " outside block of n=" +
                             std::to_string(params_.n));
      if (seen[p.position]) continue;
      seen[p.position] = true;
      chosen.push_back(&p);
    }
    if (chosen.size() < params_.m) throw InsufficientPackets(chosen.size(), params_.m);
    SourceBlock out{block_id, {}, symbolic};
    if (symbolic || params_.m == 0) return out;
    require_concrete();

    std::sort(chosen.begin(), chosen.end(),
              [](const CodedPacket* a, const CodedPacket* b) { return a->position < b->position; });
    chosen.resize(params_.m);
    for (const auto* p : chosen)
      if (p->payload.size() != params_.packet_size) throw ParameterError("coded packet size differs from packet_size");

    if (chosen.back()->position == params_.m - 1) {  // all systematic
      for (const auto* p : chosen) out.packets.push_back(p->payload);
      return out;
    }
    detail::Matrix sub;
    sub.reserve(params_.m);
    for (const auto* p : chosen) sub.push_back(generator_[p->position]);
    const auto inv = detail::invert(std::move(sub));
    out.packets.assign(params_.m, Packet(params_.packet_size, 0));
    for (std::size_t i = 0; i < params_.m; ++i)
      for (std::size_t j = 0; j < params_.m; ++j) {
        if (inv[i][j] == 0) continue;
        for (std::size_t b = 0; b < params_.packet_size; ++b)
          out.packets[i][b] ^= gf256::mul(inv[i][j], chosen[j]->payload[b]);
      }
    return out;
  }

  /// The success predicate shared by symbolic and concrete decoding.
  bool decodable(std::span<const std::size_t> positions) const {
    std::vector<bool> seen(params_.n, false);
    std::size_t distinct = 0;
    for (auto p : positions)
      if (p < params_.n && !seen[p]) {
        seen[p] = true;
        ++distinct;
      }
    return distinct >= params_.m;
  }

 private:
  void require_concrete() const {
    if (params_.n > kMaxConcreteBlockLength)
      throw FieldCapacityError("concrete coding supports n <= 255, got n=" + std::to_string(params_.n));
  }

  void build_generator() {
    const auto n = params_.n;
    const auto m = params_.m;
    detail::Matrix v(n, std::vector<std::uint8_t>(m, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) v[i][j] = gf256::pow(static_cast<std::uint8_t>(i), static_cast<unsigned>(j));
    if (m == 0) {
      generator_ = std::move(v);
      return;
    }
    const auto top_inv = detail::invert(detail::Matrix(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m)));
    generator_.assign(n, std::vector<std::uint8_t>(m, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        std::uint8_t acc = 0;
        for (std::size_t k = 0; k < m; ++k) acc ^= gf256::mul(v[i][k], top_inv[k][j]);
        generator_[i][j] = acc;
      }
  }

  CodingParams params_;
  detail::Matrix generator_;
};

inline CodedBlock encode(const CodingParams& params, const SourceBlock& source) {
  return ErasureCoder(params).encode(source);
}

inline CodedBlock reencode_from_source(const CodingParams& params, const SourceBlock& source) {
  return ErasureCoder(params).reencode_from_source(source);
}

inline SourceBlock decode(const CodingParams& params, std::span<const CodedPacket> received,
                          std::uint64_t block_id = 0, bool symbolic = false) {
  return ErasureCoder(params).decode(received, block_id, symbolic);
}

}  // namespace collide_sic
