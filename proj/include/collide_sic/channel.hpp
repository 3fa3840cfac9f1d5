// Slot-synchronous collision channel without feedback.
//
// A trace covers W whole sequence periods, N = W * L receiver slots, and wraps
// around: user i's local slot for receiver slot t is (t - tau_i) mod N.  Every
// block is therefore complete and the trace is an exact finite image of an
// infinitely long session in steady state.
//
// User i sends one block per local period (n_i = w_i coded packets).  Block j
// covers local slots [jL, (j+1)L) and coded packet `pos` of that block goes
// out in the pos-th one of the sequence within the period.
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "collide_sic/erasure.hpp"
#include "collide_sic/error.hpp"
#include "collide_sic/rational.hpp"
#include "collide_sic/sequence.hpp"

namespace collide_sic {

struct UserConfig {
  BinarySequence sequence;
  CodingParams coding;   ///< n must equal the sequence weight
  std::size_t shift = 0;  ///< relative shift tau_i in [0, L)
};

enum class SlotKind : std::uint8_t { idle, success, collision };

inline const char* to_string(SlotKind kind) {
  switch (kind) {
    case SlotKind::idle: return "idle";
    case SlotKind::success: return "success";
    case SlotKind::collision: return "collision";
  }
  return "?";
}

inline SlotKind kind_of(std::size_t contributors) {
  return contributors == 0 ? SlotKind::idle : contributors == 1 ? SlotKind::success : SlotKind::collision;
}

struct Contribution {
  std::size_t user = 0;
  std::size_t block = 0;
  std::size_t position = 0;

  friend bool operator==(const Contribution&, const Contribution&) = default;
};

struct SlotObservation {
  SlotKind kind = SlotKind::idle;
  /// Concrete mode: XOR of every contributor's coded payload (empty otherwise).
  Packet signal;
  /// Hidden ground truth, for tests and genie dumps only.
  std::vector<Contribution> truth;
};

struct ChannelTrace {
  std::size_t period = 0;
  std::size_t periods = 0;  ///< W
  std::size_t users = 0;
  bool concrete = false;
  std::vector<SlotObservation> slots;
  /// Hidden: the source blocks each user actually sent (concrete mode).
  std::vector<std::vector<SourceBlock>> sources;

  std::vector<SlotKind> kinds() const {
    std::vector<SlotKind> out;
    out.reserve(slots.size());
    for (const auto& s : slots) out.push_back(s.kind);
    return out;
  }
};

namespace detail {

inline void validate_users(std::span<const UserConfig> users) {
  if (users.empty()) throw ConfigError("need at least one user");
  const auto L = users.front().sequence.period();
  for (std::size_t i = 0; i < users.size(); ++i) {
    const auto& u = users[i];
    const auto tag = "user " + std::to_string(i + 1);
    if (u.sequence.period() != L) throw ConfigError(tag + ": sequence period differs from the other users");
    if (u.shift >= L) throw ConfigError(tag + ": shift must lie in [0, L)");
    if (u.coding.n != u.sequence.weight())
      throw ConfigError(tag + ": block length n=" + std::to_string(u.coding.n) +
                        " must equal the sequence weight " + std::to_string(u.sequence.weight()));
    if (u.coding.m > u.coding.n) throw ParameterError(tag + ": m exceeds n");
  }
}

/// Per-slot contributor lists in compressed-row form.
struct SlotLayout {
  std::size_t period = 0;
  std::size_t slots = 0;
  std::vector<std::uint32_t> offsets;  ///< slots + 1 entries
  std::vector<Contribution> entries;

  std::span<const Contribution> at(std::size_t t) const {
    return {entries.data() + offsets[t], entries.data() + offsets[t + 1]};
  }
};

inline SlotLayout make_layout(std::span<const UserConfig> users, std::span<const std::size_t> shifts,
                              std::size_t horizon) {
  SlotLayout layout;
  layout.period = users.front().sequence.period();
  layout.slots = horizon;
  const auto L = layout.period;
  std::vector<std::vector<std::uint32_t>> rank(users.size(), std::vector<std::uint32_t>(L, 0));
  for (std::size_t u = 0; u < users.size(); ++u) {
    std::uint32_t ones = 0;
    for (std::size_t n = 0; n < L; ++n) {
      rank[u][n] = ones;
      ones += users[u].sequence[n];
    }
  }
  layout.offsets.reserve(horizon + 1);
  layout.entries.reserve(horizon * users.size());
  layout.offsets.push_back(0);
  for (std::size_t t = 0; t < horizon; ++t) {
    for (std::size_t u = 0; u < users.size(); ++u) {
      const auto local = (t + horizon - shifts[u]) % horizon;
      const auto phase = local % L;
      if (users[u].sequence[phase]) layout.entries.push_back({u, local / L, rank[u][phase]});
    }
    layout.offsets.push_back(static_cast<std::uint32_t>(layout.entries.size()));
  }
  return layout;
}

inline void check_horizon(std::size_t horizon, std::size_t period) {
  if (horizon < period || horizon % period != 0)
    throw ConfigError("horizon of " + std::to_string(horizon) + " slots must be a positive multiple of the period " +
                      std::to_string(period));
}

inline std::vector<std::size_t> shifts_of(std::span<const UserConfig> users) {
  std::vector<std::size_t> taus;
  taus.reserve(users.size());
  for (const auto& u : users) taus.push_back(u.shift);
  return taus;
}

/// Deterministic payload bytes for (seed, user, block).
inline SourceBlock make_source_block(std::uint64_t seed, std::size_t user, std::size_t block,
                                     const CodingParams& coding) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(user), static_cast<std::uint32_t>(block)};
  std::mt19937_64 rng(seq);
  SourceBlock src{block, {}, false};
  src.packets.assign(coding.m, Packet(coding.packet_size, 0));
  for (auto& p : src.packets)
    for (auto& byte : p) byte = static_cast<std::uint8_t>(rng() & 0xFFU);
  return src;
}

}  // namespace detail

struct TraceOptions {
  bool concrete = false;  ///< carry real payloads instead of symbolic packets
  std::uint64_t payload_seed = 0;
};

/// Receiver observations over `horizon` slots (a positive multiple of L).
inline ChannelTrace simulate_trace(std::span<const UserConfig> users, std::size_t horizon,
                                   const TraceOptions& opts = {}) {
  detail::validate_users(users);
  const auto L = users.front().sequence.period();
  detail::check_horizon(horizon, L);

  ChannelTrace trace;
  trace.period = L;
  trace.periods = horizon / L;
  trace.users = users.size();
  trace.concrete = opts.concrete;
  const auto layout = detail::make_layout(users, detail::shifts_of(users), horizon);

  std::vector<std::vector<CodedBlock>> coded(users.size());
  if (opts.concrete) {
    trace.sources.resize(users.size());
    for (std::size_t u = 0; u < users.size(); ++u) {
      const ErasureCoder coder(users[u].coding);
      for (std::size_t b = 0; b < trace.periods; ++b) {
        trace.sources[u].push_back(detail::make_source_block(opts.payload_seed, u, b, users[u].coding));
        coded[u].push_back(coder.encode(trace.sources[u].back()));
      }
    }
  }

  trace.slots.resize(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    auto& slot = trace.slots[t];
    const auto who = layout.at(t);
    slot.kind = kind_of(who.size());
    slot.truth.assign(who.begin(), who.end());
    if (opts.concrete) {
      std::size_t size = 0;
      for (const auto& c : who) size = std::max(size, users[c.user].coding.packet_size);
      slot.signal.assign(size, 0);
      for (const auto& c : who) {
        const auto& payload = coded[c.user][c.block].packets[c.position].payload;
        for (std::size_t b = 0; b < payload.size(); ++b) slot.signal[b] ^= payload[b];
      }
    }
  }
  return trace;
}

/// Receiver without interference cancellation: collided packets are lost.
struct BasicReport {
  std::vector<std::size_t> received;          ///< uncollided packets per user over the trace
  std::vector<Rational> received_per_period;  ///< received / W
  std::vector<Rational> throughput;           ///< received / N, packets per slot
};

/// Packets are attributed through the users' shifts, not the hidden truth.
inline BasicReport basic_receive(const ChannelTrace& trace, std::span<const UserConfig> users) {
  detail::validate_users(users);
  if (users.size() != trace.users || users.front().sequence.period() != trace.period)
    throw ConfigError("user configuration does not match the trace");
  const auto layout = detail::make_layout(users, detail::shifts_of(users), trace.slots.size());
  BasicReport report;
  report.received.assign(users.size(), 0);
  for (std::size_t t = 0; t < trace.slots.size(); ++t) {
    const auto who = layout.at(t);
    if (trace.slots[t].kind == SlotKind::success && who.size() == 1) ++report.received[who.front().user];
  }
  const auto W = static_cast<std::int64_t>(trace.periods);
  const auto N = static_cast<std::int64_t>(trace.slots.size());
  for (auto r : report.received) {
    report.received_per_period.emplace_back(static_cast<std::int64_t>(r), W);
    report.throughput.emplace_back(static_cast<std::int64_t>(r), N);
  }
  return report;
}

}  // namespace collide_sic
