// Ideal successive interference cancellation receiver.
//
// Each iteration (a) collects every coded packet that is alone in its slot
// once already-decoded users are removed, (b) decodes every block holding at
// least m distinct clean positions, regenerates its n coded packets and
// subtracts them from all slots they occupy, and (c) repeats until an
// iteration decodes nothing.
//
// Attribution of slot contents to (user, block, position) comes from a shift
// vector: the true one in genie mode, the blindly identified one otherwise.
// Payloads come from the residual slot signals only.
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "collide_sic/channel.hpp"
#include "collide_sic/erasure.hpp"
#include "collide_sic/error.hpp"
#include "collide_sic/identify.hpp"
#include "collide_sic/rational.hpp"
#include "collide_sic/sequence.hpp"

namespace collide_sic {

enum class SicMode { genie, blind };

struct DecodedBlockRecord {
  std::size_t block = 0;
  std::vector<std::size_t> positions;  ///< the m positions the decode used

  friend bool operator==(const DecodedBlockRecord&, const DecodedBlockRecord&) = default;
};

struct SicIterationRecord {
  std::size_t iteration = 0;  ///< 1-based
  std::size_t user = 0;
  std::vector<DecodedBlockRecord> blocks;

  friend bool operator==(const SicIterationRecord&, const SicIterationRecord&) = default;
};

struct SicReport {
  bool success = false;
  ShiftVector shifts;  ///< shift vector used for attribution
  std::vector<SicIterationRecord> iterations;
  std::vector<std::size_t> decoded_blocks;  ///< per user
  std::vector<std::size_t> total_blocks;    ///< per user (0 for silent users)
  std::vector<std::optional<std::size_t>> decode_iteration;
  /// Clean packets per block at the iteration the block decoded (minimum over
  /// blocks); for undecoded users, the count at the fixpoint.
  std::vector<std::size_t> t_counts;
  /// Largest slot count from block start to decode, per user.
  std::vector<std::optional<std::int64_t>> decode_delays;
  std::vector<Rational> decoded_per_period;  ///< source packets per period
  std::vector<std::vector<SourceBlock>> decoded_sources;

  /// Decoded users ordered by iteration (ties by index).
  std::vector<std::size_t> decode_order() const {
    std::vector<std::size_t> users;
    for (std::size_t u = 0; u < decode_iteration.size(); ++u)
      if (decode_iteration[u]) users.push_back(u);
    std::stable_sort(users.begin(), users.end(),
                     [&](std::size_t a, std::size_t b) { return *decode_iteration[a] < *decode_iteration[b]; });
    return users;
  }

  friend bool operator==(const SicReport&, const SicReport&) = default;
};

namespace detail {

inline SicReport run_sic(const ChannelTrace& trace, std::span<const UserConfig> users,
                         std::span<const std::size_t> shifts) {
  const auto M = users.size();
  const auto L = trace.period;
  const auto N = trace.slots.size();
  const auto W = trace.periods;
  const auto layout = make_layout(users, shifts, N);

  // packet id = packet_base[u] + block * n_u + position; block id = u * W + block
  std::vector<std::size_t> packet_base(M + 1, 0);
  for (std::size_t u = 0; u < M; ++u) packet_base[u + 1] = packet_base[u] + W * users[u].coding.n;
  const auto packet_count = packet_base[M];
  auto pid = [&](const Contribution& c) { return packet_base[c.user] + c.block * users[c.user].coding.n + c.position; };
  auto bid = [&](const Contribution& c) { return c.user * W + c.block; };

  std::vector<std::size_t> slot_of(packet_count, 0);
  std::vector<std::int64_t> unwrapped(packet_count, 0);
  std::vector<std::size_t> clean_iter(packet_count, 0);
  std::vector<std::uint32_t> remaining(N, 0);
  for (std::size_t t = 0; t < N; ++t) {
    const auto who = layout.at(t);
    remaining[t] = static_cast<std::uint32_t>(who.size());
    for (const auto& c : who) {
      const auto p = pid(c);
      slot_of[p] = t;
      unwrapped[p] = static_cast<std::int64_t>(shifts[c.user] + (t + N - shifts[c.user]) % N);
    }
  }

  constexpr auto kNever = std::numeric_limits<std::int64_t>::max();
  std::vector<std::size_t> decoded_iter(M * W, 0);
  std::vector<std::int64_t> decode_time(M * W, kNever);
  std::vector<std::size_t> clean_count(M * W, 0);
  std::vector<Packet> residual;
  std::vector<ErasureCoder> coders;
  if (trace.concrete) {
    residual.reserve(N);
    for (const auto& s : trace.slots) residual.push_back(s.signal);
    for (const auto& u : users) coders.emplace_back(u.coding);
  }

  SicReport report;
  report.shifts.assign(shifts.begin(), shifts.end());
  report.decoded_blocks.assign(M, 0);
  report.total_blocks.assign(M, 0);
  report.decode_iteration.assign(M, std::nullopt);
  report.t_counts.assign(M, 0);
  report.decode_delays.assign(M, std::nullopt);
  report.decoded_sources.assign(M, {});
  for (std::size_t u = 0; u < M; ++u)
    if (users[u].coding.n > 0) report.total_blocks[u] = W;

  struct Pending {
    std::size_t user;
    std::size_t block;
    std::vector<std::size_t> positions;
    CodedBlock regenerated;
  };

  for (std::size_t k = 1;; ++k) {
    for (std::size_t t = 0; t < N; ++t) {
      if (remaining[t] != 1) continue;
      for (const auto& c : layout.at(t)) {
        if (decoded_iter[bid(c)] != 0) continue;
        const auto p = pid(c);
        if (clean_iter[p] == 0) {
          clean_iter[p] = k;
          ++clean_count[bid(c)];
        }
        break;
      }
    }

    std::vector<Pending> pending;
    for (std::size_t u = 0; u < M; ++u) {
      const auto& coding = users[u].coding;
      if (coding.n == 0) continue;
      for (std::size_t b = 0; b < W; ++b) {
        const auto block = u * W + b;
        if (decoded_iter[block] != 0 || clean_count[block] < coding.m) continue;

        // ready time of each clean packet, in this block's unwrapped clock
        std::vector<std::pair<std::int64_t, std::size_t>> ready;
        for (std::size_t pos = 0; pos < coding.n; ++pos) {
          const auto p = packet_base[u] + b * coding.n + pos;
          if (clean_iter[p] == 0) continue;
          std::int64_t when = unwrapped[p] + 1;
          for (const auto& other : layout.at(slot_of[p])) {
            if (other.user == u) continue;
            const auto q = pid(other);
            when = std::max(when, decode_time[bid(other)] + (unwrapped[p] - unwrapped[q]));
          }
          ready.emplace_back(when, pos);
        }
        std::sort(ready.begin(), ready.end());
        ready.resize(coding.m);
        const auto start = static_cast<std::int64_t>(shifts[u] + b * L);
        decode_time[block] = coding.m == 0 ? start : ready.back().first;

        Pending job{u, b, {}, {}};
        for (const auto& r : ready) job.positions.push_back(r.second);
        if (trace.concrete) {
          std::vector<CodedPacket> received;
          for (auto pos : job.positions) received.push_back({pos, residual[slot_of[packet_base[u] + b * coding.n + pos]]});
          auto source = coders[u].decode(received, b);
          job.regenerated = coders[u].reencode_from_source(source);
          report.decoded_sources[u].push_back(std::move(source));
        } else {
          report.decoded_sources[u].push_back(SourceBlock{b, {}, true});
        }
        pending.push_back(std::move(job));
      }
    }
    if (pending.empty()) break;

    for (auto& job : pending) {
      const auto& coding = users[job.user].coding;
      const auto block = job.user * W + job.block;
      decoded_iter[block] = k;
      for (std::size_t pos = 0; pos < coding.n; ++pos) {
        const auto t = slot_of[packet_base[job.user] + job.block * coding.n + pos];
        --remaining[t];
        if (trace.concrete) {
          const auto& payload = job.regenerated.packets[pos].payload;
          for (std::size_t i = 0; i < payload.size(); ++i) residual[t][i] ^= payload[i];
        }
      }
      if (report.iterations.empty() || report.iterations.back().iteration != k ||
          report.iterations.back().user != job.user) {
        report.iterations.push_back({k, job.user, {}});
      }
      report.iterations.back().blocks.push_back({job.block, std::move(job.positions)});
    }
  }

  report.success = true;
  for (std::size_t u = 0; u < M; ++u) {
    const auto& coding = users[u].coding;
    auto& sources = report.decoded_sources[u];
    std::sort(sources.begin(), sources.end(),
              [](const SourceBlock& a, const SourceBlock& b) { return a.block_id < b.block_id; });
    if (coding.n == 0) {
      report.decoded_per_period.emplace_back(0);
      continue;
    }
    std::size_t min_clean = std::numeric_limits<std::size_t>::max();
    std::size_t last_iter = 0;
    std::int64_t worst_delay = 0;
    for (std::size_t b = 0; b < W; ++b) {
      const auto block = u * W + b;
      min_clean = std::min(min_clean, clean_count[block]);
      if (decoded_iter[block] == 0) continue;
      ++report.decoded_blocks[u];
      last_iter = std::max(last_iter, decoded_iter[block]);
      worst_delay = std::max(worst_delay, decode_time[block] - static_cast<std::int64_t>(shifts[u] + b * L));
    }
    report.t_counts[u] = min_clean;
    if (report.decoded_blocks[u] == W) {
      report.decode_iteration[u] = last_iter;
      report.decode_delays[u] = worst_delay;
    } else {
      report.success = false;
    }
    report.decoded_per_period.emplace_back(
        static_cast<std::int64_t>(report.decoded_blocks[u] * coding.m), static_cast<std::int64_t>(W));
  }
  return report;
}

inline void check_trace(const ChannelTrace& trace, std::span<const UserConfig> users) {
  validate_users(users);
  if (users.size() != trace.users || users.front().sequence.period() != trace.period ||
      trace.slots.size() != trace.period * trace.periods || trace.periods == 0)
    throw ConfigError("user configuration does not match the trace");
  if (trace.concrete)
    for (const auto& u : users)
      if (u.coding.n > kMaxConcreteBlockLength)
        throw FieldCapacityError("concrete coding supports n <= 255, got n=" + std::to_string(u.coding.n));
}

}  // namespace detail

inline SequenceSet sequence_set_of(std::span<const UserConfig> users) {
  std::vector<BinarySequence> seqs;
  seqs.reserve(users.size());
  for (const auto& u : users) seqs.push_back(u.sequence);
  return SequenceSet(std::move(seqs));
}

/// Runs the receiver with attribution from an explicit shift vector.
inline SicReport sic_receive_with_shifts(const ChannelTrace& trace, std::span<const UserConfig> users,
                                         std::span<const std::size_t> shifts) {
  detail::check_trace(trace, users);
  if (shifts.size() != users.size()) throw ConfigError("need one shift per user");
  for (auto s : shifts)
    if (s >= trace.period) throw ConfigError("shift must lie in [0, L)");
  return detail::run_sic(trace, users, shifts);
}

/// Genie mode reads the shifts from `users`; blind mode identifies them from
/// the trace's kind pattern and throws AmbiguousIdentification unless exactly
/// one shift vector fits.
inline SicReport sic_receive(const ChannelTrace& trace, std::span<const UserConfig> users,
                             SicMode mode = SicMode::genie, std::uint64_t budget = kDefaultWorkBudget) {
  detail::check_trace(trace, users);
  if (mode == SicMode::genie) return detail::run_sic(trace, users, detail::shifts_of(users));
  const auto kinds = trace.kinds();
  auto candidates = identify_shifts(kinds, sequence_set_of(users), budget);
  if (candidates.size() != 1) throw AmbiguousIdentification(std::move(candidates));
  return detail::run_sic(trace, users, candidates.front());
}

}  // namespace collide_sic
