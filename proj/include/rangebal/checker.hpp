#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rangebal/balancer.hpp"
#include "rangebal/directory.hpp"
#include "rangebal/events.hpp"
#include "rangebal/keyspace.hpp"
#include "rangebal/metrics.hpp"
#include "rangebal/rational.hpp"

namespace rangebal {

struct CheckReport {
  std::string name;
  bool applicable = true;
  bool pass = true;
  std::optional<std::uint64_t> failing_seq;
  std::string detail;
};

std::string check_report_json(const CheckReport& report);

// Max <= (alpha+2) * Min + c0. Ratio assertions sit out events where the
// minimum load is below 1; the guarantee has nothing to say there.
CheckReport check_imbalance(const SystemState& state, const BalanceConfig& config);
CheckReport check_imbalance(const std::vector<EventRecord>& trace,
                            const BalanceConfig& config);

// Insert-only traces: the minimum load never drops.
CheckReport check_min_monotone(const std::vector<EventRecord>& trace);

// After each insert, the routed node obeys L(u) <= alpha * Min; after each
// delete that triggered balancing, L(u) > Max / beta.
CheckReport check_post_mutation_bounds(const std::vector<EventRecord>& trace,
                                       const BalanceConfig& config);

// Receiving-side bounds for whole-load hand-offs: the min's neighbor stays
// within (alpha+2) * Min + c0, and both parties of a delete-side move stay
// within alpha * Min + c0.
CheckReport check_transfer_bounds(const std::vector<EventRecord>& trace,
                                  const BalanceConfig& config);

// Exactly one load-information query and at most one balancing block with at
// most one use of each primitive per event.
CheckReport check_single_invocation(const std::vector<EventRecord>& trace);

// keys_moved and the post-balance role loads must match the halving and
// equalizing formulas implied by each balance kind.
CheckReport check_event_consistency(const std::vector<EventRecord>& trace);

// Per-event message totals re-derived from query/partition-change/contact
// counts at the mode's prices.
CheckReport check_message_recount(const std::vector<EventRecord>& trace,
                                  DirectoryMode mode, std::size_t n);

// Potential accounting: insert gain <= c(2 alpha + 5), delete gain <=
// 2c(alpha+2)^2, and every balancing block drops the potential by at least
// the keys it moved. Throws ConfigThresholdError when c fails its gates.
CheckReport check_potential_accounting(const std::vector<EventRecord>& trace,
                                       const BalanceConfig& config,
                                       const Rational& c, std::size_t n);

// Phases open only on non-balancing deletes, and at each opening the ratio
// guarantee tightens to Max < beta * Min.
CheckReport check_phase_start(const std::vector<EventRecord>& trace,
                              const BalanceConfig& config);

struct ReplaySetup {
  std::size_t nodes = 4;
  std::uint64_t c0 = 4;
  std::uint64_t seed = 1;
  BalanceConfig config;
};

struct ReplayResult {
  SystemState state;  // the naive replica's final state
  bool diverged = false;
  std::uint64_t first_divergent_seq = 0;  // 1-based operation index
  std::string detail;
};

// Replays the operation sequence through a deliberately naive second
// implementation (linear scans, list splicing) in lockstep with the engine,
// comparing full states after every operation.
ReplayResult oracle_replay(const std::vector<Operation>& operations,
                           const ReplaySetup& setup);

}  // namespace rangebal
