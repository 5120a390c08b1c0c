#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rangebal/events.hpp"
#include "rangebal/keyspace.hpp"
#include "rangebal/rational.hpp"

namespace rangebal {

struct CostLedger {
  std::uint64_t data_movement = 0;
  std::uint64_t partition_changes = 0;
  std::uint64_t load_info_queries = 0;
  std::uint64_t messages = 0;
};

struct EmptySystemError : std::runtime_error {
  explicit EmptySystemError(const std::string& what) : std::runtime_error(what) {}
};

// Phi = c * (sum of squared loads) / mean load, kept exact.
Rational potential(const SystemState& state, const Rational& c);

// Incremental view of the potential; value() must agree with a from-scratch
// recount after every event.
class PotentialTracker {
 public:
  PotentialTracker(const SystemState& state, Rational c);

  void apply(const MutationEffect& effect);
  Rational value() const;
  Rational recompute(const SystemState& state) const;
  const Rational& cost_constant() const { return c_; }

 private:
  Rational c_;
  Integer sum_sq_ = 0;
  std::uint64_t total_ = 0;
  std::size_t n_ = 0;
};

// Phase counter: a new phase begins exactly when the minimum load drops.
class PhaseTracker {
 public:
  explicit PhaseTracker(std::uint64_t initial_min) : last_min_(initial_min) {}

  bool observe(std::uint64_t post_min) {
    const bool transition = post_min < last_min_;
    if (transition) ++phase_;
    last_min_ = post_min;
    return transition;
  }
  std::uint64_t phase() const { return phase_; }

 private:
  std::uint64_t phase_ = 1;
  std::uint64_t last_min_;
};

struct TraceOrderError : std::runtime_error {
  explicit TraceOrderError(const std::string& what) : std::runtime_error(what) {}
};

// Append-only event log; enforces contiguous seq numbering and stamps the
// phase id as events arrive.
class TraceLog {
 public:
  void record(EventRecord rec, PhaseTracker& phases);
  const std::vector<EventRecord>& records() const { return records_; }

 private:
  std::vector<EventRecord> records_;
};

struct Summary {
  std::uint64_t ops = 0;
  double max_ratio = 0.0;
  double moved_per_op = 0.0;
  double msgs_per_op = 0.0;
  double partition_changes_per_op = 0.0;
  std::uint64_t phases = 1;
  std::uint64_t inserts = 0;
  std::uint64_t deletes = 0;
  std::uint64_t min_balances = 0;
  std::uint64_t split_maxes = 0;
  std::uint64_t split_nbrs = 0;
  std::uint64_t untriggered = 0;
};

Summary summarize(const std::vector<EventRecord>& records);

std::string summary_csv_header();
std::string summary_csv_row(const Summary& s);

}  // namespace rangebal
