#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rangebal/directory.hpp"
#include "rangebal/events.hpp"
#include "rangebal/keyspace.hpp"
#include "rangebal/metrics.hpp"
#include "rangebal/rational.hpp"

namespace rangebal {

// insert_only admits the smaller alpha floor; general also constrains beta.
enum class Mode { insert_only, general };

struct BalanceConfig {
  Rational alpha = Rational(547, 100);
  Rational beta = Rational(2241, 547);  // 3(alpha+2)/alpha for the default alpha
  std::uint64_t c0 = 4;
  Mode mode = Mode::general;
};

// Threshold gates, checked in exact arithmetic. Empty = acceptable.
std::vector<std::string> validate(const BalanceConfig& config);

// Gates for potential-based cost accounting with constant c.
std::vector<std::string> validate_cost_constant(const BalanceConfig& config,
                                                const Rational& c);

// Largest of the three lower bounds on c. Throws ConfigThresholdError when
// alpha is too small for the bound to exist.
Rational min_cost_bound(const BalanceConfig& config);

// Smallest integer strictly above min_cost_bound.
Rational default_cost_constant(const BalanceConfig& config);

struct ConfigThresholdError : std::runtime_error {
  explicit ConfigThresholdError(const std::string& what) : std::runtime_error(what) {}
};

struct StepCharges {
  std::uint32_t queries = 0;
  std::uint32_t nbr_adjusts = 0;
  std::uint32_t reorders = 0;
  std::uint32_t partition_changes = 0;
  std::uint32_t contacts = 0;
  std::uint64_t messages = 0;
};

struct BalanceResult {
  BalanceOutcome outcome;
  StepCharges charges;
};

// Drives the rebalancing decision procedures against one state, pushing every
// mutation into the directory, ledger, and potential tracker as it happens.
class Engine {
 public:
  Engine(SystemState& state, const BalanceConfig& config, Directory& directory,
         CostLedger& ledger, PotentialTracker* phi = nullptr);

  // Route + store, then run the post-insert decision procedure. The returned
  // record has everything filled except seq and phase.
  EventRecord insert(Key k);

  // Locate + remove, then run the post-delete decision procedure.
  EventRecord erase(Key k);

  // Post-insert steps for the node at u_pos. Always issues exactly one
  // load-information query; moves keys only when L(u) > alpha * Min.
  BalanceResult min_balance(std::size_t u_pos);

  // Post-delete steps for the node at u_pos. Always issues exactly one
  // load-information query; moves keys only when L(u) <= Max / beta.
  BalanceResult split(std::size_t u_pos);

  const SystemState& state() const { return state_; }

 private:
  void absorb(const MutationEffect& effect, StepCharges& charges);
  EventRecord run_op(OpKind kind, Key k);

  SystemState& state_;
  const BalanceConfig& config_;
  Directory& directory_;
  CostLedger& ledger_;
  PotentialTracker* phi_;
};

}  // namespace rangebal
