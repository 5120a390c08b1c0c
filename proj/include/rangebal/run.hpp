#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rangebal/balancer.hpp"
#include "rangebal/checker.hpp"
#include "rangebal/directory.hpp"
#include "rangebal/events.hpp"
#include "rangebal/keyspace.hpp"
#include "rangebal/metrics.hpp"
#include "rangebal/rational.hpp"
#include "rangebal/workload.hpp"

namespace rangebal {

// Rejected configuration. The message names the violated constraint; the CLI
// maps this to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
  Rational alpha = Rational(547, 100);
  std::optional<Rational> beta;    // default: 3(alpha + 2) / alpha
  std::optional<Rational> cost_c;  // default: derived when alpha admits one
  std::uint64_t c0 = 4;
  Mode mode = Mode::general;
  std::size_t nodes = 64;
  std::uint64_t ops = 10000;
  DirectoryMode directory = DirectoryMode::centralized;
  WorkloadSpec workload;
};

Rational default_beta(const Rational& alpha);

// Thresholds from the run config; beta falls back to its alpha-derived
// default. Does not validate.
BalanceConfig balance_config(const RunConfig& cfg);

// Cost constant for potential accounting. An explicit c must pass its gates
// (ConfigError otherwise); without one, the default is derived when alpha is
// large enough, else accounting is off and the trace carries c = 1.
struct CostResolution {
  Rational c = 1;
  bool accounting = false;
};
CostResolution resolve_cost_constant(const RunConfig& cfg, const BalanceConfig& bc);

struct RunResult {
  std::vector<EventRecord> trace;
  std::vector<Operation> operations;
  CostLedger ledger;
  Summary summary;
  SystemState state;  // final
  BalanceConfig config;
  CostResolution cost;
};

// Seeded initial state, workload stream, balancing engine, full trace.
// Throws ConfigError when any threshold rejects the configuration.
RunResult run_experiment(const RunConfig& cfg);

// The whole offline battery against a recorded trace. Potential accounting is
// reported inapplicable when cfg resolves to no usable cost constant.
std::vector<CheckReport> verify_trace(const std::vector<EventRecord>& trace,
                                      const RunConfig& cfg);

struct SweepRow {
  Rational alpha;
  bool accepted = false;
  std::string reason;  // violated constraint when rejected
  Summary summary;
};

// Re-runs the base config once per alpha, same seed throughout. Rejected
// alphas produce a marked row instead of aborting the sweep.
std::vector<SweepRow> sweep(const RunConfig& base, const std::vector<Rational>& alphas);
std::string sweep_csv(const std::vector<SweepRow>& rows);

std::string report_text(const Summary& s);

// Flat key=value file, one pair per line, '#' comments. Returns pairs in file
// order; key vocabulary is the flag layer's concern.
std::vector<std::pair<std::string, std::string>> parse_kv_file(const std::string& path);

}  // namespace rangebal
