#include "rangebal/run.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace rangebal {
namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

std::string trim(const std::string& s) {
  const std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Rational default_beta(const Rational& alpha) {
  return Rational(3) * (alpha + 2) / alpha;
}

BalanceConfig balance_config(const RunConfig& cfg) {
  BalanceConfig bc;
  bc.alpha = cfg.alpha;
  bc.beta = cfg.beta ? *cfg.beta : default_beta(cfg.alpha);
  bc.c0 = cfg.c0;
  bc.mode = cfg.mode;
  return bc;
}

CostResolution resolve_cost_constant(const RunConfig& cfg, const BalanceConfig& bc) {
  if (cfg.cost_c) {
    if (auto viol = validate_cost_constant(bc, *cfg.cost_c); !viol.empty()) {
      throw ConfigError(join(viol));
    }
    return {*cfg.cost_c, true};
  }
  try {
    return {default_cost_constant(bc), true};
  } catch (const ConfigThresholdError&) {
    return {Rational(1), false};  // accounting bounds undefined at this alpha
  }
}

RunResult run_experiment(const RunConfig& cfg) {
  BalanceConfig bc = balance_config(cfg);
  if (auto viol = validate(bc); !viol.empty()) throw ConfigError(join(viol));
  const CostResolution cost = resolve_cost_constant(cfg, bc);
  if (cfg.nodes < 2) throw ConfigError("node count below 2");
  if (cfg.c0 < 1) throw ConfigError("c0 below 1");

  std::optional<WorkloadGenerator> gen;
  try {
    gen.emplace(cfg.workload);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  SystemState state = SystemState::initial(cfg.nodes, cfg.c0, cfg.workload.seed);
  Directory directory(state, cfg.directory);
  CostLedger ledger;
  PotentialTracker phi(state, cost.c);
  Engine engine(state, bc, directory, ledger, &phi);
  PhaseTracker phases(state.min_load());
  TraceLog log;
  std::vector<Operation> operations;
  operations.reserve(cfg.ops);

  for (std::uint64_t i = 0; i < cfg.ops; ++i) {
    const Operation op = gen->next(state);
    operations.push_back(op);
    EventRecord rec =
        op.kind == OpKind::insert ? engine.insert(op.key) : engine.erase(op.key);
    rec.seq = i + 1;
    log.record(std::move(rec), phases);
  }

  return RunResult{log.records(),          std::move(operations), ledger,
                   summarize(log.records()), std::move(state),      bc,
                   cost};
}

std::vector<CheckReport> verify_trace(const std::vector<EventRecord>& trace,
                                      const RunConfig& cfg) {
  BalanceConfig bc = balance_config(cfg);
  if (auto viol = validate(bc); !viol.empty()) throw ConfigError(join(viol));
  const CostResolution cost = resolve_cost_constant(cfg, bc);

  std::vector<CheckReport> out;
  out.push_back(check_event_consistency(trace));
  out.push_back(check_single_invocation(trace));
  out.push_back(check_imbalance(trace, bc));
  out.push_back(check_post_mutation_bounds(trace, bc));
  out.push_back(check_transfer_bounds(trace, bc));
  out.push_back(check_phase_start(trace, bc));
  out.push_back(check_message_recount(trace, cfg.directory, cfg.nodes));
  out.push_back(check_min_monotone(trace));
  if (cost.accounting) {
    out.push_back(check_potential_accounting(trace, bc, cost.c, cfg.nodes));
  } else {
    CheckReport skip;
    skip.name = "potential_accounting";
    skip.applicable = false;
    skip.detail = "no admissible cost constant for this configuration";
    out.push_back(skip);
  }
  return out;
}

std::vector<SweepRow> sweep(const RunConfig& base, const std::vector<Rational>& alphas) {
  std::vector<SweepRow> rows;
  rows.reserve(alphas.size());
  for (const Rational& a : alphas) {
    RunConfig cfg = base;
    cfg.alpha = a;  // beta re-derives per alpha unless base pinned it
    SweepRow row;
    row.alpha = a;
    try {
      row.summary = run_experiment(cfg).summary;
      row.accepted = true;
    } catch (const ConfigError& e) {
      row.reason = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "alpha,status," + summary_csv_header() + "\n";
  for (const auto& row : rows) {
    out += rational_str(row.alpha);
    if (row.accepted) {
      out += ",ok," + summary_csv_row(row.summary);
    } else {
      out += ",rejected,,,,,,";
    }
    out += "\n";
  }
  return out;
}

std::string report_text(const Summary& s) {
  std::ostringstream out;
  out << "ops: " << s.ops << "\n"
      << "inserts: " << s.inserts << "\n"
      << "deletes: " << s.deletes << "\n"
      << "min_balance: " << s.min_balances << "\n"
      << "split_max: " << s.split_maxes << "\n"
      << "split_nbr: " << s.split_nbrs << "\n"
      << "untriggered: " << s.untriggered << "\n"
      << "phases: " << s.phases << "\n";
  char buf[192];
  std::snprintf(buf, sizeof buf,
                "max_ratio: %.6f\nmoved_per_op: %.6f\nmsgs_per_op: %.6f\n"
                "partition_changes_per_op: %.6f\n",
                s.max_ratio, s.moved_per_op, s.msgs_per_op,
                s.partition_changes_per_op);
  out << buf;
  return out.str();
}

std::vector<std::pair<std::string, std::string>> parse_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const std::size_t eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key=value");
    }
    const std::string key = trim(body.substr(0, eq));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    }
    pairs.emplace_back(key, trim(body.substr(eq + 1)));
  }
  return pairs;
}

}  // namespace rangebal
