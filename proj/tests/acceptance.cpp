// Acceptance battery. Each criterion prints exactly one [PASS]/[FAIL] line;
// the process exits nonzero when anything fails. Every numeric claim below is
// re-derived here in exact arithmetic rather than trusted from the library's
// own checkers, so a bug has to fool two independent computations to slip
// through.

#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rangebal/checker.hpp"
#include "rangebal/run.hpp"
#include "rangebal/workload.hpp"

using namespace rangebal;

namespace {

std::string str(const Rational& r) {
  std::ostringstream out;
  out << r;
  return out.str();
}

// One live system plus everything the engine feeds. Criteria drive this step
// by step so they can interleave their own state inspections.
struct Sim {
  WorkloadGenerator gen;
  SystemState state;
  Directory directory;
  CostLedger ledger;
  std::optional<PotentialTracker> phi;
  Engine engine;
  PhaseTracker phases;
  TraceLog log;

  Sim(const BalanceConfig& bc, const WorkloadSpec& spec, std::uint32_t nodes,
      DirectoryMode mode = DirectoryMode::centralized,
      const Rational* c = nullptr)
      : gen(spec),
        state(SystemState::initial(nodes, bc.c0, spec.seed)),
        directory(state, mode),
        phi(c ? std::optional<PotentialTracker>(PotentialTracker(state, *c))
              : std::nullopt),
        engine(state, bc, directory, ledger, phi ? &*phi : nullptr),
        phases(state.min_load()) {}

  const EventRecord& step(std::uint64_t i) {
    const Operation op = gen.next(state);
    EventRecord rec =
        op.kind == OpKind::insert ? engine.insert(op.key) : engine.erase(op.key);
    rec.seq = i + 1;
    log.record(rec, phases);
    return log.records().back();
  }
};

BalanceConfig headline_config() {
  BalanceConfig bc;
  bc.alpha = Rational(547, 100);
  bc.beta = 3 * (bc.alpha + 2) / bc.alpha;  // 2241/547
  bc.c0 = 4;
  bc.mode = Mode::general;
  return bc;
}

std::string validate_now(const SystemState& state, std::uint64_t op_index) {
  const std::vector<std::string> issues = validate_partition(state);
  if (issues.empty()) return "";
  return "partition invalid at op " + std::to_string(op_index) + ": " +
         issues.front();
}

// Traces and validation outcomes shared across criteria.
struct Stash {
  std::vector<EventRecord> t1, t2, t3;
  std::vector<std::string> partition_issues;  // criteria 1-3 and 6
  bool c1 = false, c2 = false, c3 = false, c6 = false;
};
Stash stash;

std::string criterion_imbalance() {
  const BalanceConfig bc = headline_config();
  WorkloadSpec spec;
  spec.kind = WorkloadKind::mixed;
  spec.p_delete = 0.3;
  spec.seed = 42;

  const auto t0 = std::chrono::steady_clock::now();
  Sim sim(bc, spec, 64);
  Rational worst = 0;  // max over events of (Max - c0) / Min while Min >= 1
  for (std::uint64_t i = 0; i < 100000; ++i) {
    const EventRecord& rec = sim.step(i);
    if (rec.post_min >= 1) {
      const Rational ratio =
          Rational(rec.post_max - bc.c0) / Rational(rec.post_min);
      if (ratio > worst) worst = ratio;
    }
    if ((i + 1) % 100 == 0) {
      const std::string bad = validate_now(sim.state, i + 1);
      if (!bad.empty()) stash.partition_issues.push_back(bad);
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  stash.t1 = sim.log.records();
  stash.c1 = true;

  const CheckReport rep = check_imbalance(stash.t1, bc);
  if (!rep.pass) return "imbalance check failed: " + rep.detail;
  if (!(worst <= Rational(747, 100)))
    return "max ratio " + str(worst) + " above 747/100";
  if (secs >= 30.0) return "run took " + std::to_string(secs) + " s";
  return "";
}

std::string criterion_insert_only() {
  BalanceConfig bc;
  bc.alpha = Rational(33, 10);
  bc.mode = Mode::insert_only;
  bc.c0 = 4;
  WorkloadSpec spec;
  spec.kind = WorkloadKind::insert_only;
  spec.seed = 7;

  Sim sim(bc, spec, 64);
  for (std::uint64_t i = 0; i < 100000; ++i) {
    const EventRecord& rec = sim.step(i);
    // Post-insert load bound, exact: 10 * L(u) <= 33 * Min.
    if (!(Rational(rec.balance.u->load_post) * 10 <=
          Rational(rec.post_min) * 33))
      return "post-insert load " + std::to_string(rec.balance.u->load_post) +
             " above 33/10 * " + std::to_string(rec.post_min) + " at op " +
             std::to_string(i + 1);
    const std::string bad = validate_now(sim.state, i + 1);
    if (!bad.empty()) stash.partition_issues.push_back(bad);
  }

  stash.t2 = sim.log.records();
  stash.c2 = true;

  const CheckReport mono = check_min_monotone(stash.t2);
  if (!mono.applicable) return "monotonicity check thought it saw deletes";
  if (!mono.pass) return "minimum dropped: " + mono.detail;
  const CheckReport post = check_post_mutation_bounds(stash.t2, bc);
  if (!post.pass) return "post-mutation check failed: " + post.detail;
  return "";
}

std::string criterion_potential() {
  BalanceConfig bc;
  bc.alpha = Rational(6);
  bc.beta = Rational(4);
  bc.c0 = 4;
  const Rational c(145);
  WorkloadSpec spec;
  spec.kind = WorkloadKind::mixed;
  spec.p_delete = 0.3;
  spec.seed = 11;

  const Rational insert_cap = c * (2 * bc.alpha + 5);        // 2465
  const Rational delete_cap = 2 * c * (bc.alpha + 2) * (bc.alpha + 2);  // 18560
  if (insert_cap != Rational(2465) || delete_cap != Rational(18560))
    return "cap arithmetic drifted";

  Sim sim(bc, spec, 32, DirectoryMode::centralized, &c);
  Rational phi_prev = c * 32 * bc.c0;  // all loads equal at the start
  std::uint64_t moved_total = 0;
  for (std::uint64_t i = 0; i < 20000; ++i) {
    const EventRecord& rec = sim.step(i);
    moved_total += rec.keys_moved;

    if (sim.phi->value() != potential(sim.state, c))
      return "incremental potential diverged from scratch at op " +
             std::to_string(i + 1);
    if (rec.phi != sim.phi->value())
      return "recorded potential out of step at op " + std::to_string(i + 1);

    if (rec.pre_min >= 1 && rec.post_min >= 1) {
      const Rational gain = rec.phi_mid - phi_prev;
      const Rational cap = rec.kind == OpKind::insert ? insert_cap : delete_cap;
      if (!(gain <= cap))
        return "mutation gain " + str(gain) + " above " + str(cap) +
               " at op " + std::to_string(i + 1);
      if (rec.balance.kind != BalanceKind::none &&
          !(rec.phi_mid - rec.phi >= Rational(rec.keys_moved)))
        return "balancing drop below keys moved at op " + std::to_string(i + 1);
    }
    phi_prev = rec.phi;

    const std::string bad = validate_now(sim.state, i + 1);
    if (!bad.empty()) stash.partition_issues.push_back(bad);
  }

  stash.t3 = sim.log.records();
  stash.c3 = true;

  const CheckReport rep = check_potential_accounting(stash.t3, bc, c, 32);
  if (!rep.pass) return "accounting check failed: " + rep.detail;
  const double moved_per_op = static_cast<double>(moved_total) / 20000.0;
  if (!(moved_per_op < 50.0))
    return "average keys moved per op " + std::to_string(moved_per_op);
  return "";
}

std::string criterion_single_invocation() {
  if (!stash.c1 || !stash.c2 || !stash.c3)
    return "prerequisite traces unavailable";
  for (const auto* trace : {&stash.t1, &stash.t2, &stash.t3}) {
    const CheckReport rep = check_single_invocation(*trace);
    if (!rep.pass) return rep.detail + " at seq " +
                          std::to_string(*rep.failing_seq);
    // Belt and braces: recount the primitive budget by hand.
    for (const EventRecord& rec : *trace) {
      if (rec.queries != 1)
        return "event " + std::to_string(rec.seq) + " issued " +
               std::to_string(rec.queries) + " queries";
      if (rec.nbr_adjusts > 1 || rec.reorders > 1)
        return "event " + std::to_string(rec.seq) + " reused a primitive";
    }
  }
  return "";
}

std::string criterion_phase_starts() {
  const BalanceConfig bc = headline_config();
  WorkloadSpec spec;
  spec.kind = WorkloadKind::adversarial;
  spec.seed = 5;

  Sim sim(bc, spec, 64);
  std::uint64_t prev_min = sim.state.min_load();
  std::uint64_t transitions = 0;
  for (std::uint64_t i = 0; i < 50000; ++i) {
    const EventRecord& rec = sim.step(i);
    if (rec.post_min < prev_min) {
      ++transitions;
      // The ratio claim is exact where the minimum survives; a transition
      // into a zero minimum is bounded by the structural rules instead.
      if (rec.post_min >= 1 &&
          !(Rational(rec.post_max) < bc.beta * rec.post_min))
        return "transition at op " + std::to_string(i + 1) + " has ratio " +
               std::to_string(rec.post_max) + "/" +
               std::to_string(rec.post_min);
    }
    prev_min = rec.post_min;
  }

  const CheckReport rep = check_phase_start(sim.log.records(), bc);
  if (!rep.pass) return "phase-start check failed: " + rep.detail;
  if (transitions < 10)
    return "only " + std::to_string(transitions) + " phase transitions";
  return "";
}

std::string criterion_oracle() {
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    RunConfig rc;
    rc.nodes = 2 + static_cast<std::uint32_t>(seed % 7);  // 2..8
    rc.ops = 50 + seed % 151;                             // 50..200
    rc.workload.seed = seed;
    const RunResult res = run_experiment(rc);

    ReplaySetup setup;
    setup.nodes = rc.nodes;
    setup.c0 = rc.c0;
    setup.seed = seed;
    setup.config = res.config;
    const ReplayResult rr = oracle_replay(res.operations, setup);
    if (rr.diverged)
      return "seed " + std::to_string(seed) + " diverged at op " +
             std::to_string(rr.first_divergent_seq) + ": " + rr.detail;

    const std::string bad = validate_now(rr.state, res.operations.size());
    if (!bad.empty())
      stash.partition_issues.push_back("replica seed " + std::to_string(seed) +
                                       ": " + bad);
  }
  stash.c6 = true;
  return "";
}

std::string criterion_partition_consistency() {
  if (!stash.c1 || !stash.c2 || !stash.c3 || !stash.c6)
    return "prerequisite runs unavailable";
  if (!stash.partition_issues.empty()) return stash.partition_issues.front();
  return "";
}

std::string criterion_thresholds() {
  auto has = [](const std::vector<std::string>& issues, const char* needle) {
    for (const std::string& s : issues)
      if (s.find(needle) != std::string::npos) return true;
    return false;
  };

  BalanceConfig bc;
  bc.mode = Mode::general;
  bc.c0 = 4;

  bc.alpha = Rational(437, 100);
  bc.beta = Rational(4);
  if (!has(validate(bc), "alpha below (3+sqrt(33))/2"))
    return "alpha 437/100 slipped through";
  bc.alpha = Rational(438, 100);
  bc.beta = 3 * (bc.alpha + 2) / bc.alpha;  // 4 would sit above this alpha
  if (!validate(bc).empty()) return "alpha 438/100 rejected";

  bc.alpha = Rational(546, 100);
  bc.beta = 3 * (bc.alpha + 2) / bc.alpha;
  try {
    default_cost_constant(bc);
    return "cost constant granted at alpha 546/100";
  } catch (const ConfigThresholdError&) {
  }
  bc.alpha = Rational(547, 100);
  bc.beta = 3 * (bc.alpha + 2) / bc.alpha;
  try {
    const Rational c = default_cost_constant(bc);
    if (!validate_cost_constant(bc, c).empty())
      return "derived cost constant fails its own gates";
  } catch (const ConfigThresholdError& e) {
    return std::string("alpha 547/100 rejected: ") + e.what();
  }

  bc.alpha = Rational(6);
  bc.beta = Rational(3);
  if (!has(validate(bc), "beta not above 3")) return "beta 3 slipped through";
  bc.beta = Rational(61, 10);
  if (!has(validate(bc), "beta above alpha"))
    return "beta above alpha slipped through";
  bc.beta = Rational(4);
  if (!validate(bc).empty()) return "alpha 6, beta 4 rejected";
  return "";
}

std::string criterion_messages() {
  const BalanceConfig bc = headline_config();
  WorkloadSpec spec;
  spec.kind = WorkloadKind::mixed;
  spec.p_delete = 0.3;
  spec.seed = 3;

  Sim sim(bc, spec, 1024, DirectoryMode::overlay);
  std::uint64_t queries = 0, changes = 0, contacts = 0, messages = 0;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const EventRecord& rec = sim.step(i);
    // ceil(log2 1024) = 10 per query and per partition change, 1 per contact.
    const std::uint64_t expect =
        10 * (rec.queries + rec.partition_changes) + rec.contacts;
    if (rec.messages != expect)
      return "op " + std::to_string(i + 1) + " charged " +
             std::to_string(rec.messages) + " messages, recount " +
             std::to_string(expect);
    queries += rec.queries;
    changes += rec.partition_changes;
    contacts += rec.contacts;
    messages += rec.messages;
  }

  if (queries != 10000) return "query total " + std::to_string(queries);
  if (messages != 10 * (queries + changes) + contacts)
    return "aggregate recount mismatch";
  if (sim.ledger.messages != messages || sim.ledger.load_info_queries != queries)
    return "ledger disagrees with the trace";

  const CheckReport rep =
      check_message_recount(sim.log.records(), DirectoryMode::overlay, 1024);
  if (!rep.pass) return "recount check failed: " + rep.detail;
  return "";
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<std::string()> body;
  };
  const std::vector<Criterion> battery = {
      {"imbalance bound", criterion_imbalance},
      {"insert-only monotonicity", criterion_insert_only},
      {"potential accounting", criterion_potential},
      {"single invocation", criterion_single_invocation},
      {"phase starts", criterion_phase_starts},
      {"oracle equivalence", criterion_oracle},
      {"partition consistency", criterion_partition_consistency},
      {"threshold gates", criterion_thresholds},
      {"message cost model", criterion_messages},
  };

  int failures = 0;
  for (const Criterion& crit : battery) {
    std::string detail;
    try {
      detail = crit.body();
    } catch (const std::exception& e) {
      detail = std::string("unexpected exception: ") + e.what();
    }
    if (detail.empty()) {
      std::printf("[PASS] %s\n", crit.name);
    } else {
      std::printf("[FAIL] %s: %s\n", crit.name, detail.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
