#include <doctest.h>

#include <vector>

#include "rangebal/checker.hpp"
#include "rangebal/run.hpp"

using namespace rangebal;

namespace {

Node make_node(NodeId id, Boundary lo, Boundary hi, std::vector<Key> keys) {
  Node n;
  n.id = id;
  n.range = {lo, hi};
  n.keys = std::move(keys);
  return n;
}

SystemState with_loads(const std::vector<std::uint64_t>& loads) {
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < loads.size(); ++i) {
    std::vector<Key> keys;
    for (std::uint64_t j = 0; j < loads[i]; ++j) keys.push_back(1000 * i + j);
    const Boundary hi = i + 1 == loads.size() ? Boundary::domain_end()
                                              : Boundary::at(1000 * (i + 1));
    nodes.push_back(make_node(static_cast<NodeId>(i + 1), Boundary::at(1000 * i), hi,
                              std::move(keys)));
  }
  return SystemState::from_nodes(std::move(nodes));
}

BalanceConfig cfg(Rational alpha, Rational beta, std::uint64_t c0) {
  BalanceConfig c;
  c.alpha = alpha;
  c.beta = beta;
  c.c0 = c0;
  return c;
}

// One engine event against a hand-built state; seq is stamped 1.
EventRecord one_event(SystemState st, const BalanceConfig& bc, OpKind kind, Key k,
                      DirectoryMode mode = DirectoryMode::centralized) {
  Directory directory(st, mode);
  CostLedger ledger;
  Engine engine(st, bc, directory, ledger, nullptr);
  EventRecord rec = kind == OpKind::insert ? engine.insert(k) : engine.erase(k);
  rec.seq = 1;
  return rec;
}

EventRecord minbal_event(DirectoryMode mode = DirectoryMode::centralized) {
  return one_event(with_loads({12, 3, 2, 9}), cfg(Rational(5), Rational(4), 4),
                   OpKind::insert, 500, mode);
}
EventRecord splitmax_event() {
  return one_event(with_loads({20, 5, 4, 18}), cfg(Rational(6), Rational(4), 4),
                   OpKind::erase, 2000);
}
EventRecord splitnbr_event() {
  return one_event(with_loads({40, 25, 3}), cfg(Rational(6), Rational(4), 4),
                   OpKind::erase, 2000);
}
EventRecord none_event() {
  return one_event(with_loads({8, 5}), cfg(Rational(6), Rational(4), 4),
                   OpKind::erase, 1000);
}

EventRecord bare(std::uint64_t seq, OpKind kind, BalanceKind bk,
                 std::uint64_t post_min, std::uint64_t post_max) {
  EventRecord rec;
  rec.seq = seq;
  rec.kind = kind;
  rec.balance.kind = bk;
  rec.queries = 1;
  rec.post_min = post_min;
  rec.post_max = post_max;
  return rec;
}

}  // namespace

TEST_CASE("check_report_json shape") {
  CheckReport ok;
  ok.name = "imbalance";
  CHECK(check_report_json(ok) ==
        "{\"check\":\"imbalance\",\"applicable\":true,\"pass\":true,"
        "\"failing_seq\":null,\"detail\":\"\"}");
  CheckReport bad;
  bad.name = "x";
  bad.pass = false;
  bad.failing_seq = 17;
  bad.detail = "d";
  CHECK(check_report_json(bad) ==
        "{\"check\":\"x\",\"applicable\":true,\"pass\":false,"
        "\"failing_seq\":17,\"detail\":\"d\"}");
}

TEST_CASE("imbalance check against a live state") {
  const BalanceConfig c = cfg(Rational(5), Rational(4), 0);
  CHECK(check_imbalance(with_loads({7, 1}), c).pass);  // 7 <= 7*1
  CHECK_FALSE(check_imbalance(with_loads({8, 1}), c).pass);

  CheckReport frozen = check_imbalance(with_loads({50, 0}), c);
  CHECK(frozen.pass);
  CHECK(frozen.detail == "suspended: min load below 1");

  const BalanceConfig slack = cfg(Rational(5), Rational(4), 3);
  CHECK(check_imbalance(with_loads({10, 1}), slack).pass);  // 7*1 + 3
  CHECK_FALSE(check_imbalance(with_loads({11, 1}), slack).pass);
}

TEST_CASE("imbalance check over a trace") {
  const BalanceConfig c = cfg(Rational(5), Rational(4), 0);
  std::vector<EventRecord> trace;
  trace.push_back(bare(1, OpKind::insert, BalanceKind::none, 1, 7));
  trace.push_back(bare(2, OpKind::insert, BalanceKind::none, 0, 1000));  // suspended
  trace.push_back(bare(3, OpKind::insert, BalanceKind::none, 2, 14));
  CHECK(check_imbalance(trace, c).pass);

  trace.push_back(bare(4, OpKind::insert, BalanceKind::none, 2, 15));
  CheckReport r = check_imbalance(trace, c);
  CHECK_FALSE(r.pass);
  CHECK(r.failing_seq == 4);
}

TEST_CASE("min monotonicity applies only to pure insert traces") {
  std::vector<EventRecord> good;
  good.push_back(bare(1, OpKind::insert, BalanceKind::none, 4, 5));
  good.push_back(bare(2, OpKind::insert, BalanceKind::none, 4, 6));
  good.push_back(bare(3, OpKind::insert, BalanceKind::none, 5, 6));
  good[0].pre_min = 4;
  CHECK(check_min_monotone(good).pass);

  std::vector<EventRecord> drop = good;
  drop.push_back(bare(4, OpKind::insert, BalanceKind::none, 3, 6));
  CheckReport r = check_min_monotone(drop);
  CHECK_FALSE(r.pass);
  CHECK(r.failing_seq == 4);

  std::vector<EventRecord> mixed = good;
  mixed.push_back(bare(4, OpKind::erase, BalanceKind::none, 3, 6));
  CheckReport skip = check_min_monotone(mixed);
  CHECK(skip.pass);
  CHECK_FALSE(skip.applicable);
}

TEST_CASE("post-mutation bounds") {
  const BalanceConfig c3 = cfg(Rational(3), Rational(4), 0);

  auto insert_rec = [](std::uint64_t u_post, std::uint64_t post_min) {
    EventRecord rec = bare(1, OpKind::insert, BalanceKind::none, post_min, 100);
    rec.balance.u = RoleInfo{1, u_post, u_post};
    return rec;
  };
  CHECK(check_post_mutation_bounds({insert_rec(6, 2)}, c3).pass);
  CHECK_FALSE(check_post_mutation_bounds({insert_rec(7, 2)}, c3).pass);
  CHECK(check_post_mutation_bounds({insert_rec(999, 0)}, c3).pass);  // suspended

  auto delete_rec = [](BalanceKind bk, std::uint64_t u_post, std::uint64_t post_max) {
    EventRecord rec = bare(1, OpKind::erase, bk, 1, post_max);
    rec.balance.u = RoleInfo{1, 0, u_post};
    return rec;
  };
  // beta * post load must clear the maximum once balancing ran.
  CHECK(check_post_mutation_bounds({delete_rec(BalanceKind::split_max, 5, 18)},
                                   cfg(Rational(6), Rational(4), 0))
            .pass);
  CHECK_FALSE(check_post_mutation_bounds({delete_rec(BalanceKind::split_max, 4, 18)},
                                         cfg(Rational(6), Rational(4), 0))
                  .pass);
  // An untriggered delete is unconstrained.
  CHECK(check_post_mutation_bounds({delete_rec(BalanceKind::none, 1, 1000)},
                                   cfg(Rational(6), Rational(4), 0))
            .pass);
}

TEST_CASE("transfer bounds on receivers") {
  const BalanceConfig c = cfg(Rational(5), Rational(4), 0);

  auto mb = [](std::uint64_t z_post, std::uint64_t post_min) {
    EventRecord rec = bare(1, OpKind::insert, BalanceKind::min_balance, post_min, 100);
    rec.balance.u = RoleInfo{1, 0, 0};
    rec.balance.v = RoleInfo{2, 0, 0};
    rec.balance.z = RoleInfo{3, 0, z_post};
    return rec;
  };
  CHECK(check_transfer_bounds({mb(7, 1)}, c).pass);  // (5+2)*1
  CHECK_FALSE(check_transfer_bounds({mb(8, 1)}, c).pass);
  CHECK(check_transfer_bounds({mb(8, 0)}, c).pass);  // suspended

  auto sn = [](std::uint64_t u_post, std::uint64_t z_post) {
    EventRecord rec = bare(1, OpKind::erase, BalanceKind::split_nbr, 1, 100);
    rec.balance.u = RoleInfo{1, 0, u_post};
    rec.balance.z = RoleInfo{2, 0, z_post};
    return rec;
  };
  CHECK(check_transfer_bounds({sn(5, 5)}, c).pass);  // alpha*1
  CHECK_FALSE(check_transfer_bounds({sn(6, 5)}, c).pass);
  CHECK_FALSE(check_transfer_bounds({sn(5, 6)}, c).pass);
}

TEST_CASE("single invocation discipline") {
  EventRecord rec = minbal_event();
  CHECK(check_single_invocation({rec}).pass);

  EventRecord two_queries = rec;
  two_queries.queries = 2;
  CheckReport r = check_single_invocation({two_queries});
  CHECK_FALSE(r.pass);
  CHECK(r.failing_seq == 1);

  EventRecord extra_reorder = splitnbr_event();
  CHECK(check_single_invocation({extra_reorder}).pass);
  extra_reorder.reorders = 1;  // split_nbr never reorders
  CHECK_FALSE(check_single_invocation({extra_reorder}).pass);

  EventRecord phantom = none_event();
  CHECK(check_single_invocation({phantom}).pass);
  phantom.nbr_adjusts = 1;
  CHECK_FALSE(check_single_invocation({phantom}).pass);

  EventRecord foreign = minbal_event();
  foreign.kind = OpKind::erase;  // min_balance after a delete is impossible
  CHECK_FALSE(check_single_invocation({foreign}).pass);

  EventRecord many = splitmax_event();
  many.nbr_adjusts = 2;
  CHECK_FALSE(check_single_invocation({many}).pass);
}

TEST_CASE("event consistency: genuine events pass") {
  CHECK(check_event_consistency({minbal_event()}).pass);
  CHECK(check_event_consistency({splitmax_event()}).pass);
  CHECK(check_event_consistency({splitnbr_event()}).pass);
  CHECK(check_event_consistency({none_event()}).pass);
}

TEST_CASE("event consistency: tampering is caught") {
  {
    EventRecord rec = minbal_event();
    rec.keys_moved += 1;  // mirror field drifts
    CheckReport r = check_event_consistency({rec});
    CHECK_FALSE(r.pass);
    CHECK(r.detail == "keys_moved disagrees with balance outcome");
  }
  {
    EventRecord rec = minbal_event();
    rec.keys_moved += 1;
    rec.balance.keys_moved += 1;  // both forged: formula still snaps
    CheckReport r = check_event_consistency({rec});
    CHECK_FALSE(r.pass);
    CHECK(r.detail == "keys_moved breaks the half-load formula");
  }
  {
    EventRecord rec = minbal_event();
    rec.balance.v->load_post -= 1;
    CHECK_FALSE(check_event_consistency({rec}).pass);
  }
  {
    EventRecord rec = minbal_event();
    rec.balance.direction = TransferDirection::none;
    CheckReport r = check_event_consistency({rec});
    CHECK_FALSE(r.pass);
    CHECK(r.detail == "direction classification out of place");
  }
  {
    EventRecord rec = splitmax_event();
    rec.balance.w->load_post += 1;
    CHECK_FALSE(check_event_consistency({rec}).pass);
  }
  {
    EventRecord rec = splitnbr_event();
    rec.balance.direction = TransferDirection::left;  // equalizers carry none
    CHECK_FALSE(check_event_consistency({rec}).pass);
  }
  {
    EventRecord rec = splitnbr_event();
    rec.balance.z->load_pre += 2;
    CHECK_FALSE(check_event_consistency({rec}).pass);
  }
  {
    EventRecord rec = none_event();
    rec.keys_moved = 1;
    rec.balance.keys_moved = 1;
    CheckReport r = check_event_consistency({rec});
    CHECK_FALSE(r.pass);
    CHECK(r.detail == "untriggered event moved keys");
  }
}

TEST_CASE("merged-load derivation when z is u") {
  // [9,2] insert: v merges into u before the halving.
  EventRecord rec = one_event(with_loads({9, 2}), cfg(Rational(4), Rational(4), 4),
                              OpKind::insert, 500);
  REQUIRE(rec.balance.kind == BalanceKind::min_balance);
  REQUIRE(rec.balance.z->id == rec.balance.u->id);
  CHECK(check_event_consistency({rec}).pass);

  EventRecord forged = rec;
  forged.balance.v->load_pre += 1;  // breaks the merged total
  CHECK_FALSE(check_event_consistency({forged}).pass);
}

TEST_CASE("message recount is exact per mode") {
  EventRecord central = minbal_event();
  CHECK(check_message_recount({central}, DirectoryMode::centralized, 4).pass);
  // The same event priced on the overlay would have cost 2+6+2, not 5.
  CHECK_FALSE(check_message_recount({central}, DirectoryMode::overlay, 4).pass);

  EventRecord over = minbal_event(DirectoryMode::overlay);
  CHECK(over.messages == 10);  // 1 query * 2 + 3 changes * 2 + 2 contacts
  CHECK(check_message_recount({over}, DirectoryMode::overlay, 4).pass);
  CHECK_FALSE(check_message_recount({over}, DirectoryMode::centralized, 4).pass);

  EventRecord shaved = central;
  shaved.messages -= 1;
  CheckReport r = check_message_recount({shaved}, DirectoryMode::centralized, 4);
  CHECK_FALSE(r.pass);
  CHECK(r.failing_seq == 1);
}

TEST_CASE("potential accounting over a real run") {
  RunConfig rc;
  rc.alpha = Rational(6);
  rc.beta = Rational(4);
  rc.cost_c = Rational(145);
  rc.nodes = 4;
  rc.ops = 400;
  rc.workload.kind = WorkloadKind::adversarial;
  rc.workload.seed = 3;
  RunResult res = run_experiment(rc);
  const BalanceConfig bc = res.config;

  CHECK(check_potential_accounting(res.trace, bc, Rational(145), 4).pass);
  CHECK_THROWS_AS(check_potential_accounting(res.trace, bc, Rational(144), 4),
                  ConfigThresholdError);

  // Inflate a mid-event potential past the per-op cap.
  std::vector<EventRecord> gain = res.trace;
  for (std::size_t i = 1; i < gain.size(); ++i) {
    if (gain[i].pre_min >= 1 && gain[i].post_min >= 1 &&
        gain[i].kind == OpKind::insert) {
      gain[i].phi_mid = gain[i - 1].phi + Rational(145) * (2 * Rational(6) + 5) + 1;
      CheckReport r = check_potential_accounting(gain, bc, Rational(145), 4);
      CHECK_FALSE(r.pass);
      CHECK(r.failing_seq == gain[i].seq);
      break;
    }
  }

  // Erase the balancing drop on a triggered event.
  std::vector<EventRecord> drop = res.trace;
  bool tampered = false;
  for (EventRecord& rec : drop) {
    if (rec.pre_min >= 1 && rec.post_min >= 1 &&
        rec.balance.kind != BalanceKind::none) {
      rec.phi = rec.phi_mid;
      tampered = true;
      break;
    }
  }
  REQUIRE(tampered);
  CHECK_FALSE(check_potential_accounting(drop, bc, Rational(145), 4).pass);
}

TEST_CASE("phase starts") {
  const BalanceConfig c = cfg(Rational(6), Rational(4), 4);

  auto transition = [](BalanceKind bk, std::uint64_t post_min,
                       std::uint64_t post_max, std::uint64_t phase) {
    EventRecord rec = bare(1, OpKind::erase, bk, post_min, post_max);
    rec.phase = phase;
    return rec;
  };

  // c0 = 4, so a first event at post_min 2 already opens phase 2.
  CHECK(check_phase_start({transition(BalanceKind::none, 2, 7, 2)}, c).pass);
  CHECK_FALSE(check_phase_start({transition(BalanceKind::none, 2, 8, 2)}, c).pass);

  EventRecord by_insert = transition(BalanceKind::none, 2, 7, 2);
  by_insert.kind = OpKind::insert;
  CheckReport r = check_phase_start({by_insert}, c);
  CHECK_FALSE(r.pass);
  CHECK(r.detail == "phase opened by an insert");

  CHECK_FALSE(
      check_phase_start({transition(BalanceKind::split_nbr, 2, 7, 2)}, c).pass);

  // At the floor the equalizer may carry the zero; the other kinds may not.
  CHECK(check_phase_start({transition(BalanceKind::split_nbr, 0, 7, 2)}, c).pass);
  CHECK(check_phase_start({transition(BalanceKind::none, 0, 7, 2)}, c).pass);
  CHECK_FALSE(
      check_phase_start({transition(BalanceKind::split_max, 0, 7, 2)}, c).pass);

  EventRecord stale = transition(BalanceKind::none, 2, 7, 1);  // id not bumped
  CheckReport mislabeled = check_phase_start({stale}, c);
  CHECK_FALSE(mislabeled.pass);
  CHECK(mislabeled.detail == "phase id out of step");
}

TEST_CASE("oracle replay agrees with the engine") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    RunConfig rc;
    rc.nodes = 4;
    rc.ops = 150;
    rc.workload.seed = seed;
    rc.workload.p_delete = 0.4;
    RunResult res = run_experiment(rc);

    ReplaySetup setup;
    setup.nodes = 4;
    setup.c0 = 4;
    setup.seed = seed;
    setup.config = res.config;
    ReplayResult rr = oracle_replay(res.operations, setup);
    CAPTURE(seed);
    CHECK_FALSE(rr.diverged);
    CHECK(rr.detail == "");
    CHECK(validate_partition(rr.state).empty());
  }
}

TEST_CASE("oracle replay under adversarial churn") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RunConfig rc;
    rc.alpha = Rational(6);
    rc.beta = Rational(4);
    rc.nodes = 5;
    rc.ops = 200;
    rc.workload.kind = WorkloadKind::adversarial;
    rc.workload.seed = seed;
    RunResult res = run_experiment(rc);

    ReplaySetup setup;
    setup.nodes = 5;
    setup.c0 = 4;
    setup.seed = seed;
    setup.config = res.config;
    ReplayResult rr = oracle_replay(res.operations, setup);
    CAPTURE(seed);
    CHECK_FALSE(rr.diverged);
  }
}
