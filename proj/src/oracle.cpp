#include <list>
#include <sstream>

#include "rangebal/checker.hpp"

// Second opinion on the engine: every decision re-coded the slow, obvious
// way. No shared helpers beyond the state types and exact rationals; if this
// file and the engine agree on a million states, the clever paths earned it.

namespace rangebal {

namespace {

struct ONode {
  NodeId id;
  Boundary lo;
  Boundary hi;
  std::list<Key> keys;
};

using OState = std::vector<ONode>;

OState from_state(const SystemState& state) {
  OState nodes;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const Node& nd = state.node(i);
    nodes.push_back({nd.id, nd.range.lo, nd.range.hi,
                     std::list<Key>(nd.keys.begin(), nd.keys.end())});
  }
  return nodes;
}

SystemState to_state(const OState& nodes) {
  std::vector<Node> out;
  for (const ONode& nd : nodes) {
    Node converted;
    converted.id = nd.id;
    converted.range = {nd.lo, nd.hi};
    converted.keys.assign(nd.keys.begin(), nd.keys.end());
    out.push_back(std::move(converted));
  }
  return SystemState::from_nodes(std::move(out));
}

bool owns(const ONode& nd, Key k) {
  return !(Boundary::at(k) < nd.lo) && Boundary::at(k) < nd.hi;
}

std::size_t find_owner(const OState& nodes, Key k) {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (owns(nodes[i], k)) return i;
  throw std::logic_error("oracle: no owner for key");
}

std::size_t scan_min(const OState& nodes) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (nodes[i].keys.size() < nodes[best].keys.size()) best = i;
  return best;
}

std::size_t scan_max(const OState& nodes) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (nodes[i].keys.size() > nodes[best].keys.size()) best = i;
  return best;
}

std::size_t light_neighbor(const OState& nodes, std::size_t pos) {
  if (pos == 0) return 1;
  if (pos + 1 == nodes.size()) return pos - 1;
  if (nodes[pos - 1].keys.size() <= nodes[pos + 1].keys.size()) return pos - 1;
  return pos + 1;
}

// Moves `count` keys across the shared boundary, one at a time, then re-seats
// the boundary on the smallest key still owned by the right-hand node (or
// collapses the donor when it gave up everything).
void move_adjacent(OState& nodes, std::size_t from, std::size_t to,
                   std::uint64_t count) {
  ONode& f = nodes[from];
  ONode& t = nodes[to];
  const bool rightward = to == from + 1;
  const bool drained = count == f.keys.size();
  for (std::uint64_t i = 0; i < count; ++i) {
    if (rightward) {
      t.keys.push_front(f.keys.back());
      f.keys.pop_back();
    } else {
      t.keys.push_back(f.keys.front());
      f.keys.pop_front();
    }
  }
  if (rightward) {
    const Boundary split = drained ? f.lo : Boundary::at(t.keys.front());
    f.hi = split;
    t.lo = split;
  } else {
    const Boundary split = drained ? f.hi : Boundary::at(f.keys.front());
    f.lo = split;
    t.hi = split;
  }
}

// Pulls the relocating node out, splits the target's keys after keep_count,
// and re-inserts the node just right of the target.
void relocate(OState& nodes, std::size_t empty_pos, std::size_t target_pos,
              std::uint64_t keep_count) {
  ONode moved = nodes[empty_pos];
  nodes.erase(nodes.begin() + empty_pos);
  const std::size_t tpos = target_pos - (empty_pos < target_pos ? 1 : 0);
  ONode& t = nodes[tpos];

  auto split_it = t.keys.begin();
  for (std::uint64_t i = 0; i < keep_count; ++i) ++split_it;
  const Boundary split = split_it == t.keys.end() ? t.hi : Boundary::at(*split_it);

  moved.keys.clear();
  moved.keys.splice(moved.keys.begin(), t.keys, split_it, t.keys.end());
  moved.lo = split;
  moved.hi = t.hi;
  t.hi = split;

  nodes.insert(nodes.begin() + tpos + 1, moved);
}

void oracle_insert(OState& nodes, Key k, const BalanceConfig& config) {
  const std::size_t u_pos = find_owner(nodes, k);
  ONode& u = nodes[u_pos];
  auto it = u.keys.begin();
  while (it != u.keys.end() && *it < k) ++it;
  if (it != u.keys.end() && *it == k)
    throw std::logic_error("oracle: duplicate insert");
  u.keys.insert(it, k);

  const std::size_t v_pos = scan_min(nodes);
  const std::uint64_t v_load = nodes[v_pos].keys.size();
  if (!(Rational(u.keys.size()) > config.alpha * v_load)) return;

  const std::size_t z_pos = light_neighbor(nodes, v_pos);
  const std::uint64_t merged =
      nodes[u_pos].keys.size() + (z_pos == u_pos ? v_load : 0);
  if (merged / 2 == 0) return;

  move_adjacent(nodes, v_pos, z_pos, v_load);
  relocate(nodes, v_pos, u_pos, merged - merged / 2);
}

void oracle_erase(OState& nodes, Key k, const BalanceConfig& config) {
  const std::size_t u_pos = find_owner(nodes, k);
  ONode& u = nodes[u_pos];
  auto it = u.keys.begin();
  while (it != u.keys.end() && *it < k) ++it;
  if (it == u.keys.end() || *it != k)
    throw std::logic_error("oracle: deleting absent key");
  u.keys.erase(it);

  const std::size_t w_pos = scan_max(nodes);
  const std::uint64_t w_load = nodes[w_pos].keys.size();
  if (!(Rational(u.keys.size()) * config.beta <= w_load)) return;

  const std::size_t z_pos = light_neighbor(nodes, u_pos);
  const std::uint64_t z_load = nodes[z_pos].keys.size();

  if (Rational(z_load) * config.beta <= 2 * Rational(w_load)) {
    if (w_load / 2 == 0) return;
    const NodeId w_id = nodes[w_pos].id;
    move_adjacent(nodes, u_pos, z_pos, nodes[u_pos].keys.size());
    std::size_t w_now = 0;
    while (nodes[w_now].id != w_id) ++w_now;
    relocate(nodes, u_pos, w_now, w_load - w_load / 2);
    return;
  }

  const std::uint64_t sum = nodes[u_pos].keys.size() + z_load;
  move_adjacent(nodes, z_pos, u_pos, (sum - sum / 2) - nodes[u_pos].keys.size());
}

std::string compare(const OState& naive, const SystemState& engine) {
  std::ostringstream diff;
  if (naive.size() != engine.size()) {
    diff << "node count " << naive.size() << " vs " << engine.size();
    return diff.str();
  }
  for (std::size_t i = 0; i < naive.size(); ++i) {
    const ONode& a = naive[i];
    const Node& b = engine.node(i);
    if (a.id != b.id) {
      diff << "id mismatch at position " << i;
      return diff.str();
    }
    if (a.lo != b.range.lo || a.hi != b.range.hi) {
      diff << "range mismatch at position " << i;
      return diff.str();
    }
    if (!std::equal(a.keys.begin(), a.keys.end(), b.keys.begin(), b.keys.end())) {
      diff << "key set mismatch at position " << i;
      return diff.str();
    }
  }
  return {};
}

}  // namespace

ReplayResult oracle_replay(const std::vector<Operation>& operations,
                           const ReplaySetup& setup) {
  SystemState engine_state =
      SystemState::initial(setup.nodes, setup.c0, setup.seed);
  Directory directory(engine_state, DirectoryMode::centralized);
  CostLedger ledger;
  Engine engine(engine_state, setup.config, directory, ledger);

  OState naive = from_state(engine_state);

  for (std::size_t i = 0; i < operations.size(); ++i) {
    const Operation& op = operations[i];
    if (op.kind == OpKind::insert) {
      engine.insert(op.key);
      oracle_insert(naive, op.key, setup.config);
    } else {
      engine.erase(op.key);
      oracle_erase(naive, op.key, setup.config);
    }
    if (std::string diff = compare(naive, engine_state); !diff.empty())
      return {to_state(naive), true, i + 1,
              "operation " + std::to_string(i + 1) + ": " + diff};
  }
  return {to_state(naive), false, 0, {}};
}

}  // namespace rangebal
