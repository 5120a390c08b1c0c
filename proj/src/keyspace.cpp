#include "rangebal/keyspace.hpp"

#include <algorithm>
#include <random>

#include "rangebal/rng.hpp"

namespace rangebal {

std::string Boundary::str() const {
  if (end_) return "18446744073709551616";
  return std::to_string(value_);
}

SystemState SystemState::initial(std::size_t n, std::uint64_t c0, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("initial state needs at least 2 nodes");
  if (c0 < 1) throw std::invalid_argument("initial state needs at least 1 key per node");

  const std::uint64_t m = n * c0;
  const std::uint64_t stride =
      static_cast<std::uint64_t>((static_cast<unsigned __int128>(1) << 64) / m);
  const std::uint64_t jitter = stride / 8;

  std::mt19937_64 rng(seed);
  std::vector<Key> keys(m);
  for (std::uint64_t j = 0; j < m; ++j) {
    const std::uint64_t base = j * stride + stride / 2;
    keys[j] = jitter ? base - jitter + bounded_draw(rng, 2 * jitter + 1) : base;
  }

  SystemState state;
  state.nodes_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Node& nd = state.nodes_[i];
    nd.id = static_cast<NodeId>(i);
    nd.keys.assign(keys.begin() + i * c0, keys.begin() + (i + 1) * c0);
    // Boundary between neighbors: midpoint of their facing keys, rounded up
    // so it stays strictly above the left key.
    if (i == 0) {
      nd.range.lo = Boundary::at(0);
    } else {
      const Key a = keys[i * c0 - 1];
      const Key b = keys[i * c0];
      nd.range.lo = Boundary::at(a + (b - a + 1) / 2);
      state.nodes_[i - 1].range.hi = nd.range.lo;
    }
  }
  state.nodes_[n - 1].range.hi = Boundary::domain_end();
  state.total_ = m;
  return state;
}

SystemState SystemState::from_nodes(std::vector<Node> nodes) {
  SystemState state;
  state.nodes_ = std::move(nodes);
  state.total_ = 0;
  for (const Node& nd : state.nodes_) state.total_ += nd.load();
  return state;
}

std::size_t SystemState::position_of(NodeId id) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].id == id) return i;
  throw std::out_of_range("no node with id " + std::to_string(id));
}

std::uint64_t SystemState::min_load() const { return nodes_[min_pos()].load(); }
std::uint64_t SystemState::max_load() const { return nodes_[max_pos()].load(); }

std::size_t SystemState::min_pos() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    if (nodes_[i].load() < nodes_[best].load()) best = i;
  return best;
}

std::size_t SystemState::max_pos() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    if (nodes_[i].load() > nodes_[best].load()) best = i;
  return best;
}

std::size_t SystemState::route(Key k) const {
  // Last node whose lo is at or below k. Empty ranges sandwiched between
  // others share their lo with the next node, so they are never picked.
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), k,
                             [](Key key, const Node& nd) {
                               return Boundary::at(key) < nd.range.lo;
                             });
  return static_cast<std::size_t>(it - nodes_.begin()) - 1;
}

bool SystemState::contains(Key k) const {
  const Node& nd = nodes_[route(k)];
  return std::binary_search(nd.keys.begin(), nd.keys.end(), k);
}

SystemState::RawResult SystemState::raw_insert(Key k) {
  const std::size_t pos = route(k);
  Node& nd = nodes_[pos];
  auto it = std::lower_bound(nd.keys.begin(), nd.keys.end(), k);
  if (it != nd.keys.end() && *it == k)
    throw DuplicateKeyError("key " + std::to_string(k) + " already present");
  const std::uint64_t before = nd.load();
  nd.keys.insert(it, k);
  ++total_;
  MutationEffect eff;
  eff.loads.push_back({nd.id, before, before + 1});
  eff.keys_moved = 1;
  return {pos, std::move(eff)};
}

SystemState::RawResult SystemState::raw_delete(Key k) {
  const std::size_t pos = route(k);
  Node& nd = nodes_[pos];
  auto it = std::lower_bound(nd.keys.begin(), nd.keys.end(), k);
  if (it == nd.keys.end() || *it != k)
    throw KeyNotFoundError("key " + std::to_string(k) + " not present");
  const std::uint64_t before = nd.load();
  nd.keys.erase(it);
  --total_;
  MutationEffect eff;
  eff.loads.push_back({nd.id, before, before - 1});
  eff.keys_moved = 1;
  return {pos, std::move(eff)};
}

std::size_t SystemState::lightly_loaded_neighbor(std::size_t pos) const {
  if (pos == 0) return 1;
  if (pos + 1 == nodes_.size()) return pos - 1;
  return nodes_[pos - 1].load() <= nodes_[pos + 1].load() ? pos - 1 : pos + 1;
}

MutationEffect SystemState::nbr_adjust(std::size_t from, std::size_t to,
                                       std::uint64_t count) {
  if (to != from + 1 && from != to + 1)
    throw AdjacencyError("nbr_adjust needs adjacent positions");
  Node& f = nodes_[from];
  Node& t = nodes_[to];
  const std::uint64_t fl = f.load();
  if (count > fl) throw UnderflowError("nbr_adjust count exceeds source load");

  MutationEffect eff;
  const bool rightward = to == from + 1;

  if (count == 0) {
    if (fl > 0 || f.range.empty()) return eff;
    // Keyless hand-off: nothing to carry, but the range still collapses so
    // the node can relocate.
    if (rightward) {
      t.range.lo = f.range.lo;
      f.range.hi = f.range.lo;
    } else {
      t.range.hi = f.range.hi;
      f.range.lo = f.range.hi;
    }
    eff.partition_changes = 1;
    return eff;
  }

  const std::uint64_t tl = t.load();
  Boundary split;
  if (rightward) {
    // Upper block of `from` becomes the lower block of `to`.
    split = count == fl ? f.range.lo : Boundary::at(f.keys[fl - count]);
    t.keys.insert(t.keys.begin(), f.keys.end() - count, f.keys.end());
    f.keys.erase(f.keys.end() - count, f.keys.end());
    f.range.hi = split;
    t.range.lo = split;
  } else {
    split = count == fl ? f.range.hi : Boundary::at(f.keys[count]);
    t.keys.insert(t.keys.end(), f.keys.begin(), f.keys.begin() + count);
    f.keys.erase(f.keys.begin(), f.keys.begin() + count);
    f.range.lo = split;
    t.range.hi = split;
  }

  eff.loads.push_back({f.id, fl, fl - count});
  eff.loads.push_back({t.id, tl, tl + count});
  eff.keys_moved = count;
  eff.partition_changes = 1;
  eff.contacts = 1;
  return eff;
}

SystemState::ReorderResult SystemState::reorder(std::size_t empty_pos,
                                                std::size_t target_pos,
                                                std::uint64_t keep_count) {
  if (empty_pos == target_pos)
    throw std::invalid_argument("reorder cannot target the relocating node");
  {
    const Node& e = nodes_[empty_pos];
    if (e.load() != 0 || !e.range.empty())
      throw NotEmptyError("reorder requires an empty-ranged, keyless node");
  }
  if (keep_count > nodes_[target_pos].load())
    throw UnderflowError("reorder keep_count exceeds target load");

  Node moved = std::move(nodes_[empty_pos]);
  nodes_.erase(nodes_.begin() + empty_pos);
  const std::size_t tpos = target_pos - (empty_pos < target_pos ? 1 : 0);
  Node& t = nodes_[tpos];

  const std::uint64_t tl = t.load();
  const std::uint64_t moving = tl - keep_count;
  const Boundary split =
      keep_count < tl ? Boundary::at(t.keys[keep_count]) : t.range.hi;

  moved.range = {split, t.range.hi};
  moved.keys.assign(t.keys.begin() + keep_count, t.keys.end());
  t.keys.resize(keep_count);
  t.range.hi = split;

  MutationEffect eff;
  eff.loads.push_back({t.id, tl, keep_count});
  eff.loads.push_back({moved.id, 0, moving});
  eff.keys_moved = moving;
  // One change for the vacated slot, one for the split.
  eff.partition_changes = 2;
  eff.contacts = moving > 0 ? 1 : 0;

  nodes_.insert(nodes_.begin() + tpos + 1, std::move(moved));
  return {tpos + 1, std::move(eff)};
}

std::vector<std::string> validate_partition(const SystemState& state) {
  std::vector<std::string> issues;
  const std::size_t n = state.size();
  if (n < 2) {
    issues.push_back("node count below 2");
    return issues;
  }
  if (state.node(0).range.lo != Boundary::at(0))
    issues.push_back("first range does not start at 0");
  if (state.node(n - 1).range.hi != Boundary::domain_end())
    issues.push_back("last range does not end at the domain end");

  std::uint64_t counted = 0;
  std::vector<NodeId> ids;
  for (std::size_t i = 0; i < n; ++i) {
    const Node& nd = state.node(i);
    const std::string at = "node at position " + std::to_string(i);
    ids.push_back(nd.id);
    if (nd.range.hi < nd.range.lo) issues.push_back(at + ": hi below lo");
    if (i + 1 < n && nd.range.hi != state.node(i + 1).range.lo)
      issues.push_back(at + ": range not contiguous with successor");
    for (std::size_t j = 0; j + 1 < nd.keys.size(); ++j)
      if (nd.keys[j] >= nd.keys[j + 1]) {
        issues.push_back(at + ": keys not strictly increasing");
        break;
      }
    if (!nd.keys.empty()) {
      if (!nd.range.contains(nd.keys.front()))
        issues.push_back(at + ": smallest key outside range");
      if (!nd.range.contains(nd.keys.back()))
        issues.push_back(at + ": largest key outside range");
    }
    counted += nd.load();
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    issues.push_back("duplicate node ids");
  if (counted != state.total_keys())
    issues.push_back("key total out of sync with node loads");
  return issues;
}

}  // namespace rangebal
