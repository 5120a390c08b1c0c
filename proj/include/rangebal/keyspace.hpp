#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rangebal {

using Key = std::uint64_t;
using NodeId = std::uint32_t;

// Partition boundary over the key domain [0, 2^64). Boundaries form a ladder
// 0 = R_0 <= ... <= R_n = end(), where end() stands for 2^64 itself and is
// representable only as a boundary, never as a key.
class Boundary {
 public:
  constexpr Boundary() : value_(0), end_(false) {}

  static constexpr Boundary at(Key k) { return Boundary(k, false); }
  static constexpr Boundary domain_end() { return Boundary(0, true); }

  constexpr bool is_end() const { return end_; }
  // Only meaningful when !is_end().
  constexpr Key key() const { return value_; }

  friend constexpr bool operator==(Boundary a, Boundary b) {
    return a.end_ == b.end_ && (a.end_ || a.value_ == b.value_);
  }
  friend constexpr bool operator!=(Boundary a, Boundary b) { return !(a == b); }
  friend constexpr bool operator<(Boundary a, Boundary b) {
    if (a.end_) return false;
    if (b.end_) return true;
    return a.value_ < b.value_;
  }
  friend constexpr bool operator<=(Boundary a, Boundary b) { return a < b || a == b; }
  friend constexpr bool operator>(Boundary a, Boundary b) { return b < a; }
  friend constexpr bool operator>=(Boundary a, Boundary b) { return b <= a; }

  std::string str() const;

 private:
  constexpr Boundary(Key v, bool e) : value_(v), end_(e) {}
  Key value_;
  bool end_;
};

// Half-open [lo, hi). lo == hi is the empty range; it appears only between a
// full NbrAdjust hand-off and the Reorder that relocates the emptied node.
struct KeyRange {
  Boundary lo;
  Boundary hi;

  bool contains(Key k) const {
    return !(Boundary::at(k) < lo) && Boundary::at(k) < hi;
  }
  bool empty() const { return lo == hi; }
};

struct Node {
  NodeId id = 0;
  KeyRange range;
  std::vector<Key> keys;  // strictly increasing, all within range

  std::uint64_t load() const { return keys.size(); }
};

struct LoadChange {
  NodeId id;
  std::uint64_t before;
  std::uint64_t after;
};

// What one primitive did to the state. Callers feed this to the cost ledger
// and to any load-indexed views that must stay in lockstep.
struct MutationEffect {
  std::vector<LoadChange> loads;
  std::uint64_t keys_moved = 0;
  std::uint32_t partition_changes = 0;
  std::uint32_t contacts = 0;
};

struct DuplicateKeyError : std::runtime_error {
  explicit DuplicateKeyError(const std::string& what) : std::runtime_error(what) {}
};
struct KeyNotFoundError : std::runtime_error {
  explicit KeyNotFoundError(const std::string& what) : std::runtime_error(what) {}
};
struct AdjacencyError : std::runtime_error {
  explicit AdjacencyError(const std::string& what) : std::runtime_error(what) {}
};
struct UnderflowError : std::runtime_error {
  explicit UnderflowError(const std::string& what) : std::runtime_error(what) {}
};
struct NotEmptyError : std::runtime_error {
  explicit NotEmptyError(const std::string& what) : std::runtime_error(what) {}
};

// Ordered node sequence over the partitioned key domain. Node ids are stable
// across relocation; positions are indices into the current order.
class SystemState {
 public:
  // n nodes with exactly c0 keys each. Keys sit on an even grid across the
  // domain, jittered within their slot by the seed; boundaries sit at the
  // midpoint between adjacent nodes' extreme keys.
  static SystemState initial(std::size_t n, std::uint64_t c0, std::uint64_t seed);

  // Assembles a state verbatim, recounting totals. No validation; tests use
  // this to build malformed states on purpose.
  static SystemState from_nodes(std::vector<Node> nodes);

  std::size_t size() const { return nodes_.size(); }
  const Node& node(std::size_t pos) const { return nodes_[pos]; }
  std::uint64_t load(std::size_t pos) const { return nodes_[pos].load(); }
  std::uint64_t total_keys() const { return total_; }

  std::size_t position_of(NodeId id) const;

  // Uncharged instrumentation scans. The balancer never calls these; it pays
  // for load information through the directory.
  std::uint64_t min_load() const;
  std::uint64_t max_load() const;
  std::size_t min_pos() const;  // leftmost on ties
  std::size_t max_pos() const;

  // Owner of k: the node whose range contains it. Valid partition assumed.
  std::size_t route(Key k) const;
  bool contains(Key k) const;

  struct RawResult {
    std::size_t pos;
    MutationEffect effect;
  };
  RawResult raw_insert(Key k);
  RawResult raw_delete(Key k);

  // Neighbor with the smaller load; interior ties resolve left.
  std::size_t lightly_loaded_neighbor(std::size_t pos) const;

  // Moves `count` boundary-adjacent keys from `from` to the adjacent node
  // `to` and re-seats the shared boundary on the smallest key left in the
  // right-hand node. A full hand-off collapses `from` to an empty range.
  // count == 0 with keys still present is the identity.
  MutationEffect nbr_adjust(std::size_t from, std::size_t to, std::uint64_t count);

  struct ReorderResult {
    std::size_t new_pos;
    MutationEffect effect;
  };
  // Relocates the empty-ranged node at empty_pos to sit immediately right of
  // target_pos, taking over the target's keys past the first keep_count. The
  // split point is the smallest moved key, or the target's hi when nothing
  // moves.
  ReorderResult reorder(std::size_t empty_pos, std::size_t target_pos,
                        std::uint64_t keep_count);

 private:
  std::vector<Node> nodes_;
  std::uint64_t total_ = 0;
};

// All structural invariants: two or more nodes, contiguous ranges spanning
// [0, 2^64), sorted in-range keys, and an accurate total. Empty = valid.
std::vector<std::string> validate_partition(const SystemState& state);

}  // namespace rangebal
