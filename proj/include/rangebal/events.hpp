#pragma once

#include <cstdint>
#include <optional>

#include "rangebal/keyspace.hpp"
#include "rangebal/rational.hpp"

namespace rangebal {

enum class OpKind { insert, erase };

enum class BalanceKind { none, min_balance, split_max, split_nbr };

// Side classification for whole-load hand-offs: which side of the receiving
// node the keys came from. Equalizing moves carry no direction.
enum class TransferDirection { none, left, right };

struct Operation {
  OpKind kind;
  Key key;
};

struct RoleInfo {
  NodeId id = 0;
  // pre is sampled after the raw mutation, right before balancing steps.
  std::uint64_t load_pre = 0;
  std::uint64_t load_post = 0;
};

struct BalanceOutcome {
  BalanceKind kind = BalanceKind::none;
  TransferDirection direction = TransferDirection::none;
  std::uint64_t keys_moved = 0;  // balancing movement only
  std::optional<RoleInfo> u, v, z, w;
};

// One mutation plus whatever balancing it triggered, with enough sampled
// state to re-check every accounting claim offline.
struct EventRecord {
  std::uint64_t seq = 0;
  OpKind kind = OpKind::insert;
  Key key = 0;
  BalanceOutcome balance;

  std::uint32_t queries = 0;
  std::uint64_t keys_moved = 0;  // mirrors balance.keys_moved
  std::uint32_t nbr_adjusts = 0;
  std::uint32_t reorders = 0;
  std::uint32_t partition_changes = 0;
  std::uint32_t contacts = 0;
  std::uint64_t messages = 0;

  std::uint64_t pre_min = 0;
  std::uint64_t pre_max = 0;
  std::uint64_t post_min = 0;
  std::uint64_t post_max = 0;

  std::uint64_t phase = 0;

  // Potential after the raw mutation and after the full event. Zero when the
  // system is empty at that instant.
  Rational phi_mid = 0;
  Rational phi = 0;
};

}  // namespace rangebal
