#pragma once

#include <cstdint>
#include <map>

#include "rangebal/keyspace.hpp"
#include "rangebal/metrics.hpp"
#include "rangebal/rational.hpp"

namespace rangebal {

// centralized: one well-known coordinator, flat message prices.
// overlay: queries and partition updates ride an O(log n) structure.
enum class DirectoryMode { centralized, overlay };

inline std::uint64_t query_message_cost(DirectoryMode mode, std::size_t n) {
  return mode == DirectoryMode::overlay ? ceil_log2(n) : 0;
}
inline std::uint64_t partition_change_message_cost(DirectoryMode mode, std::size_t n) {
  return mode == DirectoryMode::overlay ? ceil_log2(n) : 1;
}

struct QueryResult {
  std::size_t pos;
  std::uint64_t load;
};

// Exact load directory. Mutations push their load deltas in, so queries never
// see stale data; the mode only decides what traffic gets charged.
class Directory {
 public:
  Directory(const SystemState& state, DirectoryMode mode);

  DirectoryMode mode() const { return mode_; }

  void apply(const MutationEffect& effect);

  // Leftmost node carrying the extreme load. Charged as one load-information
  // query plus the mode's message price.
  QueryResult query_min(const SystemState& state, CostLedger& ledger) const;
  QueryResult query_max(const SystemState& state, CostLedger& ledger) const;

  void charge_partition_changes(CostLedger& ledger, std::size_t n,
                                std::uint32_t count) const;
  void charge_contacts(CostLedger& ledger, std::uint32_t count) const;

 private:
  QueryResult resolve(const SystemState& state, std::uint64_t target,
                      CostLedger& ledger) const;

  DirectoryMode mode_;
  std::map<std::uint64_t, std::uint32_t> load_counts_;
};

}  // namespace rangebal
