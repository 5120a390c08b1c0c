#include "rangebal/directory.hpp"

#include <stdexcept>

namespace rangebal {

Directory::Directory(const SystemState& state, DirectoryMode mode) : mode_(mode) {
  for (std::size_t i = 0; i < state.size(); ++i) ++load_counts_[state.load(i)];
}

void Directory::apply(const MutationEffect& effect) {
  for (const LoadChange& lc : effect.loads) {
    if (lc.before == lc.after) continue;
    auto it = load_counts_.find(lc.before);
    if (it == load_counts_.end())
      throw std::logic_error("directory out of sync: unknown load");
    if (--it->second == 0) load_counts_.erase(it);
    ++load_counts_[lc.after];
  }
}

QueryResult Directory::resolve(const SystemState& state, std::uint64_t target,
                               CostLedger& ledger) const {
  ledger.load_info_queries += 1;
  ledger.messages += query_message_cost(mode_, state.size());
  for (std::size_t i = 0; i < state.size(); ++i)
    if (state.load(i) == target) return {i, target};
  throw std::logic_error("directory out of sync: load not found in state");
}

QueryResult Directory::query_min(const SystemState& state, CostLedger& ledger) const {
  if (load_counts_.empty()) throw std::logic_error("directory is empty");
  return resolve(state, load_counts_.begin()->first, ledger);
}

QueryResult Directory::query_max(const SystemState& state, CostLedger& ledger) const {
  if (load_counts_.empty()) throw std::logic_error("directory is empty");
  return resolve(state, load_counts_.rbegin()->first, ledger);
}

void Directory::charge_partition_changes(CostLedger& ledger, std::size_t n,
                                         std::uint32_t count) const {
  ledger.partition_changes += count;
  ledger.messages += count * partition_change_message_cost(mode_, n);
}

void Directory::charge_contacts(CostLedger& ledger, std::uint32_t count) const {
  ledger.messages += count;
}

}  // namespace rangebal
