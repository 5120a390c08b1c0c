#include "rangebal/metrics.hpp"

#include <sstream>

namespace rangebal {

Rational potential(const SystemState& state, const Rational& c) {
  if (state.total_keys() == 0)
    throw EmptySystemError("potential undefined for an empty system");
  Integer sum_sq = 0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const Integer load = state.load(i);
    sum_sq += load * load;
  }
  // c * sum_sq / (total / n)
  return c * Rational(sum_sq * state.size(), state.total_keys());
}

PotentialTracker::PotentialTracker(const SystemState& state, Rational c)
    : c_(std::move(c)), total_(state.total_keys()), n_(state.size()) {
  for (std::size_t i = 0; i < state.size(); ++i) {
    const Integer load = state.load(i);
    sum_sq_ += load * load;
  }
}

void PotentialTracker::apply(const MutationEffect& effect) {
  for (const LoadChange& lc : effect.loads) {
    sum_sq_ += Integer(lc.after) * lc.after - Integer(lc.before) * lc.before;
    total_ += lc.after;
    total_ -= lc.before;
  }
}

Rational PotentialTracker::value() const {
  if (total_ == 0) return 0;
  return c_ * Rational(sum_sq_ * n_, total_);
}

Rational PotentialTracker::recompute(const SystemState& state) const {
  if (state.total_keys() == 0) return 0;
  return potential(state, c_);
}

void TraceLog::record(EventRecord rec, PhaseTracker& phases) {
  if (rec.seq != records_.size() + 1)
    throw TraceOrderError("event seq " + std::to_string(rec.seq) +
                          " does not follow " + std::to_string(records_.size()));
  phases.observe(rec.post_min);
  rec.phase = phases.phase();
  records_.push_back(std::move(rec));
}

Summary summarize(const std::vector<EventRecord>& records) {
  Summary s;
  s.ops = records.size();
  if (records.empty()) return s;

  std::uint64_t moved = 0, msgs = 0, pchanges = 0;
  double best_ratio = 0.0;
  for (const EventRecord& rec : records) {
    moved += 1 + rec.keys_moved;  // the mutation itself is a unit move
    msgs += rec.messages;
    pchanges += rec.partition_changes;
    if (rec.post_min >= 1) {
      const double ratio =
          static_cast<double>(rec.post_max) / static_cast<double>(rec.post_min);
      if (ratio > best_ratio) best_ratio = ratio;
    }
    switch (rec.kind) {
      case OpKind::insert: ++s.inserts; break;
      case OpKind::erase: ++s.deletes; break;
    }
    switch (rec.balance.kind) {
      case BalanceKind::none: ++s.untriggered; break;
      case BalanceKind::min_balance: ++s.min_balances; break;
      case BalanceKind::split_max: ++s.split_maxes; break;
      case BalanceKind::split_nbr: ++s.split_nbrs; break;
    }
  }
  const double ops = static_cast<double>(s.ops);
  s.max_ratio = best_ratio;
  s.moved_per_op = static_cast<double>(moved) / ops;
  s.msgs_per_op = static_cast<double>(msgs) / ops;
  s.partition_changes_per_op = static_cast<double>(pchanges) / ops;
  s.phases = records.back().phase;
  return s;
}

std::string summary_csv_header() {
  return "ops,max_ratio,moved_per_op,msgs_per_op,partition_changes_per_op,phases";
}

std::string summary_csv_row(const Summary& s) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(6);
  out << s.ops << ',' << s.max_ratio << ',' << s.moved_per_op << ','
      << s.msgs_per_op << ',' << s.partition_changes_per_op << ',' << s.phases;
  return out.str();
}

}  // namespace rangebal
