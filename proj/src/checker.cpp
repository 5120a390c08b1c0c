#include "rangebal/checker.hpp"

#include <sstream>

namespace rangebal {

namespace {

CheckReport fail_at(CheckReport report, const EventRecord& rec, std::string detail) {
  report.pass = false;
  report.failing_seq = rec.seq;
  report.detail = std::move(detail);
  return report;
}

std::string ratio_detail(const char* what, std::uint64_t seq) {
  std::ostringstream out;
  out << what << " violated at seq " << seq;
  return out.str();
}

}  // namespace

std::string check_report_json(const CheckReport& report) {
  std::ostringstream out;
  out << "{\"check\":\"" << report.name << "\",\"applicable\":"
      << (report.applicable ? "true" : "false")
      << ",\"pass\":" << (report.pass ? "true" : "false") << ",\"failing_seq\":";
  if (report.failing_seq)
    out << *report.failing_seq;
  else
    out << "null";
  out << ",\"detail\":\"" << report.detail << "\"}";
  return out.str();
}

CheckReport check_imbalance(const SystemState& state, const BalanceConfig& config) {
  CheckReport report;
  report.name = "imbalance";
  const std::uint64_t lo = state.min_load();
  if (lo < 1) {
    report.detail = "suspended: min load below 1";
    return report;
  }
  const std::uint64_t hi = state.max_load();
  if (!(Rational(hi) <= (config.alpha + 2) * lo + config.c0)) {
    report.pass = false;
    report.detail = "max " + std::to_string(hi) + " exceeds (alpha+2)*" +
                    std::to_string(lo) + " + c0";
  }
  return report;
}

CheckReport check_imbalance(const std::vector<EventRecord>& trace,
                            const BalanceConfig& config) {
  CheckReport report;
  report.name = "imbalance";
  const Rational bound_slope = config.alpha + 2;
  for (const EventRecord& rec : trace) {
    if (rec.post_min < 1) continue;
    if (!(Rational(rec.post_max) <= bound_slope * rec.post_min + config.c0))
      return fail_at(report, rec,
                     "max " + std::to_string(rec.post_max) + " vs min " +
                         std::to_string(rec.post_min) + " at seq " +
                         std::to_string(rec.seq));
  }
  return report;
}

CheckReport check_min_monotone(const std::vector<EventRecord>& trace) {
  CheckReport report;
  report.name = "min_monotone";
  for (const EventRecord& rec : trace)
    if (rec.kind == OpKind::erase) {
      report.applicable = false;
      report.detail = "trace contains deletes";
      return report;
    }
  if (trace.empty()) return report;
  std::uint64_t prev = trace.front().pre_min;
  for (const EventRecord& rec : trace) {
    if (rec.post_min < prev)
      return fail_at(report, rec, ratio_detail("min monotonicity", rec.seq));
    prev = rec.post_min;
  }
  return report;
}

CheckReport check_post_mutation_bounds(const std::vector<EventRecord>& trace,
                                       const BalanceConfig& config) {
  CheckReport report;
  report.name = "post_mutation_bounds";
  for (const EventRecord& rec : trace) {
    if (!rec.balance.u) return fail_at(report, rec, "event without a routed node");
    const RoleInfo& u = *rec.balance.u;
    if (rec.kind == OpKind::insert) {
      if (rec.post_min < 1) continue;  // ratio assertion suspended
      if (!(Rational(u.load_post) <= config.alpha * rec.post_min))
        return fail_at(report, rec,
                       "post-insert load " + std::to_string(u.load_post) +
                           " above alpha * " + std::to_string(rec.post_min));
    } else if (rec.balance.kind != BalanceKind::none) {
      if (!(Rational(u.load_post) * config.beta > rec.post_max))
        return fail_at(report, rec,
                       "post-delete load " + std::to_string(u.load_post) +
                           " not above max/beta, max " +
                           std::to_string(rec.post_max));
    }
  }
  return report;
}

CheckReport check_transfer_bounds(const std::vector<EventRecord>& trace,
                                  const BalanceConfig& config) {
  CheckReport report;
  report.name = "transfer_bounds";
  for (const EventRecord& rec : trace) {
    if (rec.post_min < 1) continue;
    const Rational min_bound = (config.alpha + 2) * rec.post_min + config.c0;
    const Rational split_bound = config.alpha * rec.post_min + config.c0;
    if (rec.balance.kind == BalanceKind::none) continue;
    if (!rec.balance.u || !rec.balance.z)
      return fail_at(report, rec, "missing role");
    switch (rec.balance.kind) {
      case BalanceKind::none:
        break;
      case BalanceKind::min_balance:
        if (!(Rational(rec.balance.z->load_post) <= min_bound))
          return fail_at(report, rec,
                         ratio_detail("min-transfer receiver bound", rec.seq));
        break;
      case BalanceKind::split_max:
      case BalanceKind::split_nbr:
        if (!(Rational(rec.balance.u->load_post) <= split_bound) ||
            !(Rational(rec.balance.z->load_post) <= split_bound))
          return fail_at(report, rec,
                         ratio_detail("post-split receiver bound", rec.seq));
        break;
    }
  }
  return report;
}

CheckReport check_single_invocation(const std::vector<EventRecord>& trace) {
  CheckReport report;
  report.name = "single_invocation";
  for (const EventRecord& rec : trace) {
    if (rec.queries != 1)
      return fail_at(report, rec,
                     "expected exactly 1 query, saw " + std::to_string(rec.queries));
    if (rec.nbr_adjusts > 1 || rec.reorders > 1)
      return fail_at(report, rec, "primitive used more than once");
    std::uint32_t want_nbr = 0, want_reorder = 0;
    switch (rec.balance.kind) {
      case BalanceKind::none: break;
      case BalanceKind::min_balance:
      case BalanceKind::split_max: want_nbr = 1; want_reorder = 1; break;
      case BalanceKind::split_nbr: want_nbr = 1; break;
    }
    if (rec.nbr_adjusts != want_nbr || rec.reorders != want_reorder)
      return fail_at(report, rec, "primitive count does not match balance kind");
    const bool foreign_kind =
        rec.kind == OpKind::insert
            ? rec.balance.kind == BalanceKind::split_max ||
                  rec.balance.kind == BalanceKind::split_nbr
            : rec.balance.kind == BalanceKind::min_balance;
    if (foreign_kind)
      return fail_at(report, rec, "balance kind impossible for mutation kind");
  }
  return report;
}

CheckReport check_event_consistency(const std::vector<EventRecord>& trace) {
  CheckReport report;
  report.name = "event_consistency";
  for (const EventRecord& rec : trace) {
    if (rec.keys_moved != rec.balance.keys_moved)
      return fail_at(report, rec, "keys_moved disagrees with balance outcome");
    const BalanceOutcome& b = rec.balance;
    const bool directed = b.kind == BalanceKind::min_balance ||
                          b.kind == BalanceKind::split_max;
    if ((b.direction != TransferDirection::none) != directed)
      return fail_at(report, rec, "direction classification out of place");

    switch (b.kind) {
      case BalanceKind::none:
        if (rec.keys_moved != 0)
          return fail_at(report, rec, "untriggered event moved keys");
        break;
      case BalanceKind::min_balance: {
        if (!b.u || !b.v || !b.z)
          return fail_at(report, rec, "missing role");
        const std::uint64_t merged =
            b.u->load_pre + (b.z->id == b.u->id ? b.v->load_pre : 0);
        const std::uint64_t moving = merged / 2;
        if (b.keys_moved != b.v->load_pre + moving)
          return fail_at(report, rec, "keys_moved breaks the half-load formula");
        if (b.u->load_post != merged - moving || b.v->load_post != moving)
          return fail_at(report, rec, "halving left the wrong loads");
        if (b.z->id != b.u->id &&
            b.z->load_post != b.z->load_pre + b.v->load_pre)
          return fail_at(report, rec, "receiver load off after whole-load move");
        break;
      }
      case BalanceKind::split_max: {
        if (!b.u || !b.z || !b.w)
          return fail_at(report, rec, "missing role");
        const std::uint64_t moving = b.w->load_pre / 2;
        if (b.keys_moved != b.u->load_pre + moving)
          return fail_at(report, rec, "keys_moved breaks the half-load formula");
        if (b.u->load_post != moving ||
            b.w->load_post != b.w->load_pre - moving ||
            b.z->load_post != b.z->load_pre + b.u->load_pre)
          return fail_at(report, rec, "halving left the wrong loads");
        break;
      }
      case BalanceKind::split_nbr: {
        if (!b.u || !b.z)
          return fail_at(report, rec, "missing role");
        const std::uint64_t sum = b.u->load_pre + b.z->load_pre;
        if (b.u->load_post != sum - sum / 2 || b.z->load_post != sum / 2)
          return fail_at(report, rec, "equalizing left the wrong loads");
        if (b.keys_moved != b.u->load_post - b.u->load_pre)
          return fail_at(report, rec, "keys_moved breaks the equalize formula");
        break;
      }
    }
  }
  return report;
}

CheckReport check_message_recount(const std::vector<EventRecord>& trace,
                                  DirectoryMode mode, std::size_t n) {
  CheckReport report;
  report.name = "message_recount";
  const std::uint64_t per_query = query_message_cost(mode, n);
  const std::uint64_t per_change = partition_change_message_cost(mode, n);
  for (const EventRecord& rec : trace) {
    const std::uint64_t expected = rec.queries * per_query +
                                   rec.partition_changes * per_change +
                                   rec.contacts;
    if (rec.messages != expected)
      return fail_at(report, rec,
                     "messages " + std::to_string(rec.messages) + " != recount " +
                         std::to_string(expected));
  }
  return report;
}

CheckReport check_potential_accounting(const std::vector<EventRecord>& trace,
                                       const BalanceConfig& config,
                                       const Rational& c, std::size_t n) {
  const auto issues = validate_cost_constant(config, c);
  if (!issues.empty()) throw ConfigThresholdError(issues.front());

  CheckReport report;
  report.name = "potential_accounting";
  const Rational insert_cap = c * (2 * config.alpha + 5);
  const Rational delete_cap = 2 * c * (config.alpha + 2) * (config.alpha + 2);

  // The uniform start pins the initial potential at c * n * c0.
  Rational phi_prev = c * Rational(Integer(n) * config.c0);
  for (const EventRecord& rec : trace) {
    const bool gated = rec.pre_min >= 1 && rec.post_min >= 1;
    if (gated) {
      const Rational gain = rec.phi_mid - phi_prev;
      const Rational& cap = rec.kind == OpKind::insert ? insert_cap : delete_cap;
      if (!(gain <= cap))
        return fail_at(report, rec,
                       "mutation gain exceeds cap at seq " + std::to_string(rec.seq));
      if (rec.balance.kind != BalanceKind::none &&
          !(rec.phi_mid - rec.phi >= Rational(rec.keys_moved)))
        return fail_at(report, rec,
                       "balancing drop below keys moved at seq " +
                           std::to_string(rec.seq));
    }
    phi_prev = rec.phi;
  }
  return report;
}

CheckReport check_phase_start(const std::vector<EventRecord>& trace,
                              const BalanceConfig& config) {
  CheckReport report;
  report.name = "phase_start";
  std::uint64_t prev_min = config.c0;
  std::uint64_t phase = 1;
  for (const EventRecord& rec : trace) {
    if (rec.post_min < prev_min) {
      ++phase;
      if (rec.kind != OpKind::erase)
        return fail_at(report, rec, "phase opened by an insert");
      if (rec.post_min >= 1) {
        // A drop that leaves a positive minimum can only come from an
        // untriggered delete: every balancing step lifts its participants
        // back to at least the old minimum.
        if (rec.balance.kind != BalanceKind::none)
          return fail_at(report, rec, "phase opened by a balanced delete");
        if (!(Rational(rec.post_max) < config.beta * rec.post_min))
          return fail_at(report, rec,
                         ratio_detail("phase-start ratio bound", rec.seq));
      } else if (rec.balance.kind != BalanceKind::none &&
                 rec.balance.kind != BalanceKind::split_nbr) {
        // Min 1 -> 0: an equalizing move may re-seat the zero on the
        // neighbor, so split_nbr is legal here; the other kinds are not.
        return fail_at(report, rec, "phase opened by the wrong balance kind");
      }
    }
    if (rec.phase != phase)
      return fail_at(report, rec, "phase id out of step");
    prev_min = rec.post_min;
  }
  return report;
}

}  // namespace rangebal
