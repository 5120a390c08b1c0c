#include "rangebal/balancer.hpp"

namespace rangebal {

std::vector<std::string> validate(const BalanceConfig& config) {
  std::vector<std::string> issues;
  const Rational& a = config.alpha;
  const Rational& b = config.beta;

  if (config.mode == Mode::insert_only) {
    // alpha >= 1 + sqrt(5), squared away from the radical.
    const Rational r = a - 1;
    if (!(r > 0 && r * r >= 5)) issues.push_back("alpha below 1+sqrt(5)");
    return issues;
  }

  // alpha >= (3 + sqrt(33)) / 2.
  const Rational r = 2 * a - 3;
  if (!(r > 0 && r * r >= 33)) issues.push_back("alpha below (3+sqrt(33))/2");
  if (!(b > 3)) issues.push_back("beta not above 3");
  if (!(b <= a)) issues.push_back("beta above alpha");
  if (!(b * a >= 3 * (a + 2))) issues.push_back("beta below 3(alpha+2)/alpha");
  return issues;
}

Rational min_cost_bound(const BalanceConfig& config) {
  const Rational& a = config.alpha;
  const Rational& b = config.beta;
  const Rational gap = a * a - 4 * (a + 2);
  if (!(gap > 0))
    throw ConfigThresholdError("alpha not above 2(1+sqrt(3))");
  Rational bound = b;
  const Rational b_sq = b * b;
  if (b_sq <= 8) throw ConfigThresholdError("beta^2 not above 8");
  bound = std::max(bound, Rational(2 * b_sq / (b_sq - 8)));
  bound = std::max(bound, Rational(2 * a * a * (a + 2) / gap));
  return bound;
}

Rational default_cost_constant(const BalanceConfig& config) {
  return Rational(floor_int(min_cost_bound(config)) + 1);
}

std::vector<std::string> validate_cost_constant(const BalanceConfig& config,
                                                const Rational& c) {
  std::vector<std::string> issues;
  const Rational& a = config.alpha;
  const Rational& b = config.beta;

  // alpha > 2(1 + sqrt(3)), strict.
  const Rational r = a - 2;
  if (!(r > 0 && r * r > 12)) {
    issues.push_back("alpha not above 2(1+sqrt(3))");
    return issues;
  }
  if (!(c > b)) issues.push_back("c not above beta");
  const Rational b_sq = b * b;
  if (!(b_sq > 8))
    issues.push_back("beta^2 not above 8");
  else if (!(c > 2 * b_sq / (b_sq - 8)))
    issues.push_back("c not above 2*beta^2/(beta^2-8)");
  const Rational gap = a * a - 4 * (a + 2);
  if (!(c > 2 * a * a * (a + 2) / gap))
    issues.push_back("c not above 2*alpha^2*(alpha+2)/(alpha^2-4(alpha+2))");
  return issues;
}

Engine::Engine(SystemState& state, const BalanceConfig& config,
               Directory& directory, CostLedger& ledger, PotentialTracker* phi)
    : state_(state), config_(config), directory_(directory), ledger_(ledger),
      phi_(phi) {}

void Engine::absorb(const MutationEffect& effect, StepCharges& charges) {
  directory_.apply(effect);
  if (phi_) phi_->apply(effect);
  ledger_.data_movement += effect.keys_moved;
  if (effect.partition_changes > 0)
    directory_.charge_partition_changes(ledger_, state_.size(),
                                        effect.partition_changes);
  if (effect.contacts > 0) directory_.charge_contacts(ledger_, effect.contacts);
  charges.partition_changes += effect.partition_changes;
  charges.contacts += effect.contacts;
  charges.messages +=
      effect.partition_changes *
          partition_change_message_cost(directory_.mode(), state_.size()) +
      effect.contacts;
}

BalanceResult Engine::min_balance(std::size_t u_pos) {
  BalanceResult res;
  StepCharges& ch = res.charges;
  BalanceOutcome& out = res.outcome;

  const QueryResult min = directory_.query_min(state_, ledger_);
  ch.queries = 1;
  ch.messages += query_message_cost(directory_.mode(), state_.size());

  const std::uint64_t u_load = state_.load(u_pos);
  out.u = RoleInfo{state_.node(u_pos).id, u_load, u_load};
  if (!(Rational(u_load) > config_.alpha * min.load)) return res;

  const std::size_t v_pos = min.pos;
  const std::size_t z_pos = state_.lightly_loaded_neighbor(v_pos);

  // Both halves of the split read the same load value: u's load once v has
  // merged away (which feeds u itself when z == u).
  const std::uint64_t split_load = u_load + (z_pos == u_pos ? min.load : 0);
  const std::uint64_t moving = split_load / 2;
  if (moving == 0) return res;  // a half-load of nothing; leave the state be

  out.kind = BalanceKind::min_balance;
  out.direction =
      v_pos > z_pos ? TransferDirection::right : TransferDirection::left;
  out.v = RoleInfo{state_.node(v_pos).id, min.load, 0};
  out.z = RoleInfo{state_.node(z_pos).id, state_.load(z_pos), 0};

  // v hands everything to z, then relocates beside u with u's upper half.
  absorb(state_.nbr_adjust(v_pos, z_pos, min.load), ch);
  ch.nbr_adjusts = 1;

  const std::uint64_t keep = split_load - moving;
  const auto reorder = state_.reorder(v_pos, u_pos, keep);
  absorb(reorder.effect, ch);
  ch.reorders = 1;

  out.keys_moved = min.load + moving;
  out.u->load_post = state_.load(state_.position_of(out.u->id));
  out.v->load_post = state_.load(reorder.new_pos);
  out.z->load_post = state_.load(state_.position_of(out.z->id));
  return res;
}

BalanceResult Engine::split(std::size_t u_pos) {
  BalanceResult res;
  StepCharges& ch = res.charges;
  BalanceOutcome& out = res.outcome;

  const QueryResult max = directory_.query_max(state_, ledger_);
  ch.queries = 1;
  ch.messages += query_message_cost(directory_.mode(), state_.size());

  const std::uint64_t u_load = state_.load(u_pos);
  out.u = RoleInfo{state_.node(u_pos).id, u_load, u_load};
  if (!(Rational(u_load) * config_.beta <= max.load)) return res;

  const std::size_t z_pos = state_.lightly_loaded_neighbor(u_pos);
  const std::uint64_t z_load = state_.load(z_pos);

  if (Rational(z_load) * config_.beta <= 2 * Rational(max.load)) {
    // u's keys fold into z; u relocates beside the maximum and takes its
    // upper half.
    const std::uint64_t moving = max.load / 2;
    if (moving == 0) return res;

    out.kind = BalanceKind::split_max;
    out.direction =
        u_pos > z_pos ? TransferDirection::right : TransferDirection::left;
    out.z = RoleInfo{state_.node(z_pos).id, z_load, 0};
    out.w = RoleInfo{state_.node(max.pos).id, max.load, 0};

    absorb(state_.nbr_adjust(u_pos, z_pos, u_load), ch);
    ch.nbr_adjusts = 1;

    const std::size_t w_pos = state_.position_of(out.w->id);
    const auto reorder = state_.reorder(u_pos, w_pos, max.load - moving);
    absorb(reorder.effect, ch);
    ch.reorders = 1;

    out.keys_moved = u_load + moving;
    out.u->load_post = state_.load(reorder.new_pos);
    out.z->load_post = state_.load(state_.position_of(out.z->id));
    out.w->load_post = state_.load(state_.position_of(out.w->id));
    return res;
  }

  // Equalize with the neighbor: u rounds up, z rounds down.
  out.kind = BalanceKind::split_nbr;
  out.z = RoleInfo{state_.node(z_pos).id, z_load, 0};
  out.w = RoleInfo{state_.node(max.pos).id, max.load, max.load};

  const std::uint64_t sum = u_load + z_load;
  const std::uint64_t target_u = sum - sum / 2;
  const std::uint64_t moving = target_u - u_load;
  absorb(state_.nbr_adjust(z_pos, u_pos, moving), ch);
  ch.nbr_adjusts = 1;

  out.keys_moved = moving;
  out.u->load_post = state_.load(state_.position_of(out.u->id));
  out.z->load_post = state_.load(state_.position_of(out.z->id));
  out.w->load_post = state_.load(state_.position_of(out.w->id));
  return res;
}

EventRecord Engine::run_op(OpKind kind, Key k) {
  EventRecord rec;
  rec.kind = kind;
  rec.key = k;
  rec.pre_min = state_.min_load();
  rec.pre_max = state_.max_load();

  StepCharges raw_charges;
  const auto raw =
      kind == OpKind::insert ? state_.raw_insert(k) : state_.raw_delete(k);
  absorb(raw.effect, raw_charges);
  rec.phi_mid = phi_ ? phi_->value() : Rational(0);

  const BalanceResult bal =
      kind == OpKind::insert ? min_balance(raw.pos) : split(raw.pos);
  rec.balance = bal.outcome;
  rec.keys_moved = bal.outcome.keys_moved;
  rec.queries = bal.charges.queries;
  rec.nbr_adjusts = bal.charges.nbr_adjusts;
  rec.reorders = bal.charges.reorders;
  rec.partition_changes = bal.charges.partition_changes + raw_charges.partition_changes;
  rec.contacts = bal.charges.contacts + raw_charges.contacts;
  rec.messages = bal.charges.messages + raw_charges.messages;

  rec.post_min = state_.min_load();
  rec.post_max = state_.max_load();
  rec.phi = phi_ ? phi_->value() : Rational(0);
  return rec;
}

EventRecord Engine::insert(Key k) { return run_op(OpKind::insert, k); }
EventRecord Engine::erase(Key k) { return run_op(OpKind::erase, k); }

}  // namespace rangebal
