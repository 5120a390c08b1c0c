#include "rangebal/workload.hpp"

#include <cmath>
#include <stdexcept>

#include "rangebal/rng.hpp"

namespace rangebal {

namespace {

constexpr std::size_t kZipfBuckets = 1024;

Key range_draw(std::mt19937_64& rng, Boundary lo, Boundary hi) {
  const Key base = lo.key();
  if (lo == Boundary::at(0) && hi == Boundary::domain_end()) return rng();
  const std::uint64_t width =
      hi.is_end() ? 0 - base : hi.key() - base;  // full-domain case handled above
  return base + bounded_draw(rng, width);
}

}  // namespace

WorkloadGenerator::WorkloadGenerator(const WorkloadSpec& spec)
    : spec_(spec), rng_(spec.seed) {
  if (spec_.kind == WorkloadKind::mixed &&
      !(spec_.p_delete >= 0.0 && spec_.p_delete < 1.0))
    throw std::invalid_argument("p_delete must lie in [0, 1)");
  if (spec_.dist == KeyDist::hot && !(spec_.hot_lo < spec_.hot_hi))
    throw std::invalid_argument("hot range must be non-empty");
  if (spec_.dist == KeyDist::zipf) {
    zipf_cdf_.resize(kZipfBuckets);
    double acc = 0.0;
    for (std::size_t b = 0; b < kZipfBuckets; ++b) {
      acc += 1.0 / std::pow(static_cast<double>(b + 1), spec_.zipf_s);
      zipf_cdf_[b] = acc;
    }
    for (double& v : zipf_cdf_) v /= acc;
  }
}

Key WorkloadGenerator::sampled_key(const SystemState&) {
  switch (spec_.dist) {
    case KeyDist::uniform:
      return rng_();
    case KeyDist::hot:
      if (unit_draw(rng_) < spec_.hot_weight)
        return spec_.hot_lo + bounded_draw(rng_, spec_.hot_hi - spec_.hot_lo);
      return rng_();
    case KeyDist::zipf: {
      const double u = unit_draw(rng_);
      std::size_t b = 0;
      while (b + 1 < zipf_cdf_.size() && zipf_cdf_[b] <= u) ++b;
      const std::uint64_t width = (~std::uint64_t{0} / kZipfBuckets) + 1;
      const Key base = b * width;
      const std::uint64_t span =
          b + 1 == kZipfBuckets ? 0 - base : width;  // last bucket absorbs the tail
      return base + (span ? bounded_draw(rng_, span) : rng_());
    }
  }
  return rng_();
}

Key WorkloadGenerator::fresh_key(const SystemState& state) {
  for (;;) {
    const Key k = sampled_key(state);
    if (!state.contains(k)) return k;
  }
}

Key WorkloadGenerator::fresh_key_in(const SystemState& state, const KeyRange& range) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    const Key k = range_draw(rng_, range.lo, range.hi);
    if (!state.contains(k)) return k;
  }
  return fresh_key(state);  // range saturated; give up on targeting it
}

Key WorkloadGenerator::present_key(const SystemState& state) {
  std::uint64_t index = bounded_draw(rng_, state.total_keys());
  for (std::size_t pos = 0;; ++pos) {
    const std::uint64_t load = state.load(pos);
    if (index < load) return state.node(pos).keys[index];
    index -= load;
  }
}

Key WorkloadGenerator::present_key_at(const SystemState& state, std::size_t pos) {
  const std::uint64_t load = state.load(pos);
  return state.node(pos).keys[bounded_draw(rng_, load)];
}

Operation WorkloadGenerator::next(const SystemState& state) {
  switch (spec_.kind) {
    case WorkloadKind::insert_only:
      return {OpKind::insert, fresh_key(state)};

    case WorkloadKind::mixed: {
      const bool erase =
          state.total_keys() > 0 && unit_draw(rng_) < spec_.p_delete;
      if (erase) return {OpKind::erase, present_key(state)};
      return {OpKind::insert, fresh_key(state)};
    }

    case WorkloadKind::adversarial: {
      // Deletes chip at the lightest node; inserts pile onto the heaviest.
      const bool erase = state.total_keys() > 0 && unit_draw(rng_) < 0.5;
      if (erase) {
        const std::size_t pos = state.min_pos();
        if (state.load(pos) > 0)
          return {OpKind::erase, present_key_at(state, pos)};
        return {OpKind::erase, present_key(state)};
      }
      return {OpKind::insert,
              fresh_key_in(state, state.node(state.max_pos()).range)};
    }
  }
  throw std::logic_error("unreachable workload kind");
}

}  // namespace rangebal
