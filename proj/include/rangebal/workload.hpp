#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rangebal/events.hpp"
#include "rangebal/keyspace.hpp"

namespace rangebal {

enum class WorkloadKind { insert_only, mixed, adversarial };
enum class KeyDist { uniform, hot, zipf };

struct WorkloadSpec {
  WorkloadKind kind = WorkloadKind::mixed;
  double p_delete = 0.3;  // mixed only; adversarial flips a fair coin
  KeyDist dist = KeyDist::uniform;
  Key hot_lo = 0;
  Key hot_hi = std::uint64_t{1} << 57;
  double hot_weight = 0.9;
  double zipf_s = 0.99;
  std::uint64_t seed = 1;
};

// Pull-based generator. Reads the live state so deletes always name present
// keys and inserts never collide; identical (spec, state history) pairs give
// identical operation streams.
class WorkloadGenerator {
 public:
  explicit WorkloadGenerator(const WorkloadSpec& spec);

  Operation next(const SystemState& state);

 private:
  Key fresh_key(const SystemState& state);
  Key fresh_key_in(const SystemState& state, const KeyRange& range);
  Key sampled_key(const SystemState& state);
  Key present_key(const SystemState& state);          // uniform over all keys
  Key present_key_at(const SystemState& state, std::size_t pos);

  WorkloadSpec spec_;
  std::mt19937_64 rng_;
  std::vector<double> zipf_cdf_;
};

}  // namespace rangebal
