#pragma once

#include <cstdint>
#include <vector>

#include "sinrsched/generators.hpp"
#include "sinrsched/model.hpp"
#include "sinrsched/rng.hpp"

namespace sinrsched::testing {

// Seeded random instance for property checks: n in [1, n_max], alpha from
// {2, 2.5, 4}, thresholds in [1, 10].
inline Instance random_instance(std::uint64_t seed, std::size_t n_max = 20,
                                UtilityFamily utility = UtilityFamily::None) {
  const CounterRng rng(seed);
  static constexpr double kAlphas[] = {2.0, 2.5, 4.0};
  GenConfig cfg;
  cfg.n = rng.integer(1, n_max, {1});
  cfg.alpha = kAlphas[rng.integer(0, 2, {2})];
  cfg.beta_min = 1.0;
  cfg.beta_max = 10.0;
  cfg.utility = utility;
  cfg.seed = rng.bits({3});
  return gen_random(cfg);
}

inline PowerAssignment uniform_powers(const Instance& inst, double p) {
  PowerAssignment out;
  for (const Link& l : inst.links()) out[l.id] = p;
  return out;
}

}  // namespace sinrsched::testing
