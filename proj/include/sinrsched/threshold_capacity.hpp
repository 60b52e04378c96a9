#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sinrsched/model.hpp"

namespace sinrsched {

/// Acceptance bounds of the greedy passes.
struct WeightParams {
  double tau = 0.0;             // 1 / (6 * 3^alpha + 2)
  double secondary_tau = 0.25;  // second pass of the limited-power solver

  static WeightParams for_alpha(double alpha);
};

/// Position of each link in the sensitivity order (rank 1 = most sensitive).
class Ranking {
 public:
  Ranking() = default;
  explicit Ranking(std::span<const LinkId> order);

  std::size_t rank(LinkId id) const;
  bool contains(LinkId id) const { return rank_.contains(id); }

 private:
  std::unordered_map<LinkId, std::size_t> rank_;
};

/// Directed conflict weight w(from, to); nonzero only when `from` is less
/// sensitive than `to`. Coincident nodes saturate the weight at 1.
double weight(const Instance& inst, LinkId from, LinkId to,
              const ThresholdMap& thresholds, const Ranking& ranking);

/// Affectance of `from` on `to` under fixed powers, clamped to [0, 1].
/// Saturates at 1 when `to` cannot beat noise at its own power.
double affectance(const Instance& inst, LinkId from, LinkId to,
                  const ThresholdMap& thresholds, const PowerAssignment& powers);

/// Greedy selection under unlimited power with the power recurrence.
Solution solve_unlimited(const Instance& inst, std::span<const LinkId> links,
                         const ThresholdMap& thresholds);
Solution solve_unlimited(const Instance& inst, std::span<const LinkId> links);

/// Affectance greedy with clean-up for a given power assignment.
/// Links that cannot beat noise on their own are never selected.
Solution solve_fixed(const Instance& inst, std::span<const LinkId> links,
                     const ThresholdMap& thresholds,
                     const PowerAssignment& powers);
/// Uses the powers stored on the links.
Solution solve_fixed(const Instance& inst, std::span<const LinkId> links);

/// Combines the unlimited-power greedy on cheap links with the fixed-power
/// greedy at p_max on the rest; every emitted power is <= p_max.
Solution solve_limited(const Instance& inst, std::span<const LinkId> links,
                       const ThresholdMap& thresholds);
Solution solve_limited(const Instance& inst, std::span<const LinkId> links);

/// Reports pairs violating the monotone / sublinear precondition of the
/// fixed-power greedy. Empty when the assignment qualifies (ties allowed).
std::vector<std::string> check_power_monotonicity(
    const Instance& inst, std::span<const LinkId> links,
    const ThresholdMap& thresholds, const PowerAssignment& powers);

/// Powers from the recurrence p = 2 beta N d^alpha + 2 beta sum p' d^alpha /
/// d'^alpha over more sensitive links. `ordered` must be in increasing rank.
PowerAssignment recurrence_powers(const Instance& inst,
                                  std::span<const LinkId> ordered,
                                  const ThresholdMap& thresholds);

/// Fills sinr and objective (= number of selected links) from powers.
void finalize_threshold_solution(const Instance& inst, Solution& sol);

}  // namespace sinrsched
