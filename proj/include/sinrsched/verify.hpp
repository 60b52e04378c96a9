#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sinrsched/flexible.hpp"
#include "sinrsched/model.hpp"

namespace sinrsched {

struct VerifyReport {
  bool ok = true;
  std::vector<std::string> violations;
  std::optional<LinkId> first_violated;

  void fail(std::string what, std::optional<LinkId> link = std::nullopt);
};

/// Relative tolerance between a stored SINR and its recomputation.
inline constexpr double kStoredSinrTolerance = 1e-9;

struct VerifyOptions {
  /// Compare the stored objective with the one implied by the algorithm.
  bool check_objective = true;
  /// Require every power <= p_max. Defaults to the algorithm's contract:
  /// only capped solvers promise it.
  std::optional<bool> enforce_cap;
};

/// Re-checks a solution against its instance: known and distinct links,
/// finite nonnegative powers, stored SINRs equal to recomputed ones, every
/// recomputed SINR meeting its threshold, and the objective.
VerifyReport verify_solution(const Instance& inst, const Solution& sol,
                             const VerifyOptions& opts = {});

/// Cumulative original utility of each link over the slots, at credited SINR.
std::map<LinkId, double> delivered_utility(const Instance& inst,
                                           const Schedule& sched);

/// Verifies every slot and that each link's delivered utility covers its
/// demand up to 1e-9 (relative to max(1, demand)).
VerifyReport verify_schedule(const Instance& inst, const Schedule& sched);

}  // namespace sinrsched
