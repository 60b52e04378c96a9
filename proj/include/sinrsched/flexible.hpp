#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sinrsched/model.hpp"
#include "sinrsched/utility.hpp"

namespace sinrsched {

enum class PowerMode { Unlimited, Fixed, Limited };

std::string to_string(PowerMode mode);
PowerMode power_mode_from_string(const std::string& name);

using UtilityMap = std::map<LinkId, ScaledUtility>;

/// Largest SINR a link reaches alone under the mode: unlimited power has no
/// cap, limited power is capped at p_max, fixed power at the link's power.
double gamma_cap(const Instance& inst, LinkId id, PowerMode mode,
                 const PowerAssignment& fixed_powers = {});

/// SINR credited to a selected link: a value within the comparison
/// tolerance below the threshold counts as meeting it.
double credited_sinr(double gamma, double threshold);

/// ceil(log2 n) for n >= 1.
std::size_t ceil_log2(std::size_t n);

struct FlexibleLevel {
  std::size_t index = 0;
  double target = 0.0;  // 2^-index * B
  ThresholdMap thresholds;
  Solution solution;  // objective = realized utility
};

struct FlexibleRun {
  double B = 0.0;
  std::vector<FlexibleLevel> levels;
  std::size_t best_index = 0;

  const Solution& best() const { return levels.at(best_index).solution; }
};

/// Runs the mode's threshold solver once per utility level 2^-i B,
/// i = 0..ceil(log2 n), and keeps the level of highest realized utility.
/// Links whose utility cannot reach a level sit that level out.
FlexibleRun solve_flexible(const Instance& inst, std::span<const LinkId> links,
                           const UtilityMap& utilities, PowerMode mode,
                           const PowerAssignment& fixed_powers = {});

/// Uses every link of the instance with its own utility (and, for fixed
/// mode, its own power).
FlexibleRun solve_flexible(const Instance& inst, PowerMode mode);

/// Realized utility of each selected link of a slot.
std::map<LinkId, double> realized_utility(const Solution& slot,
                                          const UtilityMap& utilities);

struct Schedule {
  int scheme = 0;
  std::vector<Solution> slots;
  /// Remaining demand (in the scheme's units) after each slot.
  std::vector<std::map<LinkId, double>> residual_demands;
  /// Per slot: some demand completed, or the slot's summed utility >= 1.
  std::vector<bool> progress;
  /// False when the scheme cannot serve some demand at all (scheme 1 when a
  /// demand exceeds 2n times the link's best single-slot utility).
  bool complete = true;
  /// Scheme 2 slots where the best level made no progress and level 0 was
  /// scheduled instead.
  std::size_t fallbacks = 0;
};

struct LatencyResult {
  Schedule schedule;  // the shorter of the two
  Schedule scheme1;
  Schedule scheme2;
  /// Demands dropped up front because they are zero.
  std::vector<LinkId> dropped;
};

struct LatencyOptions {
  std::size_t slot_cap = 1000000;
};

/// Repeatedly runs solve_flexible on rounded (scheme 1) and normalized
/// (scheme 2) residual utilities until all demands are met; returns both
/// schedules and the shorter one.
LatencyResult solve_latency(const Instance& inst, PowerMode mode,
                            const LatencyOptions& opts = {});

/// Rounded utility of scheme 1 as a step table: value k / (2n) wherever
/// floor(2n u / demand) = k, up to k = 2n.
StepUtility rounded_step_utility(const UtilitySpec& u, double demand,
                                 std::size_t n, double gamma_cap);

}  // namespace sinrsched
