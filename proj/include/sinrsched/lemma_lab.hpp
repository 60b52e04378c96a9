#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sinrsched/model.hpp"

namespace sinrsched {

/// Partition of an admissible set into parts admissible at scaled
/// thresholds c * beta.
struct Decomposition {
  std::vector<std::vector<LinkId>> parts;
  double scale = 1.0;
  /// Per part: the oracle certified it at thresholds scale * beta.
  std::vector<bool> certified;

  /// ceil(2c)^2, the bound on the number of parts.
  std::size_t part_bound() const;
};

/// Two-stage first-fit binning under powers 2c * witness: a link joins the
/// first bin where its SINR against the links already binned is at least
/// 2c * beta; the second stage re-bins every bin in reverse order.
/// Throws InvalidInput if the witness does not make the set feasible.
Decomposition strengthen(const Instance& inst, std::span<const LinkId> set,
                         const PowerAssignment& witness, double c,
                         const ThresholdMap& thresholds);
Decomposition strengthen(const Instance& inst, std::span<const LinkId> set,
                         const PowerAssignment& witness, double c);

/// `inst` with the given links' senders and receivers swapped, keeping ids,
/// metric and physical constants; thresholds from `thresholds`.
Instance reversed_instance(const Instance& inst, std::span<const LinkId> links,
                           const ThresholdMap& thresholds);

struct ReversalResult {
  std::vector<LinkId> subset;        // ascending ids
  std::vector<LinkId> markov_set;    // links passing the averaging bound
  std::size_t parts = 0;             // parts of the strengthening step
  bool certified = false;            // reversed subset admissible at beta
  PowerAssignment reversed_powers;   // certificate powers when certified
};

/// Extracts a subset whose reversed links are admissible at the original
/// thresholds, of size at least |set| / 72.
ReversalResult reverse_dual(const Instance& inst, std::span<const LinkId> set,
                            const PowerAssignment& witness,
                            const ThresholdMap& thresholds);
ReversalResult reverse_dual(const Instance& inst, std::span<const LinkId> set,
                            const PowerAssignment& witness);

/// One forward link 0 -> 1 (id 0, least sensitive so greedy sees it first)
/// followed by k reversed links 1 -> 0 (ids 1..k), all at threshold 1/k,
/// endpoints spread by 1e-9 so distinct nodes never coincide.
Instance gen_greedy_adversary(std::size_t k, double alpha = 2.0);

/// k forward and k reversed links between 0 and 1 at threshold 1/k, unit
/// powers, ids 0..k-1 forward and k..2k-1 reversed.
Instance gen_aloha_instance(std::size_t k, double alpha = 2.0);

struct AlohaRound {
  std::vector<LinkId> transmitted;
  std::vector<LinkId> succeeded;
};

struct AlohaConfig {
  std::size_t k = 32;
  /// Per-round transmit probability; the last entry repeats. Empty means
  /// the uniform choice 2 / (k + 2).
  std::vector<double> probs;
  std::size_t trials = 400;
  std::uint64_t seed = 0;
  std::size_t max_rounds = 100000;
  double alpha = 2.0;
};

struct AlohaReport {
  /// Rounds until at least k/2 transmissions succeeded; nullopt if that
  /// never happened within max_rounds.
  std::vector<std::optional<std::size_t>> rounds;
  double p_fast = 0.0;  // empirical P(T <= k / 16)
  std::vector<AlohaRound> first_trial_trace;
  bool monotone = true;  // success counts never decreased
  bool dropouts_silent = true;  // successful senders never transmitted again
};

AlohaReport simulate_aloha(const AlohaConfig& cfg);

}  // namespace sinrsched
