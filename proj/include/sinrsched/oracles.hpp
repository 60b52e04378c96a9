#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sinrsched/model.hpp"

namespace sinrsched {

struct AdmissibilityCertificate {
  bool feasible = false;
  PowerAssignment powers;  // minimal fixed point, present iff feasible
  std::size_t iterations = 0;
  std::optional<LinkId> violated;  // first link over the cap
  std::string method = "fixed_point";
  bool monotone = true;  // iterates never decreased
};

struct AdmissibilityOptions {
  double relative_tolerance = 1e-12;
  std::size_t max_iterations = 100000;
  /// Divergence threshold when the cap is unlimited.
  double divergence_limit = 1e30;
};

/// Decides whether some power assignment (each power <= cap) lets every link
/// in `subset` reach its threshold, by iterating the minimal-power map from
/// zero. Iterations that neither converge nor cross the cap within the
/// budget are settled by solving the fixed-point equations directly.
AdmissibilityCertificate check_admissible(const Instance& inst,
                                          std::span<const LinkId> subset,
                                          const ThresholdMap& thresholds,
                                          double cap,
                                          const AdmissibilityOptions& opts = {});
AdmissibilityCertificate check_admissible(const Instance& inst,
                                          std::span<const LinkId> subset,
                                          double cap);

struct SpectralResult {
  bool admissible = false;  // rho < 1
  double rho = 0.0;
  double lower = 0.0;  // Collatz-Wielandt bounds at termination
  double upper = 0.0;
  std::size_t iterations = 0;
};

/// Noise-free admissibility: spectral radius of the normalized interference
/// matrix beta(l) d(l)^alpha / d(s', r)^alpha, by power iteration.
SpectralResult spectral_admissible(const Instance& inst,
                                   std::span<const LinkId> subset,
                                   const ThresholdMap& thresholds);

/// Every link of `subset` meets its threshold under `powers`.
bool is_feasible(const Instance& inst, std::span<const LinkId> subset,
                 const ThresholdMap& thresholds, const PowerAssignment& powers);

enum class PowerRegime { Variable, VariableCapped, Fixed };

struct BruteForceResult {
  std::vector<LinkId> subset;  // ascending
  double value = 0.0;          // size, or total utility
  std::size_t evaluated = 0;
};

inline constexpr std::size_t kMaxBruteForceLinks = 20;

/// Maximum-cardinality feasible subset (lexicographically smallest among
/// ties). `powers` is consulted only for PowerRegime::Fixed.
BruteForceResult brute_opt_threshold(const Instance& inst,
                                     std::span<const LinkId> links,
                                     const ThresholdMap& thresholds,
                                     PowerRegime regime,
                                     const PowerAssignment& powers = {});
BruteForceResult brute_opt_threshold(const Instance& inst,
                                     std::span<const LinkId> links,
                                     PowerRegime regime,
                                     const PowerAssignment& powers = {});

/// Subset maximizing total realized utility under fixed powers.
BruteForceResult brute_opt_flexible_fixed(const Instance& inst,
                                          std::span<const LinkId> links,
                                          const PowerAssignment& powers);

}  // namespace sinrsched
