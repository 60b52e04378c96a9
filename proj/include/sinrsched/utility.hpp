#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace sinrsched {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// Piecewise-constant utility: u(gamma) is the value of the largest step
/// whose gamma is <= gamma, and 0 below the first step.
struct StepUtility {
  struct Step {
    double gamma;
    double value;
    bool operator==(const Step&) const = default;
  };
  std::vector<Step> steps;

  bool operator==(const StepUtility&) const = default;
};

/// u(gamma) = scale * log2(1 + gamma) for gamma >= cutoff, 0 below.
struct ShannonUtility {
  double scale = 1.0;
  double cutoff = 1.0;

  bool operator==(const ShannonUtility&) const = default;
};

using UtilitySpec = std::variant<StepUtility, ShannonUtility>;

inline constexpr std::size_t kMaxSteps = 10000;

/// Throws InvalidInput unless the utility satisfies u(gamma) = 0 below 1,
/// is nondecreasing, and a step table holds at most kMaxSteps entries.
void validate(const UtilitySpec& u);

double evaluate(const UtilitySpec& u, double gamma);

/// u evaluated at the largest SINR the link can reach on its own.
/// Throws Unbounded when gamma_cap is infinite and u grows without bound.
double max_utility(const UtilitySpec& u, double gamma_cap);

/// Smallest SINR reaching utility `target`, or nullopt if no SINR up to
/// gamma_cap does. Throws InvalidInput for target <= 0.
std::optional<double> inverse_threshold(const UtilitySpec& u, double target,
                                        double gamma_cap = kUnbounded);

/// A utility the schedulers derive from a base spec:
/// u'(gamma) = min(cap, scale * base(gamma)).
///
/// Both queries reduce exactly to the base queries, so the derived curve is
/// never materialized.
class ScaledUtility {
 public:
  ScaledUtility() = default;
  explicit ScaledUtility(UtilitySpec base, double scale = 1.0,
                         double cap = kUnbounded);

  double evaluate(double gamma) const;
  double max_utility(double gamma_cap) const;
  std::optional<double> inverse_threshold(double target,
                                          double gamma_cap = kUnbounded) const;

  const UtilitySpec& base() const { return base_; }
  double scale() const { return scale_; }
  double cap() const { return cap_; }

  ScaledUtility capped(double cap) const;

 private:
  UtilitySpec base_ = StepUtility{};
  double scale_ = 1.0;
  double cap_ = kUnbounded;
};

}  // namespace sinrsched
