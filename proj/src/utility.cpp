#include "sinrsched/utility.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sinrsched/error.hpp"

namespace sinrsched {
namespace {

// A threshold this close above the cap is still reachable: the cap itself is
// a computed quotient and carries rounding of its own.
constexpr double kCapSlack = 1e-9;

bool within_cap(double gamma, double gamma_cap) {
  return gamma <= gamma_cap * (1.0 + kCapSlack);
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double eval_step(const StepUtility& u, double gamma) {
  auto it = std::upper_bound(
      u.steps.begin(), u.steps.end(), gamma,
      [](double g, const StepUtility::Step& s) { return g < s.gamma; });
  if (it == u.steps.begin()) return 0.0;
  return std::prev(it)->value;
}

double eval_shannon(const ShannonUtility& u, double gamma) {
  if (gamma < u.cutoff) return 0.0;
  return u.scale * std::log2(1.0 + gamma);
}

}  // namespace

void validate(const UtilitySpec& u) {
  std::visit(
      Overloaded{
          [](const StepUtility& s) {
            if (s.steps.size() > kMaxSteps) {
              throw InvalidInput("step utility has " +
                                 std::to_string(s.steps.size()) +
                                 " steps; at most 10000 allowed");
            }
            double prev_gamma = 0.0;
            double prev_value = 0.0;
            for (std::size_t i = 0; i < s.steps.size(); ++i) {
              const auto& st = s.steps[i];
              if (!std::isfinite(st.gamma) || !std::isfinite(st.value)) {
                throw InvalidInput("step utility entries must be finite");
              }
              if (i == 0 && st.gamma < 1.0) {
                throw InvalidInput("step utility must be zero below SINR 1");
              }
              if (i > 0 && st.gamma <= prev_gamma) {
                throw InvalidInput("step gammas must be strictly increasing");
              }
              if (st.value < prev_value) {
                throw InvalidInput("step values must be nonnegative and "
                                   "nondecreasing");
              }
              prev_gamma = st.gamma;
              prev_value = st.value;
            }
          },
          [](const ShannonUtility& s) {
            if (!(s.scale > 0.0) || !std::isfinite(s.scale)) {
              throw InvalidInput("shannon utility needs a finite scale > 0");
            }
            if (!(s.cutoff >= 1.0) || !std::isfinite(s.cutoff)) {
              throw InvalidInput("shannon utility needs a finite cutoff >= 1");
            }
          },
      },
      u);
}

double evaluate(const UtilitySpec& u, double gamma) {
  return std::visit(Overloaded{
                        [&](const StepUtility& s) { return eval_step(s, gamma); },
                        [&](const ShannonUtility& s) {
                          return eval_shannon(s, gamma);
                        },
                    },
                    u);
}

double max_utility(const UtilitySpec& u, double gamma_cap) {
  if (std::isinf(gamma_cap) &&
      std::holds_alternative<ShannonUtility>(u)) {
    throw Unbounded("objective unbounded: shannon utility with unlimited power");
  }
  return evaluate(u, gamma_cap);
}

std::optional<double> inverse_threshold(const UtilitySpec& u, double target,
                                        double gamma_cap) {
  if (!(target > 0.0)) {
    throw InvalidInput("inverse_threshold needs a positive target");
  }
  return std::visit(
      Overloaded{
          [&](const StepUtility& s) -> std::optional<double> {
            auto it = std::lower_bound(
                s.steps.begin(), s.steps.end(), target,
                [](const StepUtility::Step& st, double b) {
                  return st.value < b;
                });
            if (it == s.steps.end() || !within_cap(it->gamma, gamma_cap)) {
              return std::nullopt;
            }
            return it->gamma;
          },
          [&](const ShannonUtility& s) -> std::optional<double> {
            double gamma = std::max(s.cutoff, std::exp2(target / s.scale) - 1.0);
            if (!within_cap(gamma, gamma_cap)) return std::nullopt;
            return std::min(gamma, gamma_cap);
          },
      },
      u);
}

ScaledUtility::ScaledUtility(UtilitySpec base, double scale, double cap)
    : base_(std::move(base)), scale_(scale), cap_(cap) {
  validate(base_);
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) {
    throw InvalidInput("utility scale must be finite and > 0");
  }
  if (!(cap_ >= 0.0)) throw InvalidInput("utility cap must be >= 0");
}

double ScaledUtility::evaluate(double gamma) const {
  return std::min(cap_, scale_ * sinrsched::evaluate(base_, gamma));
}

double ScaledUtility::max_utility(double gamma_cap) const {
  if (std::isinf(gamma_cap) && std::isfinite(cap_) &&
      std::holds_alternative<ShannonUtility>(base_)) {
    return cap_;
  }
  return std::min(cap_, scale_ * sinrsched::max_utility(base_, gamma_cap));
}

std::optional<double> ScaledUtility::inverse_threshold(double target,
                                                       double gamma_cap) const {
  if (!(target > 0.0)) {
    throw InvalidInput("inverse_threshold needs a positive target");
  }
  if (target > cap_) return std::nullopt;
  double base_target = target / scale_;
  // Undo the rounding of the division so targets computed as scale * value
  // still hit that exact step.
  if (scale_ != 1.0) base_target *= 1.0 - 1e-12;
  return sinrsched::inverse_threshold(base_, base_target, gamma_cap);
}

ScaledUtility ScaledUtility::capped(double cap) const {
  ScaledUtility out = *this;
  out.cap_ = std::min(cap_, cap);
  return out;
}

}  // namespace sinrsched
