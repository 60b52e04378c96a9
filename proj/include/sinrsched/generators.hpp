#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sinrsched/model.hpp"

namespace sinrsched {

enum class UtilityFamily { None, Step, Shannon, Mixed };

std::string to_string(UtilityFamily f);
UtilityFamily utility_family_from_string(const std::string& name);

/// Parameters of a random instance. Every draw is keyed by (seed, link
/// index, field), so changing n or adding fields leaves earlier links alone.
struct GenConfig {
  std::size_t n = 10;
  std::size_t dim = 2;
  double area = 100.0;
  double d_min = 1.0;
  double d_max = 10.0;
  double beta_min = 1.0;
  double beta_max = 1.0;
  std::vector<double> beta_set;  // overrides the range when nonempty
  bool allow_sub_unit = false;

  UtilityFamily utility = UtilityFamily::None;
  std::size_t max_steps = 4;
  double step_gamma_max = 64.0;
  double step_value_max = 4.0;
  double shannon_scale_min = 0.5;
  double shannon_scale_max = 2.0;

  std::optional<double> demand_min;
  std::optional<double> demand_max;
  std::optional<double> uniform_power;

  double alpha = 2.0;
  double noise = 1e-6;
  double p_max = kUnbounded;
  std::uint64_t seed = 0;

  void validate() const;
};

Instance gen_random(const GenConfig& cfg);

struct LineLink {
  double s = 0.0;
  double r = 1.0;
  double beta = 1.0;
};

struct LineOptions {
  double alpha = 2.0;
  double noise = 0.1;
  double p_max = kUnbounded;
  /// Shift node j by j * 1e-9 so colocated endpoints of different links stay
  /// at positive distance.
  bool perturb = false;
  bool allow_sub_unit = false;
  std::optional<double> uniform_power;
};

/// 1-D instance with nodes 2k (sender) and 2k + 1 (receiver) for link k.
Instance gen_line(const std::vector<LineLink>& links, const LineOptions& opts = {});

}  // namespace sinrsched
