#include "sinrsched/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sinrsched/error.hpp"
#include "sinrsched/rng.hpp"

namespace sinrsched {

std::string to_string(UtilityFamily f) {
  switch (f) {
    case UtilityFamily::None:
      return "none";
    case UtilityFamily::Step:
      return "step";
    case UtilityFamily::Shannon:
      return "shannon";
    case UtilityFamily::Mixed:
      return "mixed";
  }
  return "none";
}

UtilityFamily utility_family_from_string(const std::string& name) {
  if (name == "none") return UtilityFamily::None;
  if (name == "step") return UtilityFamily::Step;
  if (name == "shannon") return UtilityFamily::Shannon;
  if (name == "mixed") return UtilityFamily::Mixed;
  throw InvalidInput("unknown utility family '" + name + "'");
}

void GenConfig::validate() const {
  if (dim == 0) throw InvalidInput("dim must be >= 1");
  if (!(area > 0.0)) throw InvalidInput("area must be > 0");
  if (!(d_min > 0.0)) throw InvalidInput("d_min must be > 0");
  if (d_min > d_max) throw InvalidInput("impossible geometry: d_min > d_max");
  if (d_max > area * std::sqrt(static_cast<double>(dim))) {
    throw InvalidInput("d_max exceeds the diameter of the area");
  }
  const double lowest =
      beta_set.empty() ? beta_min : *std::min_element(beta_set.begin(), beta_set.end());
  if (!(lowest > 0.0)) throw InvalidInput("thresholds must be > 0");
  if (lowest < 1.0 && !allow_sub_unit) {
    throw InvalidInput("thresholds below 1 need allow_sub_unit");
  }
  if (beta_set.empty() && beta_min > beta_max) {
    throw InvalidInput("beta_min > beta_max");
  }
  if (demand_min.has_value() != demand_max.has_value()) {
    throw InvalidInput("demand range needs both bounds");
  }
  if (demand_min && (*demand_min < 0.0 || *demand_min > *demand_max)) {
    throw InvalidInput("invalid demand range");
  }
  if (utility != UtilityFamily::None && utility != UtilityFamily::Shannon &&
      (max_steps == 0 || step_gamma_max < 1.0 || !(step_value_max > 0.0))) {
    throw InvalidInput("invalid step utility parameters");
  }
}

namespace {

enum Field : std::uint64_t {
  kSender = 1,
  kDirection,
  kRadius,
  kBeta,
  kUtilityKind,
  kStepCount,
  kStepGamma,
  kStepValue,
  kShannonScale,
  kDemand,
};

UtilitySpec random_step(const CounterRng& rng, std::uint64_t link,
                        const GenConfig& cfg) {
  const auto m = rng.integer(1, cfg.max_steps, {link, kStepCount});
  std::vector<double> gammas;
  gammas.push_back(1.0 + rng.uniform({link, kStepGamma, 0}) * 2.0);
  for (std::uint64_t k = 1; k < m; ++k) {
    gammas.push_back(rng.uniform(1.0, cfg.step_gamma_max, {link, kStepGamma, k}));
  }
  std::sort(gammas.begin(), gammas.end());
  gammas.erase(std::unique(gammas.begin(), gammas.end()), gammas.end());

  StepUtility u;
  double value = 0.0;
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    value += rng.uniform(0.1, 1.0, {link, kStepValue, k}) * cfg.step_value_max /
             static_cast<double>(m);
    u.steps.push_back({gammas[k], value});
  }
  return u;
}

UtilitySpec random_shannon(const CounterRng& rng, std::uint64_t link,
                           const GenConfig& cfg) {
  return ShannonUtility{
      rng.uniform(cfg.shannon_scale_min, cfg.shannon_scale_max,
                  {link, kShannonScale}),
      1.0};
}

}  // namespace

Instance gen_random(const GenConfig& cfg) {
  cfg.validate();
  const CounterRng rng(cfg.seed);
  std::vector<std::vector<double>> points;
  std::vector<Link> links;
  points.reserve(2 * cfg.n);
  links.reserve(cfg.n);

  for (std::uint64_t i = 0; i < cfg.n; ++i) {
    std::vector<double> sender(cfg.dim);
    for (std::size_t k = 0; k < cfg.dim; ++k) {
      sender[k] = rng.uniform(0.0, cfg.area, {i, kSender, k});
    }
    std::vector<double> dir(cfg.dim);
    double norm = 0.0;
    if (cfg.dim == 2) {
      const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi, {i, kDirection});
      dir = {std::cos(theta), std::sin(theta)};
      norm = 1.0;
    } else {
      while (!(norm > 0.0)) {
        for (std::size_t k = 0; k < cfg.dim; ++k) {
          dir[k] = rng.normal({i, kDirection, k, static_cast<std::uint64_t>(norm)});
        }
        for (double x : dir) norm += x * x;
        norm = std::sqrt(norm);
      }
    }
    const double radius = rng.uniform(cfg.d_min, cfg.d_max, {i, kRadius});
    std::vector<double> receiver(cfg.dim);
    for (std::size_t k = 0; k < cfg.dim; ++k) {
      receiver[k] = sender[k] + radius * dir[k] / norm;
    }
    points.push_back(std::move(sender));
    points.push_back(std::move(receiver));

    Link l;
    l.id = static_cast<LinkId>(i);
    l.sender = 2 * i;
    l.receiver = 2 * i + 1;
    if (cfg.beta_set.empty()) {
      l.threshold = rng.uniform(cfg.beta_min, cfg.beta_max, {i, kBeta});
    } else {
      l.threshold = cfg.beta_set[rng.integer(0, cfg.beta_set.size() - 1, {i, kBeta})];
    }
    switch (cfg.utility) {
      case UtilityFamily::None:
        break;
      case UtilityFamily::Step:
        l.utility = random_step(rng, i, cfg);
        break;
      case UtilityFamily::Shannon:
        l.utility = random_shannon(rng, i, cfg);
        break;
      case UtilityFamily::Mixed:
        l.utility = rng.uniform({i, kUtilityKind}) < 0.5 ? random_step(rng, i, cfg)
                                                         : random_shannon(rng, i, cfg);
        break;
    }
    if (cfg.demand_min) {
      l.demand = rng.uniform(*cfg.demand_min, *cfg.demand_max, {i, kDemand});
    }
    l.power = cfg.uniform_power;
    links.push_back(std::move(l));
  }

  InstanceOptions opts;
  opts.allow_sub_unit_threshold = cfg.allow_sub_unit;
  // Euclidean spaces are metric by construction.
  return Instance(MetricSpace::euclidean(cfg.dim, std::move(points)), cfg.alpha,
                  cfg.noise, cfg.p_max, std::move(links), opts);
}

Instance gen_line(const std::vector<LineLink>& specs, const LineOptions& opts) {
  std::vector<std::vector<double>> points;
  std::vector<Link> links;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    const LineLink& s = specs[k];
    if (!std::isfinite(s.s) || !std::isfinite(s.r)) {
      throw InvalidInput("line coordinates must be finite");
    }
    if (s.s == s.r) {
      throw InvalidInput("line link " + std::to_string(k) +
                         " has sender equal to receiver");
    }
    const double shift = opts.perturb ? 1e-9 : 0.0;
    points.push_back({s.s + shift * static_cast<double>(2 * k)});
    points.push_back({s.r + shift * static_cast<double>(2 * k + 1)});
    Link l;
    l.id = static_cast<LinkId>(k);
    l.sender = 2 * k;
    l.receiver = 2 * k + 1;
    l.threshold = s.beta;
    l.power = opts.uniform_power;
    links.push_back(l);
  }
  InstanceOptions io;
  io.allow_sub_unit_threshold = opts.allow_sub_unit;
  return Instance(MetricSpace::euclidean(1, std::move(points)), opts.alpha,
                  opts.noise, opts.p_max, std::move(links), io);
}

}  // namespace sinrsched
