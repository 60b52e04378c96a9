#include "sinrsched/flexible.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sinrsched/error.hpp"
#include "sinrsched/threshold_capacity.hpp"

namespace sinrsched {

std::string to_string(PowerMode mode) {
  switch (mode) {
    case PowerMode::Unlimited:
      return "unlimited";
    case PowerMode::Fixed:
      return "fixed";
    case PowerMode::Limited:
      return "limited";
  }
  return "unknown";
}

PowerMode power_mode_from_string(const std::string& name) {
  if (name == "unlimited") return PowerMode::Unlimited;
  if (name == "fixed") return PowerMode::Fixed;
  if (name == "limited") return PowerMode::Limited;
  throw InvalidInput("unknown power mode '" + name + "'");
}

double gamma_cap(const Instance& inst, LinkId id, PowerMode mode,
                 const PowerAssignment& fixed_powers) {
  double power = kUnbounded;
  switch (mode) {
    case PowerMode::Unlimited:
      return kUnbounded;
    case PowerMode::Limited:
      power = inst.p_max();
      break;
    case PowerMode::Fixed: {
      auto it = fixed_powers.find(id);
      if (it == fixed_powers.end()) {
        throw InvalidInput("no fixed power for link " + std::to_string(id));
      }
      power = it->second;
      break;
    }
  }
  if (std::isinf(power)) return kUnbounded;
  return power / (inst.noise() * inst.own_loss(id));
}

double credited_sinr(double gamma, double threshold) {
  return meets_threshold(gamma, threshold) ? std::max(gamma, threshold) : gamma;
}

std::size_t ceil_log2(std::size_t n) {
  std::size_t k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

std::map<LinkId, double> realized_utility(const Solution& slot,
                                          const UtilityMap& utilities) {
  std::map<LinkId, double> out;
  for (LinkId id : slot.selected) {
    double gamma = credited_sinr(slot.sinr.at(id), slot.thresholds.at(id));
    out[id] = utilities.at(id).evaluate(gamma);
  }
  return out;
}

namespace {

Solution run_threshold_solver(const Instance& inst,
                              std::span<const LinkId> links,
                              const ThresholdMap& thresholds, PowerMode mode,
                              const PowerAssignment& fixed_powers) {
  switch (mode) {
    case PowerMode::Unlimited:
      return solve_unlimited(inst, links, thresholds);
    case PowerMode::Limited:
      return solve_limited(inst, links, thresholds);
    case PowerMode::Fixed: {
      PowerAssignment powers;
      for (LinkId id : links) powers[id] = fixed_powers.at(id);
      return solve_fixed(inst, links, thresholds, powers);
    }
  }
  throw InvalidInput("unknown power mode");
}

PowerAssignment powers_from_links(const Instance& inst,
                                  std::span<const LinkId> links) {
  PowerAssignment powers;
  for (LinkId id : links) {
    const Link& l = inst.link(id);
    if (!l.power) {
      throw InvalidInput("fixed mode needs a power on link " +
                         std::to_string(id));
    }
    powers[id] = *l.power;
  }
  return powers;
}

}  // namespace

FlexibleRun solve_flexible(const Instance& inst, std::span<const LinkId> links,
                           const UtilityMap& utilities, PowerMode mode,
                           const PowerAssignment& fixed_powers) {
  if (links.empty()) throw InvalidInput("solve_flexible needs at least one link");

  std::map<LinkId, double> caps;
  FlexibleRun run;
  for (LinkId id : links) {
    auto it = utilities.find(id);
    if (it == utilities.end()) {
      throw InvalidInput("link " + std::to_string(id) + " has no utility");
    }
    caps[id] = gamma_cap(inst, id, mode, fixed_powers);
    run.B = std::max(run.B, it->second.max_utility(caps[id]));
  }

  const std::size_t n_levels = ceil_log2(links.size()) + 1;
  for (std::size_t i = 0; i < n_levels; ++i) {
    FlexibleLevel level;
    level.index = i;
    level.target = std::ldexp(run.B, -static_cast<int>(i));
    std::vector<LinkId> eligible;
    if (level.target > 0.0) {
      for (LinkId id : links) {
        auto beta = utilities.at(id).inverse_threshold(level.target, caps[id]);
        if (!beta) continue;
        if (*beta < 1.0) {
          throw Error("utility level threshold below 1 for link " +
                      std::to_string(id));
        }
        level.thresholds[id] = *beta;
        eligible.push_back(id);
      }
    }
    level.solution =
        run_threshold_solver(inst, eligible, level.thresholds, mode, fixed_powers);
    level.solution.algorithm = "flexible-" + to_string(mode);
    level.solution.trace.clear();
    double total = 0.0;
    for (const auto& [id, value] : realized_utility(level.solution, utilities)) {
      total += value;
    }
    level.solution.objective = total;
    run.levels.push_back(std::move(level));
  }

  for (std::size_t i = 1; i < run.levels.size(); ++i) {
    if (run.levels[i].solution.objective >
        run.levels[run.best_index].solution.objective) {
      run.best_index = i;
    }
  }
  return run;
}

FlexibleRun solve_flexible(const Instance& inst, PowerMode mode) {
  const auto ids = inst.link_ids();
  UtilityMap utilities;
  for (LinkId id : ids) {
    const Link& l = inst.link(id);
    if (!l.utility) {
      throw InvalidInput("link " + std::to_string(id) + " has no utility");
    }
    utilities.emplace(id, ScaledUtility(*l.utility));
  }
  PowerAssignment powers;
  if (mode == PowerMode::Fixed) powers = powers_from_links(inst, ids);
  return solve_flexible(inst, ids, utilities, mode, powers);
}

StepUtility rounded_step_utility(const UtilitySpec& u, double demand,
                                 std::size_t n, double gamma_cap) {
  if (!(demand > 0.0)) throw InvalidInput("rounding needs a positive demand");
  const double units = 2.0 * static_cast<double>(n);
  const auto max_units = static_cast<long long>(2 * n);
  StepUtility out;
  long long last = 0;
  auto push = [&](double gamma, long long k) {
    k = std::min(k, max_units);
    if (k <= last) return;
    if (!out.steps.empty() && gamma <= out.steps.back().gamma) return;
    out.steps.push_back({gamma, static_cast<double>(k) / units});
    last = k;
  };

  if (const auto* step = std::get_if<StepUtility>(&u)) {
    for (const auto& st : step->steps) {
      push(st.gamma, static_cast<long long>(std::floor(units * st.value / demand)));
    }
    return out;
  }
  const auto& sh = std::get<ShannonUtility>(u);
  const auto at_cutoff = static_cast<long long>(
      std::floor(units * evaluate(u, sh.cutoff) / demand));
  push(sh.cutoff, at_cutoff);
  for (long long k = std::max<long long>(at_cutoff + 1, 1); k <= max_units; ++k) {
    double gamma =
        std::exp2(static_cast<double>(k) * demand / (units * sh.scale)) - 1.0;
    if (gamma > gamma_cap * (1.0 + 1e-9)) break;
    push(std::max(gamma, sh.cutoff), k);
  }
  return out;
}

namespace {

constexpr double kDemandTolerance = 1e-9;

double total(const std::map<LinkId, double>& m) {
  double s = 0.0;
  for (const auto& [id, v] : m) s += v;
  return s;
}

// Scheme 1 tracks residuals in integer units of 1 / (2n) so termination at
// exactly zero is exact.
Schedule run_scheme1(const Instance& inst, std::span<const LinkId> links,
                     const std::map<LinkId, double>& demand,
                     const std::map<LinkId, double>& caps, PowerMode mode,
                     const PowerAssignment& fixed_powers,
                     const LatencyOptions& opts) {
  Schedule sched;
  sched.scheme = 1;
  const std::size_t n = links.size();
  const auto full = static_cast<long long>(2 * n);
  const double units = static_cast<double>(full);

  std::map<LinkId, StepUtility> rounded;
  std::map<LinkId, long long> residual;
  for (LinkId id : links) {
    rounded[id] = rounded_step_utility(*inst.link(id).utility, demand.at(id), n,
                                       caps.at(id));
    residual[id] = full;
    if (rounded[id].steps.empty()) sched.complete = false;
  }
  if (!sched.complete) return sched;

  auto remaining = [&] {
    long long s = 0;
    for (const auto& [id, r] : residual) s += r;
    return s;
  };
  while (remaining() > 0) {
    if (sched.slots.size() >= opts.slot_cap) {
      throw Error("latency scheme 1 exceeded the slot cap");
    }
    std::vector<LinkId> active;
    UtilityMap capped;
    for (LinkId id : links) {
      if (residual[id] <= 0) continue;
      active.push_back(id);
      capped.emplace(id, ScaledUtility(rounded[id], 1.0,
                                       static_cast<double>(residual[id]) / units));
    }
    FlexibleRun run = solve_flexible(inst, active, capped, mode, fixed_powers);
    Solution slot = run.best();

    long long gained = 0;
    bool completed = false;
    for (const auto& [id, value] : realized_utility(slot, capped)) {
      auto k = std::min(residual[id], std::llround(value * units));
      residual[id] -= k;
      gained += k;
      if (k > 0 && residual[id] == 0) completed = true;
    }
    if (gained == 0) throw Error("latency scheme 1 made no progress");
    sched.progress.push_back(completed || gained >= full);
    std::map<LinkId, double> snapshot;
    for (const auto& [id, r] : residual) snapshot[id] = static_cast<double>(r) / units;
    sched.residual_demands.push_back(std::move(snapshot));
    sched.slots.push_back(std::move(slot));
  }
  return sched;
}

struct Step2 {
  std::map<LinkId, double> residual;
  double gained = 0.0;
  bool completed = false;
  bool progress = false;
};

Schedule run_scheme2(const Instance& inst, std::span<const LinkId> links,
                     const std::map<LinkId, double>& demand,
                     const std::map<LinkId, double>& umax, PowerMode mode,
                     const PowerAssignment& fixed_powers,
                     const LatencyOptions& opts) {
  Schedule sched;
  sched.scheme = 2;
  std::map<LinkId, ScaledUtility> normalized;
  std::map<LinkId, double> residual;
  for (LinkId id : links) {
    normalized.emplace(id,
                       ScaledUtility(*inst.link(id).utility, 1.0 / umax.at(id)));
    residual[id] = demand.at(id) / umax.at(id);
  }

  while (total(residual) > 0.0) {
    if (sched.slots.size() >= opts.slot_cap) {
      throw Error("latency scheme 2 exceeded the slot cap");
    }
    std::vector<LinkId> active;
    UtilityMap capped;
    for (LinkId id : links) {
      if (residual[id] <= 0.0) continue;
      active.push_back(id);
      capped.emplace(id, normalized.at(id).capped(residual[id]));
    }
    FlexibleRun run = solve_flexible(inst, active, capped, mode, fixed_powers);

    auto settle = [&](const Solution& slot) {
      Step2 st;
      st.residual = residual;
      for (const auto& [id, value] : realized_utility(slot, capped)) {
        const double initial = demand.at(id) / umax.at(id);
        double left = residual.at(id) - std::min(residual.at(id), value);
        // Rounding dust from the normalization is not worth another slot.
        if (left <= 1e-12 * std::max(1.0, initial)) left = 0.0;
        st.gained += residual.at(id) - left;
        if (left == 0.0) st.completed = true;
        st.residual[id] = left;
      }
      st.progress = st.completed || st.gained >= 1.0 - kDemandTolerance;
      return st;
    };
    Solution slot = run.best();
    Step2 st = settle(slot);
    // Only possible once every residual is below 1: the best level spread
    // its utility without finishing anyone. Level 0 always finishes the
    // link with the largest residual.
    if (!st.progress && run.best_index != 0) {
      Step2 alt = settle(run.levels.front().solution);
      if (alt.progress) {
        slot = run.levels.front().solution;
        st = std::move(alt);
        ++sched.fallbacks;
      }
    }
    if (!(st.gained > 0.0)) throw Error("latency scheme 2 made no progress");
    residual = std::move(st.residual);
    sched.progress.push_back(st.progress);
    sched.residual_demands.push_back(residual);
    sched.slots.push_back(std::move(slot));
  }
  return sched;
}

}  // namespace

LatencyResult solve_latency(const Instance& inst, PowerMode mode,
                            const LatencyOptions& opts) {
  LatencyResult result;
  std::vector<LinkId> links;
  std::map<LinkId, double> demand, caps, umax;
  PowerAssignment fixed_powers;
  for (const Link& l : inst.links()) {
    if (!l.demand) {
      throw InvalidInput("link " + std::to_string(l.id) + " has no demand");
    }
    if (!l.utility) {
      throw InvalidInput("link " + std::to_string(l.id) + " has no utility");
    }
    if (*l.demand == 0.0) {
      result.dropped.push_back(l.id);
      continue;
    }
    links.push_back(l.id);
  }
  if (mode == PowerMode::Fixed) fixed_powers = powers_from_links(inst, links);
  for (LinkId id : links) {
    demand[id] = *inst.link(id).demand;
    caps[id] = gamma_cap(inst, id, mode, fixed_powers);
    umax[id] = max_utility(*inst.link(id).utility, caps[id]);
    if (!(umax[id] > 0.0)) {
      throw Unbounded("unschedulable demand on link " + std::to_string(id));
    }
  }

  result.scheme1.scheme = 1;
  result.scheme2.scheme = 2;
  if (!links.empty()) {
    result.scheme1 =
        run_scheme1(inst, links, demand, caps, mode, fixed_powers, opts);
    result.scheme2 =
        run_scheme2(inst, links, demand, umax, mode, fixed_powers, opts);
  }
  const bool first = result.scheme1.complete &&
                     result.scheme1.slots.size() <= result.scheme2.slots.size();
  result.schedule = first ? result.scheme1 : result.scheme2;
  return result;
}

}  // namespace sinrsched
