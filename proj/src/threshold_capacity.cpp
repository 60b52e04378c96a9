#include "sinrsched/threshold_capacity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sinrsched/error.hpp"

namespace sinrsched {

WeightParams WeightParams::for_alpha(double alpha) {
  WeightParams p;
  p.tau = 1.0 / (6.0 * std::pow(3.0, alpha) + 2.0);
  return p;
}

Ranking::Ranking(std::span<const LinkId> order) {
  for (std::size_t k = 0; k < order.size(); ++k) rank_[order[k]] = k + 1;
}

std::size_t Ranking::rank(LinkId id) const {
  auto it = rank_.find(id);
  if (it == rank_.end()) {
    throw InvalidInput("link " + std::to_string(id) + " is not ranked");
  }
  return it->second;
}

namespace {

double beta_of(const ThresholdMap& thresholds, LinkId id) {
  auto it = thresholds.find(id);
  if (it == thresholds.end()) {
    throw InvalidInput("link " + std::to_string(id) + " has no threshold");
  }
  return it->second;
}

double power_of(const PowerAssignment& powers, LinkId id) {
  auto it = powers.find(id);
  if (it == powers.end()) {
    throw InvalidInput("no power for link " + std::to_string(id));
  }
  return it->second;
}

// Greedy pass shared by the unlimited and limited solvers: scan in
// decreasing rank, accept when the incoming weight from accepted links is
// within tau. Returns accepted links in scan order.
std::vector<LinkId> weight_greedy(const Instance& inst,
                                  const std::vector<LinkId>& order,
                                  const ThresholdMap& thresholds,
                                  const Ranking& ranking, double tau,
                                  std::vector<TraceEntry>& trace) {
  std::vector<LinkId> accepted;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    double sum = 0.0;
    for (LinkId l : accepted) sum += weight(inst, l, *it, thresholds, ranking);
    bool ok = sum <= tau;
    trace.push_back({"select", *it, sum, tau, ok});
    if (ok) accepted.push_back(*it);
  }
  return accepted;
}

}  // namespace

double weight(const Instance& inst, LinkId from, LinkId to,
              const ThresholdMap& thresholds, const Ranking& ranking) {
  if (from == to) return 0.0;
  if (ranking.rank(from) <= ranking.rank(to)) return 0.0;
  const double b_from = beta_of(thresholds, from);
  const double b_to = beta_of(thresholds, to);
  const double own_from = inst.own_loss(from);
  const double own_to = inst.own_loss(to);
  const double from_at_to = inst.cross_loss(from, to);  // d(s, r')^alpha
  const double to_at_from = inst.cross_loss(to, from);  // d(s', r)^alpha
  double sum = b_from * b_to * own_from * own_to / (from_at_to * to_at_from) +
               b_from * own_from / from_at_to + b_from * own_from / to_at_from;
  if (std::isnan(sum)) return 1.0;
  return std::min(1.0, sum);
}

double affectance(const Instance& inst, LinkId from, LinkId to,
                  const ThresholdMap& thresholds,
                  const PowerAssignment& powers) {
  const double p_from = power_of(powers, from);
  if (p_from == 0.0 || from == to) return 0.0;
  const double b_to = beta_of(thresholds, to);
  const double margin =
      power_of(powers, to) / inst.own_loss(to) - b_to * inst.noise();
  if (!(margin > 0.0)) return 1.0;
  double a = b_to * (p_from / inst.cross_loss(from, to)) / margin;
  return std::min(1.0, a);
}

PowerAssignment recurrence_powers(const Instance& inst,
                                  std::span<const LinkId> ordered,
                                  const ThresholdMap& thresholds) {
  PowerAssignment powers;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    const LinkId cur = ordered[i];
    const double beta = beta_of(thresholds, cur);
    const double own = inst.own_loss(cur);
    double received = 0.0;
    for (std::size_t j = 0; j < i; ++j) {
      const LinkId prev = ordered[j];
      received += powers.at(prev) / inst.cross_loss(prev, cur);
    }
    powers[cur] = 2.0 * beta * inst.noise() * own + 2.0 * beta * received * own;
  }
  return powers;
}

void finalize_threshold_solution(const Instance& inst, Solution& sol) {
  std::sort(sol.selected.begin(), sol.selected.end());
  sol.sinr = sinr_all(inst, sol.selected, sol.powers);
  ThresholdMap kept;
  for (LinkId id : sol.selected) kept[id] = sol.thresholds.at(id);
  sol.thresholds = std::move(kept);
  sol.objective = static_cast<double>(sol.selected.size());
}

Solution solve_unlimited(const Instance& inst, std::span<const LinkId> links,
                         const ThresholdMap& thresholds) {
  Solution sol;
  sol.algorithm = "unlimited";
  sol.thresholds = thresholds;
  const auto order = sensitivity_order(inst, links, thresholds);
  const Ranking ranking(order);
  const auto params = WeightParams::for_alpha(inst.alpha());

  auto accepted =
      weight_greedy(inst, order, thresholds, ranking, params.tau, sol.trace);
  std::reverse(accepted.begin(), accepted.end());  // increasing rank
  sol.powers = recurrence_powers(inst, accepted, thresholds);
  sol.selected = accepted;
  finalize_threshold_solution(inst, sol);
  return sol;
}

Solution solve_unlimited(const Instance& inst, std::span<const LinkId> links) {
  return solve_unlimited(inst, links, link_thresholds(inst, links));
}

Solution solve_fixed(const Instance& inst, std::span<const LinkId> links,
                     const ThresholdMap& thresholds,
                     const PowerAssignment& powers) {
  Solution sol;
  sol.algorithm = "fixed";
  sol.thresholds = thresholds;
  sol.warnings = check_power_monotonicity(inst, links, thresholds, powers);

  std::vector<LinkId> viable;
  for (LinkId id : links) {
    double alone = power_of(powers, id) / (inst.own_loss(id) * inst.noise());
    if (meets_threshold(alone, beta_of(thresholds, id))) {
      viable.push_back(id);
    } else {
      sol.trace.push_back({"noise", id, alone, beta_of(thresholds, id), false});
    }
  }

  const auto order = sensitivity_order(inst, viable, thresholds);
  std::vector<LinkId> tentative;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    double sum = 0.0;
    for (LinkId l : tentative) {
      sum += affectance(inst, l, *it, thresholds, powers) +
             affectance(inst, *it, l, thresholds, powers);
    }
    bool ok = sum <= 0.5;
    sol.trace.push_back({"tentative", *it, sum, 0.5, ok});
    if (ok) tentative.push_back(*it);
  }

  for (LinkId cand : tentative) {
    double incoming = 0.0;
    for (LinkId l : tentative) {
      incoming += affectance(inst, l, cand, thresholds, powers);
    }
    bool ok = incoming < 1.0;
    sol.trace.push_back({"filter", cand, incoming, 1.0, ok});
    if (ok) {
      sol.selected.push_back(cand);
      sol.powers[cand] = power_of(powers, cand);
    }
  }
  finalize_threshold_solution(inst, sol);
  return sol;
}

Solution solve_fixed(const Instance& inst, std::span<const LinkId> links) {
  PowerAssignment powers;
  for (LinkId id : links) {
    const Link& l = inst.link(id);
    if (!l.power) {
      throw InvalidInput("link " + std::to_string(id) + " has no fixed power");
    }
    powers[id] = *l.power;
  }
  return solve_fixed(inst, links, link_thresholds(inst, links), powers);
}

Solution solve_limited(const Instance& inst, std::span<const LinkId> links,
                       const ThresholdMap& thresholds) {
  if (inst.unlimited_power()) {
    Solution sol = solve_unlimited(inst, links, thresholds);
    sol.algorithm = "limited";
    return sol;
  }
  const double p_max = inst.p_max();
  std::vector<LinkId> cheap, expensive;
  for (LinkId id : links) {
    double sensitivity =
        beta_of(thresholds, id) * inst.noise() * inst.own_loss(id);
    (sensitivity <= p_max / 4.0 ? cheap : expensive).push_back(id);
  }

  Solution first;
  first.algorithm = "limited";
  first.thresholds = thresholds;
  const auto order = sensitivity_order(inst, cheap, thresholds);
  const Ranking ranking(order);
  const auto params = WeightParams::for_alpha(inst.alpha());
  auto candidates =
      weight_greedy(inst, order, thresholds, ranking, params.tau, first.trace);
  std::reverse(candidates.begin(), candidates.end());  // increasing rank

  // Second pass: outgoing weight towards the more sensitive links already
  // kept bounds the power a link needs by p_max.
  std::vector<LinkId> kept;
  for (LinkId cand : candidates) {
    double sum = 0.0;
    for (LinkId k : kept) sum += weight(inst, cand, k, thresholds, ranking);
    bool ok = sum <= params.secondary_tau;
    first.trace.push_back({"trim", cand, sum, params.secondary_tau, ok});
    if (ok) kept.push_back(cand);
  }
  first.powers = recurrence_powers(inst, kept, thresholds);
  first.selected = kept;
  finalize_threshold_solution(inst, first);

  PowerAssignment at_max;
  for (LinkId id : expensive) at_max[id] = p_max;
  Solution second = solve_fixed(inst, expensive, thresholds, at_max);
  second.algorithm = "limited";

  Solution& best =
      first.selected.size() >= second.selected.size() ? first : second;
  Solution& other = &best == &first ? second : first;
  best.trace.insert(best.trace.end(), other.trace.begin(), other.trace.end());
  return std::move(best);
}

Solution solve_limited(const Instance& inst, std::span<const LinkId> links) {
  return solve_limited(inst, links, link_thresholds(inst, links));
}

std::vector<std::string> check_power_monotonicity(
    const Instance& inst, std::span<const LinkId> links,
    const ThresholdMap& thresholds, const PowerAssignment& powers) {
  std::vector<std::string> out;
  for (LinkId a : links) {
    const double sa = beta_of(thresholds, a) * inst.own_loss(a);
    const double pa = power_of(powers, a);
    for (LinkId b : links) {
      if (a == b) continue;
      const double sb = beta_of(thresholds, b) * inst.own_loss(b);
      if (sa > sb) continue;
      const double pb = power_of(powers, b);
      // sa <= sb requires pa <= pb and pa / sa >= pb / sb.
      if (pa > pb * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "power not monotone: link " << a << " has power " << pa
            << " > " << pb << " of more sensitive link " << b;
        out.push_back(msg.str());
      }
      if (pa * sb < pb * sa * (1.0 - 1e-12)) {
        std::ostringstream msg;
        msg << "power superlinear: link " << b
            << " gets more power per unit sensitivity than link " << a;
        out.push_back(msg.str());
      }
    }
  }
  return out;
}

}  // namespace sinrsched
