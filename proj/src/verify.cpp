#include "sinrsched/verify.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace sinrsched {

void VerifyReport::fail(std::string what, std::optional<LinkId> link) {
  ok = false;
  if (link && !first_violated) first_violated = link;
  violations.push_back(std::move(what));
}

namespace {

bool close(double a, double b, double rel) {
  if (a == b) return true;
  if (std::isinf(a) || std::isinf(b)) return false;
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

std::string link_name(LinkId id) { return "link " + std::to_string(id); }

bool is_capped(const std::string& algorithm) {
  return algorithm == "limited" || algorithm == "flexible-limited";
}

bool is_flexible(const std::string& algorithm) {
  return algorithm.rfind("flexible", 0) == 0;
}

}  // namespace

VerifyReport verify_solution(const Instance& inst, const Solution& sol,
                             const VerifyOptions& opts) {
  VerifyReport rep;
  std::set<LinkId> seen;
  std::vector<LinkId> active;
  for (LinkId id : sol.selected) {
    if (!inst.has_link(id)) {
      rep.fail("selected " + link_name(id) + " is not in the instance", id);
      continue;
    }
    if (!seen.insert(id).second) {
      rep.fail(link_name(id) + " is selected twice", id);
      continue;
    }
    active.push_back(id);
  }
  const bool cap = opts.enforce_cap.value_or(is_capped(sol.algorithm));
  for (LinkId id : active) {
    auto it = sol.powers.find(id);
    if (it == sol.powers.end()) {
      rep.fail(link_name(id) + " has no power", id);
      continue;
    }
    const double p = it->second;
    if (!std::isfinite(p) || p < 0.0) {
      rep.fail(link_name(id) + " has invalid power " + std::to_string(p), id);
    } else if (cap && !inst.unlimited_power() && p > inst.p_max() * (1.0 + 1e-12)) {
      std::ostringstream os;
      os << link_name(id) << " power " << p << " exceeds p_max " << inst.p_max();
      rep.fail(os.str(), id);
    }
  }
  if (!rep.ok) return rep;

  for (const auto& [id, g] : sol.sinr) {
    if (!seen.contains(id)) rep.fail("sinr reported for unselected " + link_name(id), id);
  }
  double utility = 0.0;
  for (LinkId id : active) {
    double beta;
    if (auto t = sol.thresholds.find(id); t != sol.thresholds.end()) {
      beta = t->second;
    } else if (inst.link(id).threshold) {
      beta = *inst.link(id).threshold;
    } else {
      rep.fail(link_name(id) + " has no threshold", id);
      continue;
    }
    const double gamma = sinr(inst, active, sol.powers, id);
    auto stored = sol.sinr.find(id);
    if (stored == sol.sinr.end()) {
      rep.fail(link_name(id) + " has no stored sinr", id);
    } else if (!close(stored->second, gamma, kStoredSinrTolerance)) {
      std::ostringstream os;
      os << link_name(id) << " stored sinr " << stored->second
         << " differs from recomputed " << gamma;
      rep.fail(os.str(), id);
    }
    if (!meets_threshold(gamma, beta)) {
      std::ostringstream os;
      os << link_name(id) << " sinr " << gamma << " below threshold " << beta;
      rep.fail(os.str(), id);
    }
    if (const auto& u = inst.link(id).utility) {
      utility += evaluate(*u, credited_sinr(gamma, beta));
    }
  }

  if (opts.check_objective && rep.ok) {
    const double expected = is_flexible(sol.algorithm)
                                ? utility
                                : static_cast<double>(active.size());
    if (!close(sol.objective, expected, 1e-9)) {
      std::ostringstream os;
      os << "objective " << sol.objective << " differs from recomputed " << expected;
      rep.fail(os.str());
    }
  }
  return rep;
}

std::map<LinkId, double> delivered_utility(const Instance& inst,
                                           const Schedule& sched) {
  std::map<LinkId, double> out;
  for (const Link& l : inst.links()) out[l.id] = 0.0;
  for (const Solution& slot : sched.slots) {
    for (LinkId id : slot.selected) {
      const auto& u = inst.link(id).utility;
      if (!u) continue;
      const double beta = slot.thresholds.contains(id) ? slot.thresholds.at(id)
                                                       : inst.threshold(id);
      out[id] += evaluate(*u, credited_sinr(slot.sinr.at(id), beta));
    }
  }
  return out;
}

VerifyReport verify_schedule(const Instance& inst, const Schedule& sched) {
  VerifyReport rep;
  VerifyOptions slot_opts;
  slot_opts.check_objective = false;
  for (std::size_t t = 0; t < sched.slots.size(); ++t) {
    const VerifyReport slot = verify_solution(inst, sched.slots[t], slot_opts);
    for (const auto& v : slot.violations) {
      rep.fail("slot " + std::to_string(t) + ": " + v, slot.first_violated);
    }
  }
  if (!rep.ok) return rep;
  const auto delivered = delivered_utility(inst, sched);
  for (const Link& l : inst.links()) {
    if (!l.demand || *l.demand == 0.0) continue;
    const double got = delivered.at(l.id);
    if (got < *l.demand - 1e-9 * std::max(1.0, *l.demand)) {
      std::ostringstream os;
      os << link_name(l.id) << " received utility " << got << " of demand "
         << *l.demand;
      rep.fail(os.str(), l.id);
    }
  }
  return rep;
}

}  // namespace sinrsched
