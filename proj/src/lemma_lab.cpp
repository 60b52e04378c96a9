#include "sinrsched/lemma_lab.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sinrsched/error.hpp"
#include "sinrsched/oracles.hpp"
#include "sinrsched/rng.hpp"

namespace sinrsched {

std::size_t Decomposition::part_bound() const {
  const auto bins = static_cast<std::size_t>(std::ceil(2.0 * scale - 1e-12));
  return bins * bins;
}

namespace {

// SINR of `cand` against the links of `bin` under `powers`.
double sinr_against(const Instance& inst, const std::vector<LinkId>& bin,
                    LinkId cand, const PowerAssignment& powers) {
  double interference = 0.0;
  for (LinkId other : bin) {
    const double p = powers.at(other);
    if (p != 0.0) interference += p / inst.cross_loss(other, cand);
  }
  return powers.at(cand) / inst.own_loss(cand) / (interference + inst.noise());
}

std::vector<std::vector<LinkId>> first_fit(const Instance& inst,
                                           const std::vector<LinkId>& order,
                                           const PowerAssignment& powers,
                                           const ThresholdMap& required) {
  std::vector<std::vector<LinkId>> bins;
  for (LinkId id : order) {
    bool placed = false;
    for (auto& bin : bins) {
      if (meets_threshold(sinr_against(inst, bin, id, powers), required.at(id))) {
        bin.push_back(id);
        placed = true;
        break;
      }
    }
    if (!placed) bins.push_back({id});
  }
  return bins;
}

}  // namespace

Decomposition strengthen(const Instance& inst, std::span<const LinkId> set,
                         const PowerAssignment& witness, double c,
                         const ThresholdMap& thresholds) {
  if (!(c >= 1.0) || !std::isfinite(c)) {
    throw InvalidInput("strengthening factor must be finite and >= 1");
  }
  for (LinkId id : set) {
    if (!witness.contains(id)) {
      throw InvalidInput("no witness power for link " + std::to_string(id));
    }
  }
  if (!is_feasible(inst, set, thresholds, witness)) {
    throw InvalidInput("input set is not admissible under the witness powers");
  }

  PowerAssignment boosted;
  ThresholdMap required;
  ThresholdMap scaled;
  for (LinkId id : set) {
    boosted[id] = 2.0 * c * witness.at(id);
    required[id] = 2.0 * c * thresholds.at(id);
    scaled[id] = c * thresholds.at(id);
  }

  Decomposition out;
  out.scale = c;
  const std::vector<LinkId> order(set.begin(), set.end());
  for (auto& bin : first_fit(inst, order, boosted, required)) {
    std::vector<LinkId> reversed(bin.rbegin(), bin.rend());
    for (auto& part : first_fit(inst, reversed, boosted, required)) {
      std::sort(part.begin(), part.end());
      out.parts.push_back(std::move(part));
    }
  }
  for (const auto& part : out.parts) {
    out.certified.push_back(
        check_admissible(inst, part, scaled, kUnbounded).feasible);
  }
  return out;
}

Decomposition strengthen(const Instance& inst, std::span<const LinkId> set,
                         const PowerAssignment& witness, double c) {
  return strengthen(inst, set, witness, c, link_thresholds(inst, set));
}

Instance reversed_instance(const Instance& inst, std::span<const LinkId> links,
                           const ThresholdMap& thresholds) {
  std::vector<Link> reversed;
  for (LinkId id : links) {
    Link l = inst.link(id);
    std::swap(l.sender, l.receiver);
    l.threshold = thresholds.at(id);
    reversed.push_back(std::move(l));
  }
  InstanceOptions opts = inst.options();
  opts.allow_sub_unit_threshold = true;
  return Instance(inst.metric(), inst.alpha(), inst.noise(), inst.p_max(),
                  std::move(reversed), opts);
}

ReversalResult reverse_dual(const Instance& inst, std::span<const LinkId> set,
                            const PowerAssignment& witness,
                            const ThresholdMap& thresholds) {
  ReversalResult res;
  for (LinkId id : set) {
    auto it = witness.find(id);
    if (it == witness.end() || !(it->second > 0.0)) {
      throw InvalidInput("reversal needs a positive witness power on link " +
                         std::to_string(id));
    }
  }
  if (!is_feasible(inst, set, thresholds, witness)) {
    throw InvalidInput("input set is not admissible under the witness powers");
  }
  if (set.empty()) {
    res.certified = true;
    return res;
  }

  // Dual powers p*(l) = beta(l) d(l)^alpha / p(l).
  PowerAssignment dual;
  for (LinkId id : set) {
    dual[id] = thresholds.at(id) * inst.own_loss(id) / witness.at(id);
  }
  // Averaging step: keep l' when the dual interference the reversed link
  // sees is at most twice its dual signal.
  for (LinkId lp : set) {
    double incoming = 0.0;
    for (LinkId l : set) {
      if (l != lp) incoming += dual.at(l) / inst.cross_loss(lp, l);
    }
    if (thresholds.at(lp) * incoming <= 2.0 * dual.at(lp) / inst.own_loss(lp)) {
      res.markov_set.push_back(lp);
    }
  }

  ThresholdMap third;
  for (LinkId id : res.markov_set) third[id] = thresholds.at(id) / 3.0;
  const Instance rev = reversed_instance(inst, res.markov_set, third);
  const auto cert = check_admissible(rev, res.markov_set, third, kUnbounded);
  if (!cert.feasible) {
    throw Error("reversed averaging set is not admissible at beta / 3");
  }
  const Decomposition parts = strengthen(rev, res.markov_set, cert.powers, 3.0, third);
  res.parts = parts.parts.size();
  auto largest = std::max_element(
      parts.parts.begin(), parts.parts.end(),
      [](const auto& a, const auto& b) { return a.size() < b.size(); });
  res.subset = *largest;

  ThresholdMap original;
  for (LinkId id : res.subset) original[id] = thresholds.at(id);
  const Instance rev_subset = reversed_instance(inst, res.subset, original);
  const auto final_cert = check_admissible(rev_subset, res.subset, original, kUnbounded);
  res.certified = final_cert.feasible;
  res.reversed_powers = final_cert.powers;
  return res;
}

ReversalResult reverse_dual(const Instance& inst, std::span<const LinkId> set,
                            const PowerAssignment& witness) {
  return reverse_dual(inst, set, witness, link_thresholds(inst, set));
}

namespace {
constexpr double kSpread = 1e-9;
constexpr double kLabNoise = 1e-9;
}  // namespace

Instance gen_greedy_adversary(std::size_t k, double alpha) {
  if (k < 1) throw InvalidInput("adversary needs k >= 1");
  const double beta = 1.0 / static_cast<double>(k);
  std::vector<std::vector<double>> points{{0.0}, {1.0}};
  std::vector<Link> links;
  links.push_back({0, 0, 1, beta, std::nullopt, std::nullopt, 1.0});
  for (std::size_t i = 1; i <= k; ++i) {
    const double off = kSpread * static_cast<double>(i);
    points.push_back({1.0 + off});
    points.push_back({-off});
    const NodeIndex s = points.size() - 2;
    links.push_back({static_cast<LinkId>(i), s, s + 1, beta, std::nullopt,
                     std::nullopt, 1.0});
  }
  InstanceOptions opts;
  opts.allow_sub_unit_threshold = true;
  return Instance(MetricSpace::euclidean(1, std::move(points)), alpha, kLabNoise,
                  kUnbounded, std::move(links), opts);
}

Instance gen_aloha_instance(std::size_t k, double alpha) {
  if (k < 1) throw InvalidInput("aloha instance needs k >= 1");
  const double beta = 1.0 / static_cast<double>(k);
  std::vector<std::vector<double>> points;
  std::vector<Link> links;
  auto add = [&](double s, double r) {
    points.push_back({s});
    points.push_back({r});
    const NodeIndex sn = points.size() - 2;
    links.push_back({static_cast<LinkId>(links.size()), sn, sn + 1, beta,
                     std::nullopt, std::nullopt, 1.0});
  };
  for (std::size_t i = 1; i <= k; ++i) {
    const double off = kSpread * static_cast<double>(i);
    add(-off, 1.0 + off);
  }
  for (std::size_t j = 1; j <= k; ++j) {
    const double off = kSpread * static_cast<double>(k + j);
    add(1.0 + off, -off);
  }
  InstanceOptions opts;
  opts.allow_sub_unit_threshold = true;
  return Instance(MetricSpace::euclidean(1, std::move(points)), alpha, kLabNoise,
                  kUnbounded, std::move(links), opts);
}

AlohaReport simulate_aloha(const AlohaConfig& cfg) {
  if (cfg.k < 2 || cfg.k % 2 != 0) throw InvalidInput("aloha needs an even k >= 2");
  if (cfg.trials < 1) throw InvalidInput("aloha needs at least one trial");
  for (double p : cfg.probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InvalidInput("transmit probability outside [0, 1]");
    }
  }
  const Instance inst = gen_aloha_instance(cfg.k, cfg.alpha);
  const double uniform = 2.0 / (static_cast<double>(cfg.k) + 2.0);
  auto prob = [&](std::size_t round) {
    if (cfg.probs.empty()) return uniform;
    return cfg.probs[std::min(round, cfg.probs.size() - 1)];
  };
  const std::size_t goal = cfg.k / 2;
  const double fast = static_cast<double>(cfg.k) / 16.0;
  const CounterRng root(cfg.seed);

  AlohaReport rep;
  std::size_t fast_count = 0;
  PowerAssignment unit;
  for (const Link& l : inst.links()) unit[l.id] = 1.0;

  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    const CounterRng rng = root.derive(trial);
    std::set<LinkId> remaining;
    for (const Link& l : inst.links()) remaining.insert(l.id);
    std::set<LinkId> done;
    std::size_t successes = 0;
    std::optional<std::size_t> hit;
    for (std::size_t round = 0; round < cfg.max_rounds && !hit; ++round) {
      AlohaRound rec;
      for (LinkId id : remaining) {
        if (rng.uniform({round, static_cast<std::uint64_t>(id)}) < prob(round)) {
          rec.transmitted.push_back(id);
        }
      }
      for (LinkId id : rec.transmitted) {
        if (done.contains(id)) rep.dropouts_silent = false;
        if (meets_threshold(sinr(inst, rec.transmitted, unit, id),
                            inst.threshold(id))) {
          rec.succeeded.push_back(id);
        }
      }
      const std::size_t before = successes;
      for (LinkId id : rec.succeeded) {
        remaining.erase(id);
        done.insert(id);
        ++successes;
      }
      if (successes < before) rep.monotone = false;
      if (successes >= goal) hit = round + 1;
      if (trial == 0) rep.first_trial_trace.push_back(std::move(rec));
    }
    if (hit && static_cast<double>(*hit) <= fast) ++fast_count;
    rep.rounds.push_back(hit);
  }
  rep.p_fast = static_cast<double>(fast_count) / static_cast<double>(cfg.trials);
  return rep;
}

}  // namespace sinrsched
