#include "sinrsched/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "sinrsched/error.hpp"
#include "sinrsched/flexible.hpp"
#include "sinrsched/generators.hpp"
#include "sinrsched/lemma_lab.hpp"
#include "sinrsched/oracles.hpp"
#include "sinrsched/rng.hpp"
#include "sinrsched/threshold_capacity.hpp"
#include "sinrsched/verify.hpp"

namespace sinrsched {

void ExperimentReport::fail(std::string why) {
  passed = false;
  failures.push_back(std::move(why));
}

std::size_t worker_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SINRSCHED_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min(n, static_cast<std::size_t>(cap));
  }
  return n;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

enum Tag : std::uint64_t { kN = 1, kAlpha, kGenSeed, kPmax, kMode, kFactor };

// Everything one trial contributes; merged in trial order.
struct TrialOutcome {
  std::vector<ExperimentRow> rows;
  std::vector<std::string> failures;
  Json data;
};

struct TrialSetup {
  CounterRng rng;
  std::size_t trial;
  const ExperimentParams& params;

  std::size_t draw_n(std::size_t n_max) const {
    return rng.integer(1, n_max, {trial, kN});
  }
  double draw_alpha() const {
    if (params.alpha) return *params.alpha;
    static constexpr double kAlphas[] = {2.0, 2.5, 4.0};
    return kAlphas[rng.integer(0, 2, {trial, kAlpha})];
  }
  double draw_log_uniform(double lo, double hi, std::uint64_t tag) const {
    return std::exp(rng.uniform(std::log(lo), std::log(hi), {trial, tag}));
  }
  GenConfig base_config(std::size_t n_max) const {
    GenConfig cfg;
    cfg.n = draw_n(n_max);
    cfg.alpha = draw_alpha();
    cfg.beta_min = 1.0;
    cfg.beta_max = 10.0;
    cfg.seed = rng.bits({trial, kGenSeed});
    return cfg;
  }
};

std::string fmt_failure(std::size_t trial, const std::string& what) {
  return "trial " + std::to_string(trial) + ": " + what;
}

Json summarize(std::vector<double> xs) {
  if (xs.empty()) return {{"count", 0}};
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size();
  const double median = m % 2 ? xs[m / 2] : 0.5 * (xs[m / 2 - 1] + xs[m / 2]);
  double sum = 0.0;
  for (double x : xs) sum += x;
  return {{"count", m},
          {"min", xs.front()},
          {"median", median},
          {"mean", sum / static_cast<double>(m)},
          {"max", xs.back()}};
}

ExperimentReport collect(const std::string& name, const ExperimentParams& p,
                         Json params, std::vector<TrialOutcome> outcomes) {
  ExperimentReport rep;
  rep.experiment = name;
  rep.seed = p.seed;
  rep.params = std::move(params);
  for (auto& o : outcomes) {
    for (auto& r : o.rows) rep.rows.push_back(std::move(r));
    for (auto& f : o.failures) rep.fail(std::move(f));
  }
  return rep;
}

std::vector<TrialOutcome> run_trials(
    std::size_t trials, const ExperimentParams& p,
    const std::function<TrialOutcome(const TrialSetup&)>& body) {
  const CounterRng root(p.seed);
  return parallel_trials<TrialOutcome>(trials, [&](std::size_t i) {
    return body(TrialSetup{root, i, p});
  });
}

std::size_t count_infeasible(const ExperimentReport& rep) {
  return static_cast<std::size_t>(std::count_if(
      rep.rows.begin(), rep.rows.end(), [](const auto& r) { return !r.feasible; }));
}

ExperimentReport feasibility(const ExperimentParams& p, bool capped) {
  const std::size_t trials = p.trials.value_or(1000);
  const std::size_t n_max = p.n.value_or(50);
  auto outcomes = run_trials(trials, p, [&](const TrialSetup& t) {
    GenConfig cfg = t.base_config(n_max);
    if (capped) cfg.p_max = p.p_max.value_or(t.draw_log_uniform(1e-5, 1.0, kPmax));
    const Instance inst = gen_random(cfg);
    const auto ids = inst.link_ids();
    const auto start = Clock::now();
    const Solution sol = capped ? solve_limited(inst, ids) : solve_unlimited(inst, ids);
    ExperimentRow row;
    row.runtime_ms = elapsed_ms(start);
    row.trial = t.trial;
    row.digest = digest(inst);
    row.algorithm = sol.algorithm;
    row.n = ids.size();
    row.alg = static_cast<double>(sol.selected.size());
    VerifyOptions vo;
    vo.enforce_cap = capped;
    const VerifyReport v = verify_solution(inst, sol, vo);
    row.feasible = v.ok;
    TrialOutcome out;
    if (!v.ok) {
      row.note = v.violations.front();
      out.failures.push_back(fmt_failure(t.trial, v.violations.front()));
    }
    double peak = 0.0;
    for (const auto& [id, pw] : sol.powers) peak = std::max(peak, pw);
    out.data = {{"peak_over_cap", capped ? peak / inst.p_max() : 0.0},
                {"cap_violation", capped && peak > inst.p_max() * (1.0 + 1e-12)}};
    out.rows.push_back(std::move(row));
    return out;
  });
  std::size_t cap_violations = 0;
  double peak_ratio = 0.0;
  for (const auto& o : outcomes) {
    cap_violations += o.data.at("cap_violation").get<bool>() ? 1 : 0;
    peak_ratio = std::max(peak_ratio, o.data.at("peak_over_cap").get<double>());
  }
  Json params = {{"trials", trials}, {"n_max", n_max}};
  if (p.alpha) params["alpha"] = *p.alpha;
  auto rep = collect(capped ? "powercap" : "feasibility", p, params, std::move(outcomes));
  std::vector<double> sizes;
  for (const auto& r : rep.rows) sizes.push_back(r.alg);
  rep.results = {{"instances", trials},
                 {"feasibility_violations", count_infeasible(rep)},
                 {"selected", summarize(sizes)}};
  if (capped) {
    rep.results["cap_violations"] = cap_violations;
    rep.results["max_power_over_cap"] = peak_ratio;
  }
  return rep;
}

ExperimentReport crossval(const ExperimentParams& p) {
  const std::size_t trials = p.trials.value_or(500);
  const std::size_t n_max = p.n.value_or(6);
  if (n_max > 16) throw InvalidInput("crossval enumerates subsets; keep n <= 16");
  auto outcomes = run_trials(trials, p, [&](const TrialSetup& t) {
    GenConfig cfg = t.base_config(n_max);
    cfg.noise = 1e-9;
    const Instance inst = gen_random(cfg);
    const auto ids = inst.link_ids();
    const ThresholdMap th = link_thresholds(inst, ids);
    const auto start = Clock::now();
    std::size_t subsets = 0, disagreements = 0, admissible = 0;
    TrialOutcome out;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << ids.size()); ++mask) {
      std::vector<LinkId> subset;
      for (std::size_t k = 0; k < ids.size(); ++k) {
        if (mask >> k & 1) subset.push_back(ids[k]);
      }
      ++subsets;
      const bool fp = check_admissible(inst, subset, th, kUnbounded).feasible;
      const auto sp = spectral_admissible(inst, subset, th);
      admissible += fp ? 1 : 0;
      if (fp != sp.admissible) {
        ++disagreements;
        std::ostringstream os;
        os << "fixed point says " << fp << ", spectral radius " << sp.rho
           << " on subset mask " << mask;
        out.failures.push_back(fmt_failure(t.trial, os.str()));
      }
    }
    ExperimentRow row;
    row.runtime_ms = elapsed_ms(start);
    row.trial = t.trial;
    row.digest = digest(inst);
    row.algorithm = "check_admissible";
    row.n = ids.size();
    row.alg = static_cast<double>(admissible);
    row.feasible = disagreements == 0;
    row.note = "subsets=" + std::to_string(subsets) +
               " disagreements=" + std::to_string(disagreements);
    out.data = {{"subsets", subsets}, {"disagreements", disagreements}};
    out.rows.push_back(std::move(row));
    return out;
  });
  std::size_t subsets = 0, disagreements = 0;
  for (const auto& o : outcomes) {
    subsets += o.data.at("subsets").get<std::size_t>();
    disagreements += o.data.at("disagreements").get<std::size_t>();
  }
  auto rep = collect("crossval", p, {{"trials", trials}, {"n_max", n_max}, {"noise", 1e-9}},
                     std::move(outcomes));
  rep.results = {{"instances", trials},
                 {"subsets", subsets},
                 {"disagreements", disagreements}};
  return rep;
}

ExperimentRow ratio_row(const TrialSetup& t, const Instance& inst,
                        const std::string& algorithm, const Solution& sol,
                        const BruteForceResult& opt, bool certified,
                        double runtime_ms, TrialOutcome& out) {
  ExperimentRow row;
  row.trial = t.trial;
  row.digest = digest(inst);
  row.algorithm = algorithm;
  row.n = inst.links().size();
  row.alg = static_cast<double>(sol.selected.size());
  row.opt = opt.value;
  row.runtime_ms = runtime_ms;
  row.feasible = certified;
  if (row.alg > 0) row.ratio = opt.value / row.alg;
  if (!certified) {
    out.failures.push_back(fmt_failure(t.trial, algorithm + " output failed certification"));
  }
  if (row.alg == 0 && opt.value >= 1) {
    out.failures.push_back(fmt_failure(t.trial, algorithm + " returned nothing, OPT = " +
                                                    std::to_string(opt.subset.size())));
    row.note = "empty";
  }
  return row;
}

ExperimentReport ratio(const ExperimentParams& p) {
  const std::size_t trials = p.trials.value_or(200);
  const std::size_t n_max = p.n.value_or(10);
  if (n_max > kMaxBruteForceLinks) throw InvalidInput("ratio needs n <= 20");
  auto outcomes = run_trials(trials, p, [&](const TrialSetup& t) {
    GenConfig cfg = t.base_config(n_max);
    cfg.p_max = p.p_max.value_or(t.draw_log_uniform(1e-5, 1.0, kPmax));
    cfg.uniform_power = cfg.p_max;
    const Instance inst = gen_random(cfg);
    const auto ids = inst.link_ids();
    const ThresholdMap th = link_thresholds(inst, ids);
    PowerAssignment uniform;
    for (LinkId id : ids) uniform[id] = inst.p_max();
    TrialOutcome out;

    auto start = Clock::now();
    const Solution un = solve_unlimited(inst, ids);
    double ms = elapsed_ms(start);
    bool cert = verify_solution(inst, un).ok &&
                check_admissible(inst, un.selected, th, kUnbounded).feasible;
    out.rows.push_back(ratio_row(t, inst, "unlimited", un,
                                 brute_opt_threshold(inst, ids, th, PowerRegime::Variable),
                                 cert, ms, out));

    start = Clock::now();
    const Solution lim = solve_limited(inst, ids);
    ms = elapsed_ms(start);
    cert = verify_solution(inst, lim).ok &&
           check_admissible(inst, lim.selected, th, inst.p_max()).feasible;
    out.rows.push_back(ratio_row(
        t, inst, "limited", lim,
        brute_opt_threshold(inst, ids, th, PowerRegime::VariableCapped), cert, ms, out));

    start = Clock::now();
    const Solution fx = solve_fixed(inst, ids, th, uniform);
    ms = elapsed_ms(start);
    cert = verify_solution(inst, fx).ok && is_feasible(inst, fx.selected, th, uniform);
    out.rows.push_back(ratio_row(
        t, inst, "fixed", fx,
        brute_opt_threshold(inst, ids, th, PowerRegime::Fixed, uniform), cert, ms, out));
    return out;
  });
  auto rep = collect("ratio", p, {{"trials", trials}, {"n_max", n_max}}, std::move(outcomes));
  std::map<std::string, std::vector<double>> ratios;
  std::map<std::string, std::map<std::string, std::size_t>> histogram;
  for (const auto& r : rep.rows) {
    if (!r.ratio) continue;
    ratios[r.algorithm].push_back(*r.ratio);
    std::ostringstream key;
    key << std::floor(*r.ratio * 4.0) / 4.0;
    ++histogram[r.algorithm][key.str()];
  }
  rep.results = {{"instances", trials},
                 {"certification_failures", count_infeasible(rep)},
                 {"ratio_opt_over_alg", Json::object()},
                 {"ratio_histogram", histogram}};
  for (const auto& [alg, xs] : ratios) rep.results["ratio_opt_over_alg"][alg] = summarize(xs);
  return rep;
}

ExperimentReport flexible(const ExperimentParams& p) {
  const std::size_t trials = p.trials.value_or(200);
  const std::size_t n_max = p.n.value_or(10);
  if (n_max > kMaxBruteForceLinks) throw InvalidInput("flexible needs n <= 20");
  auto outcomes = run_trials(trials, p, [&](const TrialSetup& t) {
    GenConfig cfg = t.base_config(n_max);
    cfg.utility = UtilityFamily::Step;
    cfg.uniform_power = 1.0;
    const Instance inst = gen_random(cfg);
    const auto ids = inst.link_ids();
    PowerAssignment powers;
    for (LinkId id : ids) powers[id] = 1.0;
    const auto start = Clock::now();
    const FlexibleRun run = solve_flexible(inst, PowerMode::Fixed);
    ExperimentRow row;
    row.runtime_ms = elapsed_ms(start);
    const auto opt = brute_opt_flexible_fixed(inst, ids, powers);
    const double bound =
        opt.value / (4.0 * static_cast<double>(ceil_log2(ids.size()) + 1));
    row.trial = t.trial;
    row.digest = digest(inst);
    row.algorithm = run.best().algorithm;
    row.n = ids.size();
    row.alg = run.best().objective;
    row.opt = opt.value;
    if (row.alg > 0) row.ratio = opt.value / row.alg;
    const VerifyReport v = verify_solution(inst, run.best());
    row.feasible = v.ok;
    TrialOutcome out;
    if (!v.ok) out.failures.push_back(fmt_failure(t.trial, v.violations.front()));
    if (row.alg < bound * (1.0 - 1e-9)) {
      std::ostringstream os;
      os << "utility " << row.alg << " below OPT/(4(ceil(log2 n)+1)) = " << bound;
      out.failures.push_back(fmt_failure(t.trial, os.str()));
      row.note = "below bound";
    }
    out.rows.push_back(std::move(row));
    return out;
  });
  auto rep = collect("flexible", p, {{"trials", trials}, {"n_max", n_max}, {"power", 1.0}},
                     std::move(outcomes));
  std::vector<double> ratios;
  std::size_t bound_violations = 0;
  for (const auto& r : rep.rows) {
    if (r.ratio) ratios.push_back(*r.ratio);
    if (r.note == "below bound") ++bound_violations;
  }
  rep.results = {{"instances", trials},
                 {"bound_violations", bound_violations},
                 {"infeasible", count_infeasible(rep)},
                 {"ratio_opt_over_alg", summarize(ratios)}};
  return rep;
}

Instance with_demands(const Instance& inst, const std::map<LinkId, double>& demand) {
  std::vector<Link> links = inst.links();
  for (Link& l : links) l.demand = demand.at(l.id);
  return Instance(inst.metric(), inst.alpha(), inst.noise(), inst.p_max(),
                  std::move(links), inst.options());
}

ExperimentReport latency(const ExperimentParams& p) {
  const std::size_t trials = p.trials.value_or(100);
  const std::size_t n_max = p.n.value_or(12);
  auto outcomes = run_trials(trials, p, [&](const TrialSetup& t) {
    static constexpr PowerMode kModes[] = {PowerMode::Unlimited, PowerMode::Limited,
                                           PowerMode::Fixed};
    const PowerMode mode = kModes[t.rng.integer(0, 2, {t.trial, kMode})];
    GenConfig cfg = t.base_config(n_max);
    cfg.utility = mode == PowerMode::Limited ? UtilityFamily::Mixed : UtilityFamily::Step;
    if (mode == PowerMode::Limited) {
      cfg.p_max = p.p_max.value_or(t.draw_log_uniform(0.1, 10.0, kPmax));
    }
    if (mode == PowerMode::Fixed) cfg.uniform_power = 1.0;
    const Instance bare = gen_random(cfg);
    PowerAssignment fixed;
    for (const Link& l : bare.links()) fixed[l.id] = l.power.value_or(0.0);

    std::map<LinkId, double> demand, umax;
    for (const Link& l : bare.links()) {
      umax[l.id] = max_utility(*l.utility, gamma_cap(bare, l.id, mode, fixed));
      demand[l.id] = t.rng.uniform(0.5, 3.0, {t.trial, kFactor, static_cast<std::uint64_t>(l.id)}) *
                     umax[l.id];
    }
    const Instance inst = with_demands(bare, demand);
    const std::size_t n = inst.links().size();

    const auto start = Clock::now();
    const LatencyResult res = solve_latency(inst, mode);
    ExperimentRow row;
    row.runtime_ms = elapsed_ms(start);
    TrialOutcome out;
    auto fail = [&](const std::string& why) {
      out.failures.push_back(fmt_failure(t.trial, why));
      if (row.note.empty()) row.note = why;
    };

    const VerifyReport v = verify_schedule(inst, res.schedule);
    if (!v.ok) fail(v.violations.front());
    for (std::size_t s = 0; s < res.schedule.slots.size(); ++s) {
      const Solution& slot = res.schedule.slots[s];
      if (!is_feasible(inst, slot.selected, slot.thresholds, slot.powers)) {
        fail("slot " + std::to_string(s) + " not certified feasible");
      }
    }
    double units = 0.0;
    std::size_t lower = 0;
    for (const Link& l : inst.links()) {
      const double q = std::ceil(demand.at(l.id) / umax.at(l.id));
      units += q;
      lower = std::max(lower, static_cast<std::size_t>(q));
    }
    const double levels = static_cast<double>(ceil_log2(n) + 1);
    const double bound = 4.0 * units * levels * levels;
    const std::size_t length = res.schedule.slots.size();
    if (static_cast<double>(length) > bound) {
      fail("length " + std::to_string(length) + " over bound " + std::to_string(bound));
    }
    std::size_t stalls = 0;
    for (bool ok : res.scheme2.progress) stalls += ok ? 0 : 1;
    if (stalls > 0) fail(std::to_string(stalls) + " scheme-2 slots without progress");
    const bool s1_fulfilled =
        res.scheme1.complete && verify_schedule(inst, res.scheme1).ok;

    row.trial = t.trial;
    row.digest = digest(inst);
    row.algorithm = "latency-" + to_string(mode);
    row.n = n;
    row.alg = static_cast<double>(length);
    row.opt = static_cast<double>(lower);
    row.ratio = static_cast<double>(length) / static_cast<double>(std::max<std::size_t>(lower, 1));
    row.feasible = v.ok;
    out.data = {{"scheme", res.schedule.scheme},
                {"scheme1", res.scheme1.complete ? Json(res.scheme1.slots.size()) : Json()},
                {"scheme2", res.scheme2.slots.size()},
                {"scheme1_original_fulfilled", s1_fulfilled},
                {"stalls", stalls}};
    out.rows.push_back(std::move(row));
    return out;
  });
  std::size_t chose1 = 0, s1_short = 0, stalls = 0;
  for (const auto& o : outcomes) {
    chose1 += o.data.at("scheme").get<int>() == 1 ? 1 : 0;
    if (!o.data.at("scheme1").is_null() && !o.data.at("scheme1_original_fulfilled").get<bool>()) {
      ++s1_short;
    }
    stalls += o.data.at("stalls").get<std::size_t>();
  }
  auto rep = collect("latency", p,
                     {{"trials", trials}, {"n_max", n_max}, {"demand_factor", {0.5, 3.0}}},
                     std::move(outcomes));
  std::vector<double> ratios;
  for (const auto& r : rep.rows) ratios.push_back(*r.ratio);
  rep.results = {{"instances", trials},
                 {"unfulfilled", count_infeasible(rep)},
                 {"chose_scheme1", chose1},
                 {"scheme1_original_shortfalls", s1_short},
                 {"scheme2_stalled_slots", stalls},
                 {"length_over_lower_bound", summarize(ratios)}};
  return rep;
}

struct HarvestedSet {
  Instance inst;
  Solution sol;
};

HarvestedSet harvest(const TrialSetup& t, std::size_t n_max) {
  Instance inst = gen_random(t.base_config(n_max));
  Solution sol = solve_unlimited(inst, inst.link_ids());
  return {std::move(inst), std::move(sol)};
}

ExperimentReport strengthen_exp(const ExperimentParams& p) {
  const std::size_t trials = p.trials.value_or(100);
  const std::size_t n_max = p.n.value_or(50);
  auto outcomes = run_trials(trials, p, [&](const TrialSetup& t) {
    const HarvestedSet h = harvest(t, n_max);
    TrialOutcome out;
    for (double c : {1.0, 2.0, 3.0}) {
      const auto start = Clock::now();
      const Decomposition d =
          strengthen(h.inst, h.sol.selected, h.sol.powers, c, h.sol.thresholds);
      ExperimentRow row;
      row.runtime_ms = elapsed_ms(start);
      row.trial = t.trial;
      row.digest = digest(h.inst);
      row.algorithm = "strengthen-c" + std::to_string(static_cast<int>(c));
      row.n = h.sol.selected.size();
      row.alg = static_cast<double>(d.parts.size());
      row.opt = static_cast<double>(d.part_bound());
      std::multiset<LinkId> covered;
      for (const auto& part : d.parts) covered.insert(part.begin(), part.end());
      const std::multiset<LinkId> input(h.sol.selected.begin(), h.sol.selected.end());
      const bool all_certified =
          std::all_of(d.certified.begin(), d.certified.end(), [](bool b) { return b; });
      row.feasible = all_certified;
      if (covered != input) {
        out.failures.push_back(fmt_failure(t.trial, "parts do not partition the set"));
      }
      if (d.parts.size() > d.part_bound()) {
        out.failures.push_back(fmt_failure(
            t.trial, row.algorithm + ": " + std::to_string(d.parts.size()) + " parts"));
      }
      if (!all_certified) {
        out.failures.push_back(fmt_failure(t.trial, row.algorithm + ": uncertified part"));
      }
      out.rows.push_back(std::move(row));
    }
    return out;
  });
  auto rep = collect("strengthen", p, {{"trials", trials}, {"n_max", n_max}, {"c", {1, 2, 3}}},
                     std::move(outcomes));
  std::map<std::string, std::vector<double>> parts;
  std::vector<double> sizes;
  for (const auto& r : rep.rows) {
    parts[r.algorithm].push_back(r.alg);
    if (r.algorithm == "strengthen-c1") sizes.push_back(static_cast<double>(r.n));
  }
  rep.results = {{"sets", trials},
                 {"set_size", summarize(sizes)},
                 {"uncertified", count_infeasible(rep)},
                 {"parts", Json::object()}};
  for (const auto& [alg, xs] : parts) rep.results["parts"][alg] = summarize(xs);
  return rep;
}

ExperimentReport reverse_exp(const ExperimentParams& p) {
  const std::size_t trials = p.trials.value_or(100);
  const std::size_t n_max = p.n.value_or(50);
  auto outcomes = run_trials(trials, p, [&](const TrialSetup& t) {
    const HarvestedSet h = harvest(t, n_max);
    TrialOutcome out;
    ExperimentRow row;
    row.trial = t.trial;
    row.digest = digest(h.inst);
    row.algorithm = "reverse_dual";
    row.n = h.sol.selected.size();
    const std::size_t need = h.sol.selected.size() / 72;
    row.opt = static_cast<double>(need);
    const auto start = Clock::now();
    try {
      const ReversalResult r =
          reverse_dual(h.inst, h.sol.selected, h.sol.powers, h.sol.thresholds);
      row.runtime_ms = elapsed_ms(start);
      row.alg = static_cast<double>(r.subset.size());
      row.feasible = r.certified;
      row.note = "markov=" + std::to_string(r.markov_set.size()) +
                 " parts=" + std::to_string(r.parts);
      if (!r.certified) {
        out.failures.push_back(fmt_failure(t.trial, "reversed subset not certified"));
      }
      if (r.subset.size() < need) {
        out.failures.push_back(fmt_failure(
            t.trial, "subset " + std::to_string(r.subset.size()) + " < " + std::to_string(need)));
      }
    } catch (const Error& e) {
      row.runtime_ms = elapsed_ms(start);
      row.feasible = false;
      row.note = e.what();
      out.failures.push_back(fmt_failure(t.trial, e.what()));
    }
    if (row.n > 0) row.ratio = row.alg / static_cast<double>(row.n);
    out.rows.push_back(std::move(row));
    return out;
  });
  auto rep = collect("reverse", p, {{"trials", trials}, {"n_max", n_max}}, std::move(outcomes));
  std::vector<double> kept;
  for (const auto& r : rep.rows) {
    if (r.ratio) kept.push_back(*r.ratio);
  }
  rep.results = {{"sets", trials},
                 {"uncertified", count_infeasible(rep)},
                 {"kept_fraction", summarize(kept)}};
  return rep;
}

ExperimentReport adversary(const ExperimentParams& p) {
  const std::size_t k = p.k.value_or(p.n.value_or(8));
  const double alpha = p.alpha.value_or(2.0);
  const auto start = Clock::now();
  const Instance inst = gen_greedy_adversary(k, alpha);
  const auto ids = inst.link_ids();
  const Solution greedy = solve_unlimited(inst, ids);
  const std::vector<LinkId> reversed(ids.begin() + 1, ids.end());
  const auto cert = check_admissible(inst, reversed, kUnbounded);
  const bool all_blocked = k < 2 || !check_admissible(inst, ids, kUnbounded).feasible;
  const double opt = cert.feasible ? static_cast<double>(k) : 1.0;
  const double ratio_value =
      greedy.selected.empty() ? kUnbounded : opt / static_cast<double>(greedy.selected.size());

  ExperimentReport rep;
  rep.experiment = "greedy_adversary";
  rep.seed = p.seed;
  rep.params = {{"k", k}, {"alpha", alpha}, {"beta", 1.0 / static_cast<double>(k)}};
  ExperimentRow row;
  row.digest = digest(inst);
  row.algorithm = "unlimited";
  row.n = ids.size();
  row.alg = static_cast<double>(greedy.selected.size());
  row.opt = opt;
  row.ratio = ratio_value;
  row.feasible = verify_solution(inst, greedy).ok;
  row.runtime_ms = elapsed_ms(start);
  rep.rows.push_back(row);
  rep.results = {{"greedy_selected", greedy.selected},
                 {"reversed_admissible", cert.feasible},
                 {"forward_plus_reversed_admissible", !all_blocked},
                 {"ratio", number_or_inf(ratio_value)}};
  if (!row.feasible) rep.fail("greedy output infeasible");
  if (!cert.feasible) rep.fail("reversed links not certified admissible");
  if (!all_blocked) rep.fail("full set unexpectedly admissible");
  if (!(ratio_value >= static_cast<double>(k))) {
    rep.fail("ratio " + std::to_string(ratio_value) + " < " + std::to_string(k));
  }
  return rep;
}

ExperimentReport aloha(const ExperimentParams& p) {
  AlohaConfig cfg;
  cfg.k = p.k.value_or(p.n.value_or(32));
  cfg.trials = p.trials.value_or(400);
  cfg.seed = p.seed;
  cfg.alpha = p.alpha.value_or(2.0);
  const auto start = Clock::now();
  const AlohaReport r = simulate_aloha(cfg);
  const double ms = elapsed_ms(start);

  ExperimentReport rep;
  rep.experiment = "aloha";
  rep.seed = p.seed;
  rep.params = {{"k", cfg.k},
                {"trials", cfg.trials},
                {"probs", "uniform"},
                {"p", 2.0 / (static_cast<double>(cfg.k) + 2.0)},
                {"max_rounds", cfg.max_rounds}};
  std::vector<double> ts;
  std::size_t unfinished = 0;
  for (std::size_t i = 0; i < r.rounds.size(); ++i) {
    ExperimentRow row;
    row.trial = i;
    row.algorithm = "aloha";
    row.n = 2 * cfg.k;
    row.runtime_ms = i == 0 ? ms : 0.0;
    if (r.rounds[i]) {
      row.alg = static_cast<double>(*r.rounds[i]);
      ts.push_back(row.alg);
    } else {
      ++unfinished;
      row.note = "unfinished";
    }
    rep.rows.push_back(std::move(row));
  }
  const double fast = static_cast<double>(cfg.k) / 16.0;
  rep.results = {{"p_fast", r.p_fast},
                 {"fast_rounds", fast},
                 {"T", summarize(ts)},
                 {"unfinished", unfinished},
                 {"monotone", r.monotone},
                 {"dropouts_silent", r.dropouts_silent}};
  if (r.p_fast > 0.5) rep.fail("P(T <= k/16) = " + std::to_string(r.p_fast) + " > 0.5");
  if (!r.monotone || !r.dropouts_silent) rep.fail("simulation invariant broken");
  return rep;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "feasibility", "powercap", "crossval", "ratio",   "flexible",
      "latency",     "strengthen", "reverse", "adversary", "aloha"};
  return names;
}

ExperimentReport run_experiment(const std::string& name, const ExperimentParams& p) {
  if (name == "feasibility") return feasibility(p, false);
  if (name == "powercap") return feasibility(p, true);
  if (name == "crossval") return crossval(p);
  if (name == "ratio") return ratio(p);
  if (name == "flexible") return flexible(p);
  if (name == "latency") return latency(p);
  if (name == "strengthen") return strengthen_exp(p);
  if (name == "reverse") return reverse_exp(p);
  if (name == "adversary") return adversary(p);
  if (name == "aloha") return aloha(p);
  throw InvalidInput("unknown experiment '" + name + "'");
}

Json to_json(const ExperimentReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json j = {{"trial", row.trial},
              {"instance_digest", row.digest},
              {"algorithm", row.algorithm},
              {"n", row.n},
              {"alg", row.alg},
              {"opt", row.opt ? Json(*row.opt) : Json()},
              {"ratio", row.ratio ? number_or_inf(*row.ratio) : Json()},
              {"feasible", row.feasible},
              {"runtime_ms", row.runtime_ms}};
    if (!row.note.empty()) j["note"] = row.note;
    rows.push_back(std::move(j));
  }
  return {{"experiment", r.experiment},
          {"params", r.params},
          {"results", r.results},
          {"seed", r.seed},
          {"passed", r.passed},
          {"failures", r.failures},
          {"rows", rows}};
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_number(std::optional<double> x) {
  if (!x) return "";
  if (std::isinf(*x)) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << *x;
  return os.str();
}

}  // namespace

std::string to_csv(const ExperimentReport& r) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& row : r.rows) {
    os << row.trial << ',' << row.digest << ',' << csv_escape(row.algorithm) << ','
       << row.n << ',' << csv_number(row.alg) << ',' << csv_number(row.opt) << ','
       << csv_number(row.ratio) << ',' << (row.feasible ? 1 : 0) << ','
       << csv_number(row.runtime_ms) << ',' << csv_escape(row.note) << '\n';
  }
  return os.str();
}

}  // namespace sinrsched
