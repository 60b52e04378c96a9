// Command-line front end: gen, solve, verify, schedule, oracle, experiment.
// Exit codes: 0 success, 1 verification or experiment failure, 2 bad input.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "sinrsched/error.hpp"
#include "sinrsched/experiments.hpp"
#include "sinrsched/flexible.hpp"
#include "sinrsched/generators.hpp"
#include "sinrsched/json_io.hpp"
#include "sinrsched/oracles.hpp"
#include "sinrsched/threshold_capacity.hpp"
#include "sinrsched/verify.hpp"

using namespace sinrsched;

namespace {

double parse_pmax(const std::string& s) {
  if (s == "inf" || s == "infinity") return kUnbounded;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidInput("--pmax expects a number or 'inf', got '" + s + "'");
  }
}

std::vector<LinkId> parse_ids(const std::string& s) {
  std::vector<LinkId> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw InvalidInput("bad link id '" + item + "'");
    }
  }
  return out;
}

void emit(const Json& j, const std::string& out) {
  const std::string text = j.dump(2);
  if (out.empty() || out == "-") {
    std::cout << text << '\n';
  } else {
    write_text_file(out, text);
  }
}

struct GenArgs {
  std::string config;
  std::optional<std::size_t> n;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::optional<double> alpha;
  std::string pmax;
  std::string utility;
  std::optional<double> beta_min, beta_max, power, demand_min, demand_max, noise;
  std::string out;
};

int run_gen(const GenArgs& a) {
  GenConfig cfg;
  if (!a.config.empty()) {
    cfg = gen_config_from_json(read_json_file(a.config));
  } else if (!a.seed_set) {
    throw InvalidInput("gen needs --seed or --config");
  }
  if (a.seed_set) cfg.seed = a.seed;
  if (a.n) cfg.n = *a.n;
  if (a.alpha) cfg.alpha = *a.alpha;
  if (!a.pmax.empty()) cfg.p_max = parse_pmax(a.pmax);
  if (!a.utility.empty()) cfg.utility = utility_family_from_string(a.utility);
  if (a.beta_min) cfg.beta_min = *a.beta_min;
  if (a.beta_max) cfg.beta_max = *a.beta_max;
  if (a.power) cfg.uniform_power = *a.power;
  if (a.noise) cfg.noise = *a.noise;
  if (a.demand_min || a.demand_max) {
    cfg.demand_min = a.demand_min.value_or(0.0);
    cfg.demand_max = a.demand_max.value_or(*cfg.demand_min);
  }
  emit(to_json(gen_random(cfg)), a.out);
  return 0;
}

struct SolveArgs {
  std::string instance, algorithm = "unlimited", mode = "unlimited", out;
  bool trace = true;
};

int run_solve(const SolveArgs& a) {
  const Instance inst = instance_from_json(read_json_file(a.instance));
  const auto ids = inst.link_ids();
  if (a.algorithm == "unlimited") {
    emit(to_json(solve_unlimited(inst, ids), a.trace), a.out);
  } else if (a.algorithm == "fixed") {
    emit(to_json(solve_fixed(inst, ids), a.trace), a.out);
  } else if (a.algorithm == "limited") {
    emit(to_json(solve_limited(inst, ids), a.trace), a.out);
  } else if (a.algorithm == "flexible") {
    emit(to_json(solve_flexible(inst, power_mode_from_string(a.mode))), a.out);
  } else {
    throw InvalidInput("unknown algorithm '" + a.algorithm + "'");
  }
  return 0;
}

int report_verification(const VerifyReport& rep) {
  if (rep.ok) {
    std::cout << "ok\n";
    return 0;
  }
  if (rep.first_violated) {
    std::cerr << "violated link " << *rep.first_violated << '\n';
  }
  for (const auto& v : rep.violations) std::cerr << v << '\n';
  return 1;
}

int run_verify(const std::string& instance_path, const std::string& solution_path) {
  const Instance inst = instance_from_json(read_json_file(instance_path));
  const Json doc = read_json_file(solution_path);
  if (doc.contains("slots")) {
    return report_verification(verify_schedule(inst, schedule_from_json(doc)));
  }
  if (doc.contains("best") && doc.contains("levels")) {
    return report_verification(verify_solution(inst, solution_from_json(doc.at("best"))));
  }
  return report_verification(verify_solution(inst, solution_from_json(doc)));
}

int run_schedule(const std::string& instance_path, const std::string& mode,
                 const std::string& out) {
  const Instance inst = instance_from_json(read_json_file(instance_path));
  const LatencyResult res = solve_latency(inst, power_mode_from_string(mode));
  const bool fulfilled = verify_schedule(inst, res.schedule).ok;
  emit(to_json(res, fulfilled), out);
  return 0;
}

struct OracleArgs {
  std::string instance, method = "fixed_point", subset, regime = "variable", cap, out;
};

int run_oracle(const OracleArgs& a) {
  const Instance inst = instance_from_json(read_json_file(a.instance));
  const std::vector<LinkId> ids = a.subset.empty() ? inst.link_ids() : parse_ids(a.subset);
  for (LinkId id : ids) {
    if (!inst.has_link(id)) throw InvalidInput("unknown link " + std::to_string(id));
  }
  const double cap = a.cap.empty() ? inst.p_max() : parse_pmax(a.cap);
  if (a.method == "fixed_point") {
    emit(to_json(check_admissible(inst, ids, cap)), a.out);
  } else if (a.method == "spectral") {
    emit(to_json(spectral_admissible(inst, ids, link_thresholds(inst, ids))), a.out);
  } else if (a.method == "brute") {
    PowerRegime regime;
    PowerAssignment powers;
    if (a.regime == "variable") {
      regime = PowerRegime::Variable;
    } else if (a.regime == "capped") {
      regime = PowerRegime::VariableCapped;
    } else if (a.regime == "fixed") {
      regime = PowerRegime::Fixed;
      for (LinkId id : ids) {
        const auto& p = inst.link(id).power;
        if (!p) throw InvalidInput("fixed regime needs a power on link " + std::to_string(id));
        powers[id] = *p;
      }
    } else {
      throw InvalidInput("unknown regime '" + a.regime + "'");
    }
    emit(to_json(brute_opt_threshold(inst, ids, regime, powers)), a.out);
  } else if (a.method == "brute-flexible") {
    PowerAssignment powers;
    for (LinkId id : ids) {
      const auto& p = inst.link(id).power;
      if (!p) throw InvalidInput("needs a power on link " + std::to_string(id));
      powers[id] = *p;
    }
    emit(to_json(brute_opt_flexible_fixed(inst, ids, powers)), a.out);
  } else {
    throw InvalidInput("unknown oracle method '" + a.method + "'");
  }
  return 0;
}

struct ExperimentArgs {
  std::string name, out, csv, pmax;
  std::optional<std::size_t> trials, n, k;
  std::uint64_t seed = 0;
  std::optional<double> alpha;
};

int run_experiment_cmd(const ExperimentArgs& a) {
  ExperimentParams p;
  p.trials = a.trials;
  p.n = a.n;
  p.k = a.k;
  p.seed = a.seed;
  p.alpha = a.alpha;
  if (!a.pmax.empty()) p.p_max = parse_pmax(a.pmax);
  const ExperimentReport rep = run_experiment(a.name, p);
  emit(to_json(rep), a.out);
  std::string csv = a.csv;
  if (csv.empty() && !a.out.empty() && a.out != "-") {
    csv = a.out;
    const auto dot = csv.rfind(".json");
    if (dot != std::string::npos && dot + 5 == csv.size()) csv.erase(dot);
    csv += ".csv";
  }
  if (!csv.empty()) write_text_file(csv, to_csv(rep));
  std::cerr << rep.experiment << ": " << (rep.passed ? "passed" : "FAILED") << '\n';
  for (const auto& f : rep.failures) std::cerr << "  " << f << '\n';
  return rep.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SINR link scheduling: capacity, flexible rates and latency"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate a random instance");
  g->add_option("--config", gen.config, "generator config JSON");
  g->add_option("--n", gen.n, "number of links");
  g->add_option("--seed", gen.seed, "64-bit seed")->each([&](const std::string&) {
    gen.seed_set = true;
  });
  g->add_option("--alpha", gen.alpha, "path-loss exponent");
  g->add_option("--pmax", gen.pmax, "maximum power, number or inf");
  g->add_option("--utility", gen.utility, "none|step|shannon|mixed");
  g->add_option("--beta-min", gen.beta_min);
  g->add_option("--beta-max", gen.beta_max);
  g->add_option("--power", gen.power, "uniform fixed power on every link");
  g->add_option("--noise", gen.noise);
  g->add_option("--demand-min", gen.demand_min);
  g->add_option("--demand-max", gen.demand_max);
  g->add_option("--out", gen.out, "output file (stdout if omitted)");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "run a capacity algorithm");
  s->add_option("--instance", solve.instance)->required();
  s->add_option("--algorithm", solve.algorithm, "unlimited|fixed|limited|flexible");
  s->add_option("--mode", solve.mode, "power mode for flexible: unlimited|fixed|limited");
  s->add_flag("!--no-trace", solve.trace, "omit the replay log");
  s->add_option("--out", solve.out);

  std::string v_instance, v_solution;
  auto* v = app.add_subcommand("verify", "re-check a solution or schedule");
  v->add_option("--instance", v_instance)->required();
  v->add_option("--solution,--in", v_solution, "solution, flexible run or schedule JSON")
      ->required();

  std::string sc_instance, sc_mode = "unlimited", sc_out;
  auto* sc = app.add_subcommand("schedule", "minimize latency for the links' demands");
  sc->add_option("--instance", sc_instance)->required();
  sc->add_option("--mode", sc_mode, "unlimited|fixed|limited");
  sc->add_option("--out", sc_out);

  OracleArgs oracle;
  auto* o = app.add_subcommand("oracle", "exact admissibility or brute-force optimum");
  o->add_option("--instance", oracle.instance)->required();
  o->add_option("--method", oracle.method, "fixed_point|spectral|brute|brute-flexible");
  o->add_option("--subset", oracle.subset, "comma-separated link ids (default: all)");
  o->add_option("--regime", oracle.regime, "variable|capped|fixed (brute only)");
  o->add_option("--cap", oracle.cap, "power cap, number or inf (default: p_max)");
  o->add_option("--out", oracle.out);

  ExperimentArgs exp;
  auto* e = app.add_subcommand("experiment", "run a seeded experiment");
  e->add_option("--name", exp.name)->required();
  e->add_option("--trials", exp.trials);
  e->add_option("--n", exp.n, "max links per instance (k for adversary/aloha)");
  e->add_option("--k", exp.k);
  e->add_option("--seed", exp.seed);
  e->add_option("--alpha", exp.alpha);
  e->add_option("--pmax", exp.pmax);
  e->add_option("--out", exp.out, "report JSON (stdout if omitted)");
  e->add_option("--csv", exp.csv, "row CSV (default: next to --out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*g) return run_gen(gen);
    if (*s) return run_solve(solve);
    if (*v) return run_verify(v_instance, v_solution);
    if (*sc) return run_schedule(sc_instance, sc_mode, sc_out);
    if (*o) return run_oracle(oracle);
    if (*e) return run_experiment_cmd(exp);
  } catch (const InvalidInput& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  } catch (const Unbounded& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 2;
}
