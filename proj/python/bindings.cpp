// Python bindings. Documents cross the boundary as JSON text in the same
// schema the command line reads and writes; the package wrapper turns them
// into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "sinrsched/error.hpp"
#include "sinrsched/experiments.hpp"
#include "sinrsched/flexible.hpp"
#include "sinrsched/generators.hpp"
#include "sinrsched/json_io.hpp"
#include "sinrsched/oracles.hpp"
#include "sinrsched/threshold_capacity.hpp"
#include "sinrsched/verify.hpp"

namespace py = pybind11;
using namespace sinrsched;

namespace {

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

Instance load_instance(const std::string& text) { return instance_from_json(parse(text)); }

std::vector<LinkId> subset_or_all(const Instance& inst,
                                  const std::optional<std::vector<LinkId>>& subset) {
  if (!subset) return inst.link_ids();
  for (LinkId id : *subset) {
    if (!inst.has_link(id)) throw InvalidInput("unknown link " + std::to_string(id));
  }
  return *subset;
}

PowerAssignment own_powers(const Instance& inst, const std::vector<LinkId>& ids) {
  PowerAssignment powers;
  for (LinkId id : ids) {
    const auto& p = inst.link(id).power;
    if (!p) throw InvalidInput("no fixed power on link " + std::to_string(id));
    powers[id] = *p;
  }
  return powers;
}

std::string generate(const std::string& config) {
  return to_json(gen_random(gen_config_from_json(parse(config)))).dump();
}

std::string solve(const std::string& instance, const std::string& algorithm,
                  const std::string& mode, bool trace) {
  const Instance inst = load_instance(instance);
  const auto ids = inst.link_ids();
  if (algorithm == "unlimited") return to_json(solve_unlimited(inst, ids), trace).dump();
  if (algorithm == "fixed") return to_json(solve_fixed(inst, ids), trace).dump();
  if (algorithm == "limited") return to_json(solve_limited(inst, ids), trace).dump();
  if (algorithm == "flexible") {
    return to_json(solve_flexible(inst, power_mode_from_string(mode))).dump();
  }
  throw InvalidInput("unknown algorithm '" + algorithm + "'");
}

py::dict report(const VerifyReport& rep) {
  py::dict out;
  out["ok"] = rep.ok;
  out["violations"] = rep.violations;
  out["first_violated"] = rep.first_violated;
  return out;
}

py::dict verify(const std::string& instance, const std::string& document) {
  const Instance inst = load_instance(instance);
  const Json doc = parse(document);
  if (doc.contains("slots")) return report(verify_schedule(inst, schedule_from_json(doc)));
  if (doc.contains("best") && doc.contains("levels")) {
    return report(verify_solution(inst, solution_from_json(doc.at("best"))));
  }
  return report(verify_solution(inst, solution_from_json(doc)));
}

std::string schedule(const std::string& instance, const std::string& mode) {
  const Instance inst = load_instance(instance);
  const LatencyResult res = solve_latency(inst, power_mode_from_string(mode));
  return to_json(res, verify_schedule(inst, res.schedule).ok).dump();
}

std::string admissible(const std::string& instance,
                       const std::optional<std::vector<LinkId>>& subset,
                       std::optional<double> cap) {
  const Instance inst = load_instance(instance);
  const auto ids = subset_or_all(inst, subset);
  return to_json(check_admissible(inst, ids, cap.value_or(inst.p_max()))).dump();
}

std::string spectral(const std::string& instance,
                     const std::optional<std::vector<LinkId>>& subset) {
  const Instance inst = load_instance(instance);
  const auto ids = subset_or_all(inst, subset);
  return to_json(spectral_admissible(inst, ids, link_thresholds(inst, ids))).dump();
}

std::string brute_force(const std::string& instance, const std::string& regime,
                        const std::optional<std::vector<LinkId>>& subset) {
  const Instance inst = load_instance(instance);
  const auto ids = subset_or_all(inst, subset);
  if (regime == "variable") {
    return to_json(brute_opt_threshold(inst, ids, PowerRegime::Variable)).dump();
  }
  if (regime == "capped") {
    return to_json(brute_opt_threshold(inst, ids, PowerRegime::VariableCapped)).dump();
  }
  if (regime == "fixed") {
    return to_json(brute_opt_threshold(inst, ids, PowerRegime::Fixed, own_powers(inst, ids)))
        .dump();
  }
  if (regime == "flexible") {
    return to_json(brute_opt_flexible_fixed(inst, ids, own_powers(inst, ids))).dump();
  }
  throw InvalidInput("unknown regime '" + regime + "'");
}

double link_sinr(const std::string& instance, const std::vector<LinkId>& active,
                 const std::map<LinkId, double>& powers, LinkId link) {
  return sinr(load_instance(instance), active, powers, link);
}

std::string experiment(const std::string& name, std::uint64_t seed,
                       std::optional<std::size_t> trials, std::optional<std::size_t> n,
                       std::optional<std::size_t> k, std::optional<double> alpha,
                       std::optional<double> p_max) {
  ExperimentParams p;
  p.seed = seed;
  p.trials = trials;
  p.n = n;
  p.k = k;
  p.alpha = alpha;
  p.p_max = p_max;
  ExperimentReport rep;
  {
    py::gil_scoped_release release;
    rep = run_experiment(name, p);
  }
  Json out = to_json(rep);
  out["csv"] = to_csv(rep);
  return out.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "SINR link scheduling: capacity, flexible rates and latency";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<Unbounded>(m, "Unbounded", base.ptr());

  m.def("generate", &generate, py::arg("config"));
  m.def("solve", &solve, py::arg("instance"), py::arg("algorithm") = "unlimited",
        py::arg("mode") = "unlimited", py::arg("trace") = true);
  m.def("verify", &verify, py::arg("instance"), py::arg("document"));
  m.def("schedule", &schedule, py::arg("instance"), py::arg("mode") = "unlimited");
  m.def("check_admissible", &admissible, py::arg("instance"), py::arg("subset") = py::none(),
        py::arg("cap") = py::none());
  m.def("spectral", &spectral, py::arg("instance"), py::arg("subset") = py::none());
  m.def("brute_force", &brute_force, py::arg("instance"), py::arg("regime") = "variable",
        py::arg("subset") = py::none());
  m.def("sinr", &link_sinr, py::arg("instance"), py::arg("active"), py::arg("powers"),
        py::arg("link"));
  m.def("experiment", &experiment, py::arg("name"), py::arg("seed") = 0,
        py::arg("trials") = py::none(), py::arg("n") = py::none(), py::arg("k") = py::none(),
        py::arg("alpha") = py::none(), py::arg("p_max") = py::none());
  m.attr("experiment_names") = experiment_names();
}
