#include "sinrsched/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "sinrsched/error.hpp"

namespace sinrsched {

namespace {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InvalidInput(std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("field '") + key + "': " + e.what());
  }
}

template <typename T>
std::optional<T> optional_field(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return field<T>(j, key);
}

const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InvalidInput(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

LinkId parse_id(const std::string& key) {
  try {
    std::size_t used = 0;
    const int id = std::stoi(key, &used);
    if (used != key.size()) throw std::invalid_argument(key);
    return id;
  } catch (const std::exception&) {
    throw InvalidInput("link id key '" + key + "' is not an integer");
  }
}

template <typename Map>
Json id_map(const Map& m) {
  Json out = Json::object();
  for (const auto& [id, v] : m) out[std::to_string(id)] = number_or_inf(v);
  return out;
}

std::map<LinkId, double> id_map_from_json(const Json& j, const char* what) {
  if (!j.is_object()) throw InvalidInput(std::string(what) + " must be an object");
  std::map<LinkId, double> out;
  for (const auto& [key, value] : j.items()) {
    out[parse_id(key)] = number_or_inf(value, what);
  }
  return out;
}

}  // namespace

Json number_or_inf(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  return x;
}

double number_or_inf(const Json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kUnbounded;
    if (s == "-inf") return -kUnbounded;
  }
  throw InvalidInput(std::string(what) + " must be a number or \"inf\"");
}

Json to_json(const UtilitySpec& u) {
  if (const auto* step = std::get_if<StepUtility>(&u)) {
    Json steps = Json::array();
    for (const auto& st : step->steps) steps.push_back({st.gamma, st.value});
    return {{"type", "step"}, {"steps", steps}};
  }
  const auto& sh = std::get<ShannonUtility>(u);
  return {{"type", "shannon"}, {"scale", sh.scale}, {"cutoff", sh.cutoff}};
}

UtilitySpec utility_from_json(const Json& j) {
  const auto type = field<std::string>(j, "type");
  UtilitySpec u;
  if (type == "step") {
    StepUtility step;
    const Json& steps = member(j, "steps");
    if (!steps.is_array()) throw InvalidInput("utility steps must be an array");
    for (const Json& st : steps) {
      if (!st.is_array() || st.size() != 2 || !st[0].is_number() ||
          !st[1].is_number()) {
        throw InvalidInput("each step must be [gamma, value]");
      }
      step.steps.push_back({st[0].get<double>(), st[1].get<double>()});
    }
    u = std::move(step);
  } else if (type == "shannon") {
    u = ShannonUtility{field<double>(j, "scale"), field<double>(j, "cutoff")};
  } else {
    throw InvalidInput("unknown utility type '" + type + "'");
  }
  validate(u);
  return u;
}

Json to_json(const MetricSpace& m) {
  if (m.is_euclidean()) {
    const auto& e = m.as_euclidean();
    return {{"type", "euclidean"}, {"dim", e.dim}, {"points", e.points}};
  }
  return {{"type", "matrix"}, {"d", m.as_matrix().d}};
}

MetricSpace metric_from_json(const Json& j) {
  const auto type = field<std::string>(j, "type");
  if (type == "euclidean") {
    return MetricSpace::euclidean(
        field<std::size_t>(j, "dim"),
        field<std::vector<std::vector<double>>>(j, "points"));
  }
  if (type == "matrix") {
    return MetricSpace::matrix(field<std::vector<std::vector<double>>>(j, "d"),
                               optional_field<bool>(j, "skip_triangle_check")
                                   .value_or(false));
  }
  throw InvalidInput("unknown metric type '" + type + "'");
}

Json to_json(const Instance& inst) {
  Json links = Json::array();
  for (const Link& l : inst.links()) {
    Json jl = {{"id", l.id}, {"s", l.sender}, {"r", l.receiver}};
    if (l.threshold) jl["beta"] = *l.threshold;
    if (l.utility) jl["utility"] = to_json(*l.utility);
    if (l.demand) jl["demand"] = *l.demand;
    if (l.power) jl["power"] = *l.power;
    links.push_back(std::move(jl));
  }
  Json out = {{"alpha", inst.alpha()},
              {"noise", inst.noise()},
              {"p_max", number_or_inf(inst.p_max())},
              {"metric", to_json(inst.metric())},
              {"links", links}};
  if (inst.options().allow_sub_unit_threshold) out["allow_sub_unit_threshold"] = true;
  return out;
}

Instance instance_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidInput("instance must be a JSON object");
  if (!j.contains("p_max")) throw InvalidInput("missing field 'p_max'");
  const double p_max = number_or_inf(j.at("p_max"), "p_max");
  if (!j.contains("metric")) throw InvalidInput("missing field 'metric'");
  MetricSpace metric = metric_from_json(j.at("metric"));
  std::vector<Link> links;
  if (!j.contains("links") || !j.at("links").is_array()) {
    throw InvalidInput("instance needs a 'links' array");
  }
  for (const Json& jl : j.at("links")) {
    Link l;
    l.id = field<LinkId>(jl, "id");
    l.sender = field<NodeIndex>(jl, "s");
    l.receiver = field<NodeIndex>(jl, "r");
    l.threshold = optional_field<double>(jl, "beta");
    if (jl.contains("utility") && !jl.at("utility").is_null()) {
      l.utility = utility_from_json(jl.at("utility"));
    }
    l.demand = optional_field<double>(jl, "demand");
    l.power = optional_field<double>(jl, "power");
    links.push_back(std::move(l));
  }
  InstanceOptions opts;
  opts.allow_sub_unit_threshold =
      optional_field<bool>(j, "allow_sub_unit_threshold").value_or(false);
  return Instance(std::move(metric), field<double>(j, "alpha"),
                  field<double>(j, "noise"), p_max, std::move(links), opts);
}

Json to_json(const PowerAssignment& p) { return id_map(p); }

PowerAssignment powers_from_json(const Json& j) {
  return id_map_from_json(j, "powers");
}

Json to_json(const Solution& s, bool with_trace) {
  Json out = {{"selected", s.selected},
              {"powers", id_map(s.powers)},
              {"sinr", id_map(s.sinr)},
              {"thresholds", id_map(s.thresholds)},
              {"objective", number_or_inf(s.objective)},
              {"algorithm", s.algorithm}};
  if (!s.warnings.empty()) out["warnings"] = s.warnings;
  if (with_trace && !s.trace.empty()) {
    Json trace = Json::array();
    for (const auto& t : s.trace) {
      trace.push_back({{"phase", t.phase},
                       {"id", t.id},
                       {"score", number_or_inf(t.score)},
                       {"bound", number_or_inf(t.bound)},
                       {"accepted", t.accepted}});
    }
    out["trace"] = std::move(trace);
  }
  return out;
}

Solution solution_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidInput("solution must be a JSON object");
  Solution s;
  s.selected = field<std::vector<LinkId>>(j, "selected");
  s.powers = powers_from_json(member(j, "powers"));
  s.sinr = id_map_from_json(member(j, "sinr"), "sinr");
  if (j.contains("thresholds")) {
    s.thresholds = id_map_from_json(j.at("thresholds"), "thresholds");
  }
  s.objective = number_or_inf(member(j, "objective"), "objective");
  s.algorithm = optional_field<std::string>(j, "algorithm").value_or("");
  if (j.contains("trace")) {
    for (const Json& t : member(j, "trace")) {
      s.trace.push_back({field<std::string>(t, "phase"), field<LinkId>(t, "id"),
                         number_or_inf(member(t, "score"), "score"),
                         number_or_inf(member(t, "bound"), "bound"),
                         field<bool>(t, "accepted")});
    }
  }
  return s;
}

Json to_json(const FlexibleRun& run) {
  Json levels = Json::array();
  for (const auto& lv : run.levels) {
    levels.push_back({{"index", lv.index},
                      {"target", lv.target},
                      {"thresholds", id_map(lv.thresholds)},
                      {"solution", to_json(lv.solution, false)}});
  }
  return {{"B", run.B},
          {"best_index", run.best_index},
          {"best", to_json(run.best(), false)},
          {"levels", levels}};
}

Json to_json(const Schedule& s) {
  Json slots = Json::array();
  for (const auto& slot : s.slots) slots.push_back(to_json(slot, false));
  Json residuals = Json::array();
  for (const auto& r : s.residual_demands) residuals.push_back(id_map(r));
  return {{"scheme", s.scheme},
          {"length", s.slots.size()},
          {"complete", s.complete},
          {"slots", slots},
          {"residuals", residuals},
          {"progress", s.progress},
          {"fallbacks", s.fallbacks}};
}

Json to_json(const LatencyResult& r, bool fulfilled) {
  Json slots = Json::array();
  for (const auto& slot : r.schedule.slots) slots.push_back(to_json(slot, false));
  return {{"scheme", r.schedule.scheme},
          {"slots", slots},
          {"lengths",
           {{"scheme1", r.scheme1.complete ? Json(r.scheme1.slots.size()) : Json()},
            {"scheme2", r.scheme2.slots.size()}}},
          {"fulfilled", fulfilled},
          {"dropped", r.dropped},
          {"schemes", {{"scheme1", to_json(r.scheme1)}, {"scheme2", to_json(r.scheme2)}}}};
}

Schedule schedule_from_json(const Json& j) {
  Schedule s;
  s.scheme = field<int>(j, "scheme");
  if (!j.contains("slots") || !j.at("slots").is_array()) {
    throw InvalidInput("schedule needs a 'slots' array");
  }
  for (const Json& slot : j.at("slots")) s.slots.push_back(solution_from_json(slot));
  return s;
}

Json to_json(const AdmissibilityCertificate& c) {
  Json out = {{"feasible", c.feasible},
              {"powers", id_map(c.powers)},
              {"iterations", c.iterations},
              {"method", c.method},
              {"monotone", c.monotone}};
  if (c.violated) out["violated"] = *c.violated;
  return out;
}

Json to_json(const SpectralResult& s) {
  return {{"feasible", s.admissible},
          {"rho", s.rho},
          {"lower", s.lower},
          {"upper", s.upper},
          {"iterations", s.iterations},
          {"method", "spectral"}};
}

Json to_json(const BruteForceResult& b) {
  return {{"subset", b.subset}, {"value", b.value}, {"evaluated", b.evaluated}};
}

Json to_json(const GenConfig& cfg) {
  Json out = {{"n", cfg.n},
              {"dim", cfg.dim},
              {"area", cfg.area},
              {"d_range", {cfg.d_min, cfg.d_max}},
              {"beta_range", {cfg.beta_min, cfg.beta_max}},
              {"beta_set", cfg.beta_set},
              {"allow_sub_unit", cfg.allow_sub_unit},
              {"utility_family", to_string(cfg.utility)},
              {"max_steps", cfg.max_steps},
              {"step_gamma_max", cfg.step_gamma_max},
              {"step_value_max", cfg.step_value_max},
              {"shannon_scale_range", {cfg.shannon_scale_min, cfg.shannon_scale_max}},
              {"alpha", cfg.alpha},
              {"noise", cfg.noise},
              {"p_max", number_or_inf(cfg.p_max)},
              {"seed", cfg.seed}};
  if (cfg.demand_min) out["demand_range"] = {*cfg.demand_min, *cfg.demand_max};
  if (cfg.uniform_power) out["uniform_power"] = *cfg.uniform_power;
  return out;
}

GenConfig gen_config_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidInput("generator config must be an object");
  if (!j.contains("seed")) throw InvalidInput("generator config needs a seed");
  static const std::set<std::string> known = {
      "n", "dim", "area", "d_range", "beta_range", "beta_set", "allow_sub_unit",
      "utility_family", "max_steps", "step_gamma_max", "step_value_max",
      "shannon_scale_range", "demand_range", "uniform_power", "alpha", "noise",
      "p_max", "seed"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw InvalidInput("unknown generator field '" + key + "'");
  }
  GenConfig cfg;
  cfg.seed = field<std::uint64_t>(j, "seed");
  if (auto v = optional_field<std::size_t>(j, "n")) cfg.n = *v;
  if (auto v = optional_field<std::size_t>(j, "dim")) cfg.dim = *v;
  if (auto v = optional_field<double>(j, "area")) cfg.area = *v;
  if (auto v = optional_field<std::pair<double, double>>(j, "d_range")) {
    std::tie(cfg.d_min, cfg.d_max) = *v;
  }
  if (auto v = optional_field<std::pair<double, double>>(j, "beta_range")) {
    std::tie(cfg.beta_min, cfg.beta_max) = *v;
  }
  if (auto v = optional_field<std::vector<double>>(j, "beta_set")) cfg.beta_set = *v;
  if (auto v = optional_field<bool>(j, "allow_sub_unit")) cfg.allow_sub_unit = *v;
  if (auto v = optional_field<std::string>(j, "utility_family")) {
    cfg.utility = utility_family_from_string(*v);
  }
  if (auto v = optional_field<std::size_t>(j, "max_steps")) cfg.max_steps = *v;
  if (auto v = optional_field<double>(j, "step_gamma_max")) cfg.step_gamma_max = *v;
  if (auto v = optional_field<double>(j, "step_value_max")) cfg.step_value_max = *v;
  if (auto v = optional_field<std::pair<double, double>>(j, "shannon_scale_range")) {
    std::tie(cfg.shannon_scale_min, cfg.shannon_scale_max) = *v;
  }
  if (auto v = optional_field<std::pair<double, double>>(j, "demand_range")) {
    cfg.demand_min = v->first;
    cfg.demand_max = v->second;
  }
  if (auto v = optional_field<double>(j, "uniform_power")) cfg.uniform_power = *v;
  if (auto v = optional_field<double>(j, "alpha")) cfg.alpha = *v;
  if (auto v = optional_field<double>(j, "noise")) cfg.noise = *v;
  if (j.contains("p_max")) cfg.p_max = number_or_inf(j.at("p_max"), "p_max");
  cfg.validate();
  return cfg;
}

Json to_json(const Decomposition& d) {
  return {{"scale", d.scale},
          {"parts", d.parts},
          {"certified", d.certified},
          {"part_bound", d.part_bound()}};
}

Json to_json(const ReversalResult& r) {
  return {{"subset", r.subset},
          {"markov_set", r.markov_set},
          {"parts", r.parts},
          {"certified", r.certified},
          {"reversed_powers", id_map(r.reversed_powers)}};
}

Json to_json(const AlohaReport& r) {
  Json rounds = Json::array();
  for (const auto& t : r.rounds) rounds.push_back(t ? Json(*t) : Json());
  Json trace = Json::array();
  for (const auto& round : r.first_trial_trace) {
    trace.push_back({{"transmitted", round.transmitted},
                     {"succeeded", round.succeeded}});
  }
  return {{"p_fast", r.p_fast},
          {"rounds", rounds},
          {"monotone", r.monotone},
          {"dropouts_silent", r.dropouts_silent},
          {"first_trial_trace", trace}};
}

std::string digest(const Json& j) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string digest(const Instance& inst) { return digest(to_json(inst)); }

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput("malformed JSON in '" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

}  // namespace sinrsched
