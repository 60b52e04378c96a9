#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "sinrsched/flexible.hpp"
#include "sinrsched/generators.hpp"
#include "sinrsched/lemma_lab.hpp"
#include "sinrsched/model.hpp"
#include "sinrsched/oracles.hpp"
#include "sinrsched/utility.hpp"

namespace sinrsched {

using Json = nlohmann::ordered_json;

/// Numbers that may be infinite are written as the string "inf".
Json number_or_inf(double x);
double number_or_inf(const Json& j, const char* what);

Json to_json(const UtilitySpec& u);
UtilitySpec utility_from_json(const Json& j);

Json to_json(const MetricSpace& m);
MetricSpace metric_from_json(const Json& j);

Json to_json(const Instance& inst);
/// Throws InvalidInput on any schema or invariant violation.
Instance instance_from_json(const Json& j);

Json to_json(const PowerAssignment& p);
PowerAssignment powers_from_json(const Json& j);

Json to_json(const Solution& s, bool with_trace = true);
Solution solution_from_json(const Json& j);

Json to_json(const FlexibleRun& run);
Json to_json(const Schedule& s);
/// {"scheme", "slots", "lengths", "fulfilled"} plus the per-scheme detail.
Json to_json(const LatencyResult& r, bool fulfilled);
/// Reads the slots and chosen scheme of a schedule document.
Schedule schedule_from_json(const Json& j);

Json to_json(const AdmissibilityCertificate& c);
Json to_json(const SpectralResult& s);
Json to_json(const BruteForceResult& b);

Json to_json(const GenConfig& cfg);
GenConfig gen_config_from_json(const Json& j);

Json to_json(const Decomposition& d);
Json to_json(const ReversalResult& r);
Json to_json(const AlohaReport& r);

/// 64-bit FNV-1a over the compact serialization, as 16 hex digits.
std::string digest(const Json& j);
std::string digest(const Instance& inst);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace sinrsched
