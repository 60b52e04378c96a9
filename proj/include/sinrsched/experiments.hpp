#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sinrsched/json_io.hpp"

namespace sinrsched {

/// One CSV row. Columns, in order:
/// trial, instance_digest, algorithm, n, alg, opt, ratio, feasible,
/// runtime_ms, note. Missing numbers are written as empty fields.
struct ExperimentRow {
  std::size_t trial = 0;
  std::string digest;
  std::string algorithm;
  std::size_t n = 0;
  double alg = 0.0;
  std::optional<double> opt;
  std::optional<double> ratio;
  bool feasible = true;
  double runtime_ms = 0.0;
  std::string note;
};

struct ExperimentReport {
  std::string experiment;
  Json params;
  Json results;
  std::uint64_t seed = 0;
  std::vector<ExperimentRow> rows;
  bool passed = true;
  std::vector<std::string> failures;

  void fail(std::string why);
};

struct ExperimentParams {
  std::optional<std::size_t> trials;
  std::optional<std::size_t> n;  // upper bound on links per instance
  std::uint64_t seed = 0;
  std::optional<double> alpha;  // otherwise drawn from {2, 2.5, 4}
  std::optional<double> p_max;
  std::optional<std::size_t> k;  // lower-bound constructions
};

/// Names accepted by run_experiment.
const std::vector<std::string>& experiment_names();

/// Throws InvalidInput for an unknown name.
ExperimentReport run_experiment(const std::string& name,
                                const ExperimentParams& params);

Json to_json(const ExperimentReport& r);
std::string to_csv(const ExperimentReport& r);
inline constexpr const char* kCsvHeader =
    "trial,instance_digest,algorithm,n,alg,opt,ratio,feasible,runtime_ms,note";

/// Worker count: hardware concurrency, capped by SINRSCHED_THREADS.
std::size_t worker_count();

/// Runs body(i) for i in [0, count) on worker_count() threads. Results are
/// collected by index, so the output order never depends on scheduling.
template <typename T>
std::vector<T> parallel_trials(std::size_t count,
                               const std::function<T(std::size_t)>& body);

}  // namespace sinrsched

#include "sinrsched/detail/parallel.hpp"
