#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "sinrsched/utility.hpp"

namespace sinrsched {

using NodeIndex = std::size_t;
using LinkId = int;

/// Nodes either as points in R^dim (L2 distance) or as an explicit distance
/// matrix validated as a metric.
class MetricSpace {
 public:
  struct Euclidean {
    std::size_t dim = 0;
    std::vector<std::vector<double>> points;
  };
  struct Matrix {
    std::vector<std::vector<double>> d;
  };

  static MetricSpace euclidean(std::size_t dim,
                               std::vector<std::vector<double>> points);
  /// Validates symmetry, zero diagonal, nonnegativity and, unless
  /// skip_triangle_check is set, the triangle inequality (O(n^3)).
  static MetricSpace matrix(std::vector<std::vector<double>> d,
                            bool skip_triangle_check = false);

  std::size_t size() const;
  double distance(NodeIndex i, NodeIndex j) const;

  bool is_euclidean() const {
    return std::holds_alternative<Euclidean>(repr_);
  }
  const Euclidean& as_euclidean() const { return std::get<Euclidean>(repr_); }
  const Matrix& as_matrix() const { return std::get<Matrix>(repr_); }

 private:
  explicit MetricSpace(std::variant<Euclidean, Matrix> r) : repr_(std::move(r)) {}
  std::variant<Euclidean, Matrix> repr_;
};

struct Link {
  LinkId id = 0;
  NodeIndex sender = 0;
  NodeIndex receiver = 0;
  std::optional<double> threshold;
  std::optional<UtilitySpec> utility;
  std::optional<double> demand;
  std::optional<double> power;
};

struct InstanceOptions {
  /// Permit thresholds below 1 (lower-bound constructions only).
  bool allow_sub_unit_threshold = false;
};

/// Metric space, links and physical constants. Immutable once built.
class Instance {
 public:
  Instance(MetricSpace metric, double alpha, double noise, double p_max,
           std::vector<Link> links, InstanceOptions options = {});

  const MetricSpace& metric() const { return metric_; }
  double alpha() const { return alpha_; }
  double noise() const { return noise_; }
  /// kUnbounded when power is unlimited.
  double p_max() const { return p_max_; }
  bool unlimited_power() const { return p_max_ == kUnbounded; }
  const InstanceOptions& options() const { return options_; }

  const std::vector<Link>& links() const { return links_; }
  std::vector<LinkId> link_ids() const;
  const Link& link(LinkId id) const;
  bool has_link(LinkId id) const { return index_.contains(id); }

  /// d(i, j)^alpha.
  double path_loss(NodeIndex i, NodeIndex j) const;
  /// d(s, r)^alpha of the link itself.
  double own_loss(LinkId id) const;
  /// d(s_from, r_to)^alpha: attenuation of `from`'s signal at `to`'s receiver.
  double cross_loss(LinkId from, LinkId to) const;

  /// Threshold of the link; throws if absent.
  double threshold(LinkId id) const;

 private:
  MetricSpace metric_;
  double alpha_;
  double noise_;
  double p_max_;
  std::vector<Link> links_;
  InstanceOptions options_;
  std::unordered_map<LinkId, std::size_t> index_;
};

using PowerAssignment = std::map<LinkId, double>;
using ThresholdMap = std::map<LinkId, double>;

/// One replay-log entry: the score a greedy pass compared against its bound.
struct TraceEntry {
  std::string phase;
  LinkId id = 0;
  double score = 0.0;
  double bound = 0.0;
  bool accepted = false;
};

struct Solution {
  std::vector<LinkId> selected;  // ascending ids
  PowerAssignment powers;
  std::map<LinkId, double> sinr;
  ThresholdMap thresholds;  // thresholds in force when solved
  double objective = 0.0;
  std::string algorithm;
  std::vector<TraceEntry> trace;
  std::vector<std::string> warnings;
};

/// Relative tolerance used for every SINR-vs-threshold comparison.
inline constexpr double kSinrTolerance = 1e-9;

inline bool meets_threshold(double gamma, double beta) {
  return gamma >= beta * (1.0 - kSinrTolerance);
}

/// SINR of `target` when exactly the links in `active` transmit.
double sinr(const Instance& inst, std::span<const LinkId> active,
            const PowerAssignment& powers, LinkId target);

/// SINR of every active link.
std::map<LinkId, double> sinr_all(const Instance& inst,
                                  std::span<const LinkId> active,
                                  const PowerAssignment& powers);

/// Orders links by decreasing sensitivity beta * d^alpha, ties by ascending
/// id. Element k of the result is the link of rank k + 1.
std::vector<LinkId> sensitivity_order(const Instance& inst,
                                      std::span<const LinkId> links,
                                      const ThresholdMap& thresholds);
std::vector<LinkId> sensitivity_order(const Instance& inst,
                                      std::span<const LinkId> links);

/// Thresholds stored on the links themselves.
ThresholdMap link_thresholds(const Instance& inst,
                             std::span<const LinkId> links);

}  // namespace sinrsched
