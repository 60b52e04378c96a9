#include "sinrsched/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sinrsched/error.hpp"

namespace sinrsched {

MetricSpace MetricSpace::euclidean(std::size_t dim,
                                   std::vector<std::vector<double>> points) {
  if (dim == 0) throw InvalidInput("euclidean metric needs dim >= 1");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != dim) {
      throw InvalidInput("point " + std::to_string(i) + " has dimension " +
                         std::to_string(points[i].size()) + ", expected " +
                         std::to_string(dim));
    }
    for (double x : points[i]) {
      if (!std::isfinite(x)) throw InvalidInput("coordinates must be finite");
    }
  }
  return MetricSpace(Euclidean{dim, std::move(points)});
}

MetricSpace MetricSpace::matrix(std::vector<std::vector<double>> d,
                                bool skip_triangle_check) {
  const std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i].size() != n) throw InvalidInput("distance matrix must be square");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i][i] != 0.0) throw InvalidInput("distance matrix diagonal must be 0");
    for (std::size_t j = 0; j < n; ++j) {
      if (!(d[i][j] >= 0.0) || !std::isfinite(d[i][j])) {
        throw InvalidInput("distances must be finite and nonnegative");
      }
      if (d[i][j] != d[j][i]) {
        throw InvalidInput("distance matrix must be symmetric");
      }
    }
  }
  if (!skip_triangle_check) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          double via = d[i][k] + d[k][j];
          if (d[i][j] > via * (1.0 + 1e-12)) {
            throw InvalidInput("triangle inequality violated: d(" +
                               std::to_string(i) + "," + std::to_string(j) +
                               ") > d(" + std::to_string(i) + "," +
                               std::to_string(k) + ") + d(" +
                               std::to_string(k) + "," + std::to_string(j) +
                               ")");
          }
        }
      }
    }
  }
  return MetricSpace(Matrix{std::move(d)});
}

std::size_t MetricSpace::size() const {
  if (is_euclidean()) return as_euclidean().points.size();
  return as_matrix().d.size();
}

double MetricSpace::distance(NodeIndex i, NodeIndex j) const {
  const std::size_t n = size();
  if (i >= n || j >= n) {
    throw InvalidInput("node index out of range: (" + std::to_string(i) + "," +
                       std::to_string(j) + ") with " + std::to_string(n) +
                       " nodes");
  }
  if (i == j) return 0.0;
  if (!is_euclidean()) return as_matrix().d[i][j];
  const auto& a = as_euclidean().points[i];
  const auto& b = as_euclidean().points[j];
  double sq = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double diff = a[k] - b[k];
    sq += diff * diff;
  }
  return std::sqrt(sq);
}

Instance::Instance(MetricSpace metric, double alpha, double noise, double p_max,
                   std::vector<Link> links, InstanceOptions options)
    : metric_(std::move(metric)),
      alpha_(alpha),
      noise_(noise),
      p_max_(p_max),
      links_(std::move(links)),
      options_(options) {
  if (!(alpha_ > 0.0) || !std::isfinite(alpha_)) {
    throw InvalidInput("alpha must be finite and > 0");
  }
  if (!(noise_ > 0.0) || !std::isfinite(noise_)) {
    throw InvalidInput("noise must be finite and > 0");
  }
  if (!(p_max_ > 0.0)) throw InvalidInput("p_max must be > 0");
  for (std::size_t k = 0; k < links_.size(); ++k) {
    const Link& l = links_[k];
    const std::string tag = "link " + std::to_string(l.id);
    if (!index_.emplace(l.id, k).second) {
      throw InvalidInput("duplicate " + tag);
    }
    if (l.sender >= metric_.size() || l.receiver >= metric_.size()) {
      throw InvalidInput(tag + ": node index out of range");
    }
    if (l.sender == l.receiver) {
      throw InvalidInput(tag + ": sender equals receiver");
    }
    if (!(metric_.distance(l.sender, l.receiver) > 0.0)) {
      throw InvalidInput(tag + ": zero length");
    }
    if (l.threshold) {
      double b = *l.threshold;
      if (!std::isfinite(b) || !(b > 0.0)) {
        throw InvalidInput(tag + ": threshold must be finite and > 0");
      }
      if (b < 1.0 && !options_.allow_sub_unit_threshold) {
        throw InvalidInput(tag + ": threshold below 1");
      }
    }
    if (l.demand && (!(*l.demand >= 0.0) || !std::isfinite(*l.demand))) {
      throw InvalidInput(tag + ": demand must be finite and >= 0");
    }
    if (l.power && (!(*l.power >= 0.0) || !std::isfinite(*l.power))) {
      throw InvalidInput(tag + ": power must be finite and >= 0");
    }
    if (l.utility) validate(*l.utility);
  }
}

std::vector<LinkId> Instance::link_ids() const {
  std::vector<LinkId> ids;
  ids.reserve(links_.size());
  for (const Link& l : links_) ids.push_back(l.id);
  return ids;
}

const Link& Instance::link(LinkId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw InvalidInput("unknown link id " + std::to_string(id));
  }
  return links_[it->second];
}

double Instance::path_loss(NodeIndex i, NodeIndex j) const {
  return std::pow(metric_.distance(i, j), alpha_);
}

double Instance::own_loss(LinkId id) const {
  const Link& l = link(id);
  return path_loss(l.sender, l.receiver);
}

double Instance::cross_loss(LinkId from, LinkId to) const {
  return path_loss(link(from).sender, link(to).receiver);
}

double Instance::threshold(LinkId id) const {
  const Link& l = link(id);
  if (!l.threshold) {
    throw InvalidInput("link " + std::to_string(id) + " has no threshold");
  }
  return *l.threshold;
}

namespace {

double power_of(const PowerAssignment& powers, LinkId id) {
  auto it = powers.find(id);
  if (it == powers.end()) {
    throw InvalidInput("no power for link " + std::to_string(id));
  }
  return it->second;
}

// p / loss with the conventions 0 / 0 = 0 (silent link) and p / 0 = inf.
double received(double power, double loss) {
  if (power == 0.0) return 0.0;
  return power / loss;
}

}  // namespace

double sinr(const Instance& inst, std::span<const LinkId> active,
            const PowerAssignment& powers, LinkId target) {
  if (std::find(active.begin(), active.end(), target) == active.end()) {
    throw InvalidInput("link " + std::to_string(target) + " is not active");
  }
  double interference = 0.0;
  for (LinkId other : active) {
    if (other == target) continue;
    interference +=
        received(power_of(powers, other), inst.cross_loss(other, target));
  }
  double signal = received(power_of(powers, target), inst.own_loss(target));
  return signal / (interference + inst.noise());
}

std::map<LinkId, double> sinr_all(const Instance& inst,
                                  std::span<const LinkId> active,
                                  const PowerAssignment& powers) {
  std::map<LinkId, double> out;
  for (LinkId id : active) out[id] = sinr(inst, active, powers, id);
  return out;
}

ThresholdMap link_thresholds(const Instance& inst,
                             std::span<const LinkId> links) {
  ThresholdMap out;
  for (LinkId id : links) out[id] = inst.threshold(id);
  return out;
}

std::vector<LinkId> sensitivity_order(const Instance& inst,
                                      std::span<const LinkId> links,
                                      const ThresholdMap& thresholds) {
  struct Keyed {
    double sensitivity;
    LinkId id;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(links.size());
  for (LinkId id : links) {
    auto it = thresholds.find(id);
    if (it == thresholds.end()) {
      throw InvalidInput("link " + std::to_string(id) + " has no threshold");
    }
    keyed.push_back({it->second * inst.own_loss(id), id});
  }
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    if (a.sensitivity != b.sensitivity) return a.sensitivity > b.sensitivity;
    return a.id < b.id;
  });
  for (std::size_t k = 1; k < keyed.size(); ++k) {
    if (keyed[k].id == keyed[k - 1].id) {
      throw InvalidInput("duplicate link id " + std::to_string(keyed[k].id));
    }
  }
  std::vector<LinkId> order;
  order.reserve(keyed.size());
  for (const Keyed& k : keyed) order.push_back(k.id);
  return order;
}

std::vector<LinkId> sensitivity_order(const Instance& inst,
                                      std::span<const LinkId> links) {
  return sensitivity_order(inst, links, link_thresholds(inst, links));
}

}  // namespace sinrsched
