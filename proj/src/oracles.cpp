#include "sinrsched/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "sinrsched/error.hpp"

namespace sinrsched {
namespace {

// Normalized interference system of a link set: the minimal-power map is
// p -> gain * p + base, with gain(i, j) = beta_i d_i^alpha / d(s_j, r_i)^alpha.
struct InterferenceSystem {
  std::size_t n = 0;
  std::vector<double> base;  // beta_i N d_i^alpha
  std::vector<double> gain;  // row-major, zero diagonal

  InterferenceSystem(const Instance& inst, std::span<const LinkId> subset,
                     const ThresholdMap& thresholds)
      : n(subset.size()), base(n), gain(n * n, 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      auto it = thresholds.find(subset[i]);
      if (it == thresholds.end()) {
        throw InvalidInput("link " + std::to_string(subset[i]) +
                           " has no threshold");
      }
      const double scaled = it->second * inst.own_loss(subset[i]);
      base[i] = scaled * inst.noise();
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) gain[i * n + j] = scaled / inst.cross_loss(subset[j], subset[i]);
      }
    }
  }

  double at(std::size_t i, std::size_t j) const { return gain[i * n + j]; }

  // One application of the map; silent links contribute nothing even at
  // infinite gain.
  void apply(const std::vector<double>& p, std::vector<double>& out) const {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && p[j] != 0.0) acc += at(i, j) * p[j];
      }
      out[i] = acc + base[i];
    }
  }

  // Solves (I - gain) p = base by Gaussian elimination with partial
  // pivoting. Empty when singular.
  std::optional<std::vector<double>> solve() const {
    std::vector<double> a(n * n);
    std::vector<double> b = base;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        a[i * n + j] = (i == j ? 1.0 : 0.0) - at(i, j);
      }
    }
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < n; ++r) {
        if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
      }
      if (!(std::abs(a[piv * n + col]) > 1e-300)) return std::nullopt;
      if (piv != col) {
        for (std::size_t k = 0; k < n; ++k) std::swap(a[col * n + k], a[piv * n + k]);
        std::swap(b[col], b[piv]);
      }
      for (std::size_t r = col + 1; r < n; ++r) {
        const double f = a[r * n + col] / a[col * n + col];
        if (f == 0.0) continue;
        for (std::size_t k = col; k < n; ++k) a[r * n + k] -= f * a[col * n + k];
        b[r] -= f * b[col];
      }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
      double acc = b[i];
      for (std::size_t k = i + 1; k < n; ++k) acc -= a[i * n + k] * x[k];
      x[i] = acc / a[i * n + i];
    }
    return x;
  }

  bool has_infinite_gain() const {
    return std::any_of(gain.begin(), gain.end(),
                       [](double g) { return std::isinf(g); });
  }
};

PowerAssignment to_assignment(std::span<const LinkId> subset,
                              const std::vector<double>& p) {
  PowerAssignment out;
  for (std::size_t i = 0; i < subset.size(); ++i) out[subset[i]] = p[i];
  return out;
}

// Settles a case the iteration could not decide within its budget. A
// positive solution of (I - gain) p = base exists iff the spectral radius of
// gain is below 1, and it is then the minimal fixed point.
void settle_by_linear_solve(const Instance& inst, std::span<const LinkId> subset,
                            const ThresholdMap& thresholds,
                            const InterferenceSystem& sys, double cap,
                            AdmissibilityCertificate& cert) {
  cert.method = "fixed_point+linear";
  cert.powers.clear();
  cert.violated.reset();
  cert.feasible = false;
  if (sys.has_infinite_gain()) return;
  auto p = sys.solve();
  if (!p) return;
  for (std::size_t i = 0; i < sys.n; ++i) {
    if (!std::isfinite((*p)[i]) || !((*p)[i] >= sys.base[i] * (1.0 - 1e-9))) {
      return;
    }
  }
  for (std::size_t i = 0; i < sys.n; ++i) {
    if ((*p)[i] > cap) {
      cert.violated = subset[i];
      return;
    }
  }
  PowerAssignment powers = to_assignment(subset, *p);
  if (!is_feasible(inst, subset, thresholds, powers)) return;
  cert.powers = std::move(powers);
  cert.feasible = true;
}

}  // namespace

bool is_feasible(const Instance& inst, std::span<const LinkId> subset,
                 const ThresholdMap& thresholds, const PowerAssignment& powers) {
  for (LinkId id : subset) {
    if (!meets_threshold(sinr(inst, subset, powers, id), thresholds.at(id))) {
      return false;
    }
  }
  return true;
}

AdmissibilityCertificate check_admissible(const Instance& inst,
                                          std::span<const LinkId> subset,
                                          const ThresholdMap& thresholds,
                                          double cap,
                                          const AdmissibilityOptions& opts) {
  AdmissibilityCertificate cert;
  const InterferenceSystem sys(inst, subset, thresholds);
  if (sys.n == 0) {
    cert.feasible = true;
    return cert;
  }
  const double limit = std::isinf(cap) ? opts.divergence_limit : cap;

  std::vector<double> p(sys.n, 0.0);
  std::vector<double> next(sys.n);
  while (cert.iterations < opts.max_iterations) {
    sys.apply(p, next);
    ++cert.iterations;
    double change = 0.0;
    for (std::size_t i = 0; i < sys.n; ++i) {
      if (next[i] < p[i]) cert.monotone = false;
      if (!(next[i] <= limit)) {
        cert.violated = subset[i];
        return cert;
      }
      change = std::max(change, (next[i] - p[i]) / next[i]);
    }
    p.swap(next);
    if (change < opts.relative_tolerance) {
      PowerAssignment powers = to_assignment(subset, p);
      if (is_feasible(inst, subset, thresholds, powers)) {
        cert.feasible = true;
        cert.powers = std::move(powers);
        return cert;
      }
      // Converging too slowly to be within the SINR tolerance yet.
      break;
    }
  }
  settle_by_linear_solve(inst, subset, thresholds, sys, cap, cert);
  return cert;
}

AdmissibilityCertificate check_admissible(const Instance& inst,
                                          std::span<const LinkId> subset,
                                          double cap) {
  return check_admissible(inst, subset, link_thresholds(inst, subset), cap);
}

SpectralResult spectral_admissible(const Instance& inst,
                                   std::span<const LinkId> subset,
                                   const ThresholdMap& thresholds) {
  SpectralResult res;
  const InterferenceSystem sys(inst, subset, thresholds);
  const std::size_t n = sys.n;
  if (n <= 1) {
    res.admissible = true;
    return res;
  }
  if (sys.has_infinite_gain()) {
    res.rho = res.lower = res.upper = kUnbounded;
    return res;
  }
  // Power iteration on gain + I, which is entrywise positive, so the
  // Collatz-Wielandt quotients bracket rho + 1 and close in on it.
  std::vector<double> x(n, 1.0);
  std::vector<double> y(n);
  constexpr std::size_t kMaxIter = 100000;
  while (res.iterations < kMaxIter) {
    ++res.iterations;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = x[i];
      for (std::size_t j = 0; j < n; ++j) acc += sys.at(i, j) * x[j];
      y[i] = acc;
    }
    double lo = kUnbounded;
    double hi = 0.0;
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double q = y[i] / x[i];
      lo = std::min(lo, q);
      hi = std::max(hi, q);
      norm = std::max(norm, y[i]);
    }
    res.lower = lo - 1.0;
    res.upper = hi - 1.0;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / norm;
    if (res.upper < 1.0 || res.lower >= 1.0) break;
    if (hi - lo <= 1e-15 * hi) break;
  }
  res.rho = 0.5 * (res.lower + res.upper);
  if (res.upper < 1.0) {
    res.admissible = true;
  } else if (res.lower >= 1.0) {
    res.admissible = false;
  } else {
    res.admissible = res.rho < 1.0;
  }
  return res;
}

BruteForceResult brute_opt_threshold(const Instance& inst,
                                     std::span<const LinkId> links,
                                     const ThresholdMap& thresholds,
                                     PowerRegime regime,
                                     const PowerAssignment& powers) {
  if (links.size() > kMaxBruteForceLinks) {
    throw InvalidInput("brute force limited to 20 links, got " +
                       std::to_string(links.size()));
  }
  std::vector<LinkId> sorted(links.begin(), links.end());
  std::sort(sorted.begin(), sorted.end());

  BruteForceResult best;
  auto feasible = [&](const std::vector<LinkId>& subset) {
    ++best.evaluated;
    switch (regime) {
      case PowerRegime::Variable:
        return check_admissible(inst, subset, thresholds, kUnbounded).feasible;
      case PowerRegime::VariableCapped:
        return check_admissible(inst, subset, thresholds, inst.p_max()).feasible;
      case PowerRegime::Fixed:
        return is_feasible(inst, subset, thresholds, powers);
    }
    return false;
  };

  // Feasibility is closed under taking subsets in every regime, so a
  // depth-first walk in lexicographic order only needs to extend feasible
  // sets, and the first set of maximum size it meets is the lexicographic
  // minimum.
  std::vector<LinkId> current;
  std::function<void(std::size_t)> extend = [&](std::size_t start) {
    for (std::size_t k = start; k < sorted.size(); ++k) {
      current.push_back(sorted[k]);
      if (feasible(current)) {
        if (current.size() > best.subset.size()) best.subset = current;
        extend(k + 1);
      }
      current.pop_back();
    }
  };
  extend(0);
  best.value = static_cast<double>(best.subset.size());
  return best;
}

BruteForceResult brute_opt_threshold(const Instance& inst,
                                     std::span<const LinkId> links,
                                     PowerRegime regime,
                                     const PowerAssignment& powers) {
  return brute_opt_threshold(inst, links, link_thresholds(inst, links), regime,
                             powers);
}

BruteForceResult brute_opt_flexible_fixed(const Instance& inst,
                                          std::span<const LinkId> links,
                                          const PowerAssignment& powers) {
  const std::size_t n = links.size();
  if (n > kMaxBruteForceLinks) {
    throw InvalidInput("brute force limited to 20 links, got " +
                       std::to_string(n));
  }
  std::vector<LinkId> sorted(links.begin(), links.end());
  std::sort(sorted.begin(), sorted.end());
  for (LinkId id : sorted) {
    if (!inst.link(id).utility) {
      throw InvalidInput("link " + std::to_string(id) + " has no utility");
    }
  }

  BruteForceResult best;
  std::vector<LinkId> subset;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    subset.clear();
    for (std::size_t k = 0; k < n; ++k) {
      if (mask & (std::uint64_t{1} << k)) subset.push_back(sorted[k]);
    }
    double total = 0.0;
    for (LinkId id : subset) {
      total += evaluate(*inst.link(id).utility, sinr(inst, subset, powers, id));
    }
    ++best.evaluated;
    const double tol = 1e-12 * std::max(1.0, std::abs(best.value));
    if (total > best.value + tol ||
        (std::abs(total - best.value) <= tol && subset < best.subset)) {
      best.value = total;
      best.subset = subset;
    }
  }
  return best;
}

}  // namespace sinrsched
