#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "specrecon/eigh.hpp"
#include "specrecon/errors.hpp"
#include "specrecon/matrix.hpp"
#include "specrecon/spectrum.hpp"

namespace specrecon {

inline constexpr double kDefaultDeflateTol = 1e-12;
inline constexpr int kBisectionMaxIterations = 200;
inline constexpr double kPoleGuard = 1e-300;

/// Distance kept from a pole when opening a bracket there.
inline double pole_offset(double pole) { return 1e-13 * std::max(1.0, std::abs(pole)); }

/// An eigenvalue cluster of A carrying update weight w = sum q_i^2.
struct ActivePole {
  std::size_t cluster = 0;
  double value = 0.0;
  double weight = 0.0;
};

/// P_t(lambda) = 1 + sum_k t w_k / (lambda_k - lambda) over the active clusters
/// of A for the update A + t x x^T. `active` is ordered by descending value.
struct SecularSystem {
  Spectrum lambdas;
  Vector q;
  double t = 0.0;
  double x_norm2 = 0.0;
  std::vector<ActivePole> active;

  std::size_t l() const { return active.size(); }
};

/// q_i = (p_i, x); clusters whose aggregated weight exceeds
/// deflate_tol * ||x||^2 become active poles, the rest are deflated.
inline SecularSystem build_secular(const EigenBasis& basis, std::span<const double> x, double t,
                                   double deflate_tol = kDefaultDeflateTol) {
  const std::size_t n = basis.n();
  if (x.size() != n) throw InvalidArgument("build_secular: x has the wrong dimension");
  SecularSystem s;
  s.lambdas = basis.spectrum;
  s.t = t;
  s.x_norm2 = dot(x, x);
  s.q.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.q[i] = dot(basis.vectors[i], x);
  const auto& clusters = s.lambdas.clusters;
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    double w = 0.0;
    for (std::size_t i = clusters[k].begin; i < clusters[k].end; ++i) w += s.q[i] * s.q[i];
    if (w > deflate_tol * s.x_norm2) s.active.push_back({k, s.lambdas.cluster_value(k), w});
  }
  return s;
}

inline double secular_eval(const SecularSystem& s, double lambda) {
  double p = 1.0;
  for (const ActivePole& pole : s.active) {
    const double d = pole.value - lambda;
    if (std::abs(d) <= kPoleGuard) throw NumericalError("secular_eval: evaluation at a pole");
    p += s.t * pole.weight / d;
  }
  return p;
}

/// Result of a bracketed bisection.
struct BisectionResult {
  double root = 0.0;
  double width = 0.0;
  int iterations = 0;
};

/// Bisection for a function that is positive just above `lo`, negative just
/// below `hi` and decreasing in between. The endpoints themselves are never
/// evaluated, so they may be poles. Halts at one ulp or after
/// `max_iterations`; the returned root is never an unevaluated endpoint.
template <typename F>
BisectionResult bisect_decreasing(F&& f, double lo, double hi,
                                  int max_iterations = kBisectionMaxIterations) {
  BisectionResult r;
  bool lo_moved = false, hi_moved = false;
  for (; r.iterations < max_iterations; ++r.iterations) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double v = f(mid);
    if (v > 0.0) {
      lo = mid;
      lo_moved = true;
    } else if (v < 0.0) {
      hi = mid;
      hi_moved = true;
    } else {
      return {mid, 0.0, r.iterations + 1};
    }
  }
  const double mid = lo + 0.5 * (hi - lo);
  if (mid > lo && mid < hi) {
    r.root = mid;
  } else {
    r.root = (lo_moved || !hi_moved) ? lo : hi;
  }
  r.width = hi - lo;
  return r;
}

/// A secular root together with its bracket bookkeeping.
struct SecularRoot {
  double value = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  /// The sign change happened within pole_offset of a pole.
  bool at_pole = false;
};

/// Roots of P_t, one per active pole, each found by bisection inside the
/// bracket that interlacing guarantees:
///   t < 0: (d_{j+1}, d_j) and (d_l - cap, d_l)
///   t > 0: (d_1, d_1 + cap) and (d_j, d_{j-1})
/// with cap = |t| ||x||^2 + spread. Sorted descending.
inline std::vector<SecularRoot> solve_secular(const SecularSystem& s) {
  if (s.t == 0.0) throw InvalidArgument("secular_roots: t must be nonzero");
  if (s.active.empty()) throw InvalidArgument("secular_roots: no active poles");
  const std::size_t l = s.l();
  // g = sign * P_t is decreasing between poles for either sign of t.
  const double sign = s.t < 0.0 ? 1.0 : -1.0;
  auto g = [&](double lambda) { return sign * secular_eval(s, lambda); };
  const double cap = std::abs(s.t) * s.x_norm2 + s.lambdas.spread();

  std::vector<SecularRoot> roots;
  roots.reserve(l);
  for (std::size_t j = 0; j < l; ++j) {
    double lo, hi;
    bool lo_is_pole = true, hi_is_pole = true;
    if (s.t < 0.0) {
      hi = s.active[j].value;
      if (j + 1 < l) {
        lo = s.active[j + 1].value;
      } else {
        lo_is_pole = false;
        double reach = cap;
        lo = hi - reach;
        for (int k = 0; k < 64 && !(g(lo) > 0.0); ++k) lo = hi - (reach *= 2.0);
      }
    } else {
      lo = s.active[j].value;
      if (j > 0) {
        hi = s.active[j - 1].value;
      } else {
        hi_is_pole = false;
        double reach = cap;
        hi = lo + reach;
        for (int k = 0; k < 64 && !(g(hi) < 0.0); ++k) hi = lo + (reach *= 2.0);
      }
    }
    double a = lo_is_pole ? lo + pole_offset(lo) : lo;
    double b = hi_is_pole ? hi - pole_offset(hi) : hi;
    SecularRoot root{0.0, lo, hi, false};
    // A sign change inside an offset zone moves the search into that zone.
    if (a >= b) {
      a = lo;
      b = hi;
      root.at_pole = true;
    } else if (!(g(a) > 0.0)) {
      b = a;
      a = lo;
      root.at_pole = lo_is_pole;
    } else if (!(g(b) < 0.0)) {
      a = b;
      b = hi;
      root.at_pole = hi_is_pole;
    }
    const BisectionResult r = bisect_decreasing(g, a, b);
    if (r.width > 1e-13 * std::max(1.0, std::abs(r.root))) {
      throw NumericalError("secular_roots: bracket did not close in 200 bisection steps");
    }
    root.value = r.root;
    roots.push_back(root);
  }
  // t > 0 already yields descending order; so does t < 0.
  return roots;
}

inline std::vector<double> secular_roots(const SecularSystem& s) {
  std::vector<double> out;
  for (const SecularRoot& r : solve_secular(s)) out.push_back(r.value);
  return out;
}

/// Where an eigenvalue of A + t x x^T comes from.
struct Origin {
  enum class Kind { retained, root };
  Kind kind = Kind::retained;
  /// Eigenvalue index in A for retained, root number for root.
  std::size_t index = 0;

  friend bool operator==(const Origin&, const Origin&) = default;
};

struct UpdateResult {
  Spectrum eigenvalues;
  std::vector<Origin> origins;
  /// Unit eigenvectors for every eigenvalue, in the same order.
  std::vector<Vector> vectors;
  /// Root lies within 1e-10 * spread of a retained eigenvalue or at a pole.
  std::vector<bool> near_degenerate;
  /// Active cluster values of A, descending, paired with the roots.
  std::vector<double> active_values;
  std::vector<double> roots;
  double t = 0.0;
};

namespace detail {

/// Orthonormal basis of the complement of unit `c` in R^s (s - 1 vectors),
/// by twice-iterated Gram-Schmidt over the coordinate axes.
inline std::vector<Vector> complement_basis(const Vector& c) {
  const std::size_t s = c.size();
  std::vector<Vector> basis{c};
  for (std::size_t axis = 0; axis < s && basis.size() < s; ++axis) {
    Vector v(s, 0.0);
    v[axis] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& b : basis) {
        const double proj = dot(b, v);
        for (std::size_t r = 0; r < s; ++r) v[r] -= proj * b[r];
      }
    }
    const double nv = norm2(v);
    if (nv < 1e-6) continue;
    for (double& x : v) x /= nv;
    basis.push_back(std::move(v));
  }
  basis.erase(basis.begin());
  return basis;
}

struct UpdateEntry {
  double value;
  Origin origin;
  Vector vector;
  bool near;
};

}  // namespace detail

/// Eigenpairs of A + t x x^T from the eigenbasis of A.
///
/// Deflated clusters pass through unchanged. An active cluster of size s keeps
/// s - 1 copies of its eigenvalue (eigenvectors orthogonal to the projection
/// of x within the cluster) and contributes one secular root. The eigenvector
/// of root mu is sum_k sum_{i in cluster k} p_i q_i / (d_k - mu), normalized.
inline UpdateResult rank1_update(const EigenBasis& basis, std::span<const double> x, double t,
                                 double deflate_tol = kDefaultDeflateTol) {
  const SecularSystem s = build_secular(basis, x, t, deflate_tol);
  const std::size_t n = basis.n();
  const Spectrum& spec = s.lambdas;

  UpdateResult out;
  out.t = t;
  std::vector<detail::UpdateEntry> entries;
  entries.reserve(n);

  const bool trivial = (t == 0.0) || s.active.empty();
  std::vector<bool> is_active(spec.clusters.size(), false);
  if (!trivial) {
    for (const ActivePole& p : s.active) is_active[p.cluster] = true;
  }

  std::vector<double> retained;
  for (std::size_t k = 0; k < spec.clusters.size(); ++k) {
    const Cluster& c = spec.clusters[k];
    if (!is_active[k]) {
      for (std::size_t i = c.begin; i < c.end; ++i) {
        entries.push_back({spec.values[i], {Origin::Kind::retained, i}, basis.vectors[i], false});
        retained.push_back(spec.values[i]);
      }
      continue;
    }
    if (c.size() == 1) continue;
    Vector coeff(c.size());
    for (std::size_t r = 0; r < c.size(); ++r) coeff[r] = s.q[c.begin + r];
    const double cn = norm2(coeff);
    for (double& v : coeff) v /= cn;
    const auto comp = detail::complement_basis(coeff);
    for (std::size_t r = 0; r < comp.size(); ++r) {
      Vector v(n, 0.0);
      for (std::size_t b = 0; b < c.size(); ++b)
        for (std::size_t m = 0; m < n; ++m) v[m] += comp[r][b] * basis.vectors[c.begin + b][m];
      const double nv = norm2(v);
      for (double& e : v) e /= nv;
      apply_sign_convention(v);
      const std::size_t i = c.begin + r;
      entries.push_back({spec.values[i], {Origin::Kind::retained, i}, std::move(v), false});
      retained.push_back(spec.values[i]);
    }
  }

  if (!trivial) {
    const auto roots = solve_secular(s);
    const double near_tol = 1e-10 * spec.spread();
    for (std::size_t j = 0; j < roots.size(); ++j) {
      const double mu = roots[j].value;
      Vector v(n, 0.0);
      for (const ActivePole& pole : s.active) {
        const Cluster& c = spec.clusters[pole.cluster];
        const double denom = pole.value - mu;
        for (std::size_t i = c.begin; i < c.end; ++i) {
          const double coef = s.q[i] / denom;
          for (std::size_t m = 0; m < n; ++m) v[m] += coef * basis.vectors[i][m];
        }
      }
      const double nv = norm2(v);
      for (double& e : v) e /= nv;
      apply_sign_convention(v);
      bool near = roots[j].at_pole;
      for (double r : retained) near = near || std::abs(mu - r) <= near_tol;
      entries.push_back({mu, {Origin::Kind::root, j}, std::move(v), near});
      out.active_values.push_back(s.active[j].value);
      out.roots.push_back(mu);
    }
  }

  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return a.value > b.value; });
  std::vector<double> values;
  for (auto& e : entries) {
    values.push_back(e.value);
    out.origins.push_back(e.origin);
    out.vectors.push_back(std::move(e.vector));
    out.near_degenerate.push_back(e.near);
  }
  out.eigenvalues = cluster_spectrum(std::move(values));
  return out;
}

/// One probe of det(lambda I - (A + t x x^T)) = det(lambda I - A) * P_t(lambda).
struct DetProbe {
  double lambda = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double relative_deviation = 0.0;
};

struct DetIdentityReport {
  std::vector<DetProbe> probes;
  double max_relative_deviation = 0.0;
};

/// Evaluates both sides of the rank-one determinant identity at `probes`
/// random points. The left side comes from a fresh eigendecomposition of the
/// updated matrix, the right side from eigen(A) and the secular function.
/// Probes keep a distance of at least 1e-3 * spread from every eigenvalue of
/// A and of the updated matrix.
inline DetIdentityReport verify_det_identity(const SymmetricMatrix& a, const EigenBasis& basis,
                                             std::span<const double> x, double t,
                                             std::size_t probes, std::uint64_t seed = 0) {
  if (basis.n() != a.n()) throw InvalidArgument("verify_det_identity: basis does not match A");
  const SecularSystem s = build_secular(basis, x, t);
  const Spectrum updated = eigh(a.plus_rank_one(x, t)).spectrum;

  std::vector<double> avoid = basis.spectrum.values;
  avoid.insert(avoid.end(), updated.values.begin(), updated.values.end());
  const auto [lo_it, hi_it] = std::minmax_element(avoid.begin(), avoid.end());
  const double spread = *hi_it - *lo_it;
  const double scale = spread > 0.0 ? spread : std::max(1.0, std::abs(*hi_it));
  const double sep = 1e-3 * scale;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(*lo_it - 0.5 * scale, *hi_it + 0.5 * scale);

  DetIdentityReport report;
  while (report.probes.size() < probes) {
    const double lambda = dist(rng);
    bool ok = true;
    for (double v : avoid) ok = ok && std::abs(lambda - v) >= sep;
    if (!ok) continue;
    DetProbe p;
    p.lambda = lambda;
    p.lhs = char_poly_eval(updated, lambda);
    p.rhs = char_poly_eval(basis.spectrum, lambda) * secular_eval(s, lambda);
    const double mag = std::max(std::abs(p.lhs), std::abs(p.rhs));
    p.relative_deviation = mag > 0.0 ? std::abs(p.lhs - p.rhs) / mag : 0.0;
    report.max_relative_deviation = std::max(report.max_relative_deviation, p.relative_deviation);
    report.probes.push_back(p);
  }
  return report;
}

inline DetIdentityReport verify_det_identity(const SymmetricMatrix& a, std::span<const double> x,
                                             double t, std::size_t probes,
                                             std::uint64_t seed = 0) {
  return verify_det_identity(a, eigh(a), x, t, probes, seed);
}

}  // namespace specrecon
