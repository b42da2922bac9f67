#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "specrecon/deck.hpp"
#include "specrecon/eigh.hpp"
#include "specrecon/errors.hpp"
#include "specrecon/matrix.hpp"
#include "specrecon/secular.hpp"
#include "specrecon/spectrum.hpp"
#include "specrecon/square_recon.hpp"

namespace specrecon {

/// Orthogonal projection of the all-ones vector onto the eigenspace spanned
/// by the cluster: sum_{i in cluster} p_i (p_i, 1).
inline Vector projection_of_ones(const EigenBasis& basis, const Cluster& cluster) {
  const std::size_t n = basis.n();
  if (cluster.end > n || cluster.begin >= cluster.end) {
    throw InvalidArgument("projection_of_ones: cluster out of range");
  }
  Vector proj(n, 0.0);
  for (std::size_t i = cluster.begin; i < cluster.end; ++i) {
    double c = 0.0;
    for (double v : basis.vectors[i]) c += v;
    for (std::size_t m = 0; m < n; ++m) proj[m] += c * basis.vectors[i][m];
  }
  return proj;
}

struct SignCanonical {
  Vector vector;
  bool orthogonal_to_ones = false;
};

/// Chooses the sign of a unit vector so that (v, 1) > 0. Vectors with
/// |(v, 1)| <= 1e-10 sqrt(n) are returned unchanged and flagged.
inline SignCanonical canonicalize_sign_along_ones(std::span<const double> v) {
  const double nv = norm2(v);
  if (std::abs(nv - 1.0) > 1e-8) {
    throw InvalidArgument("canonicalize_sign_along_ones: vector is not unit length");
  }
  double s = 0.0;
  for (double x : v) s += x;
  const double sign_tol = 1e-10 * std::sqrt(static_cast<double>(v.size()));
  SignCanonical out{Vector(v.begin(), v.end()), false};
  if (s < -sign_tol) {
    for (double& x : out.vector) x = -x;
  } else if (s <= sign_tol) {
    out.orthogonal_to_ones = true;
  }
  return out;
}

/// Principal angle between the lines spanned by two unit vectors, computed as
/// 2 asin(|u -+ v| / 2) to stay accurate for tiny angles.
inline double line_angle(std::span<const double> u, std::span<const double> v) {
  const double s = dot(u, v) >= 0.0 ? 1.0 : -1.0;
  double d2 = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - s * v[i];
    d2 += d * d;
  }
  return 2.0 * std::asin(std::min(1.0, 0.5 * std::sqrt(d2)));
}

inline double euclidean_distance(std::span<const double> u, std::span<const double> v) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) d2 += (u[i] - v[i]) * (u[i] - v[i]);
  return std::sqrt(d2);
}

inline constexpr double kAngleTol = 1e-8;

/// `count` points lo + k (hi - lo) / count for k = 1..count, i.e. uniform in (lo, hi].
inline std::vector<double> t_samples(std::size_t count, double lo, double hi) {
  std::vector<double> out;
  for (std::size_t k = 1; k <= count; ++k) {
    out.push_back(lo + static_cast<double>(k) * (hi - lo) / static_cast<double>(count));
  }
  return out;
}

inline std::vector<double> default_t_samples() { return t_samples(16, -1.0, -1.0 / 16.0); }

/// Comparison of the lowest eigenpairs of A + tJ and B + tJ at one t.
struct TheoremMainSample {
  double t = 0.0;
  double lowest_a = 0.0;
  double lowest_b = 0.0;
  double value_deviation = 0.0;
  bool simple_a = false;
  bool simple_b = false;
  /// Lowest eigenvalue simple in both; otherwise the sample is inconclusive.
  bool in_interval = false;
  std::optional<double> angle;
  /// Secular route (rank1_update of A by the all-ones vector) against the
  /// direct eigendecomposition of A + tJ.
  double secular_value_deviation = 0.0;
  std::optional<double> secular_angle;
  double spread = 0.0;
  bool pass = false;
};

/// For each t: lowest eigenvalue and eigenvector of A + tJ and B + tJ by
/// direct eigendecomposition, plus a cross-check of the A side through the
/// secular equation. Samples where the lowest eigenvalue is not simple in
/// both matrices are reported as outside the interval, not as failures.
inline std::vector<TheoremMainSample> verify_theorem_main(const SymmetricMatrix& a,
                                                          const SymmetricMatrix& b,
                                                          std::span<const double> ts,
                                                          double tol = 1e-8) {
  if (a.n() != b.n()) throw InvalidArgument("verify_theorem_main: dimension mismatch");
  if (ts.empty()) throw InvalidArgument("verify_theorem_main: no t samples");
  const std::size_t n = a.n();
  const Vector one = ones(n);
  const EigenBasis base_a = eigh(a);

  std::vector<TheoremMainSample> out;
  for (double t : ts) {
    TheoremMainSample r;
    r.t = t;
    const EigenBasis ea = eigh(a.plus_rank_one(one, t));
    const EigenBasis eb = eigh(b.plus_rank_one(one, t));
    r.lowest_a = ea.spectrum.values.back();
    r.lowest_b = eb.spectrum.values.back();
    r.value_deviation = std::abs(r.lowest_a - r.lowest_b);
    r.simple_a = ea.spectrum.clusters.back().simple();
    r.simple_b = eb.spectrum.clusters.back().simple();
    r.in_interval = r.simple_a && r.simple_b;
    r.spread = ea.spectrum.spread();
    if (r.in_interval) r.angle = line_angle(ea.vectors.back(), eb.vectors.back());

    const UpdateResult up = rank1_update(base_a, one, t);
    r.secular_value_deviation = std::abs(up.eigenvalues.values.back() - r.lowest_a);
    if (r.simple_a) r.secular_angle = line_angle(up.vectors.back(), ea.vectors.back());

    const double value_tol = 1e-9 * std::max(1.0, r.spread);
    const bool secular_ok = r.secular_value_deviation <= value_tol &&
                            (!r.secular_angle || *r.secular_angle <= kAngleTol);
    const bool pair_ok = !r.in_interval || (r.value_deviation <= tol && *r.angle <= kAngleTol);
    r.pass = secular_ok && pair_ok;
    out.push_back(r);
  }
  return out;
}

struct SpectraCheck {
  bool equal = false;
  double max_deviation = 0.0;
};

struct DeckCheck {
  std::vector<double> card_deviation;
  std::vector<bool> card_equal;
  bool index_aligned_equal = false;
  double max_deviation = 0.0;
  /// Cards matched as a multiset (some bijection of indices), when requested.
  std::optional<bool> multiset_equal;
};

struct ProjectionCheck {
  std::size_t cluster_begin = 0;
  std::size_t cluster_end = 0;
  double eigenvalue = 0.0;
  Vector projection_a;
  Vector projection_b;
  double distance = 0.0;
  bool pass = false;
};

struct SignCheck {
  enum class Status { pass, fail, orthogonal_to_ones };
  std::size_t index = 0;
  Status status = Status::fail;
  double distance = 0.0;
};

/// Everything verify_gm compares between two matrices.
struct PairReport {
  std::size_t n = 0;
  double tol = 0.0;
  SpectraCheck spectra;
  DeckCheck deck;
  /// Absent when the spectra differ (comparison precondition).
  std::optional<SquareComparison> squares;
  std::vector<ProjectionCheck> projections;
  bool cluster_structure_matches = false;
  std::vector<SignCheck> signs;
  std::vector<TheoremMainSample> theorem_main;
  bool pass = false;
};

struct GmOptions {
  double tol = 1e-8;
  bool multiset_deck = false;
  std::vector<double> t_samples = default_t_samples();
};

namespace detail {

/// Perfect matching in a bipartite graph given as an adjacency matrix
/// (Kuhn's augmenting paths).
inline bool has_perfect_matching(const std::vector<std::vector<bool>>& adj) {
  const std::size_t n = adj.size();
  std::vector<std::size_t> match(n, n);
  for (std::size_t u = 0; u < n; ++u) {
    std::vector<bool> seen(n, false);
    std::function<bool(std::size_t)> augment = [&](std::size_t x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (!adj[x][y] || seen[y]) continue;
        seen[y] = true;
        if (match[y] == n || augment(match[y])) {
          match[y] = x;
          return true;
        }
      }
      return false;
    };
    if (!augment(u)) return false;
  }
  return true;
}

}  // namespace detail

/// Compares A and B under the hypotheses of the Godsil-McKay results:
/// equal spectra, equal (index-aligned) deck spectra, equal squared
/// eigenvector entries, equal projections of 1 onto each eigenspace, and
/// eigenvectors that agree once their sign is fixed by (v, 1) > 0.
inline PairReport verify_gm(const SymmetricMatrix& a, const SymmetricMatrix& b,
                            const GmOptions& opt = {}) {
  if (a.n() != b.n()) throw InvalidArgument("verify_gm: dimension mismatch");
  const std::size_t n = a.n();
  const double tol = opt.tol;
  PairReport r;
  r.n = n;
  r.tol = tol;

  const EigenBasis ea = eigh(a);
  const EigenBasis eb = eigh(b);
  r.spectra.max_deviation = max_deviation(ea.spectrum, eb.spectrum);
  r.spectra.equal = r.spectra.max_deviation <= tol;

  bool deck_ok = true;
  bool squares_ok = true;
  if (n >= 2) {
    const SpectralDeck da = deck(a, ea.spectrum);
    const SpectralDeck db = deck(b, eb.spectrum);
    r.deck.index_aligned_equal = true;
    for (std::size_t m = 0; m < n; ++m) {
      const double d = max_deviation(da[m], db[m]);
      r.deck.card_deviation.push_back(d);
      r.deck.card_equal.push_back(d <= tol);
      r.deck.max_deviation = std::max(r.deck.max_deviation, d);
      r.deck.index_aligned_equal = r.deck.index_aligned_equal && d <= tol;
    }
    if (opt.multiset_deck) {
      std::vector<std::vector<bool>> adj(n, std::vector<bool>(n));
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) adj[x][y] = max_deviation(da[x], db[y]) <= tol;
      r.deck.multiset_equal = detail::has_perfect_matching(adj);
    }
    deck_ok = opt.multiset_deck ? *r.deck.multiset_equal : r.deck.index_aligned_equal;

    if (r.spectra.equal) {
      r.squares = compare_squares(square_table_from_deck(ea.spectrum, da),
                                  square_table_from_deck(eb.spectrum, db), tol);
      squares_ok = r.squares->pass;
    } else {
      squares_ok = false;
    }
  } else {
    r.deck.index_aligned_equal = true;
  }

  r.cluster_structure_matches = ea.spectrum.clusters == eb.spectrum.clusters;
  bool projections_ok = r.cluster_structure_matches;
  if (r.cluster_structure_matches) {
    for (std::size_t k = 0; k < ea.spectrum.clusters.size(); ++k) {
      const Cluster& c = ea.spectrum.clusters[k];
      ProjectionCheck p;
      p.cluster_begin = c.begin;
      p.cluster_end = c.end;
      p.eigenvalue = ea.spectrum.cluster_value(k);
      p.projection_a = projection_of_ones(ea, c);
      p.projection_b = projection_of_ones(eb, c);
      p.distance = euclidean_distance(p.projection_a, p.projection_b);
      p.pass = p.distance <= 10.0 * tol;
      projections_ok = projections_ok && p.pass;
      r.projections.push_back(std::move(p));
    }
  }

  bool signs_ok = true;
  for (std::size_t i : ea.spectrum.simple_indices()) {
    if (!eb.spectrum.is_simple(i)) continue;
    const SignCanonical pa = canonicalize_sign_along_ones(ea.vectors[i]);
    const SignCanonical pb = canonicalize_sign_along_ones(eb.vectors[i]);
    SignCheck s;
    s.index = i;
    s.distance = euclidean_distance(pa.vector, pb.vector);
    if (pa.orthogonal_to_ones && pb.orthogonal_to_ones) {
      s.status = SignCheck::Status::orthogonal_to_ones;
    } else {
      s.status = (s.distance <= tol && pa.orthogonal_to_ones == pb.orthogonal_to_ones)
                     ? SignCheck::Status::pass
                     : SignCheck::Status::fail;
    }
    signs_ok = signs_ok && s.status != SignCheck::Status::fail;
    r.signs.push_back(s);
  }

  bool theorem_ok = true;
  if (!opt.t_samples.empty()) {
    r.theorem_main = verify_theorem_main(a, b, opt.t_samples, tol);
    for (const auto& s : r.theorem_main) theorem_ok = theorem_ok && s.pass;
  }

  r.pass = r.spectra.equal && deck_ok && squares_ok && projections_ok && signs_ok && theorem_ok;
  return r;
}

/// Outcome of the coordinate-permutation search for one simple eigenvector.
struct PermutationProbe {
  bool found = false;
  /// u ~ sign * (p[tau[0]], ..., p[tau[n-1]]) when found.
  std::vector<std::size_t> tau;
  int sign = 1;
  /// Distance achieved by the returned tau (when found).
  double distance = 0.0;
  /// Smallest distance over all permutations and both signs.
  double min_distance = 0.0;
};

inline constexpr std::size_t kDefaultProbeCap = 8;

/// Applies tau to p: result[k] = p[tau[k]].
inline Vector apply_permutation(std::span<const double> p, std::span<const std::size_t> tau) {
  Vector out(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) out[k] = p[tau[k]];
  return out;
}

/// Exhaustive search, in lexicographic order of tau, for a coordinate
/// permutation with |tau p_i -+ u_i| <= tol where p_i, u_i are the unit
/// eigenvectors of the i-th (simple) eigenvalue of A and B. Partial sums of
/// squared deviations prune the search; a sorted |entry| mismatch rejects the
/// instance up front.
inline PermutationProbe probe_permutation_conjecture(const SymmetricMatrix& a,
                                                     const SymmetricMatrix& b, std::size_t i,
                                                     std::size_t n_cap = kDefaultProbeCap,
                                                     double tol = 1e-8) {
  if (a.n() != b.n()) throw InvalidArgument("probe_permutation_conjecture: dimension mismatch");
  const std::size_t n = a.n();
  if (n > n_cap) {
    throw InvalidArgument("probe_permutation_conjecture: n = " + std::to_string(n) +
                          " exceeds the cap " + std::to_string(n_cap));
  }
  if (i >= n) throw InvalidArgument("probe_permutation_conjecture: index out of range");
  const EigenBasis ea = eigh(a);
  const EigenBasis eb = eigh(b);
  if (!ea.spectrum.is_simple(i) || !eb.spectrum.is_simple(i)) {
    throw NotSimpleError("eigenvalue " + std::to_string(i) + " is not simple in both matrices");
  }
  const Vector& p = ea.vectors[i];
  const Vector& u = eb.vectors[i];

  PermutationProbe out;
  Vector ps = p;
  std::sort(ps.begin(), ps.end());
  out.min_distance = std::numeric_limits<double>::infinity();
  for (double sign : {1.0, -1.0}) {
    Vector us(n);
    for (std::size_t k = 0; k < n; ++k) us[k] = sign * u[k];
    std::sort(us.begin(), us.end());
    out.min_distance = std::min(out.min_distance, euclidean_distance(ps, us));
  }

  Vector pa(n), ua(n);
  for (std::size_t k = 0; k < n; ++k) {
    pa[k] = std::abs(p[k]);
    ua[k] = std::abs(u[k]);
  }
  std::sort(pa.begin(), pa.end());
  std::sort(ua.begin(), ua.end());
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(pa[k] - ua[k]) > tol) return out;
  }

  const double budget = tol * tol;
  std::optional<std::pair<std::vector<std::size_t>, int>> best;
  for (int sign : {1, -1}) {
    std::vector<std::size_t> tau(n);
    std::vector<bool> used(n, false);
    std::function<bool(std::size_t, double)> search = [&](std::size_t k, double partial) {
      if (k == n) return true;
      for (std::size_t c = 0; c < n; ++c) {
        if (used[c]) continue;
        const double d = p[c] - sign * u[k];
        const double next = partial + d * d;
        if (next > budget) continue;
        used[c] = true;
        tau[k] = c;
        if (search(k + 1, next)) return true;
        used[c] = false;
      }
      return false;
    };
    if (search(0, 0.0) && (!best || tau < best->first)) best.emplace(tau, sign);
  }
  if (!best) return out;

  out.found = true;
  out.tau = best->first;
  out.sign = best->second;
  const Vector moved = apply_permutation(p, out.tau);
  Vector target(n);
  for (std::size_t k = 0; k < n; ++k) target[k] = out.sign * u[k];
  out.distance = euclidean_distance(moved, target);
  return out;
}

}  // namespace specrecon
