#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "specrecon/errors.hpp"
#include "specrecon/matrix.hpp"
#include "specrecon/spectrum.hpp"

namespace specrecon {

/// Orthonormal eigenvectors paired with a descending Spectrum; vectors[k]
/// belongs to spectrum.values[k].
struct EigenBasis {
  Spectrum spectrum;
  std::vector<Vector> vectors;

  std::size_t n() const { return vectors.size(); }
};

/// Flips `v` so that its entry of largest magnitude is positive (first index
/// wins ties).
inline void apply_sign_convention(std::span<double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  if (!v.empty() && v[best] < 0.0) {
    for (double& x : v) x = -x;
  }
}

inline constexpr int kJacobiMaxSweeps = 100;

/// Symmetric eigendecomposition by row-cyclic Jacobi rotations.
///
/// An off-diagonal entry is rotated away while it exceeds 1e-14 * ||A||_F;
/// the iteration stops after the first sweep that performs no rotation.
/// Output is fully deterministic: fixed sweep order, stable descending sort,
/// sign convention from apply_sign_convention. Pass `cluster_tol` to override
/// default_cluster_tol for the returned Spectrum.
inline EigenBasis eigh(const SymmetricMatrix& m, std::optional<double> cluster_tol = std::nullopt) {
  const std::size_t n = m.n();
  std::vector<double> a(m.row_major().begin(), m.row_major().end());
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  const double threshold = 1e-14 * m.frobenius();
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

  bool converged = false;
  for (int sweep = 0; sweep <= kJacobiMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (!(std::abs(apq) > threshold)) continue;
        if (sweep == kJacobiMaxSweeps) {
          throw NumericalError("eigh: Jacobi iteration did not converge in 100 sweeps");
        }
        rotated = true;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        at(p, p) -= t * apq;
        at(q, q) += t * apq;
        at(p, q) = 0.0;
        at(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = at(r, p);
          const double arq = at(r, q);
          at(r, p) = at(p, r) = c * arp - s * arq;
          at(r, q) = at(q, r) = s * arp + c * arq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double vrp = v[r * n + p];
          const double vrq = v[r * n + q];
          v[r * n + p] = c * vrp - s * vrq;
          v[r * n + q] = s * vrp + c * vrq;
        }
      }
    }
    if (!rotated) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NumericalError("eigh: Jacobi iteration did not converge in 100 sweeps");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return at(x, x) > at(y, y); });

  std::vector<double> values(n);
  std::vector<Vector> vectors(n, Vector(n));
  for (std::size_t k = 0; k < n; ++k) {
    values[k] = at(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) vectors[k][i] = v[i * n + order[k]];
    apply_sign_convention(vectors[k]);
  }

  EigenBasis out;
  const double tol = cluster_tol.value_or(default_cluster_tol(values));
  out.spectrum = cluster_spectrum(std::move(values), tol);
  out.vectors = std::move(vectors);
  return out;
}

/// max |P^T P - I| entry.
inline double orthogonality_error(const EigenBasis& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < b.n(); ++i)
    for (std::size_t j = 0; j < b.n(); ++j)
      e = std::max(e, std::abs(dot(b.vectors[i], b.vectors[j]) - (i == j ? 1.0 : 0.0)));
  return e;
}

/// max |P diag(values) P^T - A| entry.
inline double reconstruction_error(const EigenBasis& b, const SymmetricMatrix& a) {
  const std::size_t n = a.n();
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        s += b.vectors[k][i] * b.spectrum.values[k] * b.vectors[k][j];
      e = std::max(e, std::abs(s - a(i, j)));
    }
  }
  return e;
}

}  // namespace specrecon
