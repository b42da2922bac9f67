#pragma once

// Seeded generators and independent oracles shared by the test suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "specrecon.hpp"

namespace specrecon::testing {

using Rng = std::mt19937_64;

/// Entries uniform in [-1, 1], symmetrized by mirroring the upper triangle.
inline SymmetricMatrix random_symmetric(Rng& rng, std::size_t n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      a[i * n + j] = u(rng);
      a[j * n + i] = a[i * n + j];
    }
  }
  return SymmetricMatrix(n, std::move(a));
}

inline Vector random_vector(Rng& rng, std::size_t n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vector x(n);
  for (double& v : x) v = u(rng);
  return x;
}

inline std::vector<std::size_t> random_permutation(Rng& rng, std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

/// Smallest gap between consecutive sorted values.
inline double min_gap(const std::vector<double>& descending) {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < descending.size(); ++k)
    g = std::min(g, descending[k - 1] - descending[k]);
  return g;
}

/// Random symmetric matrix whose spectrum has min gap >= rel_gap * spread,
/// resampled until it does.
inline SymmetricMatrix random_well_separated(Rng& rng, std::size_t n, double rel_gap = 1e-6) {
  for (;;) {
    SymmetricMatrix a = random_symmetric(rng, n);
    const auto vals = eigh(a).spectrum.values;
    const double spread = vals.front() - vals.back();
    if (n == 1 || min_gap(vals) >= rel_gap * spread) return a;
  }
}

/// Q diag(d) Q^T with Q a random orthogonal matrix (QR of a Gaussian matrix).
inline SymmetricMatrix with_spectrum(Rng& rng, const std::vector<double>& d) {
  const auto n = static_cast<Eigen::Index>(d.size());
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = g(rng);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(m).householderQ();
  Eigen::VectorXd dv(n);
  for (Eigen::Index i = 0; i < n; ++i) dv(i) = d[static_cast<std::size_t>(i)];
  const Eigen::MatrixXd a = q * dv.asDiagonal() * q.transpose();
  std::vector<double> out(d.size() * d.size());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out[static_cast<std::size_t>(i * n + j)] = a(i, j);
  return SymmetricMatrix(d.size(), std::move(out));
}

inline Eigen::MatrixXd to_eigen(const SymmetricMatrix& a) {
  const auto n = static_cast<Eigen::Index>(a.n());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return m;
}

/// Eigenvalues by Eigen's tridiagonal QR solver, sorted descending.
inline std::vector<double> oracle_eigenvalues(const SymmetricMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(a), Eigen::EigenvaluesOnly);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

/// det(lambda I - A) by LU factorization.
inline double oracle_char_poly(const SymmetricMatrix& a, double lambda) {
  const auto n = static_cast<Eigen::Index>(a.n());
  const Eigen::MatrixXd m = lambda * Eigen::MatrixXd::Identity(n, n) - to_eigen(a);
  return m.partialPivLu().determinant();
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

inline double residual_norm(const SymmetricMatrix& m, const Vector& v, double mu) {
  const Vector mv = m.multiply(v);
  double r = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) r += (mv[i] - mu * v[i]) * (mv[i] - mu * v[i]);
  return std::sqrt(r);
}

inline SymmetricMatrix path_graph(std::size_t n) {
  std::vector<double> a(n * n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) a[i * n + i + 1] = a[(i + 1) * n + i] = 1.0;
  return SymmetricMatrix(n, std::move(a));
}

}  // namespace specrecon::testing
