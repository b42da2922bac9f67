#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "specrecon/errors.hpp"
#include "specrecon/matrix.hpp"

namespace specrecon {

/// Half-open run [begin, end) of indices into a descending spectrum.
struct Cluster {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool simple() const { return size() == 1; }
  bool contains(std::size_t i) const { return i >= begin && i < end; }
  friend bool operator==(const Cluster&, const Cluster&) = default;
};

/// Eigenvalues sorted descending, partitioned into numerically distinct
/// clusters. Neighbours closer than (or exactly at) `cluster_tol` share a
/// cluster; a singleton cluster marks a simple eigenvalue.
struct Spectrum {
  std::vector<double> values;
  std::vector<Cluster> clusters;
  double cluster_tol = 0.0;

  std::size_t size() const { return values.size(); }
  double spread() const { return values.empty() ? 0.0 : values.front() - values.back(); }

  std::size_t cluster_of(std::size_t i) const {
    for (std::size_t k = 0; k < clusters.size(); ++k) {
      if (clusters[k].contains(i)) return k;
    }
    throw InvalidArgument("eigenvalue index out of range");
  }

  bool is_simple(std::size_t i) const { return clusters[cluster_of(i)].simple(); }

  /// Mean of the cluster's values; exact for singletons.
  double cluster_value(std::size_t k) const {
    const Cluster& c = clusters[k];
    double s = 0.0;
    for (std::size_t i = c.begin; i < c.end; ++i) s += values[i];
    return s / static_cast<double>(c.size());
  }

  std::vector<std::size_t> simple_indices() const {
    std::vector<std::size_t> out;
    for (const Cluster& c : clusters)
      if (c.simple()) out.push_back(c.begin);
    return out;
  }
};

/// max(1e-12, 1e-8 * (max - min)).
inline double default_cluster_tol(std::span<const double> values) {
  if (values.empty()) return 1e-12;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return std::max(1e-12, 1e-8 * (*hi - *lo));
}

/// Single-linkage clustering of a descending sequence: a new cluster starts
/// wherever the gap to the previous value exceeds `cluster_tol`.
inline Spectrum cluster_spectrum(std::vector<double> values, double cluster_tol) {
  if (!(cluster_tol >= 0.0)) throw InvalidArgument("cluster_tol must be non-negative");
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k])) throw InvalidArgument("spectrum value is not finite");
    if (k > 0 && values[k] > values[k - 1]) {
      throw InvalidArgument("spectrum values must be sorted descending");
    }
  }
  Spectrum s;
  s.cluster_tol = cluster_tol;
  std::size_t start = 0;
  for (std::size_t k = 1; k <= values.size(); ++k) {
    if (k == values.size() || values[k - 1] - values[k] > cluster_tol) {
      s.clusters.push_back({start, k});
      start = k;
    }
  }
  s.values = std::move(values);
  return s;
}

inline Spectrum cluster_spectrum(std::vector<double> values) {
  const double tol = default_cluster_tol(values);
  return cluster_spectrum(std::move(values), tol);
}

/// det(lambda I - M) = prod_k (lambda - values[k]) for M with this spectrum.
inline double char_poly_eval(const Spectrum& spec, double lambda) {
  double p = 1.0;
  for (double v : spec.values) p *= (lambda - v);
  return p;
}

/// d/dlambda det(lambda I - M) = sum_k prod_{j != k} (lambda - values[j]).
inline double char_poly_derivative(const Spectrum& spec, double lambda) {
  double total = 0.0;
  for (std::size_t k = 0; k < spec.values.size(); ++k) {
    double p = 1.0;
    for (std::size_t j = 0; j < spec.values.size(); ++j)
      if (j != k) p *= (lambda - spec.values[j]);
    total += p;
  }
  return total;
}

/// Largest |a_k - b_k| between two equal-length spectra (both sorted).
inline double max_deviation(const Spectrum& a, const Spectrum& b) {
  if (a.size() != b.size()) throw InvalidArgument("spectra differ in length");
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a.values[k] - b.values[k]));
  return d;
}

}  // namespace specrecon
