#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "specrecon/deck.hpp"
#include "specrecon/eigh.hpp"
#include "specrecon/errors.hpp"
#include "specrecon/spectrum.hpp"

namespace specrecon {

/// Reconstructed values within this distance outside [0, 1] are clamped;
/// anything further out is an inconsistency in the input spectra.
inline constexpr double kSquareClampTol = 1e-10;
inline constexpr double kColumnSumTol = 1e-8;

/// Squared eigenvector entry p_{m,i}^2 from the spectrum of A and the spectrum
/// of the card A_m alone:
///
///   p_{m,i}^2 = prod_{k} (mu_k - lambda_i) / prod_{j != i} (lambda_j - lambda_i)
///
/// where mu are the n-1 card eigenvalues. Both products have n-1 factors; they
/// are paired in sorted order and accumulated as a product of ratios, which
/// Cauchy interlacing keeps close to 1 per factor. Eigenvalue `i` must be
/// simple in `spec`. Results within kSquareClampTol of [0, 1] are clamped, any
/// other value is returned as is so the caller can flag it.
inline double reconstruct_square(const Spectrum& spec, const Spectrum& card, std::size_t i) {
  const std::size_t n = spec.size();
  if (card.size() + 1 != n) throw InvalidArgument("reconstruct_square: card length must be n - 1");
  if (i >= n) throw InvalidArgument("reconstruct_square: eigenvalue index out of range");
  if (!spec.is_simple(i)) {
    throw NotSimpleError("eigenvalue " + std::to_string(i) + " is not simple");
  }
  const double li = spec.values[i];
  double ratio = 1.0;
  std::size_t k = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    const double den = spec.values[j] - li;
    if (!(std::abs(den) > spec.cluster_tol)) {
      throw NotSimpleError("eigenvalue " + std::to_string(i) + " is not simple");
    }
    ratio *= (card.values[k] - li) / den;
    ++k;
  }
  if (ratio < 0.0 && ratio >= -kSquareClampTol) return 0.0;
  if (ratio > 1.0 && ratio <= 1.0 + kSquareClampTol) return 1.0;
  return ratio;
}

enum class SquareProvenance { from_deck, from_eigenbasis };

/// Grid of p_{m,i}^2: row m is the coordinate, column i the eigenvalue index.
/// Columns of non-simple eigenvalues hold std::nullopt.
struct SquareTable {
  std::size_t n = 0;
  std::vector<double> eigenvalues;
  std::vector<std::size_t> simple;
  std::vector<std::optional<double>> cells;
  std::vector<SquareProvenance> provenance;
  std::vector<std::string> warnings;

  std::optional<double> at(std::size_t m, std::size_t i) const { return cells[m * n + i]; }
  SquareProvenance provenance_at(std::size_t m, std::size_t i) const {
    return provenance[m * n + i];
  }
  bool consistent() const { return warnings.empty(); }
};

namespace detail {

inline void check_square_table(SquareTable& t) {
  for (std::size_t i : t.simple) {
    double sum = 0.0;
    for (std::size_t m = 0; m < t.n; ++m) {
      const double v = *t.at(m, i);
      sum += v;
      if (v < -kSquareClampTol || v > 1.0 + kSquareClampTol) {
        t.warnings.push_back("cell (" + std::to_string(m) + ", " + std::to_string(i) +
                             ") = " + format_real(v) + " lies outside [0, 1]");
      }
    }
    if (std::abs(sum - 1.0) > kColumnSumTol) {
      t.warnings.push_back("column " + std::to_string(i) + " sums to " + format_real(sum));
    }
  }
  for (std::size_t m = 0; m < t.n; ++m) {
    double sum = 0.0;
    for (std::size_t i : t.simple) sum += *t.at(m, i);
    if (sum > 1.0 + kColumnSumTol) {
      t.warnings.push_back("row " + std::to_string(m) + " sums to " + format_real(sum));
    }
  }
}

inline SquareTable empty_table(const Spectrum& spec, SquareProvenance p) {
  SquareTable t;
  t.n = spec.size();
  t.eigenvalues = spec.values;
  t.simple = spec.simple_indices();
  t.cells.assign(t.n * t.n, std::nullopt);
  t.provenance.assign(t.n * t.n, p);
  return t;
}

}  // namespace detail

/// Every p_{m,i}^2 for simple i, computed from spectra only.
inline SquareTable square_table_from_deck(const Spectrum& spec, const SpectralDeck& d) {
  if (d.size() != spec.size()) throw InvalidArgument("square table: deck must have n cards");
  for (const Spectrum& card : d.card_spectra) {
    if (card.size() + 1 != spec.size()) throw InvalidArgument("square table: card length must be n - 1");
  }
  SquareTable t = detail::empty_table(spec, SquareProvenance::from_deck);
  for (std::size_t i : t.simple) {
    for (std::size_t m = 0; m < t.n; ++m) t.cells[m * t.n + i] = reconstruct_square(spec, d[m], i);
  }
  detail::check_square_table(t);
  return t;
}

/// Direct squares of eigenvector entries, for comparison with the deck route.
inline SquareTable square_table_from_basis(const EigenBasis& b) {
  SquareTable t = detail::empty_table(b.spectrum, SquareProvenance::from_eigenbasis);
  for (std::size_t i : t.simple) {
    for (std::size_t m = 0; m < t.n; ++m) {
      const double p = b.vectors[i][m];
      t.cells[m * t.n + i] = p * p;
    }
  }
  detail::check_square_table(t);
  return t;
}

struct ColumnComparison {
  std::size_t index = 0;
  double max_deviation = 0.0;
  bool pass = false;
};

struct SquareComparison {
  std::vector<ColumnComparison> columns;
  /// Simple in exactly one of the two tables.
  std::vector<std::size_t> unmatched;
  double max_deviation = 0.0;
  bool pass = false;
};

/// Column-wise max_m |p_{m,i}^2 - q_{m,i}^2| over eigenvalues simple in both
/// tables. The tables must describe matched spectra (within `tol`).
inline SquareComparison compare_squares(const SquareTable& a, const SquareTable& b, double tol) {
  if (a.n != b.n) throw InvalidArgument("compare_squares: dimension mismatch");
  for (std::size_t k = 0; k < a.n; ++k) {
    if (std::abs(a.eigenvalues[k] - b.eigenvalues[k]) > tol) {
      throw InvalidArgument("compare_squares: spectra differ at index " + std::to_string(k));
    }
  }
  SquareComparison r;
  r.pass = true;
  for (std::size_t i : a.simple) {
    if (std::find(b.simple.begin(), b.simple.end(), i) == b.simple.end()) {
      r.unmatched.push_back(i);
      continue;
    }
    ColumnComparison c{i, 0.0, true};
    for (std::size_t m = 0; m < a.n; ++m) {
      c.max_deviation = std::max(c.max_deviation, std::abs(*a.at(m, i) - *b.at(m, i)));
    }
    c.pass = c.max_deviation <= tol;
    r.pass = r.pass && c.pass;
    r.max_deviation = std::max(r.max_deviation, c.max_deviation);
    r.columns.push_back(c);
  }
  for (std::size_t i : b.simple) {
    if (std::find(a.simple.begin(), a.simple.end(), i) == a.simple.end()) r.unmatched.push_back(i);
  }
  std::sort(r.unmatched.begin(), r.unmatched.end());
  if (!r.unmatched.empty()) r.pass = false;
  return r;
}

}  // namespace specrecon
