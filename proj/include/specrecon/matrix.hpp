#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <iterator>
#include <locale>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "specrecon/errors.hpp"

namespace specrecon {

using Vector = std::vector<double>;

/// Relative tolerance under which an input is accepted and symmetrized.
inline constexpr double kSymTol = 1e-8;

inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline Vector ones(std::size_t n) { return Vector(n, 1.0); }

/// Dense real symmetric matrix, stored full square row-major.
///
/// Construction symmetrizes as (M + M^T)/2 so that at(i, j) == at(j, i)
/// holds bit-exactly afterwards. Inputs whose asymmetry exceeds
/// kSymTol * max(1, max|M|) are rejected.
class SymmetricMatrix {
 public:
  SymmetricMatrix(std::size_t n, std::vector<double> row_major)
      : n_(n), a_(std::move(row_major)) {
    if (n_ == 0) throw InvalidArgument("matrix dimension must be at least 1");
    if (a_.size() != n_ * n_) {
      throw InvalidArgument("matrix needs " + std::to_string(n_ * n_) +
                            " entries, got " + std::to_string(a_.size()));
    }
    double max_abs = 0.0;
    for (double v : a_) {
      if (!std::isfinite(v)) throw InvalidArgument("matrix entry is not finite");
      max_abs = std::max(max_abs, std::abs(v));
    }
    double asym = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        asym = std::max(asym, std::abs(a_[i * n_ + j] - a_[j * n_ + i]));
      }
    }
    if (asym > kSymTol * std::max(1.0, max_abs)) {
      std::ostringstream msg;
      msg << "matrix is not symmetric: max |M - M^T| = " << asym;
      throw InvalidArgument(msg.str());
    }
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        const double s = 0.5 * (a_[i * n_ + j] + a_[j * n_ + i]);
        a_[i * n_ + j] = s;
        a_[j * n_ + i] = s;
      }
    }
  }

  static SymmetricMatrix zeros(std::size_t n) {
    return SymmetricMatrix(n, std::vector<double>(n * n, 0.0));
  }

  static SymmetricMatrix diagonal(std::span<const double> d) {
    std::vector<double> a(d.size() * d.size(), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) a[i * d.size() + i] = d[i];
    return SymmetricMatrix(d.size(), std::move(a));
  }

  /// x * x^T.
  static SymmetricMatrix outer(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a[i * n + j] = x[i] * x[j];
    return SymmetricMatrix(n, std::move(a));
  }

  /// The all-ones matrix J = 1 * 1^T.
  static SymmetricMatrix all_ones(std::size_t n) {
    return SymmetricMatrix(n, std::vector<double>(n * n, 1.0));
  }

  std::size_t n() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  std::span<const double> row_major() const { return a_; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(a_).subspan(i * n_, n_);
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
  }

  double frobenius() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
  }

  double trace() const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += a_[i * n_ + i];
    return s;
  }

  /// Row and column `m` (0-based) deleted.
  SymmetricMatrix principal_submatrix(std::size_t m) const {
    if (m >= n_) throw InvalidArgument("principal_submatrix: index out of range");
    if (n_ == 1) throw InvalidArgument("principal_submatrix: 1x1 matrix has no cards");
    std::vector<double> b;
    b.reserve((n_ - 1) * (n_ - 1));
    for (std::size_t i = 0; i < n_; ++i) {
      if (i == m) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (j != m) b.push_back(a_[i * n_ + j]);
      }
    }
    return SymmetricMatrix(n_ - 1, std::move(b));
  }

  /// A + t * x * x^T.
  SymmetricMatrix plus_rank_one(std::span<const double> x, double t) const {
    if (x.size() != n_) throw InvalidArgument("plus_rank_one: dimension mismatch");
    std::vector<double> b = a_;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) b[i * n_ + j] += t * x[i] * x[j];
    return SymmetricMatrix(n_, std::move(b));
  }

  /// Simultaneous relabeling: the result B satisfies B(perm[i], perm[j]) == A(i, j),
  /// i.e. B = Pi A Pi^T with Pi e_i = e_perm[i].
  SymmetricMatrix permuted(std::span<const std::size_t> perm) const {
    if (perm.size() != n_) throw InvalidArgument("permuted: dimension mismatch");
    std::vector<bool> seen(n_, false);
    for (std::size_t p : perm) {
      if (p >= n_ || seen[p]) throw InvalidArgument("permuted: not a permutation");
      seen[p] = true;
    }
    std::vector<double> b(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) b[perm[i] * n_ + perm[j]] = a_[i * n_ + j];
    return SymmetricMatrix(n_, std::move(b));
  }

  Vector multiply(std::span<const double> x) const {
    if (x.size() != n_) throw InvalidArgument("multiply: dimension mismatch");
    Vector y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) y[i] = dot(row(i), x);
    return y;
  }

  friend bool operator==(const SymmetricMatrix&, const SymmetricMatrix&) = default;

 private:
  std::size_t n_;
  std::vector<double> a_;
};

namespace detail {

inline std::vector<std::string> tokenize(std::istream& in) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r\v\f");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    ls.imbue(std::locale::classic());
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
  }
  return tokens;
}

inline double parse_real(std::string_view tok) {
  // from_chars rejects a leading '+', which text round-trips may carry.
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    throw ParseError("not a real number: '" + std::string(tok) + "'");
  }
  return v;
}

inline std::size_t parse_dimension(std::string_view tok) {
  std::size_t n = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), n);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("dimension is not a non-negative integer: '" + std::string(tok) + "'");
  }
  if (n == 0) throw ParseError("dimension must be at least 1");
  return n;
}

inline std::vector<double> parse_body(const std::vector<std::string>& tokens,
                                      std::size_t expected) {
  if (tokens.size() - 1 != expected) {
    throw ParseError("expected " + std::to_string(expected) + " values after the dimension, got " +
                     std::to_string(tokens.size() - 1));
  }
  std::vector<double> values;
  values.reserve(expected);
  for (std::size_t k = 1; k < tokens.size(); ++k) values.push_back(parse_real(tokens[k]));
  return values;
}

}  // namespace detail

/// 17 significant digits, locale independent.
inline std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

/// Reads `n` followed by n*n row-major reals. Lines whose first non-blank
/// character is '#' are comments.
inline SymmetricMatrix parse_matrix(std::istream& in) {
  const auto tokens = detail::tokenize(in);
  if (tokens.empty()) throw ParseError("empty matrix input");
  const std::size_t n = detail::parse_dimension(tokens.front());
  auto values = detail::parse_body(tokens, n * n);
  try {
    return SymmetricMatrix(n, std::move(values));
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

inline SymmetricMatrix parse_matrix(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_matrix(in);
}

/// One-column variant of the matrix format: `n` then n reals.
inline Vector parse_vector(std::istream& in) {
  const auto tokens = detail::tokenize(in);
  if (tokens.empty()) throw ParseError("empty vector input");
  const std::size_t n = detail::parse_dimension(tokens.front());
  return detail::parse_body(tokens, n);
}

inline Vector parse_vector(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_vector(in);
}

inline void write_matrix(std::ostream& out, const SymmetricMatrix& a) {
  out << a.n() << '\n';
  for (std::size_t i = 0; i < a.n(); ++i) {
    for (std::size_t j = 0; j < a.n(); ++j) {
      if (j) out << ' ';
      out << format_real(a(i, j));
    }
    out << '\n';
  }
}

inline std::string format_matrix(const SymmetricMatrix& a) {
  std::ostringstream out;
  write_matrix(out, a);
  return out.str();
}

}  // namespace specrecon
