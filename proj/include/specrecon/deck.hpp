#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "specrecon/eigh.hpp"
#include "specrecon/errors.hpp"
#include "specrecon/matrix.hpp"
#include "specrecon/spectrum.hpp"

namespace specrecon {

/// Spectra of the vertex-deleted principal submatrices; card_spectra[m]
/// is the spectrum of A with row and column m removed.
struct SpectralDeck {
  std::vector<Spectrum> card_spectra;

  std::size_t size() const { return card_spectra.size(); }
  const Spectrum& operator[](std::size_t m) const { return card_spectra[m]; }
};

/// Largest violation of lambda_k(A) >= mu_k >= lambda_{k+1}(A) over the card;
/// zero when the card interlaces.
inline double interlacing_violation(const Spectrum& parent, const Spectrum& card) {
  if (card.size() + 1 != parent.size()) throw InvalidArgument("card length must be n - 1");
  double worst = 0.0;
  for (std::size_t k = 0; k < card.size(); ++k) {
    worst = std::max(worst, card.values[k] - parent.values[k]);
    worst = std::max(worst, parent.values[k + 1] - card.values[k]);
  }
  return worst;
}

inline constexpr double kInterlacingSlack = 1e-8;

/// Computes every card spectrum by eigh. Each card is checked against Cauchy
/// interlacing with slack kInterlacingSlack * max(1, max|A|).
inline SpectralDeck deck(const SymmetricMatrix& a, const Spectrum& parent) {
  if (a.n() < 2) throw InvalidArgument("deck requires n >= 2");
  if (parent.size() != a.n()) throw InvalidArgument("deck: parent spectrum has wrong length");
  SpectralDeck d;
  d.card_spectra.reserve(a.n());
  const double slack = kInterlacingSlack * std::max(1.0, a.max_abs());
  for (std::size_t m = 0; m < a.n(); ++m) {
    Spectrum card = eigh(a.principal_submatrix(m)).spectrum;
    if (interlacing_violation(parent, card) > slack) {
      throw NumericalError("deck: card " + std::to_string(m) + " violates interlacing");
    }
    d.card_spectra.push_back(std::move(card));
  }
  return d;
}

inline SpectralDeck deck(const SymmetricMatrix& a) {
  if (a.n() < 2) throw InvalidArgument("deck requires n >= 2");
  return deck(a, eigh(a).spectrum);
}

}  // namespace specrecon
