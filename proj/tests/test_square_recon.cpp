#include <gtest/gtest.h>

#include <cmath>

#include "specrecon/square_recon.hpp"
#include "test_support.hpp"

namespace specrecon {
namespace {

TEST(ReconstructSquare, Swap) {
  EXPECT_DOUBLE_EQ(reconstruct_square(cluster_spectrum({1, -1}), cluster_spectrum({0}), 0), 0.5);
}

TEST(ReconstructSquare, Diagonal) {
  EXPECT_DOUBLE_EQ(reconstruct_square(cluster_spectrum({3, 1}), cluster_spectrum({1}), 0), 1.0);
}

TEST(ReconstructSquare, PathGraphClosedForm) {
  const double r2 = std::sqrt(2.0);
  const Spectrum spec = cluster_spectrum({r2, 0.0, -r2});
  // Eigenvector of sqrt(2) is (1, sqrt(2), 1) / 2.
  EXPECT_NEAR(reconstruct_square(spec, cluster_spectrum({1, -1}), 0), 0.25, 1e-15);
  EXPECT_NEAR(reconstruct_square(spec, cluster_spectrum({0, 0}), 0), 0.5, 1e-15);
  // Eigenvector of 0 is (1, 0, -1) / sqrt(2).
  EXPECT_NEAR(reconstruct_square(spec, cluster_spectrum({1, -1}), 1), 0.5, 1e-15);
  EXPECT_EQ(reconstruct_square(spec, cluster_spectrum({0, 0}), 1), 0.0);
}

TEST(ReconstructSquare, RefusesRepeatedEigenvalue) {
  const Spectrum spec = cluster_spectrum({2, 1, 1, 0});
  EXPECT_THROW(reconstruct_square(spec, cluster_spectrum({1.5, 1, 0.5}), 1), NotSimpleError);
  EXPECT_NO_THROW(reconstruct_square(spec, cluster_spectrum({1.5, 1, 0.5}), 0));
  EXPECT_THROW(reconstruct_square(spec, cluster_spectrum({1, 0}), 0), InvalidArgument);
}

TEST(ReconstructSquare, ClampsRoundingOnly) {
  // Card eigenvalue a hair past the parent one: tiny negative gets clamped.
  const Spectrum spec = cluster_spectrum({1, -1});
  EXPECT_EQ(reconstruct_square(spec, cluster_spectrum({1 + 1e-12}), 0), 0.0);
  EXPECT_LT(reconstruct_square(spec, cluster_spectrum({1 + 1e-6}), 0), -1e-10);
}

TEST(SquareTable, Swap) {
  const SymmetricMatrix a(2, {0, 1, 1, 0});
  const Spectrum spec = eigh(a).spectrum;
  const SquareTable t = square_table_from_deck(spec, deck(a, spec));
  for (std::size_t m = 0; m < 2; ++m)
    for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(*t.at(m, i), 0.5, 1e-15);
  EXPECT_TRUE(t.consistent());
  EXPECT_EQ(t.provenance_at(0, 0), SquareProvenance::from_deck);
}

TEST(SquareTable, Diagonal) {
  const SymmetricMatrix a = SymmetricMatrix::diagonal(std::vector<double>{3, 1});
  const Spectrum spec = eigh(a).spectrum;
  const SquareTable t = square_table_from_deck(spec, deck(a, spec));
  EXPECT_EQ(*t.at(0, 0), 1.0);
  EXPECT_EQ(*t.at(1, 0), 0.0);
  EXPECT_EQ(*t.at(0, 1), 0.0);
  EXPECT_EQ(*t.at(1, 1), 1.0);
}

TEST(SquareTable, NonSimpleColumnsMarked) {
  testing::Rng rng(1);
  const SymmetricMatrix a = testing::with_spectrum(rng, {2, 1, 1, -1});
  const Spectrum spec = eigh(a).spectrum;
  const SquareTable t = square_table_from_deck(spec, deck(a, spec));
  EXPECT_EQ(t.simple, (std::vector<std::size_t>{0, 3}));
  for (std::size_t m = 0; m < 4; ++m) {
    EXPECT_FALSE(t.at(m, 1).has_value());
    EXPECT_FALSE(t.at(m, 2).has_value());
    EXPECT_TRUE(t.at(m, 0).has_value());
  }
  EXPECT_TRUE(t.consistent());
}

TEST(SquareTable, DimensionMismatch) {
  const SymmetricMatrix a = testing::path_graph(3);
  const SpectralDeck d = deck(a);
  EXPECT_THROW(square_table_from_deck(cluster_spectrum({1, 0}), d), InvalidArgument);
}

TEST(SquareTable, WrongSpectraFlagged) {
  const SymmetricMatrix a = testing::path_graph(3);
  const SpectralDeck d = deck(a);
  const SquareTable t = square_table_from_deck(cluster_spectrum({3, 0, -3}), d);
  EXPECT_FALSE(t.consistent());
}

// Deck route against the squared entries of the eigenvectors themselves.
TEST(SquareTable, MatchesEigenvectorsOnRandomMatrices) {
  testing::Rng rng(808);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 11;
    const SymmetricMatrix a = testing::random_well_separated(rng, n);
    const EigenBasis b = eigh(a);
    const SquareTable from_deck = square_table_from_deck(b.spectrum, deck(a, b.spectrum));
    const SquareTable direct = square_table_from_basis(b);
    EXPECT_TRUE(from_deck.consistent());
    EXPECT_EQ(direct.provenance_at(0, 0), SquareProvenance::from_eigenbasis);
    for (std::size_t i : from_deck.simple) {
      double col = 0.0;
      for (std::size_t m = 0; m < n; ++m) {
        EXPECT_NEAR(*from_deck.at(m, i), *direct.at(m, i), 1e-8);
        col += *from_deck.at(m, i);
      }
      EXPECT_NEAR(col, 1.0, 1e-8);
    }
    for (std::size_t m = 0; m < n; ++m) {
      double row = 0.0;
      for (std::size_t i : from_deck.simple) row += *from_deck.at(m, i);
      EXPECT_LE(row, 1.0 + 1e-8);
    }
  }
}

// Relabeling A permutes the rows of the table and leaves columns in place.
TEST(SquareTable, PermutationEquivariance) {
  testing::Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + trial % 6;
    const SymmetricMatrix a = testing::random_well_separated(rng, n);
    const auto perm = testing::random_permutation(rng, n);
    const SymmetricMatrix b = a.permuted(perm);
    const Spectrum sa = eigh(a).spectrum;
    const Spectrum sb = eigh(b).spectrum;
    const SquareTable ta = square_table_from_deck(sa, deck(a, sa));
    const SquareTable tb = square_table_from_deck(sb, deck(b, sb));
    ASSERT_EQ(ta.simple, tb.simple);
    for (std::size_t i : ta.simple)
      for (std::size_t m = 0; m < n; ++m) EXPECT_NEAR(*tb.at(perm[m], i), *ta.at(m, i), 1e-10);
  }
}

TEST(CompareSquares, SelfIsZero) {
  testing::Rng rng(2);
  const SymmetricMatrix a = testing::random_well_separated(rng, 6);
  const Spectrum s = eigh(a).spectrum;
  const SquareTable t = square_table_from_deck(s, deck(a, s));
  const SquareComparison c = compare_squares(t, t, 1e-12);
  EXPECT_TRUE(c.pass);
  EXPECT_EQ(c.max_deviation, 0.0);
  EXPECT_EQ(c.columns.size(), 6u);
}

// Cycle C6 with a weighted diagonal invariant under the rotation by two.
TEST(CompareSquares, AutomorphicRelabeling) {
  const std::size_t n = 6;
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    m[i * n + (i + 1) % n] = m[((i + 1) % n) * n + i] = 1.0;
    m[i * n + i] = (i % 2 == 0) ? 0.3 : -0.7;
  }
  const SymmetricMatrix a(n, m);
  std::vector<std::size_t> rot(n);
  for (std::size_t i = 0; i < n; ++i) rot[i] = (i + 2) % n;
  const SymmetricMatrix b = a.permuted(rot);
  EXPECT_EQ(a, b);
  const Spectrum sa = eigh(a).spectrum;
  const Spectrum sb = eigh(b).spectrum;
  const SquareComparison c = compare_squares(square_table_from_deck(sa, deck(a, sa)),
                                             square_table_from_deck(sb, deck(b, sb)), 1e-10);
  EXPECT_TRUE(c.pass);
}

TEST(CompareSquares, DifferentSpectraRejected) {
  const SymmetricMatrix a = SymmetricMatrix::diagonal(std::vector<double>{3, 1});
  const SymmetricMatrix b = SymmetricMatrix::diagonal(std::vector<double>{3, 2});
  const Spectrum sa = eigh(a).spectrum;
  const Spectrum sb = eigh(b).spectrum;
  EXPECT_THROW(compare_squares(square_table_from_deck(sa, deck(a, sa)),
                               square_table_from_deck(sb, deck(b, sb)), 1e-8),
               InvalidArgument);
}

TEST(CompareSquares, DetectsDifferentSquares) {
  // Same spectrum (3, 1), eigenvectors e1/e2 against a rotated pair.
  const SymmetricMatrix a = SymmetricMatrix::diagonal(std::vector<double>{3, 1});
  const SymmetricMatrix b(2, {2, 1, 1, 2});
  const Spectrum sa = eigh(a).spectrum;
  const Spectrum sb = eigh(b).spectrum;
  const SquareComparison c = compare_squares(square_table_from_deck(sa, deck(a, sa)),
                                             square_table_from_deck(sb, deck(b, sb)), 1e-8);
  EXPECT_FALSE(c.pass);
  EXPECT_NEAR(c.max_deviation, 0.5, 1e-14);
}

}  // namespace
}  // namespace specrecon
