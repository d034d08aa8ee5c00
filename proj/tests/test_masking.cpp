#include "oracles.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>
#include <sstream>

using namespace osmc;

TEST(SampleMask, ForcedFullRowWhenDEqualsTwo) {
  Rng rng(1);
  const ObservationSet obs = sample_mask(50, 2, 2, rng);
  for (std::size_t i = 0; i < obs.m(); ++i) {
    EXPECT_EQ(obs.row(i)[0], 0u);
    EXPECT_EQ(obs.row(i)[1], 1u);
  }
}

TEST(SampleMask, KEqualsDCoversEverything) {
  Rng rng(2);
  const ObservationSet obs = sample_mask(20, 6, 6, rng);
  for (std::size_t i = 0; i < obs.m(); ++i)
    for (std::size_t t = 0; t < 6; ++t) EXPECT_EQ(obs.row(i)[t], t);
}

TEST(SampleMask, PairsAreUniform) {
  Rng rng(3);
  const std::size_t m = 60000;
  const ObservationSet obs = sample_mask(m, 4, 2, rng);
  std::map<std::pair<ColIndex, ColIndex>, int> freq;
  for (const auto& p : observed_pairs(obs)) ++freq[p];
  ASSERT_EQ(freq.size(), 6u);
  const double expected = static_cast<double>(m) / 6.0;
  double chi2 = 0.0;
  for (const auto& [pair, n] : freq) {
    EXPECT_NEAR(n / static_cast<double>(m), 1.0 / 6.0, 0.03 / 6.0);
    chi2 += (n - expected) * (n - expected) / expected;
  }
  EXPECT_LT(chi2, 20.515);  // 0.999 quantile of chi-square with 5 degrees of freedom
}

TEST(SampleMask, RejectsBadK) {
  Rng rng(4);
  EXPECT_THROW(sample_mask(10, 5, 1, rng), std::invalid_argument);
  EXPECT_THROW(sample_mask(10, 5, 6, rng), std::invalid_argument);
}

TEST(SampleMaskProperty, RowsAreSortedDistinctAndReproducible) {
  Rng meta(5);
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = 2 + meta.uniform_index(30);
    const std::size_t k = 2 + meta.uniform_index(d - 1);
    const std::size_t m = 1 + meta.uniform_index(50);
    const std::uint64_t seed = meta();
    Rng a(seed), b(seed);
    const ObservationSet obs = sample_mask(m, d, k, a);
    ASSERT_TRUE(obs == sample_mask(m, d, k, b));
    for (std::size_t i = 0; i < m; ++i) {
      const auto r = obs.row(i);
      ASSERT_EQ(r.size(), k);
      for (std::size_t s = 0; s < k; ++s) {
        ASSERT_LT(r[s], d);
        if (s) {
          ASSERT_LT(r[s - 1], r[s]);
        }
      }
    }
    const DenseMatrix w = cooccurrence(obs).w;
    ASSERT_EQ(w.diagonal().sum(), static_cast<double>(m * k));
    ASSERT_EQ(w.sum() - w.diagonal().sum(), static_cast<double>(m * k * (k - 1)));
    ASSERT_TRUE(w.isApprox(w.transpose(), 0.0));
  }
}

TEST(ObservedPairs, OnePairPerRow) {
  Rng rng(6);
  const ObservationSet obs = sample_mask(333, 9, 2, rng);
  const auto pairs = observed_pairs(obs);
  ASSERT_EQ(pairs.size(), 333u);
  for (const auto& [a, b] : pairs) EXPECT_LT(a, b);
  EXPECT_THROW(observed_pairs(sample_mask(3, 9, 3, rng)), std::invalid_argument);
}

TEST(Cooccurrence, SingleRow) {
  const ObservationSet obs(1, 3, 2, {0, 1});
  DenseMatrix expected(3, 3);
  expected << 1, 1, 0, 1, 1, 0, 0, 0, 0;
  EXPECT_EQ(cooccurrence(obs).w, expected);
}

TEST(Cooccurrence, FullObservationIsMTimesOnes) {
  Rng rng(7);
  const ObservationSet obs = sample_mask(13, 5, 5, rng);
  EXPECT_EQ(cooccurrence(obs).w, DenseMatrix::Constant(5, 5, 13.0));
}

TEST(Cooccurrence, MatchesBruteForceEtE) {
  Rng rng(8);
  const ObservationSet obs = sample_mask(5, 4, 2, rng);
  DenseMatrix e = DenseMatrix::Zero(5, 4);
  for (std::size_t i = 0; i < 5; ++i)
    for (auto c : obs.row(i)) e(static_cast<Eigen::Index>(i), c) = 1.0;
  DenseMatrix ete = DenseMatrix::Zero(4, 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int i = 0; i < 5; ++i) ete(a, b) += e(i, a) * e(i, b);
  EXPECT_EQ(cooccurrence(obs).w, ete);
}

TEST(ApplyMask, FullMaskIsIdentity) {
  Rng rng(9);
  const DenseMatrix x = oracle::random_matrix(rng, 4, 3);
  EXPECT_EQ(apply_mask(x, sample_mask(4, 3, 3, rng)), x);
}

TEST(ApplyMask, ZeroMatrixStaysZero) {
  Rng rng(10);
  EXPECT_EQ(apply_mask(DenseMatrix::Zero(6, 5), sample_mask(6, 5, 2, rng)), DenseMatrix::Zero(6, 5));
}

TEST(ApplyMask, MatchesExplicitMaskProduct) {
  Rng rng(11);
  const DenseMatrix x = oracle::random_matrix(rng, 3, 3);
  const ObservationSet obs = sample_mask(3, 3, 2, rng);
  DenseMatrix e = DenseMatrix::Zero(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (auto c : obs.row(i)) e(static_cast<Eigen::Index>(i), c) = 1.0;
  EXPECT_EQ(apply_mask(x, obs), DenseMatrix(x.cwiseProduct(e)));
}

TEST(ApplyMask, ShapeMismatch) {
  Rng rng(12);
  EXPECT_THROW(apply_mask(DenseMatrix::Zero(3, 4), sample_mask(3, 5, 2, rng)), std::invalid_argument);
}

TEST(Observe, ReadsExactlyTheObservedEntries) {
  Rng rng(13);
  const DenseMatrix x = oracle::random_matrix(rng, 7, 5);
  const ObservationSet obs = sample_mask(7, 5, 3, rng);
  const ObservedEntries o = observe(x, obs);
  const DenseMatrix masked = apply_mask(x, obs);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t t = 0; t < 3; ++t)
      EXPECT_EQ(o.row(i)[t], masked(static_cast<Eigen::Index>(i), obs.row(i)[t]));
}

TEST(ObservationSet, ValidatesRows) {
  EXPECT_THROW(ObservationSet(2, 3, 2, {0, 1, 2}), std::invalid_argument);
  EXPECT_THROW(ObservationSet(1, 3, 2, {1, 1}), std::invalid_argument);
  EXPECT_THROW(ObservationSet(1, 3, 2, {0, 3}), std::invalid_argument);
  const ObservationSet sorted(1, 4, 3, {3, 0, 2});
  EXPECT_EQ(sorted.flat(), (std::vector<ColIndex>{0, 2, 3}));
}

TEST(ObservationSetFormat, RoundTrip) {
  Rng rng(14);
  const ObservationSet obs = sample_mask(40, 11, 4, rng);
  std::stringstream ss;
  write_observation_set(ss, obs);
  EXPECT_TRUE(read_observation_set(ss) == obs);
}

TEST(ObservationSetFormat, ErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      read_observation_set(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("2 3\n0 1\n"), 1u);
  EXPECT_EQ(line_of("2 3 2\n0 1\n0 7\n"), 3u);
  EXPECT_EQ(line_of("2 3 2\n0 x\n0 1\n"), 2u);
  EXPECT_EQ(line_of("2 3 2\n0 1\n2 2\n"), 3u);
  EXPECT_EQ(line_of("1 3 2\n0 1\n0 2\n"), 3u);
}
