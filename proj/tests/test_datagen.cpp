#include "oracles.hpp"

#include "osmc/datagen.hpp"
#include "osmc/io.hpp"
#include "osmc/metrics.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <sstream>

using namespace osmc;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("osmc_test_" + name)).string();
}

double entry_variance(const GroundTruth& gt) {
  double s = 0, s2 = 0;
  const double n = static_cast<double>(gt.rows() * gt.cols());
  for (Eigen::Index i = 0; i < gt.rows(); ++i)
    for (Eigen::Index j = 0; j < gt.cols(); ++j) {
      const double x = gt(i, j);
      s += x;
      s2 += x * x;
    }
  return s2 / n - (s / n) * (s / n);
}

}  // namespace

TEST(GenGaussian, UnitEntryVariance) {
  // Given V, Var(X_ij) = r^{-1/2} |v_j|^2; averaged over j that is r^{-1/2} |V|_F^2 / d.
  Rng rng(1);
  const GroundTruth gt = gen_gaussian(100000, 50, 5, rng);
  EXPECT_NEAR(entry_variance(gt) / (gt.v.squaredNorm() / std::sqrt(5.0) / 50.0), 1.0, 0.02);
  // Over independent draws of V the variance averages to 1.
  double mean = 0.0;
  for (int s = 0; s < 30; ++s) {
    Rng r(100 + s);
    mean += entry_variance(gen_gaussian(2000, 50, 5, r)) / 30.0;
  }
  EXPECT_NEAR(mean, 1.0, 0.06);
}

TEST(GenGaussian, RankOneIsOuterProduct) {
  Rng rng(2);
  const GroundTruth gt = gen_gaussian(40, 10, 1, rng);
  const Vector s = oracle::singular_values(gt.x());
  EXPECT_GT(s(0), 0.0);
  EXPECT_LT(s.tail(9).maxCoeff(), 1e-6 * s(0));
}

TEST(GenGaussian, SeedReproducible) {
  Rng a(3), b(3);
  const GroundTruth g1 = gen_gaussian(50, 8, 2, a), g2 = gen_gaussian(50, 8, 2, b);
  EXPECT_EQ(g1.u, g2.u);
  EXPECT_EQ(g1.v, g2.v);
  EXPECT_EQ(g1.theta_star, g2.theta_star);
  EXPECT_EQ(g1.q_true, g2.q_true);
}

TEST(GenGaussian, RejectsRankAboveMinDim) {
  Rng rng(4);
  EXPECT_THROW(gen_gaussian(3, 10, 4, rng), std::invalid_argument);
}

TEST(GenCorrelated, FlatSpectrumMatchesGaussianUpToScale) {
  // Var(X_ij) = Σ s_i = r for a flat unit spectrum; given Z2 it is |Z2|_F^2 / d on average.
  Rng rng(5);
  const GroundTruth gt = gen_correlated(50000, 40, Vector::Ones(4), rng);
  EXPECT_NEAR(entry_variance(gt) / (gt.v.squaredNorm() / 40.0), 1.0, 0.02);
  double mean = 0.0;
  for (int s = 0; s < 30; ++s) {
    Rng r(200 + s);
    mean += entry_variance(gen_correlated(2000, 40, Vector::Ones(4), r)) / 4.0 / 30.0;
  }
  EXPECT_NEAR(mean, 1.0, 0.08);
}

TEST(GenCorrelated, SingleNonzeroSpectrumIsRankOne) {
  Rng rng(6);
  Vector s = Vector::Zero(3);
  s(0) = 2.0;
  const GroundTruth gt = gen_correlated(30, 8, s, rng);
  EXPECT_EQ(gt.rank(), 1);
  const Vector sv = oracle::singular_values(gt.x());
  EXPECT_LT(sv.tail(7).maxCoeff(), 1e-6 * sv(0));
}

TEST(GenCorrelated, PowerLawLowersMu1) {
  Rng a(7), b(7);
  const GroundTruth flat = gen_correlated(20000, 64, power_law_spectrum(16, 1.0, 0.0), a);
  const GroundTruth steep = gen_correlated(20000, 64, power_law_spectrum(16, 1.0, 2.0), b);
  EXPECT_LT(incoherence(steep.theta_star, 16).mu1, incoherence(flat.theta_star, 16).mu1);
}

TEST(GenCorrelated, RejectsNegativeSpectrum) {
  Rng rng(8);
  Vector s = Vector::Ones(2);
  s(1) = -1.0;
  EXPECT_THROW(gen_correlated(10, 5, s, rng), std::invalid_argument);
}

TEST(GenSpecial, AllOnes) {
  const GroundTruth gt = gen_special(SpecialKind::all_ones, 7, 5);
  EXPECT_EQ(gt.theta_star, DenseMatrix::Ones(5, 5));
  EXPECT_EQ(gt.x(), DenseMatrix::Ones(7, 5));
  const Vector s = oracle::singular_values(gt.x());
  EXPECT_LT(s.tail(4).maxCoeff(), 1e-6);
}

TEST(GenSpecial, SingleZeroDiffersOnlyInFirstRowAndColumn) {
  const GroundTruth gt = gen_special(SpecialKind::single_zero, 100, 10);
  DenseMatrix x = DenseMatrix::Ones(100, 10);
  x(0, 0) = 0.0;
  EXPECT_EQ(gt.x(), x);
  const DenseMatrix diff = gt.theta_star - DenseMatrix::Ones(10, 10);
  EXPECT_EQ(diff.bottomRightCorner(9, 9), DenseMatrix::Zero(9, 9));
  EXPECT_NE(diff(0, 0), 0.0);
  EXPECT_NE(diff(0, 5), 0.0);
  EXPECT_THROW(gen_special(SpecialKind::all_ones, 1, 5), std::invalid_argument);
}

TEST(GroundTruthProperty, ConsistentConstruction) {
  Rng rng(9);
  for (int t = 0; t < 30; ++t) {
    const std::size_t d = 3 + rng.uniform_index(12), r = 1 + rng.uniform_index(std::min<std::size_t>(d, 4));
    const std::size_t m = r + rng.uniform_index(200);
    const GroundTruth gt = t % 2 ? gen_gaussian(m, d, r, rng) : gen_correlated(m, d, power_law_spectrum(r, 2.0, 1.0), rng);
    const DenseMatrix x = gt.x();
    ASSERT_LE((x - gt.u * gt.v.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    const DenseMatrix gram = x.transpose() * x / static_cast<double>(m);
    ASSERT_LE((gt.theta_star - gram).cwiseAbs().maxCoeff(), 1e-9 * std::max(1.0, gram.cwiseAbs().maxCoeff()));
    const auto ref = oracle::jacobi_eigen(gram);
    ASSERT_GE(ref.values.minCoeff(), -1e-9 * std::max(1.0, ref.values(0)));
    ASSERT_LE((gt.lambda_true - ref.values.head(static_cast<Eigen::Index>(r))).cwiseAbs().maxCoeff(),
              1e-9 * std::max(1.0, ref.values(0)));
    double amax = 0;
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      for (Eigen::Index j = 0; j < x.cols(); ++j) amax = std::max(amax, x(i, j) * x(i, j));
    ASSERT_DOUBLE_EQ(gt.max_sq_entry(), amax);
  }
}

TEST(MatrixFormat, RoundTripIsBitExact) {
  Rng rng(10);
  DenseMatrix a = oracle::random_matrix(rng, 7, 4) * 1e-3;
  a(0, 0) = 1e300;
  a(1, 1) = -4.9e-324;
  a(2, 2) = 0.1;
  const std::string path = temp_path("matrix.mat");
  save_matrix(path, a);
  const DenseMatrix b = load_matrix(path);
  ASSERT_EQ(a.rows(), b.rows());
  EXPECT_EQ(std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())), 0);
  std::filesystem::remove(path);
}

TEST(MatrixFormat, ErrorsNameLineAndPath) {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      read_matrix(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("2 2 2\n"), 1u);
  EXPECT_EQ(line_of("2 2\n1 2\n3\n"), 3u);
  EXPECT_EQ(line_of("2 2\n1 2\n3 abc\n"), 3u);
  EXPECT_EQ(line_of("1 2\n1 nan\n"), 2u);
  EXPECT_EQ(line_of("1 1\n1\n5\n"), 3u);

  const std::string path = temp_path("bad.mat");
  std::ofstream(path) << "1 2\n1 x\n";
  try {
    load_matrix(path);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find(path + ":2"), std::string::npos);
  }
  std::filesystem::remove(path);
  EXPECT_THROW(load_matrix(temp_path("does_not_exist.mat")), std::runtime_error);
}

TEST(ObservationFormat, UnorderedTriplets) {
  std::istringstream in("3 4 2\n0 1 1.5\n0 3 -2\n2 2 0.25\n1 0 7\n2 0 1e-3\n1 3 4\n");
  const ObservedEntries x = read_observations(in);
  EXPECT_EQ(x.obs.m(), 3u);
  EXPECT_EQ(x.obs.flat(), (std::vector<ColIndex>{1, 3, 0, 3, 0, 2}));
  EXPECT_EQ(x.values, (std::vector<double>{1.5, -2, 7, 4, 1e-3, 0.25}));
}

TEST(ObservationFormat, FiveLineFixture) {
  std::istringstream in("2 3 2\n1 2 0.5\n0 0 1\n1 0 -1\n0 2 3\n");
  const ObservedEntries x = read_observations(in);
  EXPECT_TRUE(x.obs == ObservationSet(2, 3, 2, {0, 2, 0, 2}));
  EXPECT_EQ(x.values, (std::vector<double>{1, 3, -1, 0.5}));
}

TEST(ObservationFormat, Errors) {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      read_observations(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("1 3\n"), 1u);
  EXPECT_EQ(line_of("1 3 2\n0 1 1\n0 1 2\n"), 3u);   // duplicate
  EXPECT_EQ(line_of("1 3 2\n0 1 1\n0 5 2\n"), 3u);   // column out of range
  EXPECT_EQ(line_of("1 3 2\n0 1 1\n4 0 2\n"), 3u);   // row out of range
  EXPECT_EQ(line_of("1 3 2\n0 1 1\n0 2 two\n"), 3u); // non-numeric
  EXPECT_EQ(line_of("1 3 2\n0 1 1\n0 2 2\n0 0 3\n"), 4u);  // more than k
  EXPECT_NE(line_of("2 3 2\n0 1 1\n0 2 2\n"), 0u);  // row 1 missing
}

TEST(ObservationFormat, RoundTrip) {
  Rng rng(11);
  const GroundTruth gt = gen_gaussian(60, 9, 2, rng);
  const ObservedEntries x = observe(gt, sample_mask(60, 9, 3, rng));
  const std::string path = temp_path("obs.txt");
  save_observations(path, x);
  const ObservedEntries y = load_observations(path);
  EXPECT_TRUE(x.obs == y.obs);
  EXPECT_EQ(x.values, y.values);
  std::filesystem::remove(path);
}

TEST(FactorFormat, RoundTrip) {
  Rng rng(12);
  FactorEstimate f{oracle::random_frame(rng, 8, 3), Vector::LinSpaced(3, 2.0, 0.5), false};
  std::stringstream ss;
  write_factors(ss, f);
  const FactorEstimate g = read_factors(ss);
  EXPECT_EQ(f.q, g.q);
  EXPECT_EQ(f.lambda, g.lambda);
  std::istringstream bad("2 1\n1\n0\n1 2\n1 1\n");
  EXPECT_THROW(read_factors(bad), ParseError);
}
