#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Cholesky>

#include "aggrlim/error.hpp"
#include "aggrlim/rng.hpp"
#include "aggrlim/stats.hpp"

using namespace aggrlim;

TEST(Mom, ConstantSequence) {
  const std::vector<double> xs(500, 3.25);
  const auto r = mom_estimate(xs, 100);
  EXPECT_EQ(r.estimate, 3.25);
  EXPECT_EQ(r.lower, 3.25);
  EXPECT_EQ(r.upper, 3.25);
  EXPECT_EQ(r.blocks, 100u);
}

TEST(Mom, GaussianSample) {
  RngStream s(401, 0, 0);
  std::vector<double> xs(10000);
  for (double& x : xs) x = s.normal();
  const auto r = mom_estimate(xs, 100);
  EXPECT_NEAR(r.estimate, 0.0, 0.05);
  EXPECT_LE(r.lower, r.estimate);
  EXPECT_GE(r.upper, r.estimate);
  EXPECT_NEAR(r.std_error, 0.01, 0.001);
}

TEST(Mom, Errors) {
  EXPECT_THROW(mom_estimate(std::vector<double>{}, 1), ConfigError);
  EXPECT_THROW(mom_estimate(std::vector<double>{1.0, 2.0}, 3), ConfigError);
  EXPECT_THROW(mom_estimate(std::vector<double>{1.0, 2.0}, 0), ConfigError);
}

TEST(Mom, Equivariance) {
  RngStream s(402, 0, 0);
  std::vector<double> xs(1000), shifted(1000), scaled(1000);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = s.normal();
    shifted[i] = xs[i] + 7.0;
    scaled[i] = xs[i] * -3.0;
  }
  const auto a = mom_estimate(xs, 20), b = mom_estimate(shifted, 20), c = mom_estimate(scaled, 20);
  EXPECT_NEAR(b.estimate, a.estimate + 7.0, 1e-12);
  EXPECT_NEAR(c.estimate, -3.0 * a.estimate, 1e-12);
  EXPECT_NEAR(c.upper - c.lower, 3.0 * (a.upper - a.lower), 1e-12);
  EXPECT_EQ(mom_estimate(xs, 20).estimate, a.estimate);
}

TEST(Mom, NarrowerThanMeanUnderParetoTails) {
  // Width of the mom band versus a mean +- 2 s / sqrt(n) band for Pareto(1.1) draws.
  int narrower = 0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    RngStream s(403, trial, 0);
    std::vector<double> xs(2000);
    for (double& x : xs) x = std::pow(s.uniform_open(), -1.0 / 1.1);
    const auto r = mom_estimate(xs, 50);
    const double mean_width = 4.0 * r.std_error;
    if (r.upper - r.lower < mean_width) ++narrower;
  }
  EXPECT_GE(narrower, 90);
}

TEST(CovMatrix, ZeroAndSymmetric) {
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(50, 3);
  const auto c0 = empirical_cov_matrix(zero, 5);
  EXPECT_EQ(c0.estimate.norm(), 0.0);
  RngStream s(404, 0, 0);
  Eigen::MatrixXd data(400, 4);
  for (Eigen::Index i = 0; i < data.rows(); ++i)
    for (Eigen::Index j = 0; j < data.cols(); ++j) data(i, j) = s.normal();
  const auto c = empirical_cov_matrix(data);
  EXPECT_EQ(c.estimate, c.estimate.transpose());
  EXPECT_EQ(c.plain, c.plain.transpose());
  EXPECT_THROW(empirical_cov_matrix(Eigen::MatrixXd::Zero(1, 3)), ConfigError);
}

TEST(CovMatrix, SyntheticGaussian) {
  Eigen::MatrixXd k(3, 3);
  k << 2.0, 1.0, 0.5, 1.0, 2.0, 1.0, 0.5, 1.0, 1.5;
  const Eigen::MatrixXd l = Eigen::LLT<Eigen::MatrixXd>(k).matrixL();
  RngStream s(405, 0, 0);
  Eigen::MatrixXd data(10000, 3);
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    Eigen::Vector3d z(s.normal(), s.normal(), s.normal());
    data.row(i) = (l * z).transpose();
  }
  const auto c = empirical_cov_matrix(data, 100);
  int inside = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (c.lower(i, j) <= k(i, j) && k(i, j) <= c.upper(i, j)) ++inside;
  EXPECT_GE(inside, 8);
  EXPECT_LT((c.estimate - k).cwiseAbs().maxCoeff(), 0.1);
}

TEST(Ks, CalibrationAtOnePercent) {
  int passes = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RngStream s(406, seed, 0);
    std::vector<double> xs(10000);
    for (double& x : xs) x = s.normal();
    if (ks_normal(xs, 0.0, 1.0).pass) ++passes;
  }
  EXPECT_GE(passes, 98);
}

TEST(Ks, GrossViolationAndBounds) {
  RngStream s(407, 0, 0);
  std::vector<double> xs(1000);
  for (double& x : xs) x = s.normal() + 5.0;
  const auto r = ks_normal(xs, 0.0, 1.0);
  EXPECT_FALSE(r.pass);
  EXPECT_LE(r.statistic, 1.0);
  EXPECT_GE(r.statistic, 0.0);
  EXPECT_THROW(ks_normal(xs, 0.0, 0.0), ConfigError);
  EXPECT_THROW(ks_normal(xs, 0.0, 1.0, 0.02), ConfigError);
  EXPECT_NEAR(ks_normal(xs, 0.0, 1.0).critical, 1.628 / std::sqrt(1000.0), 1e-15);
}

TEST(EmpiricalCf, Basics) {
  const std::vector<double> zero = {0.0};
  const std::vector<double> thetas = {-2.0, 0.5, 3.0};
  for (const auto& v : empirical_cf(zero, thetas)) EXPECT_EQ(v, std::complex<double>(1.0, 0.0));
  RngStream s(408, 0, 0);
  std::vector<double> xs(100000);
  for (double& x : xs) x = s.normal();
  const std::vector<double> pm = {1.0, -1.0};
  const auto v = empirical_cf(xs, pm);
  EXPECT_EQ(v[0], std::conj(v[1]));
  EXPECT_NEAR(std::abs(v[0] - std::exp(-0.5)), 0.0, 0.01);
  EXPECT_LE(std::abs(v[0]), 1.0);
  EXPECT_THROW(empirical_cf(std::vector<double>{}, pm), ConfigError);
}

TEST(Sweep, NFirstSmall) {
  SweepConfig cfg;
  cfg.grid = {TimePoint{1, 2}, TimePoint{1, 1}};
  cfg.fixed = 20;
  cfg.swept = {400, 100};
  cfg.replicates = 100;
  cfg.seed = 9;
  const auto rows = sweep_N_first(cfg);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].n, 100u);
  EXPECT_EQ(rows[1].n, 400u);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.estimate.estimate.allFinite());
    EXPECT_EQ(r.estimate.estimate, r.estimate.estimate.transpose());
    EXPECT_EQ(r.limit_reference.rows(), 2);
    EXPECT_EQ(r.exact_reference.rows(), 2);
    EXPECT_EQ(r.seed, 9u);
    EXPECT_EQ(r.replicates, 100u);
  }
  // The finite-size reference sits closer to the estimate than the limit kernel at small n.
  EXPECT_LT(max_relative_deviation(rows[0].exact_reference, rows[0].limit_reference), 0.5);
  const auto again = sweep_N_first(cfg);
  EXPECT_EQ(again[1].estimate.estimate, rows[1].estimate.estimate);
}

TEST(Sweep, NFirstTrackExactReferenceAtSmallN) {
  SweepConfig cfg;
  cfg.grid = {TimePoint{1, 1}};
  cfg.fixed = 200;
  cfg.swept = {100};
  cfg.replicates = 2000;
  cfg.seed = 10;
  const auto row = sweep_N_first(cfg).front();
  EXPECT_LT(row.max_rel_dev_exact, row.max_rel_dev_limit);
}

TEST(Sweep, SlopeRowsAreOrderedAndReproducible) {
  const MixingLaw law(PsiProfile::constant(), 1.0);
  const std::vector<std::uint64_t> sizes = {100000, 1000};
  const auto a = slope_sweep(Model::inar, law, 1.0, sizes, 20, 5, 1);
  const auto b = slope_sweep(Model::inar, law, 1.0, sizes, 20, 5, 3);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[0].copies, 1000u);
  EXPECT_EQ(a[0].median, b[0].median);
  EXPECT_EQ(a[1].median, b[1].median);
  EXPECT_DOUBLE_EQ(a[0].reference, 2.0);
}

TEST(Sweep, SlopeTrendAcrossSeeds) {
  // Median deviation from lambda psi1 at N = 1e3 against N = 1e6 (20 trials each), over 40 seeds.
  const MixingLaw law(PsiProfile::constant(), 1.0);
  const std::vector<std::uint64_t> sizes = {1000, 1000000};
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto rows = slope_sweep(Model::inar, law, 1.0, sizes, 20, 1000 + seed, 1);
    if (rows[1].rel_dev < rows[0].rel_dev) ++wins;
  }
  EXPECT_GE(wins, 24);
}
