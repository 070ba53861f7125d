#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "aggrlim/mixing.hpp"
#include "aggrlim/processes.hpp"
#include "aggrlim/theory.hpp"
#include "aggrlim/time_grid.hpp"

namespace aggrlim {

struct EstimatorReport {
  double estimate = 0.0;
  double std_error = 0.0;  // plain standard error of the sample mean, diagnostic only
  double lower = 0.0;
  double upper = 0.0;
  std::size_t blocks = 1;
};

// Median of block means over `blocks` contiguous blocks; the band is
// median +- 1.58 IQR / sqrt(blocks).
EstimatorReport mom_estimate(std::span<const double> samples, std::size_t blocks);

// Block count used when the caller does not choose one: 100, reduced so that
// every block holds at least 40 samples.
std::size_t default_mom_blocks(std::size_t samples) noexcept;

double sample_mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);  // unbiased
double median(std::vector<double> xs);

struct CovarianceEstimate {
  Eigen::MatrixXd estimate;  // median-of-means of centered products
  Eigen::MatrixXd lower;
  Eigen::MatrixXd upper;
  Eigen::MatrixXd plain;     // ordinary sample covariance
  std::size_t blocks = 1;
};

// Rows are replicates, columns grid points. blocks = 0 picks default_mom_blocks.
CovarianceEstimate empirical_cov_matrix(const Eigen::MatrixXd& replicates, std::size_t blocks = 0);

struct KsResult {
  double statistic = 0.0;
  double critical = 0.0;  // c(level) / sqrt(R)
  bool pass = false;
};

// Asymptotic Kolmogorov critical value for level in {0.01, 0.05, 0.10}.
double kolmogorov_critical(double level);

KsResult ks_normal(std::span<const double> samples, double mean, double variance,
                   double level = 0.01);

std::vector<std::complex<double>> empirical_cf(std::span<const double> samples,
                                               std::span<const double> thetas);

// ---------------------------------------------------------------------------
// Iterated-limit sweeps

struct SweepConfig {
  ModelParams params = ModelParams::inar(1.0);
  MixingLaw mixing = MixingLaw(PsiProfile::constant(), 1.0);
  std::vector<TimePoint> grid;
  std::uint64_t fixed = 1000;          // N for N_first, n for n_first
  std::vector<std::uint64_t> swept;    // n values for N_first, N values for n_first
  std::uint64_t replicates = 400;
  std::uint64_t seed = 0;
  std::size_t blocks = 0;
  unsigned threads = 1;
};

struct SweepRow {
  Regime regime = Regime::N_first;
  std::uint64_t copies = 0;
  std::uint64_t n = 0;
  std::vector<TimePoint> grid;
  CovarianceEstimate estimate;
  Eigen::MatrixXd limit_reference;   // c min(t_i, t_j)
  Eigen::MatrixXd exact_reference;   // exact second moments at this (N, n)
  double max_rel_dev_limit = 0.0;
  double max_rel_dev_exact = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t replicates = 0;
};

double max_relative_deviation(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& reference);

// N fixed, n swept; samples normalized by (n log n N)^{-1/2}.
std::vector<SweepRow> sweep_N_first(const SweepConfig& config);
// n fixed, N swept; samples normalized by (n N log N)^{-1/2}.
std::vector<SweepRow> sweep_n_first(const SweepConfig& config);

struct SlopeRow {
  Model model = Model::inar;
  std::uint64_t copies = 0;
  std::size_t trials = 0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double reference = 0.0;  // lambda psi1 or sigma^2 psi1 / 2
  double rel_dev = 0.0;    // |median - reference| / reference
  std::uint64_t seed = 0;
};

// Trials of slope_statistic at each N. Trial t at N uses RngStream(seed ^ N, t, 0).
std::vector<SlopeRow> slope_sweep(Model model, const MixingLaw& mixing, double scale,
                                  std::span<const std::uint64_t> copies, std::size_t trials,
                                  std::uint64_t seed, unsigned threads);

}  // namespace aggrlim
