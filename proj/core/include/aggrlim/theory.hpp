#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "aggrlim/mixing.hpp"
#include "aggrlim/processes.hpp"

namespace aggrlim {

// Order of the iterated limit: N -> infinity first, or n -> infinity first.
enum class Regime { N_first, n_first };

std::string_view to_string(Regime r) noexcept;
Regime parse_regime(std::string_view text);

struct LimitSpec {
  Model model = Model::inar;
  Regime regime = Regime::N_first;
  double scale = 1.0;  // lambda (INAR) or sigma^2 (AR)
  double psi1 = 2.0;
};

// Variance per unit time of the Brownian limit: 2 lambda psi1, lambda psi1,
// sigma^2 psi1 or sigma^2 psi1 / 2 for (INAR | AR) x (N-first | n-first).
double limit_variance_constant(const LimitSpec& spec);

// c min(t_i, t_j) over the grid.
Eigen::MatrixXd limit_cov_matrix(std::span<const double> times, double c);

// Lag-k covariance of the Gaussian limit of the simple aggregate:
// lambda E(alpha^k / (1 - alpha)) (INAR), sigma^2 E(alpha^k / (1 - alpha^2)) (AR).
Moment stationary_cov(Model model, std::uint64_t lag, double scale, const MixingLaw& mixing);

// stationary_cov for lags 0..max_lag in one pass. Throws ConfigError on divergence.
std::vector<double> stationary_cov_sequence(Model model, std::size_t max_lag, double scale,
                                            const MixingLaw& mixing);

// H(m) = sum_{k<=m} 1/k; summed directly up to kHarmonicTableSize, asymptotic
// expansion beyond (relative error below 1e-15 at the crossover).
inline constexpr std::uint64_t kHarmonicTableSize = 10000;
double harmonic_number(std::uint64_t m);

// sum_{k<=m1} sum_{l<=m2} 1 / (|k - l| + 1) through harmonic numbers in O(1).
double harmonic_double_sum(std::uint64_t m1, std::uint64_t m2);

// Number of index pairs (k, l) in [1, m1] x [1, m2] with |k - l| = d, for d = 0..max(m1, m2) - 1.
std::vector<double> lag_pair_counts(std::uint64_t m1, std::uint64_t m2);

// Cov(sum_{k<=m1} Y_k, sum_{l<=m2} Y_l) of the stationary Gaussian limit,
// evaluated as sum_d w(d) cov(d).
Moment exact_prelimit_cov(Model model, std::uint64_t m1, std::uint64_t m2, double scale,
                          const MixingLaw& mixing);

// nu([x, infinity)) = psi1 lambda / x.
double levy_tail(double x, double lambda, double psi1);

// E exp(i theta X0) for the infinitely divisible law with Levy measure
// psi1 lambda x^-2 dx on (0, infinity) and truncation at 1. Throws
// QuadratureError for |theta| > kStableCfMaxTheta.
inline constexpr double kStableCfMaxTheta = 1e6;
std::complex<double> stable_cf(double theta, double lambda, double psi1);

// The two theta-free integrals behind stable_cf:
//   real = int_0^inf (cos y - 1) / y^2 dy,
//   imag = int_0^1 (sin y - y) / y^2 dy + int_1^inf sin y / y^2 dy.
struct StableCfIntegrals {
  double real;
  double imag;
};
const StableCfIntegrals& stable_cf_integrals();

}  // namespace aggrlim
