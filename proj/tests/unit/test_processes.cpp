#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "aggrlim/error.hpp"
#include "aggrlim/processes.hpp"

using namespace aggrlim;

namespace {

template <class V>
double mean_of(const std::vector<V>& xs, std::size_t lo, std::size_t hi) {
  double s = 0.0;
  for (std::size_t i = lo; i < hi; ++i) s += static_cast<double>(xs[i]);
  return s / static_cast<double>(hi - lo);
}

template <class V>
double autocov(const std::vector<V>& xs, std::size_t lag, double mean, std::size_t lo, std::size_t hi) {
  double s = 0.0;
  for (std::size_t i = lo; i + lag < hi; ++i)
    s += (static_cast<double>(xs[i]) - mean) * (static_cast<double>(xs[i + lag]) - mean);
  return s / static_cast<double>(hi - lo - lag);
}

// Long-run variance of the lag-k product series of a Gaussian AR(1), for standard errors.
double ar_autocov_se(double alpha, double var, std::size_t lag, std::size_t n) {
  double lrv = 0.0;
  for (int h = -200; h <= 200; ++h) {
    const double r = std::pow(alpha, std::abs(h));
    const double a = std::pow(alpha, std::abs(h + static_cast<int>(lag)));
    const double b = std::pow(alpha, std::abs(h - static_cast<int>(lag)));
    lrv += var * var * (r * r + a * b);
  }
  return std::sqrt(lrv / static_cast<double>(n));
}

}  // namespace

TEST(Ar1, IidWhenAlphaZero) {
  RngStream s(201, 0, 0);
  const auto path = simulate_ar1_path(0.0, {1.0}, 1000000, s);
  ASSERT_EQ(path.values.size(), 1000001u);
  const double m = mean_of(path.values, 0, path.values.size());
  const double rho = autocov(path.values, 1, m, 0, path.values.size()) /
                     autocov(path.values, 0, m, 0, path.values.size());
  EXPECT_NEAR(rho, 0.0, 0.003);
}

TEST(Ar1, StationaryVariance) {
  RngStream s(202, 0, 0);
  const auto path = simulate_ar1_path(0.5, {1.0}, 1000000, s);
  const double m = mean_of(path.values, 0, path.values.size());
  EXPECT_NEAR(autocov(path.values, 0, m, 0, path.values.size()), 4.0 / 3.0, 0.01 * 4.0 / 3.0);
}

TEST(Ar1, AutocovariancesMatchExact) {
  RngStream s(203, 0, 0);
  constexpr std::size_t n = 1000000;
  const double alpha = 0.9;
  const auto path = simulate_ar1_path(alpha, {1.0}, n, s);
  const double var = 1.0 / (1.0 - alpha * alpha);
  for (std::size_t k = 0; k <= 8; ++k) {
    const double est = autocov(path.values, k, 0.0, 0, path.values.size());
    EXPECT_NEAR(est, exact_conditional_cov(Model::ar, alpha, 1.0, k), 4.0 * ar_autocov_se(alpha, var, k, n))
        << k;
  }
}

TEST(Ar1, HalvesAgree) {
  RngStream s(204, 0, 0);
  constexpr std::size_t n = 1000000;
  const double alpha = 0.7;
  const auto path = simulate_ar1_path(alpha, {2.0}, n, s);
  const double var = 2.0 / (1 - alpha * alpha);
  const double mean_se = std::sqrt(2.0 / ((1 - alpha) * (1 - alpha)) / (n / 2.0));
  const double m1 = mean_of(path.values, 0, n / 2), m2 = mean_of(path.values, n / 2, n);
  EXPECT_NEAR(m1, m2, 4.0 * std::sqrt(2.0) * mean_se);
  for (std::size_t k : {0u, 1u}) {
    const double se = ar_autocov_se(alpha, var, k, n / 2);
    EXPECT_NEAR(autocov(path.values, k, 0.0, 0, n / 2), autocov(path.values, k, 0.0, n / 2, n),
                4.0 * std::sqrt(2.0) * se);
  }
}

TEST(Inar1, IidPoissonWhenAlphaZero) {
  RngStream s(205, 0, 0);
  const auto path = simulate_inar1_path(0.0, {1.0}, 1000000, s);
  const double m = mean_of(path.values, 0, path.values.size());
  EXPECT_NEAR(m, 1.0, 3.0 / 1000.0);
}

TEST(Inar1, StationaryMoments) {
  RngStream s(206, 0, 0);
  const auto path = simulate_inar1_path(0.5, {1.0}, 1000000, s);
  for (auto v : path.values) ASSERT_GE(v, 0);
  const double m = mean_of(path.values, 0, path.values.size());
  EXPECT_NEAR(m, 2.0, 0.02);
  EXPECT_NEAR(autocov(path.values, 0, m, 0, path.values.size()), 2.0, 0.04);
}

TEST(Inar1, AutocovariancesMatchExact) {
  RngStream s(207, 0, 0);
  constexpr std::size_t n = 1000000;
  const double alpha = 0.6;
  const auto path = simulate_inar1_path(alpha, {1.5}, n, s);
  const double mean = 1.5 / (1 - alpha);
  // Same second-order structure as a Gaussian AR(1) plus a fourth-cumulant term; use a
  // generous Gaussian-based standard error.
  for (std::size_t k = 0; k <= 8; ++k) {
    const double est = autocov(path.values, k, mean, 0, path.values.size());
    const double se = 1.5 * ar_autocov_se(alpha, mean, k, n);
    EXPECT_NEAR(est, exact_conditional_cov(Model::inar, alpha, 1.5, k), 4.0 * se) << k;
  }
}

TEST(Inar1, StationaryMarginalChiSquare) {
  constexpr int kDraws = 100000;
  std::map<std::int64_t, int> counts;
  for (int i = 0; i < kDraws; ++i) {
    RngStream s(208, static_cast<std::uint64_t>(i), 0);
    Inar1Stepper step(0.5, {1.0}, s);
    ++counts[step.current()];
  }
  double chi2 = 0.0;
  int cells = 0;
  double rest = kDraws;
  int rest_obs = kDraws;
  for (std::int64_t k = 0; k <= 9; ++k) {
    const double e = kDraws * std::exp(k * std::log(2.0) - 2.0 - std::lgamma(k + 1.0));
    chi2 += (counts[k] - e) * (counts[k] - e) / e;
    rest -= e;
    rest_obs -= counts[k];
    ++cells;
  }
  chi2 += (rest_obs - rest) * (rest_obs - rest) / rest;
  // 10 degrees of freedom; 1% critical value 23.21.
  EXPECT_LT(chi2, 23.21);
}

TEST(Inar1, AbortsOnHugeMean) {
  RngStream s(1, 0, 0);
  EXPECT_THROW(Inar1Stepper(1.0 - 1e-13, {1.0}, s), RuntimeAbort);
}

TEST(Processes, RejectsBadAlpha) {
  RngStream s(1, 0, 0);
  EXPECT_THROW(simulate_ar1_path(1.0, {1.0}, 5, s), ConfigError);
  EXPECT_THROW(simulate_inar1_path(-0.1, {1.0}, 5, s), ConfigError);
  EXPECT_THROW(ModelParams::ar(0.0), ConfigError);
  EXPECT_THROW(ModelParams::inar(-1.0), ConfigError);
  EXPECT_THROW(parse_model("arma"), ConfigError);
}

TEST(ConditionalMoments, Examples) {
  EXPECT_DOUBLE_EQ(conditional_mean_inar(0.0, {1.0}), 1.0);
  EXPECT_DOUBLE_EQ(conditional_mean_inar(0.5, {1.0}), 2.0);
  EXPECT_NEAR(conditional_mean_inar(0.9, {2.0}), 20.0, 1e-12);
  EXPECT_DOUBLE_EQ(exact_conditional_cov(Model::inar, 0.5, 1.0, 0), 2.0);
  EXPECT_DOUBLE_EQ(exact_conditional_cov(Model::inar, 0.5, 1.0, 2), 0.5);
  EXPECT_NEAR(exact_conditional_cov(Model::ar, 0.5, 1.0, 1), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(exact_conditional_partial_sum_variance(Model::inar, 0.0, 1.0, 5), 5.0, 1e-12);
  EXPECT_NEAR(exact_conditional_partial_sum_variance(Model::inar, 0.5, 1.0, 2), 6.0, 1e-12);
  EXPECT_NEAR(exact_conditional_partial_sum_variance(Model::ar, 0.5, 1.0, 1000000) / 1e6, 4.0, 4e-4);
}

TEST(ConditionalMoments, PartialSumVarianceMatchesDoubleSum) {
  for (Model model : {Model::ar, Model::inar}) {
    for (double alpha : {0.0, 0.2, 0.9, 0.999, 0.9999999}) {
      for (std::uint64_t m : {1ull, 2ull, 7ull, 300ull}) {
        double brute = 0.0;
        for (std::uint64_t k = 1; k <= m; ++k)
          for (std::uint64_t l = 1; l <= m; ++l)
            brute += exact_conditional_cov(model, alpha, 1.3, k > l ? k - l : l - k);
        EXPECT_NEAR(exact_conditional_partial_sum_variance(model, alpha, 1.3, m), brute, 1e-10 * brute)
            << alpha << " " << m;
      }
    }
  }
}

TEST(ConditionalMoments, PartialSumVarianceByRestarts) {
  constexpr std::uint64_t m = 1000;
  constexpr int kRestarts = 10000;
  for (Model model : {Model::ar, Model::inar}) {
    for (double alpha : {0.3, 0.7, 0.9}) {
      double sum2 = 0.0;
      for (int r = 0; r < kRestarts; ++r) {
        RngStream s(209, static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(alpha * 10));
        double total = 0.0;
        if (model == Model::ar) {
          Ar1Stepper step(alpha, {1.0}, s);
          for (std::uint64_t k = 0; k < m; ++k) total += step.next();
        } else {
          Inar1Stepper step(alpha, {1.0}, s);
          for (std::uint64_t k = 0; k < m; ++k) total += static_cast<double>(step.next()) - step.conditional_mean();
        }
        sum2 += total * total;
      }
      const double exact = exact_conditional_partial_sum_variance(model, alpha, 1.0, m);
      EXPECT_NEAR(sum2 / kRestarts, exact, 0.05 * exact) << to_string(model) << " " << alpha;
    }
  }
}

TEST(ConditionalMoments, LongRunVariance) {
  EXPECT_NEAR(conditional_long_run_variance(Model::inar, 0.5, 1.0), 6.0, 1e-12);
  EXPECT_NEAR(conditional_long_run_variance(Model::ar, 0.5, 1.0), 4.0, 1e-12);
}
