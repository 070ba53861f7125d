#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "aggrlim/error.hpp"
#include "aggrlim/mixing.hpp"
#include "aggrlim/stats.hpp"

using namespace aggrlim;

namespace {

MixingLaw law_b1() { return MixingLaw(PsiProfile::constant(), 1.0); }

// Integral of g(alpha) against the law, written in u = 1 - alpha so the
// endpoint factor u^(beta + extra_power) is evaluated without cancellation; split at the
// profile's kinks.
double against_density(const MixingLaw& law, const std::function<double(double)>& g,
                       double extra_power = 0.0) {
  static boost::math::quadrature::tanh_sinh<double> ts;
  std::vector<double> edges = {0.0};
  for (double x : law.profile().kinks()) edges.push_back(1.0 - x);
  std::sort(edges.begin() + 1, edges.end());
  edges.push_back(1.0);
  auto f = [&](double u) {
    return law.norm_constant() * law.profile()(1.0 - u) * std::pow(u, law.beta() + extra_power) * g(1.0 - u);
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    total += ts.integrate(f, edges[i], edges[i + 1], 1e-15);
  return total;
}

}  // namespace

TEST(MixingLaw, ConstantBetaOne) {
  const auto law = law_b1();
  EXPECT_DOUBLE_EQ(law.psi1(), 2.0);
  for (double x : {0.0, 0.25, 0.5, 0.9})
    EXPECT_NEAR(law.density(x), 2.0 * (1.0 - x), 1e-15);
}

TEST(MixingLaw, ConstantBetaZeroIsUniform) {
  const MixingLaw law(PsiProfile::constant(), 0.0);
  EXPECT_DOUBLE_EQ(law.psi1(), 1.0);
  EXPECT_NEAR(law.density(0.3), 1.0, 1e-15);
  EXPECT_NEAR(law.cdf(0.3), 0.3, 1e-14);
}

TEST(MixingLaw, LinearProfile) {
  const MixingLaw law(PsiProfile::polynomial({1.0, 1.0}), 1.0);
  EXPECT_NEAR(law.norm_constant(), 1.5, 1e-12);
  EXPECT_NEAR(law.psi1(), 3.0, 1e-12);
}

TEST(MixingLaw, NormalizationAgainstTanhSinh) {
  const std::vector<MixingLaw> laws = {
      MixingLaw(PsiProfile::polynomial({0.5, -0.2, 0.7}), 0.4),
      MixingLaw(PsiProfile::polynomial({2.0, 0.0, 0.0, 1.0}), -0.5),
      MixingLaw(PsiProfile::grid({{0.0, 1.0}, {0.4, 3.0}, {0.8, 0.5}}, 2.0), 1.0),
      MixingLaw(PsiProfile::constant(), 2.5),
  };
  for (const auto& law : laws) {
    EXPECT_NEAR(against_density(law, [](double) { return 1.0; }), 1.0, 1e-10) << law.describe();
    EXPECT_GT(law.psi1(), 0.0);
  }
}

TEST(MixingLaw, RejectsInvalid) {
  EXPECT_THROW(MixingLaw(PsiProfile::constant(), -1.0), ConfigError);
  EXPECT_THROW(MixingLaw(PsiProfile::polynomial({1.0, -1.0}), 1.0), ConfigError);  // limit 0
  EXPECT_THROW(MixingLaw(PsiProfile::polynomial({-0.1, 1.0}), 1.0), ConfigError);  // negative
  EXPECT_THROW(PsiProfile::grid({{0.1, 1.0}}, 1.0), ConfigError);
  EXPECT_THROW(PsiProfile::grid({{0.0, 1.0}, {0.0, 2.0}}, 1.0), ConfigError);
}

TEST(SampleAlpha, InverseCdfExamples) {
  EXPECT_NEAR(constant_profile_quantile(1.0, 0.75), 0.5, 1e-15);
  EXPECT_EQ(constant_profile_quantile(1.0, 0.0), 0.0);
  const auto law = law_b1();
  for (double u = 0.01; u < 1.0; u += 0.0137)
    EXPECT_NEAR(law.cdf(constant_profile_quantile(1.0, u)), u, 1e-12);
  for (double beta : {-0.5, 0.0, 2.5})
    for (double u : {0.1, 0.5, 0.99})
      EXPECT_NEAR(1.0 - std::pow(1.0 - constant_profile_quantile(beta, u), beta + 1.0), u, 1e-12);
}

TEST(SampleAlpha, EmpiricalCdfConstantProfile) {
  const auto law = law_b1();
  RngStream s(101, 0, 0);
  constexpr int kDraws = 1000000;
  std::vector<double> xs(kDraws);
  for (double& x : xs) x = sample_alpha(law, s);
  std::sort(xs.begin(), xs.end());
  double d = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double f = 1.0 - (1.0 - xs[i]) * (1.0 - xs[i]);
    d = std::max({d, (i + 1.0) / kDraws - f, f - static_cast<double>(i) / kDraws});
  }
  EXPECT_LT(d, 0.002);
}

TEST(SampleAlpha, RejectionMatchesDensity) {
  const MixingLaw law(PsiProfile::grid({{0.0, 1.0}, {0.4, 3.0}, {0.8, 0.5}}, 2.0), 1.0);
  RngStream s(103, 0, 0);
  constexpr int kDraws = 200000;
  std::vector<double> xs(kDraws);
  for (double& x : xs) x = sample_alpha(law, s);
  const auto ks = [&] {
    std::sort(xs.begin(), xs.end());
    double d = 0.0;
    for (int i = 0; i < kDraws; ++i) {
      const double f = law.cdf(xs[i]);
      d = std::max({d, (i + 1.0) / kDraws - f, f - static_cast<double>(i) / kDraws});
    }
    return d;
  }();
  EXPECT_LT(ks, 1.628 / std::sqrt(kDraws));
}

TEST(MixedMoment, Examples) {
  const auto law = law_b1();
  EXPECT_NEAR(mixed_moment(law, 0, 1, 0).value, 2.0, 1e-10);
  EXPECT_NEAR(mixed_moment(law, 3, 1, 0).value, 0.5, 1e-10);
  EXPECT_NEAR(mixed_moment(law, 0, 0, 1).value, 4.0 * std::log(2.0) - 2.0, 1e-10);
  EXPECT_TRUE(mixed_moment(law, 0, 2, 0).divergent);
}

TEST(MixedMoment, DivergenceGrid) {
  for (double beta : {-0.5, 0.0, 0.5, 1.0, 1.5, 2.0}) {
    const MixingLaw law(PsiProfile::constant(), beta);
    for (unsigned p = 0; p <= 3; ++p) {
      const auto m = mixed_moment(law, 0, p, 0);
      EXPECT_EQ(m.divergent, p >= beta + 1.0) << beta << " " << p;
      if (!m.divergent) {
        const double ref = (beta + 1.0) / (beta + 1.0 - p);
        EXPECT_NEAR(m.value, ref, 1e-8 * ref);
      }
    }
  }
}

TEST(MixedMoment, GeneralProfileAgainstTanhSinh) {
  const MixingLaw law(PsiProfile::polynomial({0.5, -0.2, 0.7}), 1.5);
  for (unsigned k : {0u, 2u, 9u}) {
    for (unsigned p : {0u, 1u, 2u}) {
      for (unsigned q : {0u, 1u}) {
        const double ref = against_density(
            law, [&](double x) { return std::pow(x, k) * std::pow(1 + x, -static_cast<double>(q)); },
            -static_cast<double>(p));
        EXPECT_NEAR(mixed_moment(law, k, p, q).value, ref, 1e-8 * ref) << k << p << q;
      }
    }
  }
}

TEST(MixedMoment, SequenceMatchesPointwise) {
  const auto law = law_b1();
  const auto seq = mixed_moment_sequence(law, 2000, 1, 0);
  ASSERT_EQ(seq.size(), 2001u);
  for (std::size_t k : {0u, 1u, 10u, 100u, 999u, 2000u})
    EXPECT_NEAR(seq[k], 2.0 / (k + 1.0), 1e-12 * 2.0 / (k + 1.0)) << k;
  const MixingLaw poly(PsiProfile::polynomial({1.0, 1.0}), 1.0);
  const auto seq2 = mixed_moment_sequence(poly, 300, 1, 1);
  for (unsigned k : {0u, 7u, 300u})
    EXPECT_NEAR(seq2[k], mixed_moment(poly, k, 1, 1).value, 1e-9 * seq2[k]);
}

TEST(MixedMoment, AgreesWithMonteCarlo) {
  const auto law = law_b1();
  RngStream s(107, 0, 0);
  constexpr int kDraws = 1000000;
  for (unsigned k : {1u, 3u}) {
    std::vector<double> xs(kDraws);
    for (double& x : xs) {
      const double a = sample_alpha(law, s);
      x = std::pow(a, k) / (1.0 - a);
    }
    const auto rep = mom_estimate(xs, 100);
    const double exact = mixed_moment(law, k, 1, 0).value;
    const double half = rep.upper - rep.estimate;
    EXPECT_NEAR(rep.estimate, exact, 3.0 * half) << k;
  }
}

TEST(HTilde, Examples) {
  EXPECT_NEAR(h_tilde(1.0, 1.0), 1.0, 1e-15);
  const double u = h_tilde(1.0, 4.0);
  EXPECT_NEAR(u, 0.593070330817253582, 1e-15);
  EXPECT_NEAR((2.0 - u) / (u * u), 4.0, 1e-10);
  EXPECT_LT(h_tilde(1.0, 10.0), h_tilde(1.0, 4.0));
  EXPECT_THROW(h_tilde(0.0, 1.0), ConfigError);
  EXPECT_THROW(h_tilde(1.0, -1.0), ConfigError);
}

TEST(HTilde, InversionIdentity) {
  for (double lambda : {0.5, 1.0, 5.0}) {
    for (int i = 0; i <= 80; ++i) {
      const double x = std::pow(10.0, -2.0 + 0.1 * i);
      const double u = h_tilde(lambda, x);
      EXPECT_GT(u, 0.0);
      EXPECT_EQ(u <= 1.0, x >= lambda);
      EXPECT_NEAR(lambda * (2.0 - u) / (u * u), x, 1e-10 * x);
    }
  }
}

TEST(ScaledTail, ClosedFormAndLimit) {
  const auto law = law_b1();
  for (std::uint64_t n : {10ull, 1000ull, 100000000ull}) {
    for (double x : {0.5, 1.0, 2.0, 10.0}) {
      const double u = h_tilde(1.0, static_cast<double>(n) * x);
      EXPECT_NEAR(scaled_tail(law, 1.0, n, x), static_cast<double>(n) * u * u,
                  1e-10 * static_cast<double>(n) * u * u);
    }
  }
  for (double x : {0.5, 1.0, 2.0, 10.0})
    EXPECT_NEAR(scaled_tail(law, 1.0, 100000000, x), 2.0 / x, 1e-3 * 2.0 / x);
  EXPECT_LT(scaled_tail(law, 1.0, 1000, 1e12), 1e-9);
}
