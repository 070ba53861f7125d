#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "aggrlim/quadrature.hpp"
#include "aggrlim/rng.hpp"

namespace aggrlim {

// Unnormalized factor psi(x) in the mixing density psi(x) (1 - x)^beta.
class PsiProfile {
 public:
  enum class Kind { constant, polynomial, grid };

  static PsiProfile constant();
  // psi(x) = sum_i coeffs[i] x^i.
  static PsiProfile polynomial(std::vector<double> coeffs);
  // Piecewise linear through `nodes` (x strictly increasing, first x = 0,
  // last x < 1) and through (1, psi1_raw).
  static PsiProfile grid(std::vector<std::pair<double, double>> nodes, double psi1_raw);

  Kind kind() const noexcept { return kind_; }
  double operator()(double x) const noexcept;
  double limit_at_one() const noexcept;
  // Points in (0, 1) where the profile is not smooth.
  std::vector<double> kinks() const;
  // An upper bound of psi on [0, 1).
  double upper_bound() const;

  const std::vector<double>& coefficients() const noexcept { return coeffs_; }
  const std::vector<std::pair<double, double>>& nodes() const noexcept { return nodes_; }

 private:
  Kind kind_ = Kind::constant;
  std::vector<double> coeffs_;
  std::vector<std::pair<double, double>> nodes_;
  double psi1_raw_ = 1.0;
};

// Law of the random coefficient alpha with density c psi(x) (1 - x)^beta on [0, 1).
class MixingLaw {
 public:
  MixingLaw(PsiProfile profile, double beta);

  double beta() const noexcept { return beta_; }
  double psi1() const noexcept { return psi1_; }
  double norm_constant() const noexcept { return norm_; }
  const PsiProfile& profile() const noexcept { return profile_; }
  bool is_constant_profile() const noexcept { return profile_.kind() == PsiProfile::Kind::constant; }

  double density(double x) const noexcept;
  double cdf(double x) const;

  // Integral over [0, 1) of c psi(x) g(x) (1 - x)^gamma for gamma > -1. The
  // right endpoint is mapped to the origin by u = 1 - x and, when gamma < 0,
  // flattened by u = v^(1 / (gamma + 1)).
  QuadratureResult integrate_weighted(const std::function<double(double)>& g, double gamma,
                                      const QuadratureOptions& opts = {}) const;

  // Integral of density(x) g(x) over [lo, hi] within [0, 1].
  QuadratureResult integrate_density(const std::function<double(double)>& g, double lo,
                                     double hi, const QuadratureOptions& opts = {}) const;

  // P(alpha > 1 - u) for u in [0, 1].
  double tail_mass(double u) const;

  std::string describe() const;

 private:
  PsiProfile profile_;
  double beta_;
  double norm_ = 1.0;
  double psi1_ = 1.0;
  double envelope_ = 1.0;  // sup psi, raw scale
  friend double sample_alpha(const MixingLaw& law, RngStream& stream);
};

MixingLaw make_mixing_law(PsiProfile profile, double beta);

// One draw of alpha. Constant profile: alpha = 1 - (1 - U)^(1 / (beta + 1)).
// Otherwise rejection from the constant-profile law of the same beta with
// acceptance probability psi(x) / sup psi.
double sample_alpha(const MixingLaw& law, RngStream& stream);

// alpha at CDF level u for the constant profile.
double constant_profile_quantile(double beta, double u);

// E[alpha^k (1 - alpha)^-p (1 + alpha)^-q], or a divergence tag when p >= beta + 1.
struct Moment {
  bool divergent = false;
  double value = 0.0;
  double error = 0.0;

  static Moment divergence() { return {true, std::numeric_limits<double>::infinity(), 0.0}; }
  bool finite() const noexcept { return !divergent; }
};

Moment mixed_moment(const MixingLaw& law, unsigned k, unsigned p, unsigned q);

// The same moments for every k = 0..kmax at once, by a composite Gauss-Legendre
// rule on panels graded geometrically towards alpha = 1. Throws ConfigError
// when p >= beta + 1.
std::vector<double> mixed_moment_sequence(const MixingLaw& law, std::size_t kmax, unsigned p,
                                          unsigned q);

// u = (1/4 + sqrt(1/16 + x / (2 lambda)))^-1, the solution in (0, 1] of
// lambda (2 - u) / u^2 = x.
double h_tilde(double lambda, double x);

// N P(lambda (1 + alpha) / (1 - alpha)^2 > N x).
double scaled_tail(const MixingLaw& law, double lambda, std::uint64_t copies, double x);

}  // namespace aggrlim
