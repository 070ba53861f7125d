#include "aggrlim/samplers.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "aggrlim/error.hpp"

namespace aggrlim {

namespace {

// log(k!) for k = 0..9.
constexpr std::array<double, 10> kLogFactorialTable = {
    0.0,
    0.0,
    0.69314718055994530942,
    1.79175946922805500081,
    3.17805383034794561964,
    4.78749174278204599425,
    6.57925121201010099506,
    8.52516136106541430017,
    10.60460290274525022842,
    12.80182748008146961121,
};

const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

// log P(K = k) for K ~ Poisson(mean), k >= 1, written as
//   (k - mean) - k log1p((k - mean) / mean) - log(2 pi k) / 2 - tail(k)
// which avoids the O(mean log mean) cancellation of the textbook form.
double poisson_log_pmf(double k, double mean) {
  if (k == 0.0) return -mean;
  const double delta = k - mean;
  return delta - k * std::log1p(delta / mean) - kHalfLog2Pi - 0.5 * std::log(k) -
         stirling_tail(k);
}

std::int64_t poisson_inversion(RngStream& rng, double mean) {
  double p = std::exp(-mean);
  double cdf = p;
  const double u = rng.uniform();
  std::int64_t k = 0;
  while (u > cdf) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
    if (p == 0.0) break;  // u beyond the rounded CDF total
  }
  return k;
}

std::int64_t poisson_ptrs(RngStream& rng, double mean) {
  const double slam = std::sqrt(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double log_inv_alpha = std::log(1.1239 + 1.1328 / (b - 3.4));
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::int64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    if (v == 0.0) continue;
    const double lhs = std::log(v) + log_inv_alpha - std::log(a / (us * us) + b);
    if (lhs <= poisson_log_pmf(kf, mean)) return static_cast<std::int64_t>(kf);
  }
}

std::int64_t binomial_inversion(RngStream& rng, std::int64_t n, double p) {
  const double q = 1.0 - p;
  const double s = p / q;
  const double a = (static_cast<double>(n) + 1.0) * s;
  double r = std::exp(static_cast<double>(n) * std::log1p(-p));
  double u = rng.uniform();
  std::int64_t k = 0;
  while (u > r) {
    u -= r;
    ++k;
    if (k > n) return n;  // rounding residue at the far tail
    r *= a / static_cast<double>(k) - s;
    if (r <= 0.0) break;
  }
  return k;
}

// log[f(k) / f(m)] for the Binomial(n, p) pmf f, with k, m in [1, n-1].
// Every term is a log1p of a small ratio, so nothing of size n log n cancels.
double binomial_log_ratio(double n, double p, double k, double m) {
  const double q = 1.0 - p;
  const double r1 = std::log1p((m - k) / k);
  const double r2 = std::log1p((k - m) / (n - k));
  const double r3 = std::log1p(std::fma(p, n, -k) / (q * k));
  return m * r1 + (n - m) * r2 + (k - m) * r3 + 0.5 * (r1 + r2) + stirling_tail(m) -
         stirling_tail(k) + stirling_tail(n - m) - stirling_tail(n - k);
}

double binomial_log_ratio_edge(double n, double p, double k, double m) {
  const double lpq = std::log(p / (1.0 - p));
  return log_factorial(m) + log_factorial(n - m) - log_factorial(k) - log_factorial(n - k) +
         (k - m) * lpq;
}

// BTRS for p <= 1/2 and n p >= 10.
std::int64_t binomial_btrs(RngStream& rng, std::int64_t trials, double p) {
  const double n = static_cast<double>(trials);
  const double spq = std::sqrt(n * p * (1.0 - p));
  const double b = 1.15 + 2.53 * spq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * p;
  const double c = n * p + 0.5;
  const double vr = 0.92 - 4.2 / b;
  const double alpha = (2.83 + 5.1 / b) * spq;
  const double m = std::floor((n + 1.0) * p);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + c);
    if (kf < 0.0 || kf > n) continue;
    if (us >= 0.07 && v <= vr) return static_cast<std::int64_t>(kf);
    if (v == 0.0) continue;
    v = std::log(v * alpha / (a / (us * us) + b));
    const bool interior = kf >= 1.0 && kf <= n - 1.0;
    const double bound = interior ? binomial_log_ratio(n, p, kf, m)
                                  : binomial_log_ratio_edge(n, p, kf, m);
    if (v <= bound) return static_cast<std::int64_t>(kf);
  }
}

}  // namespace

double stirling_tail(double k) noexcept {
  if (k < 10.0) {
    const auto i = static_cast<std::size_t>(k);
    if (static_cast<double>(i) == k) {
      if (k == 0.0) return 0.0;
      return kLogFactorialTable[i] - (k * std::log(k) - k + kHalfLog2Pi + 0.5 * std::log(k));
    }
    return std::lgamma(k + 1.0) - (k * std::log(k) - k + kHalfLog2Pi + 0.5 * std::log(k));
  }
  const double r = 1.0 / k;
  const double r2 = r * r;
  return r * (1.0 / 12.0 - r2 * (1.0 / 360.0 - r2 * (1.0 / 1260.0 - r2 / 1680.0)));
}

double log_factorial(double k) noexcept {
  if (k < 10.0) {
    const auto i = static_cast<std::size_t>(k);
    if (static_cast<double>(i) == k) return kLogFactorialTable[i];
  }
  return k * std::log(k) - k + kHalfLog2Pi + 0.5 * std::log(k) + stirling_tail(k);
}

std::int64_t sample_poisson(RngStream& rng, double mean) {
  if (!(mean >= 0.0)) throw ConfigError("Poisson mean must be nonnegative");
  if (mean > kMaxPoissonMean) {
    std::ostringstream os;
    os << "Poisson mean " << mean << " exceeds supported maximum " << kMaxPoissonMean;
    throw RuntimeAbort(os.str());
  }
  if (mean == 0.0) return 0;
  return mean < 10.0 ? poisson_inversion(rng, mean) : poisson_ptrs(rng, mean);
}

std::int64_t sample_binomial(RngStream& rng, std::int64_t trials, double p) {
  if (trials < 0 || !(p >= 0.0 && p <= 1.0))
    throw ConfigError("binomial parameters out of range");
  if (trials == 0 || p == 0.0) return 0;
  if (p == 1.0) return trials;
  if (p > 0.5) return trials - sample_binomial(rng, trials, 1.0 - p);
  if (static_cast<double>(trials) * p < 10.0) return binomial_inversion(rng, trials, p);
  return binomial_btrs(rng, trials, p);
}

}  // namespace aggrlim
