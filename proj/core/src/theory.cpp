#include "aggrlim/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "aggrlim/error.hpp"
#include "aggrlim/quadrature.hpp"
#include "aggrlim/summation.hpp"

namespace aggrlim {

std::string_view to_string(Regime r) noexcept { return r == Regime::N_first ? "N_first" : "n_first"; }

Regime parse_regime(std::string_view text) {
  if (text == "N_first" || text == "N-first") return Regime::N_first;
  if (text == "n_first" || text == "n-first") return Regime::n_first;
  throw ConfigError("unknown regime '" + std::string(text) + "' (expected N_first or n_first)");
}

double limit_variance_constant(const LimitSpec& spec) {
  if (!(spec.psi1 > 0.0)) throw ConfigError("psi1 must be positive");
  const double base = spec.scale * spec.psi1;
  if (spec.model == Model::inar) return spec.regime == Regime::N_first ? 2.0 * base : base;
  return spec.regime == Regime::N_first ? base : 0.5 * base;
}

Eigen::MatrixXd limit_cov_matrix(std::span<const double> times, double c) {
  const auto g = static_cast<Eigen::Index>(times.size());
  Eigen::MatrixXd out(g, g);
  for (Eigen::Index i = 0; i < g; ++i)
    for (Eigen::Index j = 0; j < g; ++j)
      out(i, j) = c * std::min(times[static_cast<std::size_t>(i)], times[static_cast<std::size_t>(j)]);
  return out;
}

Moment stationary_cov(Model model, std::uint64_t lag, double scale, const MixingLaw& mixing) {
  const unsigned q = model == Model::inar ? 0 : 1;
  Moment m = mixed_moment(mixing, static_cast<unsigned>(lag), 1, q);
  if (m.finite()) {
    m.value *= scale;
    m.error *= scale;
  }
  return m;
}

std::vector<double> stationary_cov_sequence(Model model, std::size_t max_lag, double scale,
                                            const MixingLaw& mixing) {
  auto seq = mixed_moment_sequence(mixing, max_lag, 1, model == Model::inar ? 0 : 1);
  for (double& v : seq) v *= scale;
  return seq;
}

namespace {

const std::vector<double>& harmonic_table() {
  static const std::vector<double> table = [] {
    std::vector<double> h(kHarmonicTableSize + 1, 0.0);
    CompensatedSum s;
    for (std::uint64_t k = 1; k <= kHarmonicTableSize; ++k) {
      s.add(1.0 / static_cast<double>(k));
      h[k] = s.value();
    }
    return h;
  }();
  return table;
}

}  // namespace

double harmonic_number(std::uint64_t m) {
  if (m <= kHarmonicTableSize) return harmonic_table()[m];
  const double x = static_cast<double>(m);
  const double r2 = 1.0 / (x * x);
  return std::log(x) + std::numbers::egamma + 0.5 / x - r2 * (1.0 / 12.0 - r2 / 120.0);
}

double harmonic_double_sum(std::uint64_t m1, std::uint64_t m2) {
  if (m1 == 0 || m2 == 0) throw ConfigError("harmonic_double_sum requires m1, m2 >= 1");
  const std::uint64_t a = std::min(m1, m2);
  const std::uint64_t b = std::max(m1, m2);
  const double ad = static_cast<double>(a);
  const double bd = static_cast<double>(b);
  const double ha = harmonic_number(a);
  const double hb = harmonic_number(b);
  const double hgap = harmonic_number(b - a + 1);
  CompensatedSum s;
  s.add((ad + 1.0) * (ha - 1.0));
  s.add(2.0 - ad);
  s.add(ad * (hb - 1.0));
  s.add((bd - ad + 1.0) * (hb - hgap));
  return s.value();
}

std::vector<double> lag_pair_counts(std::uint64_t m1, std::uint64_t m2) {
  if (m1 == 0 || m2 == 0) return {};
  const std::uint64_t a = std::min(m1, m2);
  const std::uint64_t b = std::max(m1, m2);
  std::vector<double> w(b);
  w[0] = static_cast<double>(a);
  for (std::uint64_t d = 1; d < b; ++d) {
    const std::uint64_t forward = std::min(a, b - d);        // l = k + d
    const std::uint64_t backward = a > d ? a - d : 0;        // l = k - d
    w[d] = static_cast<double>(forward + backward);
  }
  return w;
}

Moment exact_prelimit_cov(Model model, std::uint64_t m1, std::uint64_t m2, double scale,
                          const MixingLaw& mixing) {
  if (m1 == 0 || m2 == 0) return {false, 0.0, 0.0};
  if (stationary_cov(model, 0, scale, mixing).divergent) return Moment::divergence();
  const auto w = lag_pair_counts(m1, m2);
  const auto cov = stationary_cov_sequence(model, w.size() - 1, scale, mixing);
  CompensatedSum s;
  for (std::size_t d = 0; d < w.size(); ++d) s.add(w[d] * cov[d]);
  return {false, s.value(), 0.0};
}

double levy_tail(double x, double lambda, double psi1) {
  if (!(x > 0.0)) throw ConfigError("levy_tail requires x > 0");
  return psi1 * lambda / x;
}

namespace {

// sin(y) - y without cancellation for small y.
double sin_minus_identity(double y) {
  if (std::abs(y) > 0.1) return std::sin(y) - y;
  const double y2 = y * y;
  double term = -y * y2 / 6.0;
  double sum = term;
  for (int k = 2; k < 8; ++k) {
    term *= -y2 / static_cast<double>((2 * k) * (2 * k + 1));
    sum += term;
  }
  return sum;
}

// int_start^inf g(y) / y^2 dy for g = cos or sin, summing half periods
// [j pi, (j + 1) pi] and extrapolating the alternating partial sums.
double oscillatory_tail(bool use_sin, double start) {
  auto f = [use_sin](double y) { return (use_sin ? std::sin(y) : std::cos(y)) / (y * y); };
  QuadratureOptions opts;
  opts.rel_tol = 1e-13;
  opts.abs_tol = 1e-16;
  const double pi = std::numbers::pi;
  double edge = std::ceil(start / pi) * pi;
  if (edge == start) edge += pi;
  CompensatedSum running;
  running.add(integrate_gk(f, start, edge, opts).value);
  std::vector<double> partial;
  for (int j = 0; j < 40; ++j) {
    running.add(integrate_gk(f, edge, edge + pi, opts).value);
    partial.push_back(running.value());
    edge += pi;
  }
  return wynn_epsilon(partial);
}

StableCfIntegrals compute_stable_cf_integrals() {
  QuadratureOptions opts;
  opts.rel_tol = 1e-13;
  opts.abs_tol = 1e-16;
  const double pi = std::numbers::pi;
  // (cos y - 1) = -2 sin^2(y / 2) keeps the integrand accurate near 0.
  auto cos_part = [](double y) {
    const double s = std::sin(0.5 * y);
    return y == 0.0 ? -0.5 : -2.0 * s * s / (y * y);
  };
  const auto head = integrate_gk(cos_part, 0.0, pi, opts);
  // For y > pi: (cos y - 1) / y^2 = cos y / y^2 - 1 / y^2, and int_pi^inf y^-2 = 1 / pi.
  const double real = head.value + oscillatory_tail(false, pi) - 1.0 / pi;

  auto sin_part = [](double y) { return y == 0.0 ? 0.0 : sin_minus_identity(y) / (y * y); };
  const auto near = integrate_gk(sin_part, 0.0, 1.0, opts);
  const double imag = near.value + oscillatory_tail(true, 1.0);
  if (!head.converged || !near.converged)
    throw QuadratureError("stable_cf integrals did not converge");
  return {real, imag};
}

}  // namespace

const StableCfIntegrals& stable_cf_integrals() {
  static const StableCfIntegrals values = compute_stable_cf_integrals();
  return values;
}

std::complex<double> stable_cf(double theta, double lambda, double psi1) {
  if (!std::isfinite(theta) || std::abs(theta) > kStableCfMaxTheta)
    throw QuadratureError("stable_cf: |theta| outside the supported range");
  if (theta == 0.0) return {1.0, 0.0};
  // Substituting y = |theta| x maps both integrals onto the theta-free ones:
  //   real part |theta| R, imaginary part theta (I - log |theta|).
  const auto& c = stable_cf_integrals();
  const double a = std::abs(theta);
  const double scale = psi1 * lambda;
  const double re = scale * a * c.real;
  const double im = scale * theta * (c.imag - std::log(a));
  return std::exp(std::complex<double>(re, im));
}

}  // namespace aggrlim
