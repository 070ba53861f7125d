#include "aggrlim/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "aggrlim/error.hpp"

namespace aggrlim {

namespace {

constexpr std::size_t kNonnegCheckPoints = 4097;

// Gauss-Legendre rule of order n on [-1, 1] by Newton iteration on P_n.
struct GaussLegendre {
  std::vector<double> nodes, weights;

  explicit GaussLegendre(std::size_t n) : nodes(n), weights(n) {
    for (std::size_t i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                          (static_cast<double>(n) + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
          p0 = p1;
          p1 = p2;
        }
        dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

const GaussLegendre& gauss_legendre_30() {
  static const GaussLegendre rule(30);
  return rule;
}

}  // namespace

// ---------------------------------------------------------------------------
// PsiProfile

PsiProfile PsiProfile::constant() { return PsiProfile{}; }

PsiProfile PsiProfile::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) throw ConfigError("polynomial profile needs at least one coefficient");
  for (double c : coeffs)
    if (!std::isfinite(c)) throw ConfigError("polynomial profile coefficients must be finite");
  PsiProfile p;
  p.kind_ = Kind::polynomial;
  p.coeffs_ = std::move(coeffs);
  return p;
}

PsiProfile PsiProfile::grid(std::vector<std::pair<double, double>> nodes, double psi1_raw) {
  if (nodes.empty()) throw ConfigError("grid profile needs at least one node");
  if (nodes.front().first != 0.0) throw ConfigError("grid profile must start at x = 0");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto [x, y] = nodes[i];
    if (!(x >= 0.0 && x < 1.0)) throw ConfigError("grid profile nodes must lie in [0, 1)");
    if (i > 0 && !(x > nodes[i - 1].first))
      throw ConfigError("grid profile nodes must be strictly increasing");
    if (!(y >= 0.0) || !std::isfinite(y))
      throw ConfigError("grid profile values must be finite and nonnegative");
  }
  if (!std::isfinite(psi1_raw)) throw ConfigError("grid profile psi1_raw must be finite");
  PsiProfile p;
  p.kind_ = Kind::grid;
  p.nodes_ = std::move(nodes);
  p.psi1_raw_ = psi1_raw;
  return p;
}

double PsiProfile::operator()(double x) const noexcept {
  switch (kind_) {
    case Kind::constant:
      return 1.0;
    case Kind::polynomial: {
      double acc = 0.0;
      for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
      return acc;
    }
    case Kind::grid: {
      const auto hi = std::upper_bound(nodes_.begin(), nodes_.end(), x,
                                       [](double v, const auto& node) { return v < node.first; });
      const auto& lo = *(hi - 1);
      const double x1 = hi == nodes_.end() ? 1.0 : hi->first;
      const double y1 = hi == nodes_.end() ? psi1_raw_ : hi->second;
      return lo.second + (y1 - lo.second) * (x - lo.first) / (x1 - lo.first);
    }
  }
  return 0.0;
}

double PsiProfile::limit_at_one() const noexcept {
  switch (kind_) {
    case Kind::constant:
      return 1.0;
    case Kind::polynomial: {
      double s = 0.0;
      for (double c : coeffs_) s += c;
      return s;
    }
    case Kind::grid:
      return psi1_raw_;
  }
  return 0.0;
}

std::vector<double> PsiProfile::kinks() const {
  std::vector<double> out;
  if (kind_ == Kind::grid)
    for (std::size_t i = 1; i < nodes_.size(); ++i) out.push_back(nodes_[i].first);
  return out;
}

double PsiProfile::upper_bound() const {
  switch (kind_) {
    case Kind::constant:
      return 1.0;
    case Kind::polynomial: {
      // Grid maximum plus a Lipschitz margin of half a grid step.
      double lipschitz = 0.0;
      for (std::size_t i = 1; i < coeffs_.size(); ++i) lipschitz += i * std::abs(coeffs_[i]);
      double best = 0.0;
      for (std::size_t i = 0; i < kNonnegCheckPoints; ++i)
        best = std::max(best, (*this)(static_cast<double>(i) / (kNonnegCheckPoints - 1)));
      return best + 0.5 * lipschitz / (kNonnegCheckPoints - 1);
    }
    case Kind::grid: {
      double best = psi1_raw_;
      for (const auto& node : nodes_) best = std::max(best, node.second);
      return best;
    }
  }
  return std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// MixingLaw

MixingLaw::MixingLaw(PsiProfile profile, double beta) : profile_(std::move(profile)), beta_(beta) {
  if (!(beta > -1.0) || !std::isfinite(beta))
    throw ConfigError("mixing exponent beta must be finite and > -1");
  const double limit = profile_.limit_at_one();
  if (!(limit > 0.0) || !std::isfinite(limit))
    throw ConfigError("profile limit at 1 must be positive and finite");
  if (profile_.kind() == PsiProfile::Kind::polynomial) {
    for (std::size_t i = 0; i < kNonnegCheckPoints; ++i) {
      const double x = static_cast<double>(i) / (kNonnegCheckPoints - 1);
      if (profile_(x) < 0.0) throw ConfigError("polynomial profile is negative on [0, 1)");
    }
  }
  envelope_ = profile_.upper_bound();
  if (!std::isfinite(envelope_) || !(envelope_ > 0.0))
    throw ConfigError("rejection envelope bound unavailable: sup psi is not finite");

  if (is_constant_profile()) {
    norm_ = beta_ + 1.0;
  } else {
    norm_ = 1.0;
    const auto mass = integrate_weighted([](double) { return 1.0; }, beta_);
    if (!mass.converged || !(mass.value > 0.0))
      throw ConfigError("mixing density normalization failed");
    norm_ = 1.0 / mass.value;
  }
  psi1_ = norm_ * limit;
}

double MixingLaw::density(double x) const noexcept {
  if (x < 0.0 || x >= 1.0) return 0.0;
  return norm_ * profile_(x) * std::pow(1.0 - x, beta_);
}

double MixingLaw::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (is_constant_profile()) return -std::expm1((beta_ + 1.0) * std::log1p(-x));
  return 1.0 - tail_mass(1.0 - x);
}

QuadratureResult MixingLaw::integrate_weighted(const std::function<double(double)>& g,
                                               double gamma, const QuadratureOptions& opts) const {
  if (!(gamma > -1.0)) throw ConfigError("integrate_weighted requires gamma > -1");
  const double c = norm_;
  const auto kinks = profile_.kinks();
  if (gamma >= 0.0) {
    std::vector<double> breaks;
    for (auto it = kinks.rbegin(); it != kinks.rend(); ++it) breaks.push_back(1.0 - *it);
    auto f = [&](double u) {
      const double x = 1.0 - u;
      return c * profile_(x) * g(x) * std::pow(u, gamma);
    };
    return integrate_gk(f, 0.0, 1.0, opts, breaks);
  }
  const double e = 1.0 / (gamma + 1.0);
  std::vector<double> breaks;
  for (auto it = kinks.rbegin(); it != kinks.rend(); ++it)
    breaks.push_back(std::pow(1.0 - *it, gamma + 1.0));
  auto f = [&](double v) {
    const double x = 1.0 - std::pow(v, e);
    return c * profile_(x) * g(x) * e;
  };
  return integrate_gk(f, 0.0, 1.0, opts, breaks);
}

QuadratureResult MixingLaw::integrate_density(const std::function<double(double)>& g, double lo,
                                              double hi, const QuadratureOptions& opts) const {
  lo = std::clamp(lo, 0.0, 1.0);
  hi = std::clamp(hi, 0.0, 1.0);
  std::vector<double> breaks;
  for (double k : profile_.kinks())
    if (k > lo && k < hi) breaks.push_back(k);
  auto f = [&](double x) { return density(x) * g(x); };
  return integrate_gk(f, lo, hi, opts, breaks);
}

double MixingLaw::tail_mass(double u0) const {
  if (u0 <= 0.0) return 0.0;
  if (u0 >= 1.0) return 1.0;
  // Integral over u in [0, u0] of c psi(1 - u) u^beta, with v = u^(beta + 1).
  const double b1 = beta_ + 1.0;
  const double vmax = std::pow(u0, b1);
  std::vector<double> breaks;
  for (double kink : profile_.kinks()) {
    const double uk = 1.0 - kink;
    if (uk < u0) breaks.push_back(std::pow(uk, b1));
  }
  std::sort(breaks.begin(), breaks.end());
  auto f = [&](double v) { return norm_ * profile_(1.0 - std::pow(v, 1.0 / b1)) / b1; };
  QuadratureOptions opts;
  opts.abs_tol = 0.0;
  return integrate_gk(f, 0.0, vmax, opts, breaks).value;
}

std::string MixingLaw::describe() const {
  std::ostringstream os;
  os << "MixingLaw{beta=" << beta_ << ", psi1=" << psi1_ << ", norm=" << norm_ << "}";
  return os.str();
}

MixingLaw make_mixing_law(PsiProfile profile, double beta) {
  return MixingLaw(std::move(profile), beta);
}

double constant_profile_quantile(double beta, double u) {
  if (beta == 1.0) return 1.0 - std::sqrt(1.0 - u);
  return -std::expm1(std::log1p(-u) / (beta + 1.0));
}

double sample_alpha(const MixingLaw& law, RngStream& stream) {
  if (law.is_constant_profile()) return constant_profile_quantile(law.beta_, stream.uniform());
  for (;;) {
    const double x = constant_profile_quantile(law.beta_, stream.uniform());
    if (stream.uniform() * law.envelope_ <= law.profile_(x)) return x;
  }
}

// ---------------------------------------------------------------------------
// Moments

Moment mixed_moment(const MixingLaw& law, unsigned k, unsigned p, unsigned q) {
  if (static_cast<double>(p) >= law.beta() + 1.0) return Moment::divergence();
  const double kd = k;
  const double qd = q;
  auto g = [kd, qd](double x) {
    double v = kd == 0.0 ? 1.0 : std::pow(x, kd);
    if (qd != 0.0) v *= std::pow(1.0 + x, -qd);
    return v;
  };
  const auto r = law.integrate_weighted(g, law.beta() - static_cast<double>(p));
  return {false, r.value, r.error};
}

std::vector<double> mixed_moment_sequence(const MixingLaw& law, std::size_t kmax, unsigned p,
                                          unsigned q) {
  const double gamma = law.beta() - static_cast<double>(p);
  if (!(gamma > -1.0)) throw ConfigError("mixed moment diverges: p >= beta + 1");

  // Panels in u = 1 - x: [1/2, 1] split at 3/4, then dyadic down to u_min,
  // which is small enough that x^k is nearly constant below it.
  const double u_min_target = 1e-3 / (static_cast<double>(kmax) + 1.0);
  std::vector<double> edges{1.0, 0.75, 0.5};
  while (edges.back() > u_min_target) edges.push_back(0.5 * edges.back());
  for (double kink : law.profile().kinks()) edges.push_back(1.0 - kink);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  const double u_min = edges.front();

  const auto& gl = gauss_legendre_30();
  const double c = law.norm_constant();
  const auto& psi = law.profile();
  std::vector<double> xs, ws;
  auto add_node = [&](double x, double w) {
    if (w == 0.0) return;
    xs.push_back(x);
    ws.push_back(w);
  };
  auto base = [&](double x) { return c * psi(x) * (q == 0 ? 1.0 : std::pow(1.0 + x, -double(q))); };
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double lo = edges[i], hi = edges[i + 1];
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
      const double u = mid + half * gl.nodes[j];
      const double x = 1.0 - u;
      add_node(x, half * gl.weights[j] * base(x) * std::pow(u, gamma));
    }
  }
  // Below u_min: v = u^(gamma + 1) removes the algebraic endpoint factor.
  {
    const double e = 1.0 / (gamma + 1.0);
    const double vmax = std::pow(u_min, gamma + 1.0);
    const double half = 0.5 * vmax;
    for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
      const double v = half + half * gl.nodes[j];
      const double u = std::pow(v, e);
      const double x = 1.0 - u;
      add_node(x, half * gl.weights[j] * e * base(x));
    }
  }

  // Ascending x so that negligible nodes form a prefix that can be dropped.
  std::vector<std::size_t> order(xs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return xs[a] < xs[b]; });
  std::vector<double> x_sorted(xs.size()), term(xs.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    x_sorted[i] = xs[order[i]];
    term[i] = ws[order[i]];
  }

  std::vector<double> out(kmax + 1);
  std::size_t lo = 0;
  for (std::size_t k = 0; k <= kmax; ++k) {
    double sum = 0.0;
    for (std::size_t i = lo; i < term.size(); ++i) sum += term[i];
    out[k] = sum;
    const double negligible = 1e-20 * std::abs(sum);
    while (lo < term.size() && std::abs(term[lo]) < negligible) ++lo;
    for (std::size_t i = lo; i < term.size(); ++i) term[i] *= x_sorted[i];
  }
  return out;
}

double h_tilde(double lambda, double x) {
  if (!(lambda > 0.0) || !(x > 0.0)) throw ConfigError("h_tilde requires lambda > 0 and x > 0");
  return 1.0 / (0.25 + std::sqrt(0.0625 + x / (2.0 * lambda)));
}

double scaled_tail(const MixingLaw& law, double lambda, std::uint64_t copies, double x) {
  if (copies == 0) throw ConfigError("scaled_tail requires N >= 1");
  const double n = static_cast<double>(copies);
  return n * law.tail_mass(h_tilde(lambda, n * x));
}

}  // namespace aggrlim
