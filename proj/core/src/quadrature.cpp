#include "aggrlim/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace aggrlim {

namespace {

// Kronrod abscissae on [0, 1]; odd indices are the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

}  // namespace

std::pair<double, double> gauss_kronrod_15(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  // On very narrow panels center +- dx can round onto an edge; keep nodes inside.
  const double lo = std::nextafter(a, b), hi = std::nextafter(b, a);
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const double pair = f(std::max(center - dx, lo)) + f(std::min(center + dx, hi));
    kronrod += kWgk[i] * pair;
    if (i % 2 == 1) gauss += kWg[i / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {kronrod, std::abs(kronrod - gauss)};
}

QuadratureResult integrate_gk(const Integrand& f, double a, double b,
                              const QuadratureOptions& opts, std::span<const double> breaks) {
  QuadratureResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::vector<double> edges;
  edges.reserve(breaks.size() + 2);
  edges.push_back(a);
  for (double x : breaks)
    if (x > edges.back() && x < b) edges.push_back(x);
  edges.push_back(b);

  std::vector<Panel> heap;
  heap.reserve(opts.max_intervals + 1);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    auto [v, e] = gauss_kronrod_15(f, edges[i], edges[i + 1]);
    heap.push_back({edges[i], edges[i + 1], v, e});
    out.evaluations += 15;
  }
  std::make_heap(heap.begin(), heap.end());

  double total = 0.0, total_err = 0.0;
  auto resum = [&] {
    // Re-summing from the panels keeps the totals free of cancellation drift.
    total = 0.0;
    total_err = 0.0;
    for (const Panel& p : heap) {
      total += p.value;
      total_err += p.error;
    }
  };
  auto done = [&] { return total_err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };
  resum();
  while (!done() && heap.size() < opts.max_intervals) {
    std::pop_heap(heap.begin(), heap.end());
    const Panel worst = heap.back();
    const double mid = 0.5 * (worst.a + worst.b);
    const double scale = std::max(std::abs(worst.a), std::abs(worst.b));
    if (worst.b - worst.a <= 64.0 * std::numeric_limits<double>::epsilon() * scale) {
      std::push_heap(heap.begin(), heap.end());
      break;  // no room left to bisect
    }
    heap.pop_back();
    auto [v1, e1] = gauss_kronrod_15(f, worst.a, mid);
    auto [v2, e2] = gauss_kronrod_15(f, mid, worst.b);
    out.evaluations += 30;
    heap.push_back({worst.a, mid, v1, e1});
    std::push_heap(heap.begin(), heap.end());
    heap.push_back({mid, worst.b, v2, e2});
    std::push_heap(heap.begin(), heap.end());
    resum();
  }
  out.value = total;
  out.error = total_err;
  out.converged = done();
  return out;
}

double wynn_epsilon(std::span<const double> s) {
  if (s.empty()) return 0.0;
  if (s.size() < 3) return s.back();
  // cur holds epsilon column k, prev column k-1; even columns estimate the limit.
  std::vector<double> prev(s.size() + 1, 0.0);
  std::vector<double> cur(s.begin(), s.end());
  double best = s.back();
  double best_delta = std::abs(s[s.size() - 1] - s[s.size() - 2]);
  for (std::size_t col = 1; cur.size() > 1; ++col) {
    std::vector<double> next(cur.size() - 1);
    for (std::size_t i = 0; i < next.size(); ++i) {
      const double diff = cur[i + 1] - cur[i];
      next[i] = prev[i + 1] + (diff == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / diff);
    }
    if (col % 2 == 0 && next.size() >= 2) {
      const double delta = std::abs(next.back() - next[next.size() - 2]);
      if (std::isfinite(next.back()) && delta < best_delta) {
        best_delta = delta;
        best = next.back();
      }
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  return best;
}

}  // namespace aggrlim
