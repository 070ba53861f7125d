#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace aggrlim {

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  std::size_t max_intervals = 2000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

// Globally adaptive 15-point Gauss-Kronrod on [a, b]; the interval with the
// largest error estimate is bisected until the total error meets
// max(abs_tol, rel_tol * |value|). Only interior nodes are evaluated, so
// integrable endpoint singularities are tolerated; strong ones should sit at
// the origin, where floating point leaves room for deep bisection. `breaks` (sorted, inside
// (a, b)) seed the initial partition, e.g. at kinks of the integrand.
QuadratureResult integrate_gk(const Integrand& f, double a, double b,
                              const QuadratureOptions& opts = {},
                              std::span<const double> breaks = {});

// One G7/K15 panel. Returns {kronrod, |kronrod - gauss|}.
std::pair<double, double> gauss_kronrod_15(const Integrand& f, double a, double b);

// Limit of a slowly converging sequence of partial sums by Wynn's epsilon
// algorithm. Uses the last element when fewer than three are given.
double wynn_epsilon(std::span<const double> partial_sums);

}  // namespace aggrlim
