#pragma once

#include <cstdint>

#include "aggrlim/rng.hpp"

namespace aggrlim {

// log(k!) for k >= 0. Exact table below 10, Stirling series with the
// de Moivre correction above; relative error below 1e-15.
double log_factorial(double k) noexcept;

// Stirling remainder log(k!) - [k log k - k + log(2 pi k)/2].
double stirling_tail(double k) noexcept;

// Largest Poisson mean accepted by sample_poisson.
inline constexpr double kMaxPoissonMean = 1e12;

// Exact Poisson(mean) draw. Inversion for mean < 10, Hormann's transformed
// rejection (PTRS) otherwise. The acceptance test evaluates the log-pmf in a
// cancellation-free form, so it stays exact for means up to kMaxPoissonMean.
// Throws RuntimeAbort when mean > kMaxPoissonMean.
std::int64_t sample_poisson(RngStream& rng, double mean);

// Exact Binomial(trials, p) draw. Inversion when min(p, 1-p) * trials < 10,
// Hormann's BTRS otherwise; handles trials up to 2^53.
std::int64_t sample_binomial(RngStream& rng, std::int64_t trials, double p);

}  // namespace aggrlim
