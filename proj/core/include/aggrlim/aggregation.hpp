#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "aggrlim/mixing.hpp"
#include "aggrlim/processes.hpp"
#include "aggrlim/rng.hpp"
#include "aggrlim/time_grid.hpp"

namespace aggrlim {

// One aggregation experiment: N independent copies observed on the time
// grid floor(n t). Copy j of replicate r draws from RngStream(seed, r, j).
struct PanelSpec {
  std::uint64_t copies = 1;  // N
  std::uint64_t n = 1;       // time scale
  std::vector<TimePoint> grid;
  ModelParams params = ModelParams::inar(1.0);
  MixingLaw mixing = MixingLaw(PsiProfile::constant(), 1.0);
  std::uint64_t seed = 0;
  // When set, copy j uses fixed_alphas[j] instead of a draw from `mixing`.
  std::vector<double> fixed_alphas;

  void validate() const;
  std::vector<std::uint64_t> steps() const { return grid_steps(grid, n); }
};

struct AggregateSample {
  std::vector<double> values;  // centered aggregate at each grid point
  std::uint64_t copies = 0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;
};

// Copies per reduction chunk. Chunks are summed in copy order with
// compensation and then combined over a fixed tree, so results never depend
// on the worker count.
inline constexpr std::uint64_t kCopiesPerChunk = 256;

// Centered partial sums sum_{k<=m_i} (X_k - E(X_k | alpha)) of a single copy.
std::vector<double> copy_contribution(const PanelSpec& spec, std::span<const std::uint64_t> steps,
                                      std::uint64_t replicate, std::uint64_t copy);

AggregateSample simulate_panel_fdd(const PanelSpec& spec, std::uint64_t replicate,
                                   unsigned threads = 1);

// Replicates first_replicate .. first_replicate + count - 1, parallel over replicates.
std::vector<AggregateSample> simulate_panel_batch(const PanelSpec& spec,
                                                  std::uint64_t first_replicate,
                                                  std::uint64_t count, unsigned threads);

// S / sqrt(n log(n) N); requires n >= 2.
std::vector<double> normalize_N_first(const AggregateSample& sample);
// S / sqrt(n N log(N)); requires N >= 2.
std::vector<double> normalize_n_first(const AggregateSample& sample);

// N^{-1/2} sum_j (X^(j)_k - E(X^(j)_k | alpha^(j))) at the lags in `times`.
struct SimpleAggregateSpec {
  std::uint64_t copies = 1;
  std::vector<std::uint64_t> times;  // time indices k >= 0, nondecreasing
  ModelParams params = ModelParams::inar(1.0);
  MixingLaw mixing = MixingLaw(PsiProfile::constant(), 1.0);
  std::uint64_t seed = 0;
};

std::vector<double> simple_aggregate(const SimpleAggregateSpec& spec, std::uint64_t replicate,
                                     unsigned threads = 1);

// lambda (1 + alpha) / (1 - alpha)^2 (INAR) or sigma^2 / (1 - alpha)^2 (AR).
double slope_summand(Model model, double alpha, double scale);

// (N log N)^{-1} sum_{j<=N} lambda (1 + alpha_j) / (1 - alpha_j)^2 with alpha_j
// drawn from `stream`.
double slope_statistic(std::uint64_t copies, const MixingLaw& mixing, double lambda,
                       RngStream& stream);
double slope_statistic(Model model, std::uint64_t copies, const MixingLaw& mixing, double scale,
                       RngStream& stream);
double slope_statistic_from_alphas(Model model, std::span<const double> alphas, double scale);

// Fraction of N slope summands above N x; estimates scaled_tail(.., N, x) / N.
double slope_exceedance_fraction(std::uint64_t copies, const MixingLaw& mixing, double lambda,
                                 double x, RngStream& stream);

// sum_j [Y_j / N - E(Y / N; Y <= N)] for INAR slope summands Y_j; converges in
// law to the infinitely divisible limit whose characteristic function is
// theory::stable_cf.
double centered_slope_sum(std::uint64_t copies, const MixingLaw& mixing, double lambda,
                          RngStream& stream);
double slope_truncated_mean(std::uint64_t copies, const MixingLaw& mixing, double lambda);

}  // namespace aggrlim
