#include "aggrlim/aggregation.hpp"

#include <algorithm>
#include <cmath>

#include "aggrlim/error.hpp"
#include "aggrlim/parallel.hpp"
#include "aggrlim/summation.hpp"

namespace aggrlim {

namespace {

// Sums per-copy vectors of width `width` for copies [0, copies): compensated
// within fixed chunks, then a fixed tree over chunks.
template <class CopyFn>
std::vector<double> reduce_over_copies(std::uint64_t copies, std::size_t width, unsigned threads,
                                       CopyFn&& contribution) {
  const std::uint64_t chunks = (copies + kCopiesPerChunk - 1) / kCopiesPerChunk;
  std::vector<std::vector<double>> partial(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    std::vector<CompensatedSum> acc(width);
    const std::uint64_t begin = c * kCopiesPerChunk;
    const std::uint64_t end = std::min(copies, begin + kCopiesPerChunk);
    for (std::uint64_t j = begin; j < end; ++j) {
      const std::vector<double> v = contribution(j);
      for (std::size_t i = 0; i < width; ++i) acc[i].add(v[i]);
    }
    partial[c].resize(width);
    for (std::size_t i = 0; i < width; ++i) partial[c][i] = acc[i].value();
  });
  return tree_reduce(partial);
}

double draw_alpha(const PanelSpec& spec, std::uint64_t copy, RngStream& stream) {
  if (!spec.fixed_alphas.empty()) return spec.fixed_alphas[copy];
  return sample_alpha(spec.mixing, stream);
}

}  // namespace

void PanelSpec::validate() const {
  if (copies < 1) throw ConfigError("panel needs N >= 1 copies");
  if (n < 1) throw ConfigError("panel needs time scale n >= 1");
  validate_grid(grid);
  if (!fixed_alphas.empty()) {
    if (fixed_alphas.size() != copies)
      throw ConfigError("fixed_alphas must list exactly one alpha per copy");
    for (double a : fixed_alphas) validate_alpha(a);
  }
  if (params.model() == Model::inar && fixed_alphas.empty() &&
      mixed_moment(mixing, 0, 1, 0).divergent)
    throw ConfigError("INAR centering needs E[1/(1-alpha)] < infinity (beta > 0)");
}

std::vector<double> copy_contribution(const PanelSpec& spec, std::span<const std::uint64_t> steps,
                                      std::uint64_t replicate, std::uint64_t copy) {
  RngStream stream(spec.seed, replicate, copy);
  const double alpha = draw_alpha(spec, copy, stream);
  std::vector<double> out(steps.size(), 0.0);
  const std::uint64_t last = steps.empty() ? 0 : steps.back();
  std::size_t next_point = 0;
  while (next_point < steps.size() && steps[next_point] == 0) ++next_point;

  if (spec.params.model() == Model::inar) {
    Inar1Stepper stepper(alpha, spec.params.inar1(), stream);
    const double mean = stepper.conditional_mean();
    std::int64_t total = 0;
    for (std::uint64_t k = 1; k <= last; ++k) {
      total += stepper.next();
      while (next_point < steps.size() && steps[next_point] == k) {
        // total - k * mean with a single rounding.
        out[next_point++] = std::fma(-static_cast<double>(k), mean, static_cast<double>(total));
      }
    }
  } else {
    Ar1Stepper stepper(alpha, spec.params.ar1(), stream);
    CompensatedSum total;
    for (std::uint64_t k = 1; k <= last; ++k) {
      total.add(stepper.next());
      while (next_point < steps.size() && steps[next_point] == k) out[next_point++] = total.value();
    }
  }
  return out;
}

AggregateSample simulate_panel_fdd(const PanelSpec& spec, std::uint64_t replicate,
                                   unsigned threads) {
  spec.validate();
  const auto steps = spec.steps();
  AggregateSample sample;
  sample.copies = spec.copies;
  sample.n = spec.n;
  sample.seed = spec.seed;
  sample.replicate = replicate;
  sample.values = reduce_over_copies(spec.copies, steps.size(), threads, [&](std::uint64_t j) {
    return copy_contribution(spec, steps, replicate, j);
  });
  return sample;
}

std::vector<AggregateSample> simulate_panel_batch(const PanelSpec& spec,
                                                  std::uint64_t first_replicate,
                                                  std::uint64_t count, unsigned threads) {
  spec.validate();
  std::vector<AggregateSample> out(count);
  parallel_for(count, threads, [&](std::size_t i) {
    out[i] = simulate_panel_fdd(spec, first_replicate + i, 1);
  });
  return out;
}

std::vector<double> normalize_N_first(const AggregateSample& sample) {
  if (sample.n < 2) throw ConfigError("N-first normalization needs n >= 2");
  if (sample.copies < 1) throw ConfigError("N-first normalization needs N >= 1");
  const double n = static_cast<double>(sample.n);
  const double scale = 1.0 / std::sqrt(n * std::log(n) * static_cast<double>(sample.copies));
  std::vector<double> out(sample.values);
  for (double& v : out) v *= scale;
  return out;
}

std::vector<double> normalize_n_first(const AggregateSample& sample) {
  if (sample.copies < 2) throw ConfigError("n-first normalization needs N >= 2");
  if (sample.n < 1) throw ConfigError("n-first normalization needs n >= 1");
  const double copies = static_cast<double>(sample.copies);
  const double scale = 1.0 / std::sqrt(static_cast<double>(sample.n) * copies * std::log(copies));
  std::vector<double> out(sample.values);
  for (double& v : out) v *= scale;
  return out;
}

std::vector<double> simple_aggregate(const SimpleAggregateSpec& spec, std::uint64_t replicate,
                                     unsigned threads) {
  if (spec.copies < 1) throw ConfigError("simple aggregate needs N >= 1");
  if (spec.times.empty()) throw ConfigError("simple aggregate needs at least one time index");
  if (!std::is_sorted(spec.times.begin(), spec.times.end()))
    throw ConfigError("simple aggregate time indices must be nondecreasing");
  const bool inar = spec.params.model() == Model::inar;
  if (mixed_moment(spec.mixing, 0, 1, inar ? 0 : 1).divergent)
    throw ConfigError(inar ? "simple aggregate needs E[1/(1-alpha)] < infinity"
                           : "simple aggregate needs E[1/(1-alpha^2)] < infinity");

  const std::uint64_t last = spec.times.back();
  auto contribution = [&](std::uint64_t copy) {
    RngStream stream(spec.seed, replicate, copy);
    const double alpha = sample_alpha(spec.mixing, stream);
    std::vector<double> out(spec.times.size());
    std::size_t next = 0;
    auto record = [&](std::uint64_t k, double centered) {
      while (next < spec.times.size() && spec.times[next] == k) out[next++] = centered;
    };
    if (inar) {
      Inar1Stepper stepper(alpha, spec.params.inar1(), stream);
      const double mean = stepper.conditional_mean();
      record(0, static_cast<double>(stepper.current()) - mean);
      for (std::uint64_t k = 1; k <= last; ++k)
        record(k, static_cast<double>(stepper.next()) - mean);
    } else {
      Ar1Stepper stepper(alpha, spec.params.ar1(), stream);
      record(0, stepper.current());
      for (std::uint64_t k = 1; k <= last; ++k) record(k, stepper.next());
    }
    return out;
  };
  std::vector<double> sums = reduce_over_copies(spec.copies, spec.times.size(), threads, contribution);
  const double scale = 1.0 / std::sqrt(static_cast<double>(spec.copies));
  for (double& v : sums) v *= scale;
  return sums;
}

double slope_summand(Model model, double alpha, double scale) {
  return conditional_long_run_variance(model, alpha, scale);
}

double slope_statistic(Model model, std::uint64_t copies, const MixingLaw& mixing, double scale,
                       RngStream& stream) {
  if (copies < 2) throw ConfigError("slope statistic needs N >= 2");
  CompensatedSum sum;
  for (std::uint64_t j = 0; j < copies; ++j)
    sum.add(slope_summand(model, sample_alpha(mixing, stream), scale));
  const double n = static_cast<double>(copies);
  return sum.value() / (n * std::log(n));
}

double slope_statistic(std::uint64_t copies, const MixingLaw& mixing, double lambda,
                       RngStream& stream) {
  return slope_statistic(Model::inar, copies, mixing, lambda, stream);
}

double slope_statistic_from_alphas(Model model, std::span<const double> alphas, double scale) {
  if (alphas.size() < 2) throw ConfigError("slope statistic needs N >= 2");
  CompensatedSum sum;
  for (double a : alphas) sum.add(slope_summand(model, a, scale));
  const double n = static_cast<double>(alphas.size());
  return sum.value() / (n * std::log(n));
}

double slope_exceedance_fraction(std::uint64_t copies, const MixingLaw& mixing, double lambda,
                                 double x, RngStream& stream) {
  if (copies < 1) throw ConfigError("need N >= 1");
  const double threshold = static_cast<double>(copies) * x;
  std::uint64_t hits = 0;
  for (std::uint64_t j = 0; j < copies; ++j)
    if (slope_summand(Model::inar, sample_alpha(mixing, stream), lambda) > threshold) ++hits;
  return static_cast<double>(hits) / static_cast<double>(copies);
}

double slope_truncated_mean(std::uint64_t copies, const MixingLaw& mixing, double lambda) {
  // E(Y; Y <= N) with Y = lambda (1 + alpha) / (1 - alpha)^2, i.e. over alpha <= 1 - h~(lambda, N).
  const double n = static_cast<double>(copies);
  const double upper = 1.0 - h_tilde(lambda, n);
  auto g = [lambda](double a) { return slope_summand(Model::inar, a, lambda); };
  QuadratureOptions opts;
  opts.abs_tol = 0.0;
  const auto r = mixing.integrate_density(g, 0.0, upper, opts);
  if (!r.converged) throw QuadratureError("truncated slope mean did not converge");
  return r.value;
}

double centered_slope_sum(std::uint64_t copies, const MixingLaw& mixing, double lambda,
                          RngStream& stream) {
  if (copies < 1) throw ConfigError("need N >= 1");
  CompensatedSum sum;
  for (std::uint64_t j = 0; j < copies; ++j)
    sum.add(slope_summand(Model::inar, sample_alpha(mixing, stream), lambda));
  const double n = static_cast<double>(copies);
  return sum.value() / n - slope_truncated_mean(copies, mixing, lambda);
}

}  // namespace aggrlim
