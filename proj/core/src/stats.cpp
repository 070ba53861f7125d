#include "aggrlim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aggrlim/aggregation.hpp"
#include "aggrlim/error.hpp"
#include "aggrlim/parallel.hpp"
#include "aggrlim/summation.hpp"

namespace aggrlim {

namespace {

// Linear-interpolation quantile of sorted data.
double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.size() == 1) return sorted.front();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

double median(std::vector<double> xs) {
  if (xs.empty()) throw ConfigError("median of empty sample");
  std::sort(xs.begin(), xs.end());
  return quantile_sorted(xs, 0.5);
}

double sample_mean(std::span<const double> xs) {
  if (xs.empty()) throw ConfigError("mean of empty sample");
  return compensated_sum(xs) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) throw ConfigError("variance needs at least two samples");
  const double m = sample_mean(xs);
  CompensatedSum s;
  for (double x : xs) s.add((x - m) * (x - m));
  return s.value() / static_cast<double>(xs.size() - 1);
}

std::size_t default_mom_blocks(std::size_t samples) noexcept {
  return std::clamp<std::size_t>(samples / 40, 1, 100);
}

EstimatorReport mom_estimate(std::span<const double> samples, std::size_t blocks) {
  if (samples.empty()) throw ConfigError("mom_estimate: empty input");
  if (blocks == 0 || samples.size() < blocks)
    throw ConfigError("mom_estimate: need at least as many samples as blocks");
  const std::size_t n = samples.size();
  std::vector<double> means(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t begin = b * n / blocks;
    const std::size_t end = (b + 1) * n / blocks;
    means[b] = compensated_sum(samples.subspan(begin, end - begin)) / static_cast<double>(end - begin);
  }
  std::sort(means.begin(), means.end());
  EstimatorReport r;
  r.blocks = blocks;
  r.estimate = quantile_sorted(means, 0.5);
  const double iqr = quantile_sorted(means, 0.75) - quantile_sorted(means, 0.25);
  const double half = 1.58 * iqr / std::sqrt(static_cast<double>(blocks));
  r.lower = r.estimate - half;
  r.upper = r.estimate + half;
  r.std_error = n >= 2 ? std::sqrt(sample_variance(samples) / static_cast<double>(n))
                       : std::numeric_limits<double>::quiet_NaN();
  return r;
}

CovarianceEstimate empirical_cov_matrix(const Eigen::MatrixXd& replicates, std::size_t blocks) {
  const auto rows = static_cast<std::size_t>(replicates.rows());
  const auto g = replicates.cols();
  if (rows < 2) throw ConfigError("empirical_cov_matrix needs at least two replicates");
  if (g < 1) throw ConfigError("empirical_cov_matrix needs at least one column");
  if (blocks == 0) blocks = default_mom_blocks(rows);
  blocks = std::min(blocks, rows);

  Eigen::VectorXd means(g);
  for (Eigen::Index j = 0; j < g; ++j) {
    std::vector<double> col(replicates.col(j).data(), replicates.col(j).data() + rows);
    means(j) = sample_mean(col);
  }
  CovarianceEstimate out;
  out.blocks = blocks;
  out.estimate.resize(g, g);
  out.lower.resize(g, g);
  out.upper.resize(g, g);
  out.plain.resize(g, g);
  std::vector<double> products(rows);
  for (Eigen::Index i = 0; i < g; ++i) {
    for (Eigen::Index j = i; j < g; ++j) {
      for (std::size_t r = 0; r < rows; ++r) {
        const auto ri = static_cast<Eigen::Index>(r);
        products[r] = (replicates(ri, i) - means(i)) * (replicates(ri, j) - means(j));
      }
      const auto rep = mom_estimate(products, blocks);
      const double plain = compensated_sum(products) / static_cast<double>(rows - 1);
      out.estimate(i, j) = out.estimate(j, i) = rep.estimate;
      out.lower(i, j) = out.lower(j, i) = rep.lower;
      out.upper(i, j) = out.upper(j, i) = rep.upper;
      out.plain(i, j) = out.plain(j, i) = plain;
    }
  }
  return out;
}

double kolmogorov_critical(double level) {
  if (level == 0.01) return 1.628;
  if (level == 0.05) return 1.358;
  if (level == 0.10) return 1.224;
  throw ConfigError("KS level must be one of 0.01, 0.05, 0.10");
}

KsResult ks_normal(std::span<const double> samples, double mean, double variance, double level) {
  if (samples.empty()) throw ConfigError("ks_normal: empty sample");
  if (!(variance > 0.0) || !std::isfinite(variance))
    throw ConfigError("ks_normal: variance must be positive");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double sd = std::sqrt(variance);
  const double r = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = 0.5 * std::erfc(-(sorted[i] - mean) / (sd * std::sqrt(2.0)));
    d = std::max({d, static_cast<double>(i + 1) / r - f, f - static_cast<double>(i) / r});
  }
  KsResult out;
  out.statistic = std::clamp(d, 0.0, 1.0);
  out.critical = kolmogorov_critical(level) / std::sqrt(r);
  out.pass = out.statistic < out.critical;
  return out;
}

std::vector<std::complex<double>> empirical_cf(std::span<const double> samples,
                                               std::span<const double> thetas) {
  if (samples.empty()) throw ConfigError("empirical_cf: empty sample");
  std::vector<std::complex<double>> out;
  out.reserve(thetas.size());
  const double r = static_cast<double>(samples.size());
  for (double theta : thetas) {
    CompensatedSum re, im;
    for (double s : samples) {
      re.add(std::cos(theta * s));
      im.add(std::sin(theta * s));
    }
    out.emplace_back(re.value() / r, im.value() / r);
  }
  return out;
}

double max_relative_deviation(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& reference) {
  if (estimate.rows() != reference.rows() || estimate.cols() != reference.cols())
    throw ConfigError("max_relative_deviation: shape mismatch");
  double worst = 0.0;
  for (Eigen::Index i = 0; i < estimate.rows(); ++i)
    for (Eigen::Index j = 0; j < estimate.cols(); ++j)
      if (reference(i, j) != 0.0)
        worst = std::max(worst, std::abs(estimate(i, j) - reference(i, j)) / std::abs(reference(i, j)));
  return worst;
}

namespace {

std::vector<double> grid_values(const std::vector<TimePoint>& grid) {
  std::vector<double> t;
  for (const auto& p : grid) t.push_back(p.value());
  return t;
}

Eigen::MatrixXd exact_second_moments(const SweepConfig& config, std::uint64_t n, double norm) {
  const auto steps = grid_steps(config.grid, n);
  const auto g = static_cast<Eigen::Index>(steps.size());
  Eigen::MatrixXd out(g, g);
  for (Eigen::Index i = 0; i < g; ++i) {
    for (Eigen::Index j = i; j < g; ++j) {
      const auto m = exact_prelimit_cov(config.params.model(), steps[static_cast<std::size_t>(i)],
                                        steps[static_cast<std::size_t>(j)],
                                        config.params.scale(), config.mixing);
      if (m.divergent) throw ConfigError("exact reference diverges for this mixing law");
      out(i, j) = out(j, i) = m.value / norm;
    }
  }
  return out;
}

SweepRow run_row(const SweepConfig& config, Regime regime, std::uint64_t copies, std::uint64_t n) {
  PanelSpec spec{.copies = copies,
                 .n = n,
                 .grid = config.grid,
                 .params = config.params,
                 .mixing = config.mixing,
                 .seed = config.seed,
                 .fixed_alphas = {}};
  const auto samples = simulate_panel_batch(spec, 0, config.replicates, config.threads);
  Eigen::MatrixXd data(static_cast<Eigen::Index>(samples.size()),
                       static_cast<Eigen::Index>(config.grid.size()));
  for (std::size_t r = 0; r < samples.size(); ++r) {
    const auto v = regime == Regime::N_first ? normalize_N_first(samples[r]) : normalize_n_first(samples[r]);
    for (std::size_t i = 0; i < v.size(); ++i)
      data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = v[i];
  }
  SweepRow row;
  row.regime = regime;
  row.copies = copies;
  row.n = n;
  row.grid = config.grid;
  row.seed = config.seed;
  row.replicates = config.replicates;
  row.estimate = empirical_cov_matrix(data, config.blocks);
  const double c = limit_variance_constant(
      {config.params.model(), regime, config.params.scale(), config.mixing.psi1()});
  const auto t = grid_values(config.grid);
  row.limit_reference = limit_cov_matrix(t, c);
  const double nd = static_cast<double>(n);
  const double norm = regime == Regime::N_first ? nd * std::log(nd)
                                                : nd * std::log(static_cast<double>(copies));
  row.exact_reference = exact_second_moments(config, n, norm);
  row.max_rel_dev_limit = max_relative_deviation(row.estimate.estimate, row.limit_reference);
  row.max_rel_dev_exact = max_relative_deviation(row.estimate.estimate, row.exact_reference);
  return row;
}

void validate_sweep(const SweepConfig& config) {
  validate_grid(config.grid);
  if (config.replicates < 2) throw ConfigError("sweep needs at least two replicates");
  if (config.swept.empty()) throw ConfigError("sweep list is empty");
}

}  // namespace

std::vector<SweepRow> sweep_N_first(const SweepConfig& config) {
  validate_sweep(config);
  std::vector<std::uint64_t> ns(config.swept);
  std::sort(ns.begin(), ns.end());
  std::vector<SweepRow> rows;
  for (std::uint64_t n : ns) {
    if (n < 2) throw ConfigError("N-first sweep needs n >= 2");
    rows.push_back(run_row(config, Regime::N_first, config.fixed, n));
  }
  return rows;
}

std::vector<SweepRow> sweep_n_first(const SweepConfig& config) {
  validate_sweep(config);
  std::vector<std::uint64_t> copies(config.swept);
  std::sort(copies.begin(), copies.end());
  std::vector<SweepRow> rows;
  for (std::uint64_t n_copies : copies) {
    if (n_copies < 2) throw ConfigError("n-first sweep needs N >= 2");
    rows.push_back(run_row(config, Regime::n_first, n_copies, config.fixed));
  }
  return rows;
}

std::vector<SlopeRow> slope_sweep(Model model, const MixingLaw& mixing, double scale,
                                  std::span<const std::uint64_t> copies, std::size_t trials,
                                  std::uint64_t seed, unsigned threads) {
  if (trials == 0) throw ConfigError("slope sweep needs at least one trial");
  const double reference = limit_variance_constant({model, Regime::n_first, scale, mixing.psi1()});
  std::vector<std::uint64_t> sorted(copies.begin(), copies.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<SlopeRow> rows;
  for (std::uint64_t n_copies : sorted) {
    std::vector<double> values(trials);
    parallel_for(trials, threads, [&](std::size_t t) {
      RngStream stream(seed ^ n_copies, t, 0);
      values[t] = slope_statistic(model, n_copies, mixing, scale, stream);
    });
    std::sort(values.begin(), values.end());
    SlopeRow row;
    row.model = model;
    row.copies = n_copies;
    row.trials = trials;
    row.median = quantile_sorted(values, 0.5);
    row.q25 = quantile_sorted(values, 0.25);
    row.q75 = quantile_sorted(values, 0.75);
    row.reference = reference;
    row.rel_dev = std::abs(row.median - reference) / reference;
    row.seed = seed;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace aggrlim
