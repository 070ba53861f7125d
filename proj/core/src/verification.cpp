#include "aggrlim/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <map>

#include <Eigen/Dense>

#include "aggrlim/aggregation.hpp"
#include "aggrlim/error.hpp"
#include "aggrlim/mixing.hpp"
#include "aggrlim/parallel.hpp"
#include "aggrlim/rng.hpp"
#include "aggrlim/stats.hpp"
#include "aggrlim/theory.hpp"

namespace aggrlim {

std::string_view to_string(Budget b) noexcept {
  switch (b) {
    case Budget::small: return "small";
    case Budget::standard: return "default";
    case Budget::large: return "large";
  }
  return "default";
}

Budget parse_budget(std::string_view text) {
  if (text == "small") return Budget::small;
  if (text == "default") return Budget::standard;
  if (text == "large") return Budget::large;
  throw ConfigError("unknown budget '" + std::string(text) + "' (expected small, default or large)");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MixingLaw reference_law() { return MixingLaw(PsiProfile::constant(), 1.0); }

std::uint64_t criterion_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed + 0x1000 * index);
}

std::uint64_t scaled_count(std::uint64_t base, Budget b) {
  switch (b) {
    case Budget::small: return std::max<std::uint64_t>(base / 10, 2);
    case Budget::large: return base * 4;
    case Budget::standard: break;
  }
  return base;
}

// Smaller samples get proportionally wider bands; larger ones keep the stated tolerance.
double widen(double tol, Budget b) { return b == Budget::small ? tol * std::sqrt(10.0) : tol; }

Check relative(std::string name, double reference, double estimate, double tol) {
  Check c;
  c.name = std::move(name);
  c.reference = reference;
  c.estimate = estimate;
  c.band_lo = reference - tol * std::abs(reference);
  c.band_hi = reference + tol * std::abs(reference);
  c.pass = estimate >= c.band_lo && estimate <= c.band_hi;
  return c;
}

Check absolute(std::string name, double reference, double estimate, double tol) {
  Check c;
  c.name = std::move(name);
  c.reference = reference;
  c.estimate = estimate;
  c.band_lo = reference - tol;
  c.band_hi = reference + tol;
  c.pass = estimate >= c.band_lo && estimate <= c.band_hi;
  return c;
}

Check at_most(std::string name, double estimate, double bound) {
  Check c;
  c.name = std::move(name);
  c.reference = 0.0;
  c.estimate = estimate;
  c.band_lo = 0.0;
  c.band_hi = bound;
  c.pass = estimate >= 0.0 && estimate <= bound;
  return c;
}

// Passes iff estimate < previous.
Check decreasing(std::string name, double previous, double estimate) {
  Check c;
  c.name = std::move(name);
  c.reference = previous;
  c.estimate = estimate;
  c.band_lo = 0.0;
  c.band_hi = previous;
  c.pass = estimate < previous;
  return c;
}

std::string exp_label(std::uint64_t v) {
  const int e = static_cast<int>(std::lround(std::log10(static_cast<double>(v))));
  std::uint64_t p = 1;
  for (int i = 0; i < e; ++i) p *= 10;
  if (p == v) return "1e" + std::to_string(e);
  return std::to_string(v);
}

// ---------------------------------------------------------------------------

void criterion_1(CriterionResult& out) {
  constexpr std::uint64_t kMax = 200;
  // Brute force, grown one column at a time: B(m1, m2) = B(m1, m2 - 1) + sum_k 1 / (|k - m2| + 1).
  std::vector<long double> column(kMax + 1, 0.0L);  // column[m1] = B(m1, m2)
  double worst = 0.0;
  for (std::uint64_t m2 = 1; m2 <= kMax; ++m2) {
    long double partial = 0.0L;
    for (std::uint64_t m1 = 1; m1 <= kMax; ++m1) {
      const auto gap = m1 > m2 ? m1 - m2 : m2 - m1;
      partial += 1.0L / static_cast<long double>(gap + 1);
      column[m1] += partial;
      const double brute = static_cast<double>(column[m1]);
      const double fast = harmonic_double_sum(m1, m2);
      worst = std::max(worst, std::abs(fast - brute) / brute);
    }
  }
  out.checks.push_back(at_most("max relative error, m1, m2 <= 200", worst, 1e-12));
}

void covariance_sweep(CriterionResult& out, Model model, double reference) {
  const auto law = reference_law();
  const std::uint64_t ms[] = {1000, 10000, 100000, 1000000};
  double previous = kInf;
  double last = 0.0;
  std::uint64_t previous_m = 0;
  for (std::uint64_t m : ms) {
    const auto cov = exact_prelimit_cov(model, m, m, 1.0, law);
    const double md = static_cast<double>(m);
    last = cov.value / (md * std::log(md));
    const double dev = std::abs(last - reference) / reference;
    if (previous_m != 0)
      out.checks.push_back(decreasing(
          "deviation " + exp_label(previous_m) + " -> " + exp_label(m), previous, dev));
    previous = dev;
    previous_m = m;
  }
  out.checks.push_back(relative("m=1e6, t=(1,1)", reference, last, 0.10));
  const std::uint64_t m = 1000000;
  const double md = static_cast<double>(m);
  const auto cross = exact_prelimit_cov(model, m, 2 * m, 1.0, law);
  out.checks.push_back(relative("m=1e6, t=(1,2)", reference, cross.value / (md * std::log(md)), 0.10));
}

void criterion_4(CriterionResult& out) {
  const auto law = reference_law();
  double inar_err = 0.0;
  double ar_err = 0.0;
  double ik = std::log(2.0);
  for (unsigned k = 0; k <= 50; ++k) {
    if (k > 0) ik = 1.0 / k - ik;
    const auto inar = mixed_moment(law, k, 1, 0);
    const auto ar = mixed_moment(law, k, 1, 1);
    inar_err = std::max(inar_err, std::abs(inar.value - 2.0 / (k + 1.0)));
    ar_err = std::max(ar_err, std::abs(ar.value - 2.0 * ik));
  }
  out.checks.push_back(at_most("INAR 2/(k+1), k <= 50", inar_err, 1e-8));
  out.checks.push_back(at_most("AR 2 I_k, k <= 50", ar_err, 1e-8));

  int mismatches = 0;
  for (double beta : {-0.5, 0.0, 0.5, 1.0, 1.5, 2.0}) {
    const MixingLaw b(PsiProfile::constant(), beta);
    for (unsigned p = 0; p <= 3; ++p) {
      const bool expected = p >= beta + 1.0;
      if (mixed_moment(b, 0, p, 0).divergent != expected) ++mismatches;
    }
  }
  out.checks.push_back(at_most("divergence flag mismatches", mismatches, 0.0));
}

void criterion_5(CriterionResult& out, const VerifyOptions& opt) {
  double worst = 0.0;
  for (double lambda : {0.5, 1.0, 5.0}) {
    for (int i = 0; i <= 32; ++i) {
      const double x = std::pow(10.0, -2.0 + 0.25 * i);
      const double u = h_tilde(lambda, x);
      worst = std::max(worst, std::abs(lambda * (2.0 - u) / (u * u) - x) / x);
    }
  }
  out.checks.push_back(at_most("h_tilde inversion, x in [1e-2, 1e6]", worst, 1e-10));

  const auto law = reference_law();
  for (double x : {0.5, 1.0, 2.0, 10.0}) {
    const double tail = scaled_tail(law, 1.0, 100000000, x);
    out.checks.push_back(relative("scaled_tail N=1e8 x=" + std::to_string(x).substr(0, 4),
                                  2.0 / x, tail, 1e-3));
  }

  constexpr std::uint64_t kCopies = 1000000;
  const double p = scaled_tail(law, 1.0, kCopies, 1.0) / static_cast<double>(kCopies);
  const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(kCopies));
  RngStream stream(criterion_seed(opt.seed, 5), 0, 0);
  const double frac = slope_exceedance_fraction(kCopies, law, 1.0, 1.0, stream);
  out.checks.push_back(absolute("summand tail fraction N=1e6 x=1", p, frac, 3.0 * sigma));
}

void criterion_6(CriterionResult& out, const VerifyOptions& opt) {
  const std::uint64_t reps = scaled_count(10000, opt.budget);
  SimpleAggregateSpec spec{.copies = 10000,
                           .times = {0, 1, 3},
                           .params = ModelParams::inar(1.0),
                           .mixing = reference_law(),
                           .seed = criterion_seed(opt.seed, 6)};
  Eigen::MatrixXd data(static_cast<Eigen::Index>(reps), 3);
  std::vector<std::vector<double>> rows(reps);
  parallel_for(reps, opt.threads, [&](std::size_t r) { rows[r] = simple_aggregate(spec, r, 1); });
  for (std::size_t r = 0; r < reps; ++r)
    for (Eigen::Index j = 0; j < 3; ++j)
      data(static_cast<Eigen::Index>(r), j) = rows[r][static_cast<std::size_t>(j)];
  const auto cov = empirical_cov_matrix(data);
  const double tol = widen(0.10, opt.budget);
  const double refs[] = {2.0, 1.0, 0.5};
  const char* names[] = {"cov lag 0", "cov lag 1", "cov lag 3"};
  for (Eigen::Index j = 0; j < 3; ++j) {
    auto c = relative(names[j], refs[j], cov.estimate(0, j), tol);
    c.ci_lo = cov.lower(0, j);
    c.ci_hi = cov.upper(0, j);
    out.checks.push_back(c);
  }
  std::vector<double> lag0(reps);
  for (std::size_t r = 0; r < reps; ++r) lag0[r] = rows[r][0];
  const auto ks = ks_normal(lag0, 0.0, 2.0, 0.01);
  out.checks.push_back(at_most("KS D vs Normal(0, 2), lag 0", ks.statistic, ks.critical));
}

std::vector<double> centered_sums(const PanelSpec& spec, std::uint64_t reps, unsigned threads,
                                  double norm) {
  const auto samples = simulate_panel_batch(spec, 0, reps, threads);
  std::vector<double> out(samples.size());
  for (std::size_t r = 0; r < samples.size(); ++r) out[r] = samples[r].values.back() / norm;
  return out;
}

Check variance_check(std::string name, std::span<const double> xs, double reference, double tol) {
  const double var = sample_variance(xs);
  std::vector<double> squares(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) squares[i] = xs[i] * xs[i];
  const auto mom = mom_estimate(squares, default_mom_blocks(squares.size()));
  auto c = relative(std::move(name), reference, var, tol);
  c.ci_lo = mom.lower;
  c.ci_hi = mom.upper;
  return c;
}

void criterion_7(CriterionResult& out, const VerifyOptions& opt) {
  const std::uint64_t reps = scaled_count(10000, opt.budget);
  constexpr std::uint64_t m = 10000;
  const double tol = widen(0.05, opt.budget);
  std::uint64_t stream = 0;
  for (Model model : {Model::inar, Model::ar}) {
    for (double alpha : {0.3, 0.7}) {
      PanelSpec spec{.copies = 1,
                     .n = m,
                     .grid = {TimePoint{1, 1}},
                     .params = model == Model::inar ? ModelParams::inar(1.0) : ModelParams::ar(1.0),
                     .mixing = reference_law(),
                     .seed = criterion_seed(opt.seed, 70 + stream++),
                     .fixed_alphas = {alpha}};
      const auto xs = centered_sums(spec, reps, opt.threads, std::sqrt(static_cast<double>(m)));
      out.checks.push_back(variance_check(
          std::string(to_string(model)) + " alpha=" + std::to_string(alpha).substr(0, 3), xs,
          conditional_long_run_variance(model, alpha, 1.0), tol));
    }
  }
}

// N-then-n pipeline at N = n = 1e3 on the grid {1/2, 1}.
void n_first_pipeline(CriterionResult& out, const VerifyOptions& opt, Model model,
                      std::uint64_t seed) {
  const auto law = reference_law();
  const std::uint64_t reps = scaled_count(400, opt.budget);
  constexpr std::uint64_t kN = 1000;
  PanelSpec spec{.copies = kN,
                 .n = kN,
                 .grid = {TimePoint{1, 2}, TimePoint{1, 1}},
                 .params = model == Model::inar ? ModelParams::inar(1.0) : ModelParams::ar(1.0),
                 .mixing = law,
                 .seed = seed,
                 .fixed_alphas = {}};
  const auto samples = simulate_panel_batch(spec, 0, reps, opt.threads);
  Eigen::MatrixXd data(static_cast<Eigen::Index>(reps), 2);
  for (std::size_t r = 0; r < samples.size(); ++r) {
    const auto v = normalize_N_first(samples[r]);
    data(static_cast<Eigen::Index>(r), 0) = v[0];
    data(static_cast<Eigen::Index>(r), 1) = v[1];
  }
  const auto cov = empirical_cov_matrix(data);
  const double c = limit_variance_constant({model, Regime::N_first, 1.0, law.psi1()});
  const double norm = static_cast<double>(kN) * std::log(static_cast<double>(kN));
  const std::uint64_t steps[] = {kN / 2, kN};
  const double t[] = {0.5, 1.0};
  const double tol_exact = widen(0.10, opt.budget);
  const double tol_limit = widen(0.25, opt.budget);
  const std::string prefix(to_string(model));
  double var_exact = 0.0;
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index j = i; j < 2; ++j) {
      const auto ii = static_cast<std::size_t>(i);
      const auto jj = static_cast<std::size_t>(j);
      const double exact = exact_prelimit_cov(model, steps[ii], steps[jj], 1.0, law).value / norm;
      if (i == 1 && j == 1) var_exact = exact;
      const std::string entry = "(" + std::to_string(t[ii]).substr(0, 3) + "," +
                                std::to_string(t[jj]).substr(0, 3) + ")";
      auto ce = relative(prefix + " vs exact " + entry, exact, cov.estimate(i, j), tol_exact);
      auto cl = relative(prefix + " vs limit " + entry, c * std::min(t[ii], t[jj]),
                         cov.estimate(i, j), tol_limit);
      ce.ci_lo = cl.ci_lo = cov.lower(i, j);
      ce.ci_hi = cl.ci_hi = cov.upper(i, j);
      out.checks.push_back(ce);
      out.checks.push_back(cl);
    }
  }
  std::vector<double> last(reps);
  for (std::size_t r = 0; r < reps; ++r) last[r] = data(static_cast<Eigen::Index>(r), 1);
  const auto ks = ks_normal(last, 0.0, var_exact, 0.01);
  out.checks.push_back(at_most(prefix + " KS D at t=1", ks.statistic, ks.critical));
}

// Conditional CLT for a fixed panel of four drawn alphas.
void fixed_panel(CriterionResult& out, const VerifyOptions& opt, Model model, std::uint64_t seed) {
  const auto law = reference_law();
  const std::uint64_t reps = scaled_count(10000, opt.budget);
  constexpr std::uint64_t n = 10000;
  RngStream draw(seed, ~std::uint64_t{0}, 0);
  std::vector<double> alphas(4);
  double reference = 0.0;
  for (double& a : alphas) {
    a = sample_alpha(law, draw);
    reference += conditional_long_run_variance(model, a, 1.0);
  }
  PanelSpec spec{.copies = alphas.size(),
                 .n = n,
                 .grid = {TimePoint{1, 1}},
                 .params = model == Model::inar ? ModelParams::inar(1.0) : ModelParams::ar(1.0),
                 .mixing = law,
                 .seed = seed,
                 .fixed_alphas = alphas};
  const auto xs = centered_sums(spec, reps, opt.threads, std::sqrt(static_cast<double>(n)));
  out.checks.push_back(variance_check(std::string(to_string(model)) + " fixed panel N=4 n=1e4", xs,
                                      reference, widen(0.05, opt.budget)));
}

std::vector<std::uint64_t> slope_sizes(Budget b) {
  if (b == Budget::small) return {1000, 100000, 1000000};
  return {1000, 100000, 10000000};
}

std::size_t slope_trials(Budget b) {
  switch (b) {
    case Budget::small: return 20;
    case Budget::large: return 200;
    case Budget::standard: break;
  }
  return 100;
}

void criterion_9(CriterionResult& out, const VerifyOptions& opt) {
  const auto sizes = slope_sizes(opt.budget);
  const auto rows = slope_sweep(Model::inar, reference_law(), 1.0, sizes, slope_trials(opt.budget),
                                criterion_seed(opt.seed, 9), opt.threads);
  const auto& top = rows.back();
  auto c = relative("median at N=" + exp_label(top.copies), top.reference, top.median, 0.25);
  c.ci_lo = top.q25;
  c.ci_hi = top.q75;
  out.checks.push_back(c);
  out.checks.push_back(decreasing(
      "median deviation N=" + exp_label(rows.front().copies) + " -> " + exp_label(top.copies),
      rows.front().rel_dev, top.rel_dev));
}

void criterion_11(CriterionResult& out, const VerifyOptions& opt) {
  n_first_pipeline(out, opt, Model::ar, criterion_seed(opt.seed, 11));
  fixed_panel(out, opt, Model::ar, criterion_seed(opt.seed, 111));
  const std::uint64_t top = slope_sizes(opt.budget).back();
  const auto rows = slope_sweep(Model::ar, reference_law(), 1.0, std::span(&top, 1),
                                slope_trials(opt.budget), criterion_seed(opt.seed, 1111), opt.threads);
  auto c = relative("ar slope median at N=" + exp_label(top), rows[0].reference, rows[0].median, 0.25);
  c.ci_lo = rows[0].q25;
  c.ci_hi = rows[0].q75;
  out.checks.push_back(c);
}

void criterion_cf(CriterionResult& out, const VerifyOptions& opt) {
  const auto law = reference_law();
  const std::uint64_t copies = opt.budget == Budget::small ? 100000 : 1000000;
  const std::uint64_t reps = scaled_count(1000, opt.budget);
  const std::uint64_t seed = criterion_seed(opt.seed, 12);
  std::vector<double> sums(reps);
  parallel_for(reps, opt.threads, [&](std::size_t r) {
    RngStream stream(seed, r, 0);
    sums[r] = centered_slope_sum(copies, law, 1.0, stream);
  });
  const std::vector<double> thetas = {0.5, 1.0, 2.0};
  const auto emp = empirical_cf(sums, thetas);
  const double tol = widen(0.05, opt.budget);
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const auto ref = stable_cf(thetas[i], 1.0, law.psi1());
    const std::string th = std::to_string(thetas[i]).substr(0, 3);
    out.checks.push_back(absolute("Re cf theta=" + th, ref.real(), emp[i].real(), tol));
    out.checks.push_back(absolute("Im cf theta=" + th, ref.imag(), emp[i].imag(), tol));
  }
}

struct Entry {
  const char* title;
  bool gating;
};

const std::map<std::string, Entry, std::less<>>& registry() {
  static const std::map<std::string, Entry, std::less<>> r = {
      {"1", {"harmonic double sum vs brute force", true}},
      {"2", {"INAR exact covariance convergence to 4 min(t_i, t_j)", true}},
      {"3", {"AR exact covariance convergence to 2 min(t_i, t_j)", true}},
      {"4", {"closed-form mixed moments and divergence flags", true}},
      {"5", {"h_tilde inversion and scaled tail", true}},
      {"6", {"simple aggregate covariances and normality", true}},
      {"7", {"fixed-alpha long-run variances", true}},
      {"8", {"INAR N-then-n pipeline", true}},
      {"9", {"INAR slope law of large numbers", true}},
      {"10", {"INAR fixed panel n-then-N backbone", true}},
      {"11", {"AR analogues of 8, 9 and 10", true}},
      {"cf", {"empirical vs stable characteristic function", false}},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& all_criteria() {
  static const std::vector<std::string> ids = {"1", "2", "3", "4", "5", "6",
                                               "7", "8", "9", "10", "11", "cf"};
  return ids;
}

std::vector<std::string> suite_criteria(std::string_view suite) {
  if (suite == "exact") return {"1", "2", "3", "4", "5"};
  if (suite == "mc") return {"6", "7", "8", "10", "11"};
  if (suite == "slope") return {"9"};
  if (suite == "tail") return {"5"};
  if (suite == "cf") return {"cf"};
  if (suite == "all") return all_criteria();
  throw ConfigError("unknown suite '" + std::string(suite) +
                    "' (expected exact, mc, slope, tail, cf or all)");
}

CriterionResult run_criterion(std::string_view id, const VerifyOptions& opt) {
  const auto& reg = registry();
  const auto it = reg.find(id);
  if (it == reg.end()) throw ConfigError("unknown criterion '" + std::string(id) + "'");
  CriterionResult out;
  out.id = it->first;
  out.title = it->second.title;
  out.gating = it->second.gating;
  const auto start = std::chrono::steady_clock::now();
  if (id == "1") criterion_1(out);
  else if (id == "2") covariance_sweep(out, Model::inar, 4.0);
  else if (id == "3") covariance_sweep(out, Model::ar, 2.0);
  else if (id == "4") criterion_4(out);
  else if (id == "5") criterion_5(out, opt);
  else if (id == "6") criterion_6(out, opt);
  else if (id == "7") criterion_7(out, opt);
  else if (id == "8") n_first_pipeline(out, opt, Model::inar, criterion_seed(opt.seed, 8));
  else if (id == "9") criterion_9(out, opt);
  else if (id == "10") fixed_panel(out, opt, Model::inar, criterion_seed(opt.seed, 10));
  else if (id == "11") criterion_11(out, opt);
  else criterion_cf(out, opt);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.pass = std::all_of(out.checks.begin(), out.checks.end(), [](const Check& c) { return c.pass; });
  return out;
}

std::vector<CriterionResult> run_suite(std::string_view suite, const VerifyOptions& opt) {
  std::vector<CriterionResult> out;
  for (const auto& id : suite_criteria(suite)) {
    out.push_back(run_criterion(id, opt));
    if (opt.on_result) opt.on_result(out.back());
  }
  return out;
}

bool gating_pass(std::span<const CriterionResult> results) noexcept {
  return std::all_of(results.begin(), results.end(),
                     [](const CriterionResult& r) { return !r.gating || r.pass; });
}

}  // namespace aggrlim
