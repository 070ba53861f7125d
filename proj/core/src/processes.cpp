#include "aggrlim/processes.hpp"

#include <cmath>
#include <sstream>

#include "aggrlim/error.hpp"
#include "aggrlim/samplers.hpp"

namespace aggrlim {

std::string_view to_string(Model m) noexcept { return m == Model::ar ? "ar" : "inar"; }

Model parse_model(std::string_view text) {
  if (text == "ar" || text == "AR") return Model::ar;
  if (text == "inar" || text == "INAR") return Model::inar;
  throw ConfigError("unknown model '" + std::string(text) + "' (expected ar or inar)");
}

ModelParams ModelParams::ar(double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw ConfigError("sigma2 must be positive");
  return {Model::ar, sigma2};
}

ModelParams ModelParams::inar(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be positive");
  return {Model::inar, lambda};
}

void validate_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in [0, 1)");
}

Ar1Stepper::Ar1Stepper(double alpha, Ar1Params params, RngStream& stream)
    : stream_(&stream), alpha_(alpha), sigma_(std::sqrt(params.sigma2)) {
  validate_alpha(alpha);
  if (!(params.sigma2 > 0.0)) throw ConfigError("sigma2 must be positive");
  x_ = sigma_ / std::sqrt((1.0 - alpha) * (1.0 + alpha)) * stream_->normal();
}

Inar1Stepper::Inar1Stepper(double alpha, Inar1Params params, RngStream& stream)
    : stream_(&stream), alpha_(alpha), lambda_(params.lambda) {
  validate_alpha(alpha);
  if (!(params.lambda > 0.0)) throw ConfigError("lambda must be positive");
  mean_ = params.lambda / (1.0 - alpha);
  if (mean_ > kMaxPoissonMean) {
    std::ostringstream os;
    os.precision(17);
    os << "INAR path aborted: stationary mean lambda/(1-alpha) = " << mean_
       << " exceeds " << kMaxPoissonMean << " (alpha = " << alpha << ")";
    throw RuntimeAbort(os.str());
  }
  x_ = sample_poisson(*stream_, mean_);
}

std::int64_t Inar1Stepper::next() {
  x_ = sample_binomial(*stream_, x_, alpha_) + sample_poisson(*stream_, lambda_);
  return x_;
}

ArPath simulate_ar1_path(double alpha, Ar1Params params, std::size_t n, RngStream& stream) {
  Ar1Stepper stepper(alpha, params, stream);
  ArPath path{alpha, {}};
  path.values.reserve(n + 1);
  path.values.push_back(stepper.current());
  for (std::size_t k = 0; k < n; ++k) path.values.push_back(stepper.next());
  return path;
}

InarPath simulate_inar1_path(double alpha, Inar1Params params, std::size_t n,
                             RngStream& stream) {
  Inar1Stepper stepper(alpha, params, stream);
  InarPath path{alpha, {}};
  path.values.reserve(n + 1);
  path.values.push_back(stepper.current());
  for (std::size_t k = 0; k < n; ++k) path.values.push_back(stepper.next());
  return path;
}

double conditional_mean_inar(double alpha, Inar1Params params) {
  validate_alpha(alpha);
  return params.lambda / (1.0 - alpha);
}

namespace {

double stationary_variance(Model model, double alpha, double scale) {
  return model == Model::inar ? scale / (1.0 - alpha) : scale / ((1.0 - alpha) * (1.0 + alpha));
}

}  // namespace

double exact_conditional_cov(Model model, double alpha, double scale, std::uint64_t lag) {
  validate_alpha(alpha);
  const double power = lag == 0 ? 1.0 : std::pow(alpha, static_cast<double>(lag));
  return power * stationary_variance(model, alpha, scale);
}

double exact_conditional_partial_sum_variance(Model model, double alpha, double scale,
                                              std::uint64_t m) {
  validate_alpha(alpha);
  if (m == 0) throw ConfigError("partial sum length must be >= 1");
  const double v = stationary_variance(model, alpha, scale);
  const double md = static_cast<double>(m);
  const double u = 1.0 - alpha;
  if (md * u < 0.5) {
    // The closed form cancels badly when m (1 - alpha) is small; sum
    // m + 2 sum_{j<m} (m - j) alpha^j directly instead.
    double acc = md;
    double power = 1.0;
    for (std::uint64_t j = 1; j < m; ++j) {
      power *= alpha;
      acc += 2.0 * static_cast<double>(m - j) * power;
    }
    return v * acc;
  }
  const double tail = -std::expm1(md * std::log1p(-u));  // 1 - alpha^m
  return v * (md * (1.0 + alpha) / u - 2.0 * alpha * tail / (u * u));
}

double conditional_long_run_variance(Model model, double alpha, double scale) {
  validate_alpha(alpha);
  const double u = 1.0 - alpha;
  return model == Model::inar ? scale * (1.0 + alpha) / (u * u) : scale / (u * u);
}

}  // namespace aggrlim
