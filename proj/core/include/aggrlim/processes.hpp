#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "aggrlim/rng.hpp"

namespace aggrlim {

enum class Model { ar, inar };

std::string_view to_string(Model m) noexcept;
Model parse_model(std::string_view text);

struct Ar1Params {
  double sigma2 = 1.0;  // innovation variance
};

struct Inar1Params {
  double lambda = 1.0;  // Poisson innovation intensity
};

// Model kind together with its single scale parameter (sigma^2 or lambda).
class ModelParams {
 public:
  static ModelParams ar(double sigma2);
  static ModelParams inar(double lambda);

  Model model() const noexcept { return model_; }
  double scale() const noexcept { return scale_; }
  Ar1Params ar1() const noexcept { return {scale_}; }
  Inar1Params inar1() const noexcept { return {scale_}; }

 private:
  ModelParams(Model m, double s) : model_(m), scale_(s) {}
  Model model_;
  double scale_;
};

template <class Value>
struct Path {
  double alpha = 0.0;
  std::vector<Value> values;  // X_0 .. X_n
};

using ArPath = Path<double>;
using InarPath = Path<std::int64_t>;

void validate_alpha(double alpha);

// Stationary AR(1) started from N(0, sigma^2 / (1 - alpha^2)), advanced one
// step at a time so callers never hold the path.
class Ar1Stepper {
 public:
  Ar1Stepper(double alpha, Ar1Params params, RngStream& stream);
  double current() const noexcept { return x_; }
  double next() noexcept {
    x_ = alpha_ * x_ + sigma_ * stream_->normal();
    return x_;
  }

 private:
  RngStream* stream_;
  double alpha_;
  double sigma_;
  double x_;
};

// Stationary INAR(1) with Poisson(lambda) innovations, started from
// Poisson(lambda / (1 - alpha)); thinning is one binomial draw per step.
class Inar1Stepper {
 public:
  Inar1Stepper(double alpha, Inar1Params params, RngStream& stream);
  std::int64_t current() const noexcept { return x_; }
  std::int64_t next();
  double conditional_mean() const noexcept { return mean_; }

 private:
  RngStream* stream_;
  double alpha_;
  double lambda_;
  double mean_;
  std::int64_t x_;
};

ArPath simulate_ar1_path(double alpha, Ar1Params params, std::size_t n, RngStream& stream);
InarPath simulate_inar1_path(double alpha, Inar1Params params, std::size_t n, RngStream& stream);

// E(X_k | alpha) = lambda / (1 - alpha).
double conditional_mean_inar(double alpha, Inar1Params params);

// Cov(X_0, X_k | alpha): alpha^k lambda / (1 - alpha) or alpha^k sigma^2 / (1 - alpha^2).
double exact_conditional_cov(Model model, double alpha, double scale, std::uint64_t lag);

// Var(sum_{k=1}^m (X_k - E(X_k | alpha)) | alpha)
//   = v(alpha) [m (1 + alpha) / (1 - alpha) - 2 alpha (1 - alpha^m) / (1 - alpha)^2].
double exact_conditional_partial_sum_variance(Model model, double alpha, double scale,
                                              std::uint64_t m);

// The m -> infinity limit of the above divided by m:
// lambda (1 + alpha) / (1 - alpha)^2 or sigma^2 / (1 - alpha)^2.
double conditional_long_run_variance(Model model, double alpha, double scale);

}  // namespace aggrlim
