#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aggrlim {

enum class Budget { small, standard, large };

std::string_view to_string(Budget b) noexcept;
// Accepts "small", "default" and "large".
Budget parse_budget(std::string_view text);

// One comparison inside a criterion. The estimate passes iff it lies in
// [band_lo, band_hi]; ci_lo/ci_hi carry the estimator's own band when it has one.
struct Check {
  std::string name;
  double reference = 0.0;
  double estimate = 0.0;
  double band_lo = 0.0;
  double band_hi = 0.0;
  bool pass = false;
  double ci_lo = std::numeric_limits<double>::quiet_NaN();
  double ci_hi = std::numeric_limits<double>::quiet_NaN();
};

struct CriterionResult {
  std::string id;     // "1" .. "11", or "cf"
  std::string title;
  bool gating = true;
  bool pass = true;   // all checks pass
  double seconds = 0.0;
  std::vector<Check> checks;
};

inline constexpr std::uint64_t kDefaultVerifySeed = 1;

struct VerifyOptions {
  Budget budget = Budget::standard;
  std::uint64_t seed = kDefaultVerifySeed;
  unsigned threads = 1;
  // Called after each criterion finishes.
  std::function<void(const CriterionResult&)> on_result;
};

// exact: 1-5, mc: 6 7 8 10 11, slope: 9, tail: 5, cf: soft diagnostic, all: everything.
std::vector<std::string> suite_criteria(std::string_view suite);
const std::vector<std::string>& all_criteria();

CriterionResult run_criterion(std::string_view id, const VerifyOptions& options);
std::vector<CriterionResult> run_suite(std::string_view suite, const VerifyOptions& options);

bool gating_pass(std::span<const CriterionResult> results) noexcept;

}  // namespace aggrlim
