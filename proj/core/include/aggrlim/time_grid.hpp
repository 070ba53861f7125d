#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aggrlim {

__extension__ typedef unsigned __int128 u128;

// Nonnegative rational time point num/den.
struct TimePoint {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  // Accepts "p/q", integers and plain decimals such as "0.25" or "1e-1";
  // decimals are converted exactly.
  static TimePoint parse(std::string_view text);
  // Exact rational for the shortest decimal representation of `t`.
  static TimePoint from_double(double t);

  // floor(n * num / den) in integer arithmetic.
  std::uint64_t steps(std::uint64_t n) const;
  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const;

  friend bool operator<(const TimePoint& a, const TimePoint& b) noexcept {
    return static_cast<u128>(a.num) * b.den < static_cast<u128>(b.num) * a.den;
  }
  friend bool operator==(const TimePoint& a, const TimePoint& b) noexcept {
    return static_cast<u128>(a.num) * b.den == static_cast<u128>(b.num) * a.den;
  }
};

// Throws ConfigError unless the grid is nonempty and strictly increasing.
void validate_grid(std::span<const TimePoint> grid);

std::vector<std::uint64_t> grid_steps(std::span<const TimePoint> grid, std::uint64_t n);

}  // namespace aggrlim
