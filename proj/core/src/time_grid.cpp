#include "aggrlim/time_grid.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "aggrlim/error.hpp"

namespace aggrlim {

namespace {

std::uint64_t parse_u64(std::string_view s, std::string_view whole) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw ConfigError("invalid time point '" + std::string(whole) + "'");
  return v;
}

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    const auto r = a % b;
    a = b;
    b = r;
  }
  return a;
}

TimePoint reduced(u128 num, u128 den, std::string_view whole) {
  if (num == 0) return {0, 1};
  const auto g = gcd128(num, den);
  num /= g;
  den /= g;
  if (num > UINT64_MAX || den > UINT64_MAX)
    throw ConfigError("time point '" + std::string(whole) + "' is out of range");
  return {static_cast<std::uint64_t>(num), static_cast<std::uint64_t>(den)};
}

}  // namespace

TimePoint TimePoint::parse(std::string_view text) {
  const std::string_view whole = text;
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty() || text.front() == '-') throw ConfigError("invalid time point '" + std::string(whole) + "'");
  if (text.front() == '+') text.remove_prefix(1);
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = parse_u64(text.substr(0, slash), whole);
    const auto den = parse_u64(text.substr(slash + 1), whole);
    if (den == 0) throw ConfigError("time point '" + std::string(whole) + "' has zero denominator");
    return reduced(num, den, whole);
  }
  // Decimal: digits [. digits] [e|E [+|-] digits].
  std::string_view mantissa = text;
  long exponent = 0;
  if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = text.substr(0, e);
    std::string_view exp_text = text.substr(e + 1);
    const bool negative = !exp_text.empty() && exp_text.front() == '-';
    if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+'))
      exp_text.remove_prefix(1);
    exponent = static_cast<long>(parse_u64(exp_text, whole));
    if (negative) exponent = -exponent;
  }
  std::string digits;
  if (const auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    digits = std::string(mantissa.substr(0, dot)) + std::string(mantissa.substr(dot + 1));
    exponent -= static_cast<long>(mantissa.size() - dot - 1);
  } else {
    digits = std::string(mantissa);
  }
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigError("invalid time point '" + std::string(whole) + "'");
  while (digits.size() > 1 && digits.front() == '0') digits.erase(digits.begin());
  if (digits.size() > 19 || std::abs(exponent) > 19)
    throw ConfigError("time point '" + std::string(whole) + "' is out of range");
  u128 num = parse_u64(digits, whole);
  u128 den = 1;
  for (long i = 0; i < std::abs(exponent); ++i) (exponent > 0 ? num : den) *= 10;
  return reduced(num, den, whole);
}

TimePoint TimePoint::from_double(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("time points must be finite and >= 0");
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, t);
  return parse(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

std::uint64_t TimePoint::steps(std::uint64_t n) const {
  const auto prod = static_cast<u128>(n) * num / den;
  if (prod > UINT64_MAX) throw ConfigError("time point step count overflows");
  return static_cast<std::uint64_t>(prod);
}

std::string TimePoint::to_string() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

void validate_grid(std::span<const TimePoint> grid) {
  if (grid.empty()) throw ConfigError("time grid must be nonempty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i - 1] < grid[i])) throw ConfigError("time grid must be strictly increasing");
}

std::vector<std::uint64_t> grid_steps(std::span<const TimePoint> grid, std::uint64_t n) {
  std::vector<std::uint64_t> out;
  out.reserve(grid.size());
  for (const auto& t : grid) out.push_back(t.steps(n));
  return out;
}

}  // namespace aggrlim
