#include "aggrlim/summation.hpp"

#include "aggrlim/error.hpp"

namespace aggrlim {

namespace {

std::vector<double> reduce_range(std::span<const std::vector<double>> parts) {
  if (parts.size() == 1) return parts.front();
  const std::size_t half = parts.size() / 2;
  std::vector<double> left = reduce_range(parts.first(half));
  const std::vector<double> right = reduce_range(parts.subspan(half));
  for (std::size_t i = 0; i < left.size(); ++i) left[i] += right[i];
  return left;
}

}  // namespace

std::vector<double> tree_reduce(std::span<const std::vector<double>> parts) {
  if (parts.empty()) return {};
  for (const auto& p : parts)
    if (p.size() != parts.front().size()) throw ConfigError("tree_reduce: size mismatch");
  return reduce_range(parts);
}

}  // namespace aggrlim
