#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace aggrlim {

// Neumaier's compensated sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) noexcept {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

// Elementwise pairwise reduction of equally sized vectors over a fixed binary
// tree on their indices; the result depends only on the inputs' order.
std::vector<double> tree_reduce(std::span<const std::vector<double>> parts);

}  // namespace aggrlim
