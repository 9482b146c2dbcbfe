#pragma once

#include <cmath>
#include <limits>

namespace multigrowth {

// Neumaier's compensated summation. The per-player binomial sums mix terms
// spanning hundreds of orders of magnitude, where naive accumulation loses
// the small ones.
class NeumaierSum {
 public:
  void add(double value) noexcept {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value))
      comp_ += (sum_ - t) + value;
    else
      comp_ += (value - t) + sum_;
    sum_ = t;
  }

  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Accumulates ln(sum of exp(x_i)) with a running max shift, so wealth can be
// averaged across replicas without ever leaving log space. Order sensitive
// only at the last-bit level; merging is used to keep reductions in a fixed
// order regardless of thread count.
class LogSumExp {
 public:
  void add_log(double x) noexcept {
    if (x == -std::numeric_limits<double>::infinity()) return;
    if (x <= max_) {
      sum_ += std::exp(x - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - x) + 1.0;
      max_ = x;
    }
  }

  void merge(const LogSumExp& other) noexcept {
    if (other.sum_ == 0.0) return;
    if (other.max_ <= max_) {
      sum_ += other.sum_ * std::exp(other.max_ - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - other.max_) + other.sum_;
      max_ = other.max_;
    }
  }

  // ln(sum exp(x_i)); -inf if nothing finite was added.
  double log_total() const noexcept {
    if (sum_ == 0.0) return -std::numeric_limits<double>::infinity();
    return max_ + std::log(sum_);
  }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
};

}  // namespace multigrowth
