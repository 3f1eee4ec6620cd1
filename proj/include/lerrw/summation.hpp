#pragma once

#include <cmath>
#include <limits>
#include <utility>

namespace lerrw {

/// Neumaier (improved Kahan) summation.
class CompensatedSum {
 public:
  void add(double value) noexcept {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      comp_ += (sum_ - t) + value;
    } else {
      comp_ += (value - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double value) noexcept {
    add(value);
    return *this;
  }

  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// ln(exp(a) + exp(b)) without overflow.
inline double log_add_exp(double a, double b) noexcept {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

/// Running sum of positive terms supplied by their logarithms.
///
/// The value is exp(shift) * (compensated sum). The shift only moves when a
/// new term would push the scaled sum out of a safe window, so sequences of
/// moderate magnitude are summed in plain linear arithmetic.
class LogAccumulator {
 public:
  void add_log(double log_term) noexcept {
    if (std::isinf(log_term) && log_term < 0) return;
    if (empty_) {
      shift_ = log_term;
      empty_ = false;
    } else if (log_term - shift_ > kRescaleAbove) {
      rescale(log_term);
    }
    sum_.add(std::exp(log_term - shift_));
  }

  bool empty() const noexcept { return empty_; }

  /// ln of the accumulated sum; -inf when nothing was added.
  double log_value() const noexcept {
    if (empty_) return -std::numeric_limits<double>::infinity();
    return shift_ + std::log(sum_.value());
  }

  /// Linear value; may be +inf when the sum exceeds the double range.
  double value() const noexcept {
    if (empty_) return 0.0;
    return std::exp(shift_) * sum_.value();
  }

 private:
  static constexpr double kRescaleAbove = 300.0;

  void rescale(double new_shift) noexcept {
    const double factor = std::exp(shift_ - new_shift);
    CompensatedSum scaled;
    scaled.add(sum_.value() * factor);
    sum_ = scaled;
    shift_ = new_shift;
  }

  double shift_ = 0.0;
  CompensatedSum sum_;
  bool empty_ = true;
};

}  // namespace lerrw
