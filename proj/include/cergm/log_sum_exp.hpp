#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace cergm {

/// Streaming log(sum_i m_i exp(x_i)) with a running maximum shift and
/// Neumaier-compensated accumulation in long double. Merging is exact up to
/// the final rounding, so a fixed merge order gives reproducible results.
class LogSumExp {
 public:
  void add(double log_weight) { add(log_weight, 1.0L); }

  void add(double log_weight, long double multiplicity) {
    if (multiplicity == 0.0L || log_weight == -std::numeric_limits<double>::infinity()) return;
    const long double x = log_weight;
    if (empty_) {
      max_ = x;
      empty_ = false;
    } else if (x > max_) {
      const long double scale = std::exp(max_ - x);
      sum_ *= scale;
      comp_ *= scale;
      max_ = x;
    }
    accumulate(multiplicity * std::exp(x - max_));
  }

  void merge(const LogSumExp& other) {
    if (other.empty_) return;
    if (empty_) {
      *this = other;
      return;
    }
    const long double m = std::max(max_, other.max_);
    const long double a = std::exp(max_ - m), b = std::exp(other.max_ - m);
    const long double s = sum_ * a, c = comp_ * a;
    sum_ = s;
    comp_ = c;
    max_ = m;
    accumulate(other.sum_ * b);
    accumulate(other.comp_ * b);
  }

  bool empty() const { return empty_; }

  // -inf for an empty sum.
  double value() const {
    if (empty_) return -std::numeric_limits<double>::infinity();
    return static_cast<double>(max_ + std::log(sum_ + comp_));
  }

 private:
  void accumulate(long double term) {
    const long double t = sum_ + term;
    if (std::fabs(sum_) >= std::fabs(term))
      comp_ += (sum_ - t) + term;
    else
      comp_ += (term - t) + sum_;
    sum_ = t;
  }

  bool empty_ = true;
  long double max_ = 0.0L;
  long double sum_ = 0.0L;
  long double comp_ = 0.0L;
};

}  // namespace cergm
