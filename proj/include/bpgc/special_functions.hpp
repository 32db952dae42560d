#pragma once

#include <cmath>
#include <limits>

namespace bpgc {

inline double log_gamma(double x) { return std::lgamma(x); }

/// Digamma psi(x) for x > 0.  Recurrence shifts the argument above 6, then
/// the Bernoulli asymptotic series applies; absolute error below 1e-14 over
/// the positive axis.
double digamma(double x);

/// Streaming log-sum-exp: log(sum_i exp(l_i)) without leaving log scale.
class LogSumExp {
 public:
  void add(double log_term) {
    if (count_ == 0 || log_term > max_) {
      sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
      max_ = log_term;
    } else {
      sum_ += std::exp(log_term - max_);
    }
    ++count_;
  }
  double value() const {
    return count_ == 0 ? -std::numeric_limits<double>::infinity()
                       : max_ + std::log(sum_);
  }
  long count() const { return count_; }

 private:
  double max_ = 0.0;
  double sum_ = 0.0;
  long count_ = 0;
};

}  // namespace bpgc
