#pragma once

#include <cstdint>
#include <vector>

#include "bpgc/params.hpp"

namespace bpgc {

/// One paired observation: a count x and a positive continuous y.
struct Observation {
  std::int64_t x;
  double y;
};

/// Throws Error(invalid_observation) unless x is an integer in [0, 2^31 - 1]
/// and y is finite with y >= 1e-300.
void validate_observation(const Observation& obs);

inline Observation make_observation(std::int64_t x, double y) {
  Observation obs{x, y};
  validate_observation(obs);
  return obs;
}

/// Immutable sample with cached sufficient statistics.
///
/// suffstats() = (sum x, sum y, sum x*y, sum log y, sum x*log y), accumulated
/// in observation order so recomputation reproduces it bit for bit.  The
/// factorial term sum log Gamma(x_i + 1) is cached alongside since the
/// likelihood needs it.
class Dataset {
 public:
  explicit Dataset(std::vector<Observation> observations);

  const std::vector<Observation>& observations() const { return obs_; }
  std::size_t n() const { return obs_.size(); }
  const Vec5& suffstats() const { return suffstats_; }
  double sum_log_factorial() const { return sum_log_factorial_; }

 private:
  std::vector<Observation> obs_;
  Vec5 suffstats_;
  double sum_log_factorial_;
};

}  // namespace bpgc
