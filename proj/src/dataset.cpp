#include "bpgc/dataset.hpp"

#include <cmath>

#include "bpgc/special_functions.hpp"

namespace bpgc {

void validate_observation(const Observation& obs) {
  if (obs.x < 0 || obs.x > 2147483647) {
    throw Error(errc::invalid_observation,
                "x must be an integer in [0, 2^31 - 1]");
  }
  if (!std::isfinite(obs.y) || obs.y < 1e-300) {
    throw Error(errc::invalid_observation, "y must be finite and positive");
  }
}

Dataset::Dataset(std::vector<Observation> observations)
    : obs_(std::move(observations)) {
  if (obs_.empty()) {
    throw Error(errc::invalid_observation, "dataset needs at least one row");
  }
  suffstats_.setZero();
  sum_log_factorial_ = 0.0;
  for (const Observation& o : obs_) {
    validate_observation(o);
    const double x = static_cast<double>(o.x);
    const double logy = std::log(o.y);
    suffstats_[0] += x;
    suffstats_[1] += o.y;
    suffstats_[2] += x * o.y;
    suffstats_[3] += logy;
    suffstats_[4] += x * logy;
    sum_log_factorial_ += log_gamma(x + 1.0);
  }
}

}  // namespace bpgc
