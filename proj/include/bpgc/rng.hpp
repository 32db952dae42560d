#pragma once

#include <cstdint>

#include "bpgc/params.hpp"

namespace bpgc {

/// xoshiro256++ with splitmix64 seeding.  One stream per generator task; no
/// global state.  Streams are not shareable across threads mid-sequence.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform real strictly inside (0, 1).
  double uniform();

  /// Uniform integer in [0, bound), bound >= 1.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Standard normal (Marsaglia polar, spare cached).
  double normal();

 private:
  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Stable seed-splitting rule for parallel replicates: replicate i of a run
/// seeded with s uses child_seed(s, i).  A splitmix64 mix of
/// s XOR (golden-ratio constant * (i + 1)); documented so simulation studies
/// stay reproducible under any thread count.
std::uint64_t child_seed(std::uint64_t seed, std::uint64_t index);

/// Poisson variate: inversion below mean 10, PTRS transformed rejection above.
std::int64_t poisson_variate(double mean, RandomStream& stream);

/// Gamma variate with rate parameterization: Marsaglia-Tsang squeeze for
/// shape >= 1, shape boost u^{1/shape} below 1.
double gamma_variate(double shape, double rate, RandomStream& stream);

}  // namespace bpgc
