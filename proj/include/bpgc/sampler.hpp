#pragma once

#include <cstdint>
#include <vector>

#include "bpgc/dataset.hpp"
#include "bpgc/params.hpp"

namespace bpgc {

enum class SamplerKind { gibbs, exact };

struct GibbsConfig {
  std::int64_t n = 0;
  std::int64_t burn_in = 1000;
  std::int64_t thin = 5;  // sweeps between retained draws
  std::uint64_t seed = 0;
  double init_y = 1.0;
};

struct SampleBatch {
  std::vector<Observation> draws;
  SamplerKind kind;
  std::uint64_t seed;
};

/// Alternates the two exact conditionals, X | Y = y Poisson with mean
/// exp(m10 - m11 y + m12 log y) and Y | X = x Gamma(m02 + m12 x) with rate
/// m01 + m11 x, keeping every thin-th sweep after burn_in.
SampleBatch gibbs_sample(const Params& params, const GibbsConfig& config);

/// Independent draws: X from its marginal pmf by inversion of a cumulative
/// table, then Y from the Gamma conditional at that X.
SampleBatch exact_sample(const Params& params, std::int64_t n,
                         std::uint64_t seed);

}  // namespace bpgc
