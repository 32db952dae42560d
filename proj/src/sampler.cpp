#include "bpgc/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "bpgc/density.hpp"
#include "bpgc/rng.hpp"

namespace bpgc {

SampleBatch gibbs_sample(const Params& params, const GibbsConfig& config) {
  if (config.n <= 0) {
    throw Error(errc::invalid_distribution_parameter,
                "sample size must be positive");
  }
  if (config.burn_in < 0 || config.thin < 1) {
    throw Error(errc::invalid_distribution_parameter,
                "burn_in must be non-negative and thin at least 1");
  }
  if (!(config.init_y > 0.0) || !std::isfinite(config.init_y)) {
    throw Error(errc::invalid_distribution_parameter,
                "init_y must be finite and positive");
  }

  RandomStream stream(config.seed);
  SampleBatch batch;
  batch.kind = SamplerKind::gibbs;
  batch.seed = config.seed;
  batch.draws.reserve(static_cast<std::size_t>(config.n));

  double y = config.init_y;
  std::int64_t x = 0;
  const std::int64_t total_sweeps = config.burn_in + config.n * config.thin;
  for (std::int64_t sweep = 0; sweep < total_sweeps; ++sweep) {
    const double mean = conditional_poisson_mean(params, y);
    if (!std::isfinite(mean)) {
      throw Error(errc::overflow, "conditional Poisson mean overflowed");
    }
    x = poisson_variate(mean, stream);
    const GammaConditional cond = conditional_gamma(params, x);
    y = gamma_variate(cond.shape, cond.rate, stream);
    const std::int64_t post = sweep - config.burn_in + 1;
    if (post > 0 && post % config.thin == 0) {
      batch.draws.push_back(make_observation(x, y));
    }
  }
  return batch;
}

SampleBatch exact_sample(const Params& params, std::int64_t n,
                         std::uint64_t seed) {
  if (n <= 0) {
    throw Error(errc::invalid_distribution_parameter,
                "sample size must be positive");
  }
  const LogNormalizer norm = log_normalizer(params);
  const std::vector<double> cumulative = cumulative_pmf_x(params, norm);

  RandomStream stream(seed);
  SampleBatch batch;
  batch.kind = SamplerKind::exact;
  batch.seed = seed;
  batch.draws.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const double u = stream.uniform();
    auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
    const std::int64_t x =
        it == cumulative.end()
            ? static_cast<std::int64_t>(cumulative.size()) - 1
            : static_cast<std::int64_t>(it - cumulative.begin());
    const GammaConditional cond = conditional_gamma(params, x);
    const double y = gamma_variate(cond.shape, cond.rate, stream);
    batch.draws.push_back(make_observation(x, y));
  }
  return batch;
}

}  // namespace bpgc
