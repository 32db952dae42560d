#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bpgc/dataset.hpp"
#include "bpgc/params.hpp"

namespace bpgc {

/// Log-scale normalizing constant of the joint density, plus truncation
/// metadata.  c = -log sum_x exp(t_x) with
///   t_x = logGamma(m02 + m12 x) + m10 x
///         - (m02 + m12 x) log(m01 + m11 x) - logGamma(x + 1).
struct LogNormalizer {
  double c;
  std::int64_t terms_used;
  double tail_bound;  // upper bound on truncated mass relative to the sum
};

/// Normalizer series with its terms retained, so pmf weights and the
/// normalizer gradient reuse a single pass.
struct NormalizerSeries {
  std::vector<double> log_terms;  // t_0 .. t_{terms-1}
  double log_sum;                 // log sum_x exp(t_x); c = -log_sum
  LogNormalizer normalizer;
};

inline constexpr std::int64_t kDefaultMaxTerms = 100000;

/// Sums the series with a running log-sum-exp.  Truncates once 50 consecutive
/// terms each contribute less than rel_tol of the running sum while the term
/// sequence is decreasing, and the geometric tail bound drops below rel_tol.
/// Throws no_convergence past max_terms and overflow on a non-finite term.
NormalizerSeries normalizer_series(const Params& params, double rel_tol = 1e-12,
                                   std::int64_t max_terms = kDefaultMaxTerms);

LogNormalizer log_normalizer(const Params& params, double rel_tol = 1e-12,
                             std::int64_t max_terms = kDefaultMaxTerms);

/// Joint log-density at (x, y):
///   -logGamma(x+1) - log y + c + m10 x - m01 y - m11 x y
///   + m02 log y + m12 x log y.
double log_pdf(const Params& params, const Observation& obs,
               const LogNormalizer& norm);

/// Marginal log-pmf of the count variate.
double log_pmf_x(const Params& params, std::int64_t x,
                 const LogNormalizer& norm);

/// Marginal log-density of the continuous variate:
///   (m02 - 1) log y + exp(m10 - m11 y) y^{m12} + c - m01 y.
double log_pdf_y(const Params& params, double y, const LogNormalizer& norm);

/// E(X | Y = y) = exp(m10 - m11 y + m12 log y), the Poisson conditional mean.
double conditional_poisson_mean(const Params& params, double y);

/// Gamma conditional of Y given X = x.
struct GammaConditional {
  double shape;  // m02 + m12 x
  double rate;   // m01 + m11 x
};
GammaConditional conditional_gamma(const Params& params, std::int64_t x);

/// CDF of the count marginal at x (right-continuous step function).
double cdf_x(const Params& params, std::int64_t x, const LogNormalizer& norm);

/// Smallest x with cdf_x(x) >= u, for u in (0, 1).
std::int64_t quantile_x(const Params& params, double u,
                        const LogNormalizer& norm);

/// Local dependence xi(y) = m12 / y - m11 (free of x).
double local_dependence(const Params& params, double y);

/// Score in the count direction with x extended to positive reals through
/// logGamma: -psi(x+1) + m10 - m11 y + m12 log y.
double score_x(const Params& params, double x, double y);
inline double score_x(const Params& params, const Observation& obs) {
  return score_x(params, static_cast<double>(obs.x), obs.y);
}

/// Score in the continuous direction:
///   (-m01 y + m02 - m11 x y + m12 x - 1) / y.
double score_y(const Params& params, const Observation& obs);

/// Interior mode (m02 + m12 x - 1)/(m01 + m11 x) of the Gamma conditional
/// when its shape exceeds 1; empty when the mode sits on the boundary at 0.
std::optional<double> find_conditional_mode(const Params& params,
                                            std::int64_t x);

/// Cumulative pmf table of the count marginal up to total mass >= 1 - tail
/// (or max_terms).  cumulative[k] = P(X <= k).
std::vector<double> cumulative_pmf_x(const Params& params,
                                     const LogNormalizer& norm,
                                     double tail = 1e-15,
                                     std::int64_t max_terms = kDefaultMaxTerms);

}  // namespace bpgc
