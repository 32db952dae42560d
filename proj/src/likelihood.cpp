#include "bpgc/likelihood.hpp"

#include <cmath>

#include "bpgc/special_functions.hpp"

namespace bpgc {

namespace {

double loglik_from_normalizer(const Params& params, const Dataset& data,
                              double c) {
  const Vec5& t = data.suffstats();
  const double n = static_cast<double>(data.n());
  return -data.sum_log_factorial() - t[3] + n * c + params.m10 * t[0] -
         params.m01 * t[1] - params.m11 * t[2] + params.m02 * t[3] +
         params.m12 * t[4];
}

}  // namespace

double log_likelihood(const Params& params, const Dataset& data,
                      double rel_tol) {
  return loglik_from_normalizer(params, data,
                                log_normalizer(params, rel_tol).c);
}

LoglikValue loglik_gradient(const Params& params, const Dataset& data,
                            double rel_tol) {
  const NormalizerSeries series = normalizer_series(params, rel_tol);

  // Expectation of each series-term derivative under the count pmf, via
  // normalized weights p_x = exp(t_x - log_sum).
  Vec5 expectation = Vec5::Zero();
  for (std::size_t k = 0; k < series.log_terms.size(); ++k) {
    const double p = std::exp(series.log_terms[k] - series.log_sum);
    if (p == 0.0) continue;
    const double x = static_cast<double>(k);
    const double shape = params.m02 + params.m12 * x;
    const double rate = params.m01 + params.m11 * x;
    const double d_m01 = -shape / rate;
    const double d_m02 = digamma(shape) - std::log(rate);
    expectation[0] += p * x;
    expectation[1] += p * d_m01;
    expectation[2] += p * x * d_m01;
    expectation[3] += p * d_m02;
    expectation[4] += p * x * d_m02;
  }

  const Vec5& t = data.suffstats();
  Vec5 stat;
  stat << t[0], -t[1], -t[2], t[3], t[4];
  const double n = static_cast<double>(data.n());

  LoglikValue out;
  out.loglik = loglik_from_normalizer(params, data, series.normalizer.c);
  out.gradient = stat - n * expectation;
  return out;
}

}  // namespace bpgc
