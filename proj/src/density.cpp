#include "bpgc/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bpgc/special_functions.hpp"

namespace bpgc {

namespace {

double series_term(const Params& p, std::int64_t x) {
  const double xd = static_cast<double>(x);
  const double shape = p.m02 + p.m12 * xd;
  const double rate = p.m01 + p.m11 * xd;
  return log_gamma(shape) + p.m10 * xd - shape * std::log(rate) -
         log_gamma(xd + 1.0);
}

}  // namespace

NormalizerSeries normalizer_series(const Params& params, double rel_tol,
                                   std::int64_t max_terms) {
  if (!(rel_tol > 0.0) || !(rel_tol < 1.0)) {
    throw Error(errc::invalid_distribution_parameter,
                "rel_tol must lie in (0, 1)");
  }
  // In the compound-Poisson corner (m11 = 0, m12 = 1) the term ratio tends to
  // exp(m10)/m01 from below or above; everywhere else it eventually decreases,
  // so the last observed ratio dominates the tail.
  const double ratio_limit = (params.m11 == 0.0 && params.m12 == 1.0)
                                 ? std::exp(params.m10) / params.m01
                                 : 0.0;
  LogSumExp acc;
  std::vector<double> log_terms;
  log_terms.reserve(256);
  int quiet = 0;
  for (std::int64_t x = 0; x < max_terms; ++x) {
    const double t = series_term(params, x);
    if (!std::isfinite(t)) {
      throw Error(errc::overflow, "normalizer series term is non-finite at x=" +
                                      std::to_string(x));
    }
    acc.add(t);
    log_terms.push_back(t);
    if (x == 0) continue;

    const double contrib = std::exp(t - acc.value());
    const bool decreasing = t < log_terms[x - 1];
    if (decreasing && contrib < rel_tol) {
      ++quiet;
    } else {
      quiet = 0;
    }
    if (quiet >= 50) {
      const double ratio = std::exp(t - log_terms[x - 1]);
      const double rho = std::max(ratio, ratio_limit);
      if (rho < 1.0) {
        const double tail = contrib * rho / (1.0 - rho);
        if (tail <= rel_tol) {
          NormalizerSeries s;
          s.log_sum = acc.value();
          s.normalizer = LogNormalizer{-s.log_sum, x + 1, tail};
          s.log_terms = std::move(log_terms);
          return s;
        }
      }
    }
  }
  throw Error(errc::no_convergence,
              "normalizer series did not settle within " +
                  std::to_string(max_terms) + " terms");
}

LogNormalizer log_normalizer(const Params& params, double rel_tol,
                             std::int64_t max_terms) {
  return normalizer_series(params, rel_tol, max_terms).normalizer;
}

double log_pdf(const Params& params, const Observation& obs,
               const LogNormalizer& norm) {
  validate_observation(obs);
  const double x = static_cast<double>(obs.x);
  const double logy = std::log(obs.y);
  return -log_gamma(x + 1.0) - logy + norm.c + params.m10 * x -
         params.m01 * obs.y - params.m11 * x * obs.y + params.m02 * logy +
         params.m12 * x * logy;
}

double log_pmf_x(const Params& params, std::int64_t x,
                 const LogNormalizer& norm) {
  if (x < 0 || x > 2147483647) {
    throw Error(errc::invalid_observation,
                "x must be an integer in [0, 2^31 - 1]");
  }
  return series_term(params, x) + norm.c;
}

double log_pdf_y(const Params& params, double y, const LogNormalizer& norm) {
  validate_observation(Observation{0, y});
  const double logy = std::log(y);
  const double poisson_mean = std::exp(params.m10 - params.m11 * y +
                                       params.m12 * logy);
  return (params.m02 - 1.0) * logy + poisson_mean + norm.c - params.m01 * y;
}

double conditional_poisson_mean(const Params& params, double y) {
  validate_observation(Observation{0, y});
  return std::exp(params.m10 - params.m11 * y + params.m12 * std::log(y));
}

GammaConditional conditional_gamma(const Params& params, std::int64_t x) {
  if (x < 0 || x > 2147483647) {
    throw Error(errc::invalid_observation,
                "x must be an integer in [0, 2^31 - 1]");
  }
  const double xd = static_cast<double>(x);
  return GammaConditional{params.m02 + params.m12 * xd,
                          params.m01 + params.m11 * xd};
}

double cdf_x(const Params& params, std::int64_t x, const LogNormalizer& norm) {
  if (x < 0) return 0.0;
  double cum = 0.0;
  for (std::int64_t k = 0; k <= x; ++k) {
    cum += std::exp(log_pmf_x(params, k, norm));
  }
  return std::min(cum, 1.0);
}

std::int64_t quantile_x(const Params& params, double u,
                        const LogNormalizer& norm) {
  if (!(u > 0.0) || !(u < 1.0)) {
    throw Error(errc::invalid_distribution_parameter, "u must lie in (0, 1)");
  }
  const std::vector<double> table = cumulative_pmf_x(params, norm);
  const auto it = std::lower_bound(table.begin(), table.end(), u);
  if (it == table.end()) return static_cast<std::int64_t>(table.size()) - 1;
  return static_cast<std::int64_t>(it - table.begin());
}

double local_dependence(const Params& params, double y) {
  validate_observation(Observation{0, y});
  return params.m12 / y - params.m11;
}

double score_x(const Params& params, double x, double y) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw Error(errc::invalid_observation, "x must be non-negative");
  }
  validate_observation(Observation{0, y});
  return -digamma(x + 1.0) + params.m10 - params.m11 * y +
         params.m12 * std::log(y);
}

double score_y(const Params& params, const Observation& obs) {
  validate_observation(obs);
  const double x = static_cast<double>(obs.x);
  return (-params.m01 * obs.y + params.m02 - params.m11 * x * obs.y +
          params.m12 * x - 1.0) /
         obs.y;
}

std::optional<double> find_conditional_mode(const Params& params,
                                            std::int64_t x) {
  const GammaConditional g = conditional_gamma(params, x);
  if (g.shape > 1.0) return (g.shape - 1.0) / g.rate;
  return std::nullopt;
}

std::vector<double> cumulative_pmf_x(const Params& params,
                                     const LogNormalizer& norm, double tail,
                                     std::int64_t max_terms) {
  std::vector<double> cumulative;
  double cum = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  int quiet = 0;
  for (std::int64_t k = 0; k < max_terms; ++k) {
    const double p = std::exp(log_pmf_x(params, k, norm));
    cum += p;
    cumulative.push_back(cum);
    if (cum >= 1.0 - tail) return cumulative;
    // Rounding can leave the sum a few ulps shy of the target; once the
    // terms decay below the sum's resolution the table is as complete as
    // doubles allow.
    if (p <= prev && p < cum * 1e-17) {
      if (++quiet >= 50) return cumulative;
    } else {
      quiet = 0;
    }
    prev = p;
  }
  throw Error(errc::no_convergence, "pmf table exceeded the term cap");
}

}  // namespace bpgc
