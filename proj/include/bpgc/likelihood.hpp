#pragma once

#include "bpgc/dataset.hpp"
#include "bpgc/density.hpp"
#include "bpgc/params.hpp"

namespace bpgc {

/// Full-sample log-likelihood through the sufficient statistics and a single
/// normalizer evaluation:
///   l = -sum logGamma(x_i + 1) - sum log y_i + n c
///       + m10 S_x - m01 S_y - m11 S_xy + m02 S_logy + m12 S_xlogy.
double log_likelihood(const Params& params, const Dataset& data,
                      double rel_tol = 1e-12);

/// Log-likelihood and its gradient in (m10, m01, m11, m02, m12), sharing one
/// series pass.  The gradient is the sufficient-statistic vector minus n times
/// the pmf expectation of the per-coordinate term derivatives.
struct LoglikValue {
  double loglik;
  Vec5 gradient;
};
LoglikValue loglik_gradient(const Params& params, const Dataset& data,
                            double rel_tol = 1e-12);

}  // namespace bpgc
