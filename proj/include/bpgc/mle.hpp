#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "bpgc/dataset.hpp"
#include "bpgc/params.hpp"

namespace bpgc {

struct MleConfig {
  Vec5 init = Vec5::Ones();
  bool moment_init = false;  // overrides init with a moment-guided start
  double barrier_mu0 = 1.0;
  double barrier_shrink = 0.2;
  int outer_iters = 12;
  double inner_tol = 1e-8;
  int max_inner_iters = 500;
  bool compute_std_errors = true;
};

struct MleTraceEntry {
  double mu;
  double loglik;
  double grad_norm;  // infinity norm of the likelihood gradient / max(1, n)
};

struct MleResult {
  Params estimates;
  double loglik = 0.0;
  bool converged = false;
  std::vector<MleTraceEntry> trace;
  // Per-coordinate standard errors; NaN where a clamped coordinate withholds
  // one.  Absent when the information matrix is not invertible.
  std::optional<Vec5> std_errors;
  std::array<bool, 5> at_boundary{};  // true where m11 or m12 was clamped to 0
  std::size_t n = 0;
};

/// Moment-guided starting point: m10 = log mean(x), m01 = mean(y)/var(y),
/// m02 = m01 * mean(y), interactions 0.01, all guard-railed into the
/// feasible region.
Params moment_start(const Dataset& data);

/// Maximizes the log-likelihood subject to m10, m01, m02 > 0 and
/// m11, m12 >= 0 with an adaptive log-barrier: outer rounds shrink mu while a
/// BFGS inner loop with backtracking line search maximizes
///   l(theta) + mu * [log m10 + log m01 + log m02
///                    + log(m11 + 1e-10) + log(m12 + 1e-10)],
/// rejecting infeasible proposals.  The outer loop stops when the parameter
/// movement across a round drops below inner_tol.  m11/m12 below 1e-8 with an
/// outward-pointing likelihood gradient are clamped to 0 afterwards when the
/// clamped point is still a valid parameter.  converged reports whether the
/// scaled gradient over free coordinates fell below 1e-4; a failed fit is
/// returned with converged = false rather than thrown, so the trace survives.
/// Throws NonIdentifiable for n < 5.
MleResult fit_mle(const Dataset& data, const MleConfig& config = {});

/// Observed information: negative Hessian of the log-likelihood by central
/// finite differences of the analytic gradient, step 1e-5 * max(|theta_j|, 1)
/// per coordinate (one-sided next to a constraint boundary), symmetrized.
Mat5 observed_information(const Params& params, const Dataset& data);

/// sqrt of the diagonal of the inverse observed information.  Throws
/// BoundaryOptimum when m11 or m12 sits at 0 and SingularInformation when the
/// matrix is not invertible.
Vec5 std_errors(const Params& params, const Dataset& data);

}  // namespace bpgc
