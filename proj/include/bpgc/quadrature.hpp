#pragma once

#include <functional>

namespace bpgc {

struct QuadratureResult {
  double value;
  double error_bound;
  long evaluations;
};

/// Adaptive Gauss-Kronrod 15(7) integration on [a, b].  Bisects until the
/// local Kronrod-Gauss discrepancy meets max(abs_tol, rel_tol * |I|).  Nodes
/// are interior, so integrable endpoint singularities are tolerated.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double rel_tol = 1e-10,
                           double abs_tol = 1e-14, int max_depth = 60);

/// Cut point t with Gamma(shape, rate) tail mass above t below eps.
double gamma_tail_cut(double shape, double rate, double eps);

}  // namespace bpgc
