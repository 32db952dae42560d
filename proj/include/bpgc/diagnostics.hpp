#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bpgc/density.hpp"
#include "bpgc/params.hpp"

namespace bpgc {

/// Grid summary of the 2x2 log-determinant statistic
///   log f(x1,y1) + log f(x2,y2) - log f(x1,y2) - log f(x2,y1)
/// over x1 < x2, y1 < y2, together with the structural flags.  The statistic
/// reduces algebraically to m12 dx dlog(y) - m11 dx dy, so its sign is
/// reported empirically rather than asserted globally.
struct DependenceReport {
  double min_det_statistic;
  double max_det_statistic;
  bool is_independent;       // m11 = m12 = 0
  bool is_compound_poisson;  // m11 = 0, m12 = 1
  bool is_log_convex;        // m11 > 0
  bool is_rr2;               // m11 > m12
  int local_dep_negative;    // sign counts of xi over the y grid
  int local_dep_zero;
  int local_dep_positive;
  std::optional<double> local_dep_threshold;  // y = m12/m11 when m11 > 0
};

DependenceReport dependence_report(const Params& params, std::int64_t x_max,
                                   const std::vector<double>& y_grid);

/// Per-grid-point comparison of the two marginals: usual stochastic order,
/// hazard rates, and the integer-lattice likelihood ratio.  Flags describe
/// the supplied grid only.
struct OrderingPoint {
  double t;
  double cdf_x;
  double cdf_y;
  bool st_holds;  // F_X(t) <= F_Y(t)
  std::optional<double> hazard_x;  // at integer t, f_X(t)/(1 - F_X(t))
  std::optional<double> hazard_y;  // f_Y(t)/(1 - F_Y(t))
  std::optional<bool> hr_holds;    // h_X <= h_Y where both exist
};

struct OrderingReport {
  std::vector<OrderingPoint> points;
  std::vector<std::pair<std::int64_t, double>> likelihood_ratio;  // f_X/f_Y
  bool st_holds_on_grid;
  bool hr_holds_on_grid;
  bool lr_increasing_on_grid;
  bool lr_decreasing_on_grid;
};

OrderingReport ordering_diagnostics(const Params& params,
                                    const std::vector<double>& t_grid);

/// Regression curves E(Y|X=x) = (m02 + m12 x)/(m01 + m11 x) and
/// E(X|Y=y) = exp(m10 - m11 y + m12 log y).
struct RegressionCurves {
  std::vector<std::pair<std::int64_t, double>> y_on_x;
  std::vector<std::pair<double, double>> x_on_y;
};

RegressionCurves regression_curves(const Params& params,
                                   const std::vector<std::int64_t>& x_values,
                                   const std::vector<double>& y_values);

}  // namespace bpgc
