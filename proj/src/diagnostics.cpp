#include "bpgc/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "bpgc/quadrature.hpp"

namespace bpgc {

DependenceReport dependence_report(const Params& params, std::int64_t x_max,
                                   const std::vector<double>& y_grid) {
  if (x_max < 1 || y_grid.size() < 2) {
    throw Error(errc::invalid_observation,
                "dependence grid needs x_max >= 1 and at least two y values");
  }
  std::vector<double> ys = y_grid;
  std::sort(ys.begin(), ys.end());
  if (ys.front() == ys.back()) {
    throw Error(errc::invalid_observation, "degenerate y grid");
  }
  const LogNormalizer norm = log_normalizer(params);

  // log f on the lattice; pairwise determinant statistic over it.
  const std::size_t ny = ys.size();
  std::vector<std::vector<double>> lf(static_cast<std::size_t>(x_max) + 1,
                                      std::vector<double>(ny));
  for (std::int64_t x = 0; x <= x_max; ++x) {
    for (std::size_t j = 0; j < ny; ++j) {
      lf[x][j] = log_pdf(params, Observation{x, ys[j]}, norm);
    }
  }
  double min_det = std::numeric_limits<double>::infinity();
  double max_det = -std::numeric_limits<double>::infinity();
  for (std::int64_t x1 = 0; x1 < x_max; ++x1) {
    for (std::int64_t x2 = x1 + 1; x2 <= x_max; ++x2) {
      for (std::size_t j1 = 0; j1 + 1 < ny; ++j1) {
        for (std::size_t j2 = j1 + 1; j2 < ny; ++j2) {
          if (ys[j1] == ys[j2]) continue;
          const double det =
              lf[x1][j1] + lf[x2][j2] - lf[x1][j2] - lf[x2][j1];
          min_det = std::min(min_det, det);
          max_det = std::max(max_det, det);
        }
      }
    }
  }

  DependenceReport report;
  report.min_det_statistic = min_det;
  report.max_det_statistic = max_det;
  report.is_independent = params.m11 == 0.0 && params.m12 == 0.0;
  report.is_compound_poisson = params.m11 == 0.0 && params.m12 == 1.0;
  report.is_log_convex = params.m11 > 0.0;
  report.is_rr2 = params.m11 > params.m12;
  report.local_dep_negative = 0;
  report.local_dep_zero = 0;
  report.local_dep_positive = 0;
  for (double y : ys) {
    const double xi = local_dependence(params, y);
    if (xi < 0.0) {
      ++report.local_dep_negative;
    } else if (xi > 0.0) {
      ++report.local_dep_positive;
    } else {
      ++report.local_dep_zero;
    }
  }
  if (params.m11 > 0.0) {
    report.local_dep_threshold = params.m12 / params.m11;
  }
  return report;
}

OrderingReport ordering_diagnostics(const Params& params,
                                    const std::vector<double>& t_grid) {
  if (t_grid.size() < 2) {
    throw Error(errc::invalid_observation, "t grid needs at least two points");
  }
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0) ||
        (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
      throw Error(errc::invalid_observation,
                  "t grid must be positive and strictly increasing");
    }
  }
  const LogNormalizer norm = log_normalizer(params);
  const auto f_y = [&](double y) {
    return std::exp(log_pdf_y(params, y, norm));
  };

  OrderingReport report;
  report.st_holds_on_grid = true;
  report.hr_holds_on_grid = true;

  double fy_cum = 0.0;
  double prev_t = 0.0;
  for (double t : t_grid) {
    fy_cum += integrate(f_y, prev_t, t, 1e-10, 1e-13).value;
    prev_t = t;

    OrderingPoint pt;
    pt.t = t;
    pt.cdf_y = std::min(fy_cum, 1.0);
    const std::int64_t floor_t = static_cast<std::int64_t>(std::floor(t));
    pt.cdf_x = cdf_x(params, floor_t, norm);
    pt.st_holds = pt.cdf_x <= pt.cdf_y + 1e-12;
    report.st_holds_on_grid = report.st_holds_on_grid && pt.st_holds;

    const bool integer_point = std::floor(t) == t;
    if (integer_point) {
      const double surv_x = 1.0 - pt.cdf_x;
      if (surv_x > 1e-14) {
        pt.hazard_x = std::exp(log_pmf_x(params, floor_t, norm)) / surv_x;
      }
    }
    const double surv_y = 1.0 - pt.cdf_y;
    if (surv_y > 1e-14) {
      pt.hazard_y = f_y(t) / surv_y;
    }
    if (pt.hazard_x && pt.hazard_y) {
      pt.hr_holds = *pt.hazard_x <= *pt.hazard_y + 1e-12;
      report.hr_holds_on_grid = report.hr_holds_on_grid && *pt.hr_holds;
    }
    report.points.push_back(pt);
  }

  // f_X / f_Y on the integer lattice inside the grid, x >= 1 (f_Y needs y > 0).
  const std::int64_t x_hi =
      static_cast<std::int64_t>(std::floor(t_grid.back()));
  for (std::int64_t x = 1; x <= x_hi; ++x) {
    const double ratio = std::exp(log_pmf_x(params, x, norm) -
                                  log_pdf_y(params, static_cast<double>(x),
                                            norm));
    report.likelihood_ratio.emplace_back(x, ratio);
  }
  report.lr_increasing_on_grid = report.likelihood_ratio.size() >= 2;
  report.lr_decreasing_on_grid = report.likelihood_ratio.size() >= 2;
  for (std::size_t i = 1; i < report.likelihood_ratio.size(); ++i) {
    const double prev = report.likelihood_ratio[i - 1].second;
    const double cur = report.likelihood_ratio[i].second;
    if (cur < prev) report.lr_increasing_on_grid = false;
    if (cur > prev) report.lr_decreasing_on_grid = false;
  }
  return report;
}

RegressionCurves regression_curves(const Params& params,
                                   const std::vector<std::int64_t>& x_values,
                                   const std::vector<double>& y_values) {
  RegressionCurves curves;
  for (std::int64_t x : x_values) {
    const GammaConditional g = conditional_gamma(params, x);
    curves.y_on_x.emplace_back(x, g.shape / g.rate);
  }
  for (double y : y_values) {
    curves.x_on_y.emplace_back(y, conditional_poisson_mean(params, y));
  }
  return curves;
}

}  // namespace bpgc
