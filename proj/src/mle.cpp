#include "bpgc/mle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "bpgc/likelihood.hpp"

namespace bpgc {

namespace {

constexpr double kBarrierSoftening = 1e-10;
constexpr double kClampThreshold = 1e-8;
constexpr double kConvergedGradTol = 1e-4;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

Vec5 project_feasible(const Vec5& v) {
  Vec5 out = v;
  for (int j : {0, 1, 3}) out[j] = std::max(out[j], 1e-3);
  out[2] = std::max(out[2], 0.0);
  out[4] = std::max(out[4], 0.0);
  if (!params_valid(out)) out[2] = std::max(out[2], 0.01);
  return out;
}

double barrier_value(const Vec5& v) {
  return std::log(v[0]) + std::log(v[1]) + std::log(v[3]) +
         std::log(v[2] + kBarrierSoftening) +
         std::log(v[4] + kBarrierSoftening);
}

Vec5 barrier_gradient(const Vec5& v) {
  Vec5 g;
  g << 1.0 / v[0], 1.0 / v[1], 1.0 / (v[2] + kBarrierSoftening), 1.0 / v[3],
      1.0 / (v[4] + kBarrierSoftening);
  return g;
}

struct Evaluation {
  bool ok = false;
  double loglik = 0.0;
  double penalized = 0.0;
  Vec5 loglik_grad = Vec5::Zero();
  Vec5 penalized_grad = Vec5::Zero();
};

Evaluation evaluate(const Vec5& v, const Dataset& data, double mu) {
  Evaluation e;
  if (!params_valid(v)) return e;
  try {
    const Params p = validate_params(v);
    const LoglikValue lv = loglik_gradient(p, data);
    if (!std::isfinite(lv.loglik)) return e;
    e.loglik = lv.loglik;
    e.loglik_grad = lv.gradient;
    e.penalized = lv.loglik + mu * barrier_value(v);
    e.penalized_grad = lv.gradient + mu * barrier_gradient(v);
    e.ok = std::isfinite(e.penalized);
  } catch (const Error& err) {
    switch (err.code()) {
      case errc::divergent_series:
      case errc::no_convergence:
      case errc::overflow:
        return e;  // reject the proposal, keep searching
      default:
        throw;
    }
  }
  return e;
}

/// BFGS ascent on the penalized objective at fixed mu.  Returns the final
/// iterate; cur is updated in place with its evaluation.
Vec5 inner_maximize(Vec5 theta, Evaluation& cur, const Dataset& data,
                    double mu, const MleConfig& config, double grad_tol) {
  Mat5 h_inv = Mat5::Identity();
  for (int iter = 0; iter < config.max_inner_iters; ++iter) {
    const Vec5 g = -cur.penalized_grad;  // gradient of the minimized -P
    if (g.lpNorm<Eigen::Infinity>() <= grad_tol) break;

    Vec5 direction = -(h_inv * g);
    double slope = g.dot(direction);
    if (!(slope < 0.0)) {
      h_inv = Mat5::Identity();
      direction = -g;
      slope = g.dot(direction);
    }

    // Backtracking line search on -P.  Proposals that take an interaction
    // coordinate negative are projected onto the constraint instead of
    // rejected (otherwise a collapsing coordinate caps the feasible step and
    // starves every other direction); sufficient decrease is measured
    // against the slope of the actual displacement.  Points infeasible in
    // the strictly-positive coordinates are rejected outright.
    double alpha = 1.0;
    Evaluation next;
    Vec5 theta_new = theta;
    bool accepted = false;
    for (int half = 0; half < 60; ++half) {
      Vec5 candidate = theta + alpha * direction;
      if (candidate[2] < 0.0) candidate[2] = 0.0;
      if (candidate[4] < 0.0) candidate[4] = 0.0;
      const double displacement_slope = g.dot(candidate - theta);
      if (displacement_slope < 0.0) {
        next = evaluate(candidate, data, mu);
        if (next.ok &&
            -next.penalized <= -cur.penalized + 1e-4 * displacement_slope) {
          accepted = true;
          theta_new = candidate;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!accepted) break;

    const Vec5 step = theta_new - theta;
    const Vec5 grad_diff = -next.penalized_grad - g;
    const double sy = step.dot(grad_diff);
    if (sy > 1e-10 * step.norm() * grad_diff.norm()) {
      const Vec5 hy = h_inv * grad_diff;
      h_inv += (sy + grad_diff.dot(hy)) / (sy * sy) * (step * step.transpose());
      h_inv -= (hy * step.transpose() + step * hy.transpose()) / sy;
    }

    const double movement = step.lpNorm<Eigen::Infinity>();
    theta = theta_new;
    cur = next;
    if (movement < 1e-14 * (1.0 + theta.lpNorm<Eigen::Infinity>())) break;
  }
  return theta;
}

Mat5 information_with_steps(const Params& params, const Dataset& data,
                            const Vec5& steps) {
  const Vec5 center = params.vec();
  Mat5 jac;
  for (int j = 0; j < 5; ++j) {
    Vec5 up = center;
    Vec5 down = center;
    up[j] += steps[j];
    down[j] -= steps[j];
    if (params_valid(down)) {
      const Vec5 gu = loglik_gradient(validate_params(up), data).gradient;
      const Vec5 gd = loglik_gradient(validate_params(down), data).gradient;
      jac.row(j) = ((gu - gd) / (2.0 * steps[j])).transpose();
    } else {
      // One-sided difference next to the constraint boundary.
      Vec5 up2 = center;
      up2[j] += 2.0 * steps[j];
      const Vec5 g0 = loglik_gradient(params, data).gradient;
      const Vec5 gu = loglik_gradient(validate_params(up), data).gradient;
      const Vec5 gu2 = loglik_gradient(validate_params(up2), data).gradient;
      jac.row(j) =
          ((4.0 * gu - 3.0 * g0 - gu2) / (2.0 * steps[j])).transpose();
    }
  }
  return -0.5 * (jac + jac.transpose());
}

Vec5 fd_steps(const Vec5& center) {
  Vec5 steps;
  for (int j = 0; j < 5; ++j) {
    double h = 1e-5 * std::max(std::abs(center[j]), 1.0);
    if ((j == 0 || j == 1 || j == 3) && center[j] - h <= 0.0) {
      h = center[j] / 2.0;
    }
    steps[j] = h;
  }
  return steps;
}

}  // namespace

Params moment_start(const Dataset& data) {
  const Vec5& t = data.suffstats();
  const double n = static_cast<double>(data.n());
  const double mean_x = t[0] / n;
  const double mean_y = t[1] / n;
  double var_y = 0.0;
  for (const Observation& obs : data.observations()) {
    const double d = obs.y - mean_y;
    var_y += d * d;
  }
  var_y /= n;

  const double rate =
      std::clamp(mean_y / std::max(var_y, 1e-12), 1e-3, 1e6);
  const double shape = std::clamp(rate * mean_y, 1e-3, 1e6);
  const double m10 = std::log(std::max(mean_x, 0.05));
  return validate_params(std::max(m10, 1e-3), rate, 0.01, shape, 0.01);
}

MleResult fit_mle(const Dataset& data, const MleConfig& config) {
  if (data.n() < 5) {
    throw Error(errc::non_identifiable,
                "at least 5 observations are needed to fit 5 parameters");
  }
  if (!(config.barrier_mu0 > 0.0) || !(config.barrier_shrink > 0.0) ||
      !(config.barrier_shrink < 1.0) || !(config.inner_tol > 0.0) ||
      config.outer_iters < 1 || config.max_inner_iters < 1) {
    throw Error(errc::invalid_distribution_parameter,
                "invalid optimizer configuration");
  }

  const double scale = std::max(1.0, static_cast<double>(data.n()));
  Vec5 theta =
      config.moment_init ? moment_start(data).vec() : project_feasible(config.init);
  validate_params(theta);

  MleResult result;
  result.n = data.n();

  double mu = config.barrier_mu0;
  Evaluation cur = evaluate(theta, data, mu);
  if (!cur.ok) {
    throw Error(errc::divergent_series,
                "log-likelihood is not evaluable at the starting point");
  }

  for (int outer = 0; outer < config.outer_iters; ++outer) {
    const double grad_tol = std::max(0.1 * mu, scale * 1e-8);
    const Vec5 before = theta;
    theta = inner_maximize(theta, cur, data, mu, config, grad_tol);
    result.trace.push_back(
        {mu, cur.loglik,
         cur.loglik_grad.lpNorm<Eigen::Infinity>() / scale});
    if ((theta - before).lpNorm<Eigen::Infinity>() < config.inner_tol) break;
    mu *= config.barrier_shrink;
    cur = evaluate(theta, data, mu);
  }

  // Barrier-free polish.  A coordinate pinned by the barrier settles near
  // mu/|gradient|, which can sit above the clamp threshold; with the barrier
  // off, the line search lets it fall onto the constraint itself.
  cur = evaluate(theta, data, 0.0);
  theta = inner_maximize(theta, cur, data, 0.0, config,
                         0.1 * kConvergedGradTol * scale);
  result.trace.push_back(
      {0.0, cur.loglik, cur.loglik_grad.lpNorm<Eigen::Infinity>() / scale});

  // Active-constraint detection on the interaction coordinates.
  for (int j : {2, 4}) {
    if (theta[j] < kClampThreshold && cur.loglik_grad[j] < 0.0) {
      Vec5 clamped = theta;
      clamped[j] = 0.0;
      if (params_valid(clamped)) {
        theta = clamped;
        result.at_boundary[static_cast<std::size_t>(j)] = true;
      }
    }
  }

  const Params estimates = validate_params(theta);
  const LoglikValue final_value = loglik_gradient(estimates, data);
  result.estimates = estimates;
  result.loglik = final_value.loglik;

  double free_grad_norm = 0.0;
  for (int j = 0; j < 5; ++j) {
    if (result.at_boundary[static_cast<std::size_t>(j)]) continue;
    free_grad_norm = std::max(free_grad_norm,
                              std::abs(final_value.gradient[j]));
  }
  result.converged = free_grad_norm / scale < kConvergedGradTol;

  if (config.compute_std_errors) {
    const Mat5 info = observed_information(estimates, data);
    std::vector<int> free;
    for (int j = 0; j < 5; ++j) {
      if (!result.at_boundary[static_cast<std::size_t>(j)]) free.push_back(j);
    }
    Eigen::MatrixXd sub(free.size(), free.size());
    for (std::size_t a = 0; a < free.size(); ++a) {
      for (std::size_t b = 0; b < free.size(); ++b) {
        sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
            info(free[a], free[b]);
      }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
    if (lu.isInvertible()) {
      const Eigen::MatrixXd inv = lu.inverse();
      Vec5 se = Vec5::Constant(kNan);
      bool all_positive = true;
      for (std::size_t a = 0; a < free.size(); ++a) {
        const double v = inv(static_cast<Eigen::Index>(a),
                             static_cast<Eigen::Index>(a));
        if (!(v > 0.0)) {
          all_positive = false;
          break;
        }
        se[free[a]] = std::sqrt(v);
      }
      if (all_positive) result.std_errors = se;
    }
  }
  return result;
}

Mat5 observed_information(const Params& params, const Dataset& data) {
  return information_with_steps(params, data, fd_steps(params.vec()));
}

Vec5 std_errors(const Params& params, const Dataset& data) {
  if (params.m11 == 0.0 || params.m12 == 0.0) {
    throw Error(errc::boundary_optimum,
                "standard errors are withheld at a constraint boundary");
  }
  const Mat5 info = observed_information(params, data);
  Eigen::FullPivLU<Mat5> lu(info);
  if (!lu.isInvertible()) {
    throw Error(errc::singular_information,
                "observed information is not invertible");
  }
  const Mat5 inv = lu.inverse();
  Vec5 se;
  for (int j = 0; j < 5; ++j) {
    const double v = inv(j, j);
    if (!(v > 0.0)) {
      throw Error(errc::singular_information,
                  "observed information is not positive definite");
    }
    se[j] = std::sqrt(v);
  }
  return se;
}

}  // namespace bpgc
