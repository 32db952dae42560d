#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace bpgc {

using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

enum class errc {
  non_positive_parameter,
  negative_interaction,
  divergent_series,
  no_convergence,
  overflow,
  invalid_observation,
  non_identifiable,
  did_not_converge,
  singular_information,
  boundary_optimum,
  degenerate_sample,
  invalid_distribution_parameter,
  parse_error,
  io_error,
};

const char* errc_name(errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what_arg)
      : std::runtime_error(what_arg), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

/// Parameter vector (m10, m01, m11, m02, m12) of the joint law.
///
/// The conditionals are X|Y=y ~ Poisson(exp(m10 - m11 y + m12 log y)) and
/// Y|X=x ~ Gamma(shape m02 + m12 x, rate m01 + m11 x).  m10, m01, m02 are
/// strictly positive; the interactions m11, m12 are non-negative.  The
/// normalizer series converges iff
///   m11 > 0, or m11 = 0 and m12 < 1, or m11 = 0, m12 = 1 and m10 < log(m01).
/// Construct through validate_params so every instance satisfies all three.
struct Params {
  double m10;
  double m01;
  double m11;
  double m02;
  double m12;

  Vec5 vec() const {
    Vec5 v;
    v << m10, m01, m11, m02, m12;
    return v;
  }
};

/// Validates sign constraints (in field order) and the series-convergence
/// condition.  Throws Error with code non_positive_parameter,
/// negative_interaction, or divergent_series naming the violated constraint.
Params validate_params(double m10, double m01, double m11, double m02,
                       double m12);
Params validate_params(const Vec5& raw);

/// No-throw feasibility probe, used by optimizer line searches.
bool params_valid(const Vec5& raw) noexcept;

}  // namespace bpgc
