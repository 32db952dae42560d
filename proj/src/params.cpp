#include "bpgc/params.hpp"

#include <cmath>

namespace bpgc {

const char* errc_name(errc code) noexcept {
  switch (code) {
    case errc::non_positive_parameter: return "NonPositiveParameter";
    case errc::negative_interaction: return "NegativeInteraction";
    case errc::divergent_series: return "DivergentSeries";
    case errc::no_convergence: return "NoConvergence";
    case errc::overflow: return "Overflow";
    case errc::invalid_observation: return "InvalidObservation";
    case errc::non_identifiable: return "NonIdentifiable";
    case errc::did_not_converge: return "DidNotConverge";
    case errc::singular_information: return "SingularInformation";
    case errc::boundary_optimum: return "BoundaryOptimum";
    case errc::degenerate_sample: return "DegenerateSample";
    case errc::invalid_distribution_parameter:
      return "InvalidDistributionParameter";
    case errc::parse_error: return "ParseError";
    case errc::io_error: return "IoError";
  }
  return "UnknownError";
}

namespace {

bool convergence_condition(double m10, double m01, double m11,
                           double m12) noexcept {
  if (m11 > 0.0) return true;
  if (m12 < 1.0) return true;
  if (m12 == 1.0) return m10 < std::log(m01);
  return false;
}

}  // namespace

Params validate_params(double m10, double m01, double m11, double m02,
                       double m12) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(errc::non_positive_parameter,
                  std::string(name) + " must be a finite positive real");
    }
  };
  auto non_negative = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(errc::negative_interaction,
                  std::string(name) + " must be a finite non-negative real");
    }
  };
  positive(m10, "m10");
  positive(m01, "m01");
  non_negative(m11, "m11");
  positive(m02, "m02");
  non_negative(m12, "m12");
  if (!convergence_condition(m10, m01, m11, m12)) {
    throw Error(errc::divergent_series,
                "normalizer series diverges: requires m11 > 0, or m11 = 0 with "
                "m12 < 1, or m11 = 0, m12 = 1 with m10 < log(m01)");
  }
  return Params{m10, m01, m11, m02, m12};
}

Params validate_params(const Vec5& raw) {
  return validate_params(raw[0], raw[1], raw[2], raw[3], raw[4]);
}

bool params_valid(const Vec5& raw) noexcept {
  for (int i = 0; i < 5; ++i) {
    if (!std::isfinite(raw[i])) return false;
  }
  if (!(raw[0] > 0.0) || !(raw[1] > 0.0) || !(raw[3] > 0.0)) return false;
  if (!(raw[2] >= 0.0) || !(raw[4] >= 0.0)) return false;
  return convergence_condition(raw[0], raw[1], raw[2], raw[4]);
}

}  // namespace bpgc
