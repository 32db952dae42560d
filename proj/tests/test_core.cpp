#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bpgc/csv.hpp"
#include "bpgc/dataset.hpp"
#include "bpgc/density.hpp"
#include "bpgc/diagnostics.hpp"
#include "bpgc/params.hpp"
#include "bpgc/quadrature.hpp"
#include "bpgc/special_functions.hpp"
#include "support/oracles.hpp"

namespace {

bpgc::Params P(double m10, double m01, double m11, double m02, double m12) {
  return bpgc::validate_params(m10, m01, m11, m02, m12);
}

double gamma_logpdf(double y, double shape, double rate) {
  return shape * std::log(rate) - std::lgamma(shape) +
         (shape - 1.0) * std::log(y) - rate * y;
}

double poisson_logpmf(std::int64_t x, double mean) {
  return -mean + static_cast<double>(x) * std::log(mean) -
         std::lgamma(static_cast<double>(x) + 1.0);
}

bpgc::errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const bpgc::Error& e) {
    return e.code();
  }
  FAIL("expected a bpgc::Error");
  return bpgc::errc::overflow;
}

std::filesystem::path temp_csv(const std::string& tag) {
  return std::filesystem::temp_directory_path() / ("bpgc_test_" + tag + ".csv");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("parameter validation enforces signs in field order") {
  CHECK_NOTHROW(P(1, 1, 0.1, 1, 0.1));
  CHECK_NOTHROW(P(5, 5, 5, 5, 5));

  CHECK(code_of([] { P(0, 1, 0, 1, 0); }) ==
        bpgc::errc::non_positive_parameter);
  CHECK(code_of([] { P(1, -1, 0, 1, 0); }) ==
        bpgc::errc::non_positive_parameter);
  CHECK(code_of([] { P(1, 1, 0, 0, 0); }) ==
        bpgc::errc::non_positive_parameter);
  CHECK(code_of([] { P(1, 1, -0.5, 1, 0); }) ==
        bpgc::errc::negative_interaction);
  CHECK(code_of([] { P(1, 1, 0, 1, -1e-9); }) ==
        bpgc::errc::negative_interaction);

  const double nan = std::nan("");
  CHECK_THROWS_AS(P(nan, 1, 0, 1, 0), bpgc::Error);
  CHECK_THROWS_AS(P(1, 1, nan, 1, 0), bpgc::Error);
  CHECK_THROWS_AS(P(1, std::numeric_limits<double>::infinity(), 0, 1, 0),
                  bpgc::Error);

  try {
    P(1, -2, 0, 1, 0);
  } catch (const bpgc::Error& e) {
    CHECK(std::string(e.what()).find("m01") != std::string::npos);
  }
}

TEST_CASE("series convergence condition gates the parameter space") {
  // m11 > 0 admits any m12.
  CHECK_NOTHROW(P(1, 1, 0.5, 1, 3.0));
  // m11 = 0 needs m12 < 1, or m12 = 1 with m10 < log(m01).
  CHECK_NOTHROW(P(1, 1, 0, 1, 0.99));
  CHECK_NOTHROW(P(0.1, 2, 0, 1, 1.0));
  CHECK(code_of([] { P(1, 1, 0, 1, 1.5); }) == bpgc::errc::divergent_series);
  CHECK(code_of([] { P(0.8, 2, 0, 1, 1.0); }) == bpgc::errc::divergent_series);

  bpgc::Vec5 v;
  v << 1, 1, 0, 1, 1.5;
  CHECK_FALSE(bpgc::params_valid(v));
  v << 1, 1, 0.5, 1, 1.5;
  CHECK(bpgc::params_valid(v));
  v << 1, 1, std::nan(""), 1, 0;
  CHECK_FALSE(bpgc::params_valid(v));
  v << 1, 1, -1e-12, 1, 0;
  CHECK_FALSE(bpgc::params_valid(v));
}

TEST_CASE("error codes map to stable names") {
  CHECK(std::string(bpgc::errc_name(bpgc::errc::non_positive_parameter)) ==
        "NonPositiveParameter");
  CHECK(std::string(bpgc::errc_name(bpgc::errc::divergent_series)) ==
        "DivergentSeries");
  CHECK(std::string(bpgc::errc_name(bpgc::errc::io_error)) == "IoError");
  CHECK(std::string(bpgc::errc_name(bpgc::errc::degenerate_sample)) ==
        "DegenerateSample");
}

TEST_CASE("params vec round-trips the field order") {
  const bpgc::Params p = P(2, 3, 0.5, 4, 1.5);
  const bpgc::Vec5 v = p.vec();
  CHECK(v[0] == 2.0);
  CHECK(v[1] == 3.0);
  CHECK(v[2] == 0.5);
  CHECK(v[3] == 4.0);
  CHECK(v[4] == 1.5);
  const bpgc::Params back = bpgc::validate_params(v);
  CHECK(back.m10 == p.m10);
  CHECK(back.m12 == p.m12);
}

TEST_CASE("observation validation rejects out-of-domain pairs") {
  CHECK_NOTHROW(bpgc::make_observation(0, 1e-300));
  CHECK_NOTHROW(bpgc::make_observation(2147483647, 1e6));
  CHECK(code_of([] { bpgc::make_observation(-1, 1.0); }) ==
        bpgc::errc::invalid_observation);
  CHECK(code_of([] { bpgc::make_observation(2147483648LL, 1.0); }) ==
        bpgc::errc::invalid_observation);
  CHECK(code_of([] { bpgc::make_observation(0, 0.0); }) ==
        bpgc::errc::invalid_observation);
  CHECK(code_of([] { bpgc::make_observation(0, -2.0); }) ==
        bpgc::errc::invalid_observation);
  CHECK(code_of([] { bpgc::make_observation(0, std::nan("")); }) ==
        bpgc::errc::invalid_observation);
}

TEST_CASE("dataset caches the five sufficient statistics") {
  const std::vector<bpgc::Observation> rows = {{0, 0.5}, {2, 1.5}, {3, 2.0}};
  const bpgc::Dataset data(rows);
  CHECK(data.n() == 3);
  const bpgc::Vec5& s = data.suffstats();
  CHECK(s[0] == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(s[1] == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(s[2] == doctest::Approx(2 * 1.5 + 3 * 2.0).epsilon(1e-15));
  CHECK(s[3] == doctest::Approx(std::log(0.5) + std::log(1.5) + std::log(2.0))
                    .epsilon(1e-14));
  CHECK(s[4] == doctest::Approx(2 * std::log(1.5) + 3 * std::log(2.0))
                    .epsilon(1e-14));
  CHECK(data.sum_log_factorial() ==
        doctest::Approx(std::log(2.0) + std::log(6.0)).epsilon(1e-14));
  CHECK_THROWS_AS(bpgc::Dataset(std::vector<bpgc::Observation>{}), bpgc::Error);
}

TEST_CASE("digamma matches reference values and the recurrence") {
  CHECK(std::fabs(bpgc::digamma(1.0) - (-0.57721566490153286)) < 1e-13);
  CHECK(std::fabs(bpgc::digamma(0.5) - (-1.9635100260214235)) < 1e-13);
  CHECK(std::fabs(bpgc::digamma(2.0) - 0.42278433509846714) < 1e-13);
  for (double x : {0.1, 0.37, 1.0, 2.5, 5.0, 17.3, 120.0}) {
    CHECK(std::fabs(bpgc::digamma(x + 1.0) - bpgc::digamma(x) - 1.0 / x) <
          1e-12);
  }
  // Derivative of log Gamma by central differences.
  for (double x : {0.8, 3.3, 9.0}) {
    const double h = 1e-6;
    const double fd = (std::lgamma(x + h) - std::lgamma(x - h)) / (2 * h);
    CHECK(std::fabs(bpgc::digamma(x) - fd) < 1e-8);
  }
}

TEST_CASE("log-sum-exp accumulator stays in log scale") {
  bpgc::LogSumExp acc;
  CHECK(acc.value() == -std::numeric_limits<double>::infinity());
  acc.add(std::log(1.0));
  acc.add(std::log(2.0));
  acc.add(std::log(3.0));
  CHECK(acc.value() == doctest::Approx(std::log(6.0)).epsilon(1e-15));
  CHECK(acc.count() == 3);

  bpgc::LogSumExp wide;
  wide.add(1000.0);
  wide.add(0.0);
  CHECK(wide.value() == doctest::Approx(1000.0).epsilon(1e-15));
}

TEST_CASE("normalizer matches the independence closed form") {
  // With both interactions zero the series sums to
  // exp(-m02 log m01 + lgamma(m02) + exp(m10)).
  const double e = 2.718281828459045235360287;
  CHECK(std::fabs(bpgc::log_normalizer(P(1, 1, 0, 1, 0)).c - (-e)) < 1e-12);
  CHECK(std::fabs(bpgc::log_normalizer(P(1, 2, 0, 3, 0)).c -
                  (2 * std::log(2.0) - e)) < 1e-12);
  for (const auto& [m10, m01, m02] :
       std::vector<std::array<double, 3>>{{0.5, 2.5, 4.2},
                                          {2.0, 0.7, 1.3},
                                          {0.1, 10.0, 0.4}}) {
    const double expected =
        m02 * std::log(m01) - std::lgamma(m02) - std::exp(m10);
    CHECK(std::fabs(bpgc::log_normalizer(P(m10, m01, 0, m02, 0)).c -
                    expected) < 1e-12);
  }
}

TEST_CASE("normalizer agrees with direct extended-precision summation") {
  const std::vector<std::array<double, 5>> cases = {{1, 1, 0.1, 1, 0.1},
                                                    {1, 1, 1, 1, 1},
                                                    {1, 5, 1, 5, 1},
                                                    {5, 5, 5, 5, 5}};
  for (const auto& c : cases) {
    const double direct = static_cast<double>(
        oracle::normalizer_direct(c[0], c[1], c[2], c[3], c[4]));
    const bpgc::LogNormalizer norm =
        bpgc::log_normalizer(P(c[0], c[1], c[2], c[3], c[4]));
    CHECK(std::fabs(norm.c - direct) < 1e-10);
    CHECK(norm.terms_used > 0);
    CHECK(norm.tail_bound < 1e-10);
  }
}

TEST_CASE("normalizer rejects a non-convergent request honestly") {
  // Forcing a tiny term cap must fail loudly, not return a truncated value.
  CHECK(code_of([] {
          bpgc::log_normalizer(P(5, 5, 5, 5, 5), 1e-12, 3);
        }) == bpgc::errc::no_convergence);
}

TEST_CASE("joint density evaluates known points") {
  const bpgc::Params p = P(1, 1, 0, 1, 0);
  const bpgc::LogNormalizer norm = bpgc::log_normalizer(p);
  const double e = 2.718281828459045235360287;
  CHECK(std::fabs(bpgc::log_pdf(p, {0, 1.0}, norm) - (-e - 1.0)) < 1e-12);
  // Independence factorizes: f(x, y) = pmf(x) * pdf(y).
  for (std::int64_t x : {0, 1, 4}) {
    for (double y : {0.2, 1.0, 3.7}) {
      const double joint = bpgc::log_pdf(p, {x, y}, norm);
      const double split = poisson_logpmf(x, std::exp(1.0)) +
                           gamma_logpdf(y, 1.0, 1.0);
      CHECK(std::fabs(joint - split) < 1e-12);
    }
  }
}

TEST_CASE("joint density decomposes through both conditionals") {
  const std::vector<std::array<double, 5>> cases = {{1, 1, 0.1, 1, 0.1},
                                                    {1, 1, 1, 1, 1},
                                                    {1, 5, 1, 5, 1},
                                                    {5, 5, 5, 5, 5}};
  for (const auto& c : cases) {
    const bpgc::Params p = P(c[0], c[1], c[2], c[3], c[4]);
    const bpgc::LogNormalizer norm = bpgc::log_normalizer(p);
    for (std::int64_t x : {0, 1, 2, 3, 7}) {
      for (double y : {0.1, 0.5, 1.0, 2.0, 4.0}) {
        const double joint = bpgc::log_pdf(p, {x, y}, norm);
        const auto gc = bpgc::conditional_gamma(p, x);
        const double via_x = bpgc::log_pmf_x(p, x, norm) +
                             gamma_logpdf(y, gc.shape, gc.rate);
        CHECK(std::fabs(joint - via_x) < 1e-10);
        const double mean = bpgc::conditional_poisson_mean(p, y);
        const double via_y = bpgc::log_pdf_y(p, y, norm) +
                             poisson_logpmf(x, mean);
        CHECK(std::fabs(joint - via_y) < 1e-10);
      }
    }
  }
}

TEST_CASE("count marginal is a proper pmf") {
  const bpgc::Params p = P(1, 1, 1, 1, 1);
  const bpgc::LogNormalizer norm = bpgc::log_normalizer(p);
  double total = 0.0;
  for (std::int64_t x = 0; x < 200; ++x) {
    total += std::exp(bpgc::log_pmf_x(p, x, norm));
  }
  CHECK(std::fabs(total - 1.0) < 1e-12);

  const std::vector<double> table = bpgc::cumulative_pmf_x(p, norm);
  REQUIRE(!table.empty());
  double running = 0.0;
  for (std::size_t k = 0; k < table.size(); ++k) {
    running += std::exp(bpgc::log_pmf_x(p, static_cast<std::int64_t>(k), norm));
    CHECK(std::fabs(table[k] - running) < 1e-12);
    CHECK(std::fabs(bpgc::cdf_x(p, static_cast<std::int64_t>(k), norm) -
                    running) < 1e-12);
  }
  CHECK(table.back() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("continuous marginal integrates to one") {
  for (const auto& c : std::vector<std::array<double, 5>>{
           {1, 1, 0.1, 1, 0.1}, {1, 5, 1, 5, 1}}) {
    const bpgc::Params p = P(c[0], c[1], c[2], c[3], c[4]);
    const bpgc::LogNormalizer norm = bpgc::log_normalizer(p);
    const double cut = bpgc::gamma_tail_cut(c[3], c[1], 1e-13) * 4.0;
    const auto result = bpgc::integrate(
        [&](double y) { return std::exp(bpgc::log_pdf_y(p, y, norm)); }, 0.0,
        cut, 1e-11, 1e-14);
    CHECK(std::fabs(result.value - 1.0) < 1e-8);
  }
}

TEST_CASE("count quantile inverts the count cdf") {
  const bpgc::Params p = P(1, 1, 0.1, 1, 0.1);
  const bpgc::LogNormalizer norm = bpgc::log_normalizer(p);
  for (std::int64_t k = 0; k < 12; ++k) {
    const double ck = bpgc::cdf_x(p, k, norm);
    if (ck >= 1.0) break;
    CHECK(bpgc::quantile_x(p, ck - 1e-12, norm) <= k);
    CHECK(bpgc::quantile_x(p, ck + 1e-12, norm) == k + 1);
  }
  CHECK(bpgc::quantile_x(p, 1e-12, norm) == 0);
  // Deep-tail requests stay finite.
  CHECK(bpgc::quantile_x(p, 1.0 - 1e-13, norm) < 1000);
}

TEST_CASE("conditional families read off the parameters") {
  const bpgc::Params p = P(2, 3, 0.5, 4, 1.5);
  const auto gc = bpgc::conditional_gamma(p, 6);
  CHECK(gc.shape == doctest::Approx(4 + 1.5 * 6).epsilon(1e-15));
  CHECK(gc.rate == doctest::Approx(3 + 0.5 * 6).epsilon(1e-15));
  CHECK(bpgc::conditional_poisson_mean(p, 2.0) ==
        doctest::Approx(std::exp(2 - 0.5 * 2 + 1.5 * std::log(2.0)))
            .epsilon(1e-15));
}

TEST_CASE("score functions differentiate the log density") {
  const bpgc::Params p = P(1.2, 0.9, 0.4, 2.1, 0.7);
  const bpgc::LogNormalizer norm = bpgc::log_normalizer(p);
  const double h = 1e-6;
  for (double x : {0.5, 2.0, 6.3}) {
    for (double y : {0.3, 1.0, 2.8}) {
      const auto in_x = [&](double xv) {
        return -std::lgamma(xv + 1.0) + p.m10 * xv - p.m11 * xv * y +
               p.m12 * xv * std::log(y);
      };
      const double fd_x = (in_x(x + h) - in_x(x - h)) / (2 * h);
      CHECK(std::fabs(bpgc::score_x(p, x, y) - fd_x) < 1e-7);
    }
  }
  for (std::int64_t x : {0, 2, 6}) {
    for (double y : {0.3, 1.0, 2.8}) {
      const double fd_y = (bpgc::log_pdf(p, {x, y + h}, norm) -
                           bpgc::log_pdf(p, {x, y - h}, norm)) /
                          (2 * h);
      CHECK(std::fabs(bpgc::score_y(p, {x, y}) - fd_y) < 1e-6);
    }
  }
}

TEST_CASE("local dependence is the interaction contrast") {
  const bpgc::Params p = P(1, 1, 0.5, 1, 1);
  CHECK(bpgc::local_dependence(p, 2.0) ==
        doctest::Approx(1.0 / 2.0 - 0.5).epsilon(1e-15));
  CHECK(bpgc::local_dependence(p, 4.0) < 0.0);
  CHECK(bpgc::local_dependence(p, 1.0) > 0.0);
}

TEST_CASE("conditional mode matches the gamma shape rule") {
  const bpgc::Params p = P(1, 1, 0.1, 1, 0.1);
  CHECK_FALSE(bpgc::find_conditional_mode(p, 0).has_value());  // shape = 1
  const auto mode = bpgc::find_conditional_mode(p, 5);
  REQUIRE(mode.has_value());
  const auto gc = bpgc::conditional_gamma(p, 5);
  CHECK(*mode == doctest::Approx((gc.shape - 1.0) / gc.rate).epsilon(1e-15));
  // The density really peaks there.
  const double at = gamma_logpdf(*mode, gc.shape, gc.rate);
  CHECK(at >= gamma_logpdf(*mode * 0.99, gc.shape, gc.rate));
  CHECK(at >= gamma_logpdf(*mode * 1.01, gc.shape, gc.rate));
}

TEST_CASE("quadrature reproduces textbook integrals") {
  const auto sq = bpgc::integrate([](double x) { return x * x; }, 0.0, 1.0);
  CHECK(std::fabs(sq.value - 1.0 / 3.0) < 1e-13);
  CHECK(sq.error_bound >= 0.0);
  CHECK(sq.evaluations > 0);

  const auto sine =
      bpgc::integrate([](double x) { return std::sin(x); }, 0.0,
                      3.14159265358979323846);
  CHECK(std::fabs(sine.value - 2.0) < 1e-12);

  // Integrable endpoint singularity.
  const auto root =
      bpgc::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  CHECK(std::fabs(root.value - 2.0) < 1e-7);

  const auto gauss = bpgc::integrate(
      [](double x) { return std::exp(-x * x / 2.0); }, -8.0, 8.0);
  CHECK(std::fabs(gauss.value - std::sqrt(2.0 * 3.14159265358979323846)) <
        1e-11);
}

TEST_CASE("gamma tail cut bounds the upper tail") {
  for (const auto& [shape, rate] :
       std::vector<std::pair<double, double>>{{1, 1}, {5, 5}, {2.5, 0.2}}) {
    for (double eps : {1e-8, 1e-13}) {
      const double cut = bpgc::gamma_tail_cut(shape, rate, eps);
      CHECK(std::isfinite(cut));
      CHECK(cut > shape / rate);  // beyond the mean
      CHECK(oracle::gamma_q(shape, rate * cut) <= eps * 1.01);
    }
  }
}

TEST_CASE("dependence report classifies the interaction structure") {
  const std::vector<double> y_grid = {0.25, 0.5, 1.0, 2.0, 3.0, 5.0};

  const auto indep = bpgc::dependence_report(P(1, 1, 0, 1, 0), 6, y_grid);
  CHECK(indep.is_independent);
  CHECK(std::fabs(indep.min_det_statistic) < 1e-12);
  CHECK(std::fabs(indep.max_det_statistic) < 1e-12);
  CHECK(indep.local_dep_zero == static_cast<int>(y_grid.size()));
  CHECK_FALSE(indep.local_dep_threshold.has_value());

  // Pure y-side interaction: every 2x2 log determinant is non-positive.
  const auto neg = bpgc::dependence_report(P(1, 1, 0.5, 1, 0), 6, y_grid);
  CHECK(neg.max_det_statistic <= 1e-12);
  CHECK(neg.min_det_statistic < -1e-6);
  CHECK(neg.is_rr2);
  CHECK(neg.is_log_convex);
  CHECK(neg.local_dep_negative == static_cast<int>(y_grid.size()));

  // Pure log-side interaction: all determinants non-negative.
  const auto pos = bpgc::dependence_report(P(1, 1, 0, 1, 0.5), 6, y_grid);
  CHECK(pos.min_det_statistic >= -1e-12);
  CHECK(pos.max_det_statistic > 1e-6);
  CHECK_FALSE(pos.is_log_convex);
  CHECK(pos.local_dep_positive == static_cast<int>(y_grid.size()));

  // Mixed signs change at y = m12/m11.
  const auto mixed = bpgc::dependence_report(P(1, 1, 0.5, 1, 1), 6, y_grid);
  REQUIRE(mixed.local_dep_threshold.has_value());
  CHECK(*mixed.local_dep_threshold == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(mixed.local_dep_positive == 3);  // y < 2
  CHECK(mixed.local_dep_zero == 1);      // y = 2
  CHECK(mixed.local_dep_negative == 2);  // y > 2
  CHECK(mixed.min_det_statistic < 0.0);
  CHECK(mixed.max_det_statistic > 0.0);

  const auto compound = bpgc::dependence_report(P(0.1, 2, 0, 1, 1), 6, y_grid);
  CHECK(compound.is_compound_poisson);
}

TEST_CASE("ordering diagnostics compare the marginals pointwise") {
  const bpgc::Params p = P(1, 1, 0.1, 1, 0.1);
  const std::vector<double> t_grid = {0.5, 1.0, 2.0, 3.0, 5.0, 8.0};
  const auto report = bpgc::ordering_diagnostics(p, t_grid);
  REQUIRE(report.points.size() == t_grid.size());
  double prev_x = -1.0;
  double prev_y = -1.0;
  bool all_st = true;
  for (const auto& pt : report.points) {
    CHECK(pt.cdf_x >= prev_x - 1e-12);
    CHECK(pt.cdf_y >= prev_y - 1e-12);
    CHECK(pt.cdf_x >= 0.0);
    CHECK(pt.cdf_x <= 1.0);
    CHECK(pt.cdf_y >= 0.0);
    CHECK(pt.cdf_y <= 1.0);
    CHECK(pt.st_holds == (pt.cdf_x <= pt.cdf_y));
    all_st = all_st && pt.st_holds;
    prev_x = pt.cdf_x;
    prev_y = pt.cdf_y;
  }
  CHECK(report.st_holds_on_grid == all_st);
  CHECK(!report.likelihood_ratio.empty());
  for (const auto& [t, ratio] : report.likelihood_ratio) {
    CHECK(ratio >= 0.0);
    CHECK(std::isfinite(ratio));
  }
  if (report.lr_increasing_on_grid) CHECK_FALSE(report.lr_decreasing_on_grid);
}

TEST_CASE("regression curves evaluate both conditional means") {
  const bpgc::Params p = P(1, 1, 1, 1, 1);
  const std::vector<std::int64_t> xs = {0, 1, 2, 5};
  const std::vector<double> ys = {0.5, 1.0, 2.0};
  const auto curves = bpgc::regression_curves(p, xs, ys);
  REQUIRE(curves.y_on_x.size() == xs.size());
  REQUIRE(curves.x_on_y.size() == ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto gc = bpgc::conditional_gamma(p, xs[i]);
    CHECK(curves.y_on_x[i].first == xs[i]);
    CHECK(curves.y_on_x[i].second ==
          doctest::Approx(gc.shape / gc.rate).epsilon(1e-15));
  }
  for (std::size_t i = 0; i < ys.size(); ++i) {
    CHECK(curves.x_on_y[i].first == ys[i]);
    CHECK(curves.x_on_y[i].second ==
          doctest::Approx(bpgc::conditional_poisson_mean(p, ys[i]))
              .epsilon(1e-15));
  }
}

TEST_CASE("csv round-trips observations exactly") {
  const auto path = temp_csv("roundtrip");
  const std::vector<bpgc::Observation> rows = {
      {0, 0.5}, {7, 3.25}, {12, 1e-5}, {3, 0.1234567890123456}};
  bpgc::write_dataset(path.string(), rows);
  const bpgc::Dataset back = bpgc::read_dataset(path.string());
  REQUIRE(back.n() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back.observations()[i].x == rows[i].x);
    CHECK(back.observations()[i].y == rows[i].y);  // 17 digits round-trip
  }
  std::filesystem::remove(path);
}

TEST_CASE("csv reader accepts CRLF and a byte-order mark") {
  const auto path = temp_csv("crlf");
  write_text(path, "\xEF\xBB\xBFx,y\r\n1,2.5\r\n0,0.25\r\n");
  const bpgc::Dataset data = bpgc::read_dataset(path.string());
  REQUIRE(data.n() == 2);
  CHECK(data.observations()[0].x == 1);
  CHECK(data.observations()[0].y == 2.5);
  std::filesystem::remove(path);
}

TEST_CASE("csv reader reports failures with codes and line numbers") {
  CHECK(code_of([] { bpgc::read_dataset("/nonexistent/nope.csv"); }) ==
        bpgc::errc::io_error);

  const auto path = temp_csv("bad");
  const auto parse_message = [&](const std::string& text) {
    write_text(path, text);
    try {
      bpgc::read_dataset(path.string());
    } catch (const bpgc::Error& e) {
      CHECK(e.code() == bpgc::errc::parse_error);
      return std::string(e.what());
    }
    FAIL("expected ParseError");
    return std::string();
  };

  CHECK(parse_message("a,b\n1,2\n").find("line 1") != std::string::npos);
  CHECK(parse_message("x,y\n1,2.0\n-3,1.0\n").find("line 3") !=
        std::string::npos);
  CHECK(parse_message("x,y\n1,2.0,9\n").find("line 2") != std::string::npos);
  CHECK(parse_message("x,y\n1,abc\n").find("y is not") != std::string::npos);
  CHECK(parse_message("x,y\n1.5,2.0\n").find("line 2") != std::string::npos);
  CHECK(parse_message("x,y\n2,0.0\n").find("line 2") != std::string::npos);
  CHECK(!parse_message("x,y\n").empty());  // header only
  CHECK(!parse_message("").empty());       // empty file
  std::filesystem::remove(path);
}
