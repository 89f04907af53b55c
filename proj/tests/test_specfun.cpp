#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "logscale/errors.hpp"
#include "logscale/quadrature.hpp"
#include "logscale/specfun.hpp"

#ifdef LSS_HAVE_BOOST
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/lambert_w.hpp>
#endif

using namespace lss;

namespace {
void check_rel(double got, double want, double tol) {
  CAPTURE(got);
  CAPTURE(want);
  CHECK(std::abs(got - want) <= tol * std::abs(want));
}
}  // namespace

// Reference values below were computed with mpmath at 30 digits.

TEST_CASE("lambert W principal branch") {
  check_rel(specfun::lambert_w0(1e-8), 9.9999999000000017e-9, 1e-14);
  check_rel(specfun::lambert_w0(0.5), 0.35173371124919583, 1e-14);
  check_rel(specfun::lambert_w0(1.0), 0.56714329040978387, 1e-14);
  check_rel(specfun::lambert_w0(10.0), 1.7455280027406994, 1e-14);
  check_rel(specfun::lambert_w0(1e5), 9.284571428622109, 1e-14);
  CHECK(specfun::lambert_w0(0.0) == 0.0);
  CHECK_THROWS_AS(specfun::lambert_w0(-1.0), DomainError);
}

TEST_CASE("lambert W from a log argument") {
  check_rel(specfun::lambert_w0_from_log(1000.0), 993.0991694723891, 1e-14);
  check_rel(specfun::lambert_w0_from_log(-700.0), 9.8596765437597709e-305, 1e-12);
  check_rel(specfun::lambert_w0_from_log(0.0), 0.56714329040978387, 1e-14);
  for (double lx : {-30.0, -3.0, 2.0, 8.0, 50.0, 300.0}) {
    const double w = specfun::lambert_w0_from_log(lx);
    CHECK(std::abs(std::log(w) + w - lx) < 1e-12 * std::max(1.0, std::abs(lx)));
  }
}

TEST_CASE("generalized exponential integral") {
  check_rel(specfun::gen_exp_integral(1.0, 0.1), 1.8229239584193906, 1e-12);
  check_rel(specfun::gen_exp_integral(1.0, 2.5), 0.024914917870269735, 1e-12);
  check_rel(specfun::gen_exp_integral(2.0, 0.3), 0.46911522517896386, 1e-12);
  check_rel(specfun::gen_exp_integral(0.75, 0.5), 0.66188938841117092, 1e-12);
  check_rel(specfun::gen_exp_integral(0.75, 5e-5), 39.116050990263009, 1e-12);
  check_rel(specfun::gen_exp_integral(1.5, 3.0), 0.01173661183406264, 1e-12);
  check_rel(std::exp(specfun::log_gen_exp_integral(0.5, 40.0)), 1.0492816475897854e-19, 1e-11);
  CHECK_THROWS_AS(specfun::gen_exp_integral(1.0, -1.0), DomainError);
}

TEST_CASE("generalized exponential integral: orders near an integer") {
  // The series merges the singular term when the order is within 1/4 of an integer.
  for (double s : {0.75, 0.999, 1.0, 1.001, 1.25, 1.75, 2.0, 2.2, 3.0}) {
    for (double x : {1e-6, 1e-3, 0.2, 0.9}) {
      // Recurrence s E_{s+1}(x) = exp(-x) - x E_s(x) ties neighbouring orders.
      const double lhs = s * specfun::gen_exp_integral(s + 1.0, x);
      const double rhs = std::exp(-x) - x * specfun::gen_exp_integral(s, x);
      CAPTURE(s);
      CAPTURE(x);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs) + 1e-15);
    }
  }
}

TEST_CASE("incomplete gamma functions") {
  check_rel(specfun::lower_inc_gamma(2.5, 1.3), 0.31722678747593361, 1e-13);
  check_rel(specfun::upper_inc_gamma(2.5, 1.3), 1.0121136007032034, 1e-13);
  check_rel(specfun::lower_inc_gamma(0.5, 2.0), 1.6918067329451983, 1e-13);
  check_rel(specfun::upper_inc_gamma(0.5, 2.0), 0.080647117960317691, 1e-13);
  check_rel(specfun::lower_inc_gamma(7.0, 3.0), 24.126145422365669, 1e-13);
  check_rel(specfun::upper_inc_gamma(3.0, 10.0), 0.0055387914310231519, 1e-13);
  check_rel(specfun::lower_inc_gamma_scaled(3.0, 10.0), 1.9944612085689768 / 1000.0, 1e-13);
  CHECK(specfun::lower_inc_gamma_scaled(2.0, 0.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(specfun::lower_inc_gamma(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(specfun::upper_inc_gamma(1.0, -1.0), DomainError);
}

#ifdef LSS_HAVE_BOOST
TEST_CASE("boost oracle sweep") {
  for (double s : {0.1, 0.5, 1.0, 2.5, 7.0, 30.0}) {
    for (double x : {1e-4, 0.1, 1.0, 5.0, 20.0, 60.0}) {
      CAPTURE(s);
      CAPTURE(x);
      check_rel(specfun::lower_inc_gamma(s, x), boost::math::tgamma_lower(s, x), 1e-12);
      check_rel(specfun::upper_inc_gamma(s, x), boost::math::tgamma(s, x), 1e-11);
    }
  }
  for (unsigned n : {1u, 2u, 3u, 5u}) {
    for (double x : {1e-5, 0.01, 0.5, 3.0, 30.0}) {
      check_rel(specfun::gen_exp_integral(n, x), boost::math::expint(n, x), 1e-12);
    }
  }
  for (double x : {1e-12, 1e-3, 0.3, 2.0, 1e3, 1e12}) {
    check_rel(specfun::lambert_w0(x), boost::math::lambert_w0(x), 1e-14);
  }
}
#endif

TEST_CASE("adaptive quadrature") {
  const double pi = std::numbers::pi;
  auto r = quad::integrate([](double x) { return std::sin(x); }, 0.0, pi);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));
  r = quad::integrate([](double x) { return std::exp(-x * x); }, -10.0, 10.0);
  CHECK(r.value == doctest::Approx(std::sqrt(pi)).epsilon(1e-13));
  const std::vector<double> pts = {-1.0, 0.0, 1.0};
  CHECK(quad::integrate_or_throw([](double x) { return std::abs(x); }, pts) == doctest::Approx(1.0).epsilon(1e-14));

  quad::QuadOptions tiny;
  tiny.max_intervals = 2;
  tiny.rel_tol = 1e-14;
  tiny.abs_tol = 0.0;
  const std::vector<double> span = {0.0, 1.0};
  CHECK_THROWS_AS(quad::integrate_or_throw([](double x) { return std::sin(300.0 * x) / std::sqrt(x + 1e-9); }, span, tiny),
                  ConvergenceError);
}
