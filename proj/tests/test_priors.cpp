#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "logscale/errors.hpp"
#include "logscale/priors.hpp"
#include "logscale/quadrature.hpp"

using namespace lss;

namespace {

constexpr double kPi = std::numbers::pi;

double integrate_xi_density(const PriorFamily& f, double lo, double hi) {
  const std::vector<double> pts = {lo, -5.0, -1.0, 0.0, 1.0, 5.0, hi};
  return quad::integrate_or_throw([&](double x) { return xi_density(f, x); }, pts);
}

// Asymmetric Laplace over xi with median zero: half the mass on each side.
double laplace_oracle(double xi, double psi1, double psi2) {
  return xi < 0.0 ? std::exp(xi / psi1) / (2.0 * psi1) : std::exp(-xi / psi2) / (2.0 * psi2);
}

double normal_pdf(double x, double sd) { return std::exp(-0.5 * x * x / (sd * sd)) / (sd * std::sqrt(2.0 * kPi)); }

}  // namespace

TEST_CASE("xi densities are normalised") {
  CHECK(integrate_xi_density(PriorFamily::bayes_lasso(), -50, 50) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(integrate_xi_density(PriorFamily::log_laplace(0.5, 0.25), -50, 50) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(integrate_xi_density(PriorFamily::log_t(7.0, 0.5), -50, 50) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(integrate_xi_density(PriorFamily::log_hyp_sech(0.7), -50, 50) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(integrate_xi_density(PriorFamily::horseshoe(), -50, 50) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(integrate_xi_density(PriorFamily::z_dist(2.0, 1.0, 1.0), -50, 50) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("closed-form densities of the comparators") {
  for (double xi : {-3.0, -0.4, 0.0, 1.1, 6.0}) {
    CHECK(xi_density(PriorFamily::horseshoe(), xi) == doctest::Approx(1.0 / (kPi * std::cosh(xi))).epsilon(1e-13));
    CHECK(xi_density(PriorFamily::log_laplace(0.7, 1.9), xi) ==
          doctest::Approx(laplace_oracle(xi, 0.7, 1.9)).epsilon(1e-13));
  }
  for (double lam : {0.01, 0.5, 1.0, 4.0}) {
    CHECK(lambda_density(PriorFamily::horseshoe(), lam) == doctest::Approx(2.0 / (kPi * (1.0 + lam * lam))).epsilon(1e-13));
  }
  for (double k : {0.05, 0.3, 0.5, 0.9}) {
    // Horseshoe shrinkage weight is Beta(1/2, 1/2).
    CHECK(kappa_density(PriorFamily::horseshoe(), k) == doctest::Approx(1.0 / (kPi * std::sqrt(k * (1.0 - k)))).epsilon(1e-12));
  }
}

TEST_CASE("location shifts the xi density") {
  const auto base = PriorFamily::log_t(7.0, 0.3);
  const auto shifted = PriorFamily::log_t(7.0, 0.3, -2.0);
  CHECK(xi_density(shifted, -1.5) == doctest::Approx(xi_density(base, 0.5)).epsilon(1e-14));
}

TEST_CASE("log-Laplace marginal closed form vs independent quadrature") {
  for (double p1 : {0.5, 1.0, 2.0, 3.0}) {
    for (double p2 : {0.5, 2.0}) {
      for (double b : {0.01, 0.3, 2.0, 15.0}) {
        const std::vector<double> pts = {-60.0, std::log(b) - 5, std::log(b), std::log(b) + 5, 0.0, 60.0};
        std::vector<double> sorted = pts;
        std::sort(sorted.begin(), sorted.end());
        quad::QuadOptions o;
        o.abs_tol = 0.0;
        o.rel_tol = 1e-12;
        const double oracle = quad::integrate_or_throw(
            [&](double xi) { return normal_pdf(b, std::exp(xi)) * laplace_oracle(xi, p1, p2); }, sorted, o);
        CAPTURE(p1);
        CAPTURE(p2);
        CAPTURE(b);
        CHECK(marginal_beta_log_laplace(b, p1, p2) == doctest::Approx(oracle).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("log-Laplace marginal at zero") {
  // (2/(1-psi1) + 2/(1+psi2)) / sqrt(32 pi)
  CHECK(marginal_beta_log_laplace(0.0, 0.5, 0.5) == doctest::Approx(16.0 / 3.0 / std::sqrt(32.0 * kPi)).epsilon(1e-14));
  CHECK_THROWS_AS(marginal_beta_log_laplace(0.0, 1.0, 1.0), PoleError);
  CHECK_THROWS_AS(marginal_beta_log_laplace(1.0, -1.0, 1.0), DomainError);
}

TEST_CASE("marginal densities by quadrature (mpmath reference)") {
  const auto lt = PriorFamily::log_t(7.0, 0.5);
  CHECK(marginal_beta_quadrature(lt, 1.0) == doctest::Approx(0.18849320826255593).epsilon(1e-8));
  CHECK(marginal_beta_quadrature(lt, 0.01) == doctest::Approx(0.47943335137592363).epsilon(1e-8));
  CHECK(marginal_beta_quadrature(lt, 30.0) == doctest::Approx(4.2608189961998818e-6).epsilon(1e-8));
  CHECK(marginal_beta_quadrature(PriorFamily::horseshoe(), 1.0) == doctest::Approx(0.1171979033975241).epsilon(1e-8));
  CHECK(marginal_beta_quadrature(PriorFamily::horseshoe(), 0.1) == doctest::Approx(0.60316225316350207).epsilon(1e-8));
}

TEST_CASE("quartiles") {
  const auto hs = iqr_xi(PriorFamily::horseshoe());
  CHECK(hs.q75 == doctest::Approx(std::asinh(1.0)).epsilon(1e-8));
  CHECK(hs.q25 == doctest::Approx(-std::asinh(1.0)).epsilon(1e-8));
  const auto k = iqr_one_minus_kappa(PriorFamily::horseshoe());
  CHECK(k.q25 == doctest::Approx(0.5 - std::sqrt(2.0) / 4.0).epsilon(1e-8));
  // Laplace with equal scales: quartiles at -/+ psi log 2.
  const auto ll = iqr_xi(PriorFamily::log_laplace(0.8, 0.8));
  CHECK(ll.q75 == doctest::Approx(0.8 * std::log(2.0)).epsilon(1e-7));
}

TEST_CASE("tail exponents of the log-Laplace marginal") {
  CHECK(tail_exponent(PriorFamily::log_laplace(3.0, 1.0), TailSide::NearZero).slope ==
        doctest::Approx(-1.0 + 1.0 / 3.0).epsilon(0.01));
  CHECK(tail_exponent(PriorFamily::log_laplace(1.0, 0.25), TailSide::FarTail).slope == doctest::Approx(-5.0).epsilon(0.01));
  const auto fit = tail_exponent(PriorFamily::log_laplace(1.0, 2.0), 10.0, 1e4, 9);
  CHECK(fit.beta_min == 10.0);
  CHECK(fit.slope == doctest::Approx(-1.5).epsilon(0.02));
}

TEST_CASE("invalid families") {
  CHECK_THROWS_AS(PriorFamily::log_t(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(PriorFamily::log_laplace(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(PriorFamily::z_dist(1.0, 1.0, -1.0), DomainError);
  CHECK_THROWS_AS(xi_density(PriorFamily::ridge(), 0.0), UnsupportedFamily);
  CHECK_THROWS_AS(marginal_beta_quadrature(PriorFamily::ridge(), 1.0), UnsupportedFamily);
  CHECK_THROWS_AS(kappa_density(PriorFamily::horseshoe(), 1.5), DomainError);
}
