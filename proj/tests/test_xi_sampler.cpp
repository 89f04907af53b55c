#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "logscale/errors.hpp"
#include "logscale/quadrature.hpp"
#include "logscale/xi_sampler.hpp"

using namespace lss;

namespace {
const std::vector<double> kGrid = {1e-6, 1e-3, 1e-1, 1.0, 10.0, 1e3, 1e6};
}

TEST_CASE("target, gradient and curvature") {
  const auto p = XiConditionalParams::from_m(2.0, 0.5);
  const double xi = 0.3;
  CHECK(neg_log_density(p, xi) == doctest::Approx(2.0 * std::exp(-0.6) + 0.3 + 0.09 / 1.0).epsilon(1e-14));
  const double h = 1e-5;
  CHECK(gradient(p, xi) ==
        doctest::Approx((neg_log_density(p, xi + h) - neg_log_density(p, xi - h)) / (2 * h)).epsilon(1e-8));
  CHECK(curvature(p, xi) == doctest::Approx((gradient(p, xi + h) - gradient(p, xi - h)) / (2 * h)).epsilon(1e-8));
}

TEST_CASE("mode solves the stationarity condition") {
  for (double m : kGrid) {
    for (double v : kGrid) {
      const auto p = XiConditionalParams::from_m(m, v);
      const double mode = xi_mode(p);
      CAPTURE(m);
      CAPTURE(v);
      CHECK(std::abs(gradient(p, mode)) <= 1e-9 * std::sqrt(curvature(p, mode)) * (1.0 + std::abs(mode)));
    }
  }
  CHECK(xi_mode(XiConditionalParams::from_m(0.0, 3.0)) == doctest::Approx(-3.0));
}

TEST_CASE("log-scale construction") {
  const auto a = XiConditionalParams::from_m(1e-200, 2.0);
  const auto b = XiConditionalParams::from_log_m(std::log(1e-200), 2.0);
  CHECK(a.log_m == doctest::Approx(b.log_m));
  CHECK(std::isinf(XiConditionalParams::from_m(1e-320, 1.0).log_m));
  CHECK_THROWS_AS(XiConditionalParams::from_m(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(XiConditionalParams::from_m(1.0, 0.0), DomainError);
  // m far beyond double range on the log scale.
  const auto huge = XiConditionalParams::from_log_m(2000.0, 1.0);
  CHECK(std::isfinite(xi_mode(huge)));
}

TEST_CASE("envelope dominates the target") {
  for (double m : kGrid) {
    for (double v : kGrid) {
      const auto env = build_envelope(XiConditionalParams::from_m(m, v));
      const double sd = 1.0 / std::sqrt(curvature(env.params, env.mode));
      CAPTURE(m);
      CAPTURE(v);
      CHECK(env.x0 < env.mode);
      CHECK(env.x1 > env.mode);
      CHECK(envelope_dominates(env, env.mode - 30 * sd, env.mode + 30 * sd, 2001));
    }
  }
}

TEST_CASE("draws match the quadrature mean and variance") {
  for (auto [m, v] : std::vector<std::pair<double, double>>{{1.0, 1.0}, {1e4, 0.01}, {1e-4, 50.0}}) {
    const auto p = XiConditionalParams::from_m(m, v);
    const double mode = xi_mode(p);
    const double sd = 1.0 / std::sqrt(curvature(p, mode));
    const double l0 = neg_log_density(p, mode);
    const std::vector<double> pts = {mode - 40 * sd, mode - 3 * sd, mode, mode + 3 * sd, mode + 40 * sd};
    auto moment = [&](int k) {
      return quad::integrate_or_throw([&](double x) { return std::pow(x, k) * std::exp(l0 - neg_log_density(p, x)); },
                                      pts);
    };
    const double z = moment(0);
    const double mean = moment(1) / z;
    const double var = moment(2) / z - mean * mean;

    RngStream rng(17, 1);
    const auto env = build_envelope(p);
    const int n = 200000;
    double s = 0.0, ss = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = sample_xi(env, rng).xi;
      s += x;
      ss += x * x;
    }
    const double emp_mean = s / n;
    const double emp_var = ss / n - emp_mean * emp_mean;
    CAPTURE(m);
    CAPTURE(v);
    CHECK(std::abs(emp_mean - mean) < 5.0 * std::sqrt(var / n));
    CHECK(emp_var == doctest::Approx(var).epsilon(0.02));
  }
}

TEST_CASE("proposal counts") {
  RngStream rng(3, 3);
  const auto env = build_envelope(XiConditionalParams::from_m(1.0, 1.0));
  long total = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto d = sample_xi(env, rng);
    CHECK(d.proposals >= 1);
    total += d.proposals;
  }
  CHECK(total / 10000.0 < 1.3);
}

TEST_CASE("same seed, same draws") {
  RngStream a(8, 8), b(8, 8);
  const auto p = XiConditionalParams::from_m(0.4, 2.0);
  for (int i = 0; i < 100; ++i) CHECK(sample_xi(p, a).xi == sample_xi(p, b).xi);
}
