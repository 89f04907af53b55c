#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "logscale/errors.hpp"
#include "logscale/gibbs.hpp"
#include "logscale/priors.hpp"
#include "logscale/quadrature.hpp"
#include "logscale/verify.hpp"

using namespace lss;

namespace {

constexpr double kPi = std::numbers::pi;

GibbsState blank_state(Eigen::Index n, ModelConfig c) {
  if (!c.tau_bounds) c.tau_bounds = std::pair{1e-3, 10.0};
  return initial_state(Eigen::VectorXd::Zero(n), c);
}

// A state without coordinates: only the global parameters remain.
GibbsState empty_state(double tau_low, double tau_high) {
  GibbsState s;
  s.y = s.beta = s.xi = s.omega2 = s.eta2 = s.zeta = Eigen::VectorXd(0);
  s.tau_low = tau_low;
  s.tau_high = tau_high;
  s.tau = std::sqrt(tau_low * tau_high);
  return s;
}

bool ks_ok(std::vector<double> draws, const std::function<double(double)>& cdf) {
  std::sort(draws.begin(), draws.end());
  std::vector<double> c(draws.size());
  for (std::size_t i = 0; i < draws.size(); ++i) c[i] = cdf(draws[i]);
  const double d = verify::ks_statistic(c);
  CAPTURE(d);
  return std::sqrt(static_cast<double>(draws.size())) * d < 1.6276;
}

ModelConfig short_chain(Mixing mix, std::uint64_t seed = 1) {
  ModelConfig c;
  c.mixing = mix;
  c.iterations = 3000;
  c.burnin = 1000;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("configuration validation") {
  ModelConfig c;
  CHECK_NOTHROW(validate(c, 10));
  c.burnin = c.iterations;
  CHECK_THROWS_AS(validate(c, 10), DomainError);
  c = ModelConfig{};
  c.sigma2 = 0.0;
  CHECK_THROWS_AS(validate(c, 10), DomainError);
  c = ModelConfig{};
  c.tau_bounds = std::pair{0.5, 0.2};
  CHECK_THROWS_AS(validate(c, 10), DomainError);
  c = ModelConfig{};
  c.mixing = LogTMix{-1.0};
  CHECK_THROWS_AS(validate(c, 10), DomainError);
  c = ModelConfig{};
  CHECK_THROWS_AS(validate(c, 0), DomainError);
  c.psi = PsiMode::fixed(-2.0);
  CHECK_THROWS_AS(validate(c, 5), DomainError);
}

TEST_CASE("tau bounds") {
  ModelConfig c;
  auto [lo, hi] = resolve_tau_bounds(c, 50);
  CHECK(lo == doctest::Approx(0.02));
  CHECK(hi == 1.0);
  c.mixing = RidgeFixed{};
  std::tie(lo, hi) = resolve_tau_bounds(c, 50);
  CHECK(lo == 0.0);
  CHECK(std::isinf(hi));
  c.tau_bounds = std::pair{0.1, 3.0};
  std::tie(lo, hi) = resolve_tau_bounds(c, 50);
  CHECK(hi == 3.0);
}

TEST_CASE("beta update moments") {
  ModelConfig c;
  GibbsState s = blank_state(1, c);
  s.y(0) = 2.0;
  s.xi(0) = 0.0;
  s.tau = 1.0;  // kappa = 1/2
  RngStream rng(1, 1);
  const int n = 100000;
  double sum = 0.0, ss = 0.0;
  for (int i = 0; i < n; ++i) {
    update_beta(s, c, rng);
    sum += s.beta(0);
    ss += s.beta(0) * s.beta(0);
  }
  const double mean = sum / n;
  CHECK(mean == doctest::Approx(1.0).epsilon(0.01));
  CHECK(ss / n - mean * mean == doctest::Approx(0.5).epsilon(0.02));

  s.xi(0) = -40.0;
  update_beta(s, c, rng);
  CHECK(std::abs(s.beta(0)) < 1e-15);
  s.xi(0) = 40.0;
  update_beta(s, c, rng);
  CHECK(std::abs(s.beta(0) - 2.0) < 6.0);
}

TEST_CASE("xi update with beta = 0 is the Gaussian N(-v, v)") {
  ModelConfig c;
  c.psi = PsiMode::fixed(1.5);
  GibbsState s = blank_state(20000, c);
  s.omega2.setConstant(0.8);
  RngStream rng(2, 2);
  update_xi(s, c, rng);
  const double v = 0.8 * 1.5 * 1.5;
  std::vector<double> d(s.xi.data(), s.xi.data() + s.xi.size());
  CHECK(ks_ok(d, [&](double x) { return 0.5 * std::erfc(-(x + v) / std::sqrt(2.0 * v)); }));
}

TEST_CASE("omega conditionals") {
  SUBCASE("log-t at xi = 0") {
    ModelConfig c;
    c.mixing = LogTMix{7.0};
    GibbsState s = blank_state(50000, c);
    s.xi.setZero();
    RngStream rng(3, 3);
    update_omega(s, c, rng);
    CHECK(s.omega2.mean() == doctest::Approx(7.0 / 6.0).epsilon(0.02));
  }
  SUBCASE("log-Laplace with xi^2 = 2 psi^2") {
    ModelConfig c;
    c.mixing = LogLaplaceMix{};
    GibbsState s = blank_state(50000, c);
    s.psi2 = 0.49;
    s.xi.setConstant(std::sqrt(2.0 * 0.49));
    RngStream rng(4, 4);
    update_omega(s, c, rng);
    CHECK(s.omega2.array().inverse().mean() == doctest::Approx(1.0).epsilon(0.02));
  }
  SUBCASE("log-Laplace at xi = 0 stays finite") {
    ModelConfig c;
    c.mixing = LogLaplaceMix{};
    GibbsState s = blank_state(1000, c);
    s.xi.setZero();
    RngStream rng(5, 5);
    update_omega(s, c, rng);
    CHECK(s.omega2.allFinite());
    CHECK((s.omega2.array() > 0.0).all());
  }
}

TEST_CASE("omega-xi composition reproduces the xi prior") {
  const double psi = 0.9;
  auto run = [&](Mixing mix, const PriorFamily& fam) {
    ModelConfig c;
    c.mixing = mix;
    GibbsState s = blank_state(1, c);
    s.psi2 = psi * psi;
    RngStream rng(6, 6);
    std::vector<double> draws;
    for (int i = 0; i < 20000 * 3; ++i) {
      update_omega(s, c, rng);
      s.xi(0) = std::sqrt(s.omega2(0)) * psi * rng.normal();
      if (i % 3 == 0) draws.push_back(s.xi(0));
    }
    return ks_ok(draws, [&](double x) { return xi_cdf(fam, x); });
  };
  // Exp(1) mixing gives a Laplace of scale psi / sqrt 2.
  CHECK(run(LogLaplaceMix{}, PriorFamily::log_laplace(psi / std::sqrt(2.0), psi / std::sqrt(2.0))));
  CHECK(run(LogTMix{5.0}, PriorFamily::log_t(5.0, psi)));
}

TEST_CASE("psi update") {
  SUBCASE("no data terms: half-Cauchy fixed point") {
    ModelConfig c;
    GibbsState s = empty_state(0.1, 1.0);
    RngStream rng(7, 7);
    std::vector<double> draws;
    for (int i = 0; i < 100000 * 5; ++i) {
      update_psi(s, c, rng);
      if (i % 5 == 0) draws.push_back(std::sqrt(s.psi2));
    }
    CHECK(ks_ok(draws, [](double x) { return 2.0 / kPi * std::atan(x); }));
  }
  SUBCASE("likelihood-dominated limit") {
    ModelConfig c;
    GibbsState s = blank_state(1000, c);
    s.xi.setConstant(10.0);
    s.omega2.setOnes();
    RngStream rng(8, 8);
    double sum = 0.0;
    for (int i = 0; i < 2000; ++i) {
      update_psi(s, c, rng);
      sum += s.psi2;
    }
    CHECK(sum / 2000 == doctest::Approx(50000.0 / (500.5 - 1.0)).epsilon(0.05));
  }
  SUBCASE("fixed psi is untouched") {
    ModelConfig c;
    c.psi = PsiMode::fixed(0.3);
    GibbsState s = blank_state(10, c);
    RngStream rng(9, 9);
    update_psi(s, c, rng);
    CHECK(s.psi2 == doctest::Approx(0.09));
  }
  SUBCASE("truncation") {
    ModelConfig c;
    c.psi_max = 2.0;
    GibbsState s = empty_state(0.1, 1.0);
    RngStream rng(10, 10);
    for (int i = 0; i < 5000; ++i) {
      update_psi(s, c, rng);
      REQUIRE(s.psi2 <= 4.0);
    }
  }
}

TEST_CASE("tau update") {
  SUBCASE("no data: truncated half-Cauchy") {
    ModelConfig c;
    GibbsState s = empty_state(0.2, 3.0);
    RngStream rng(11, 11);
    std::vector<double> draws;
    for (int i = 0; i < 40000 * 5; ++i) {
      update_tau(s, c, rng);
      REQUIRE(s.tau > 0.2);
      REQUIRE(s.tau < 3.0);
      if (i % 5 == 0) draws.push_back(s.tau);
    }
    const double a = std::atan(0.2), b = std::atan(3.0);
    CHECK(ks_ok(draws, [&](double x) { return (std::atan(x) - a) / (b - a); }));
  }
  SUBCASE("large effects: posterior mean vs quadrature") {
    ModelConfig c;
    c.tau_bounds = std::pair{1.0 / 40.0, 1.0};
    GibbsState s = blank_state(40, c);
    s.beta.setConstant(0.8);
    s.xi.setZero();
    const double n = 40.0, ssq = 40.0 * 0.64;
    auto dens = [&](double t) { return std::pow(t, -n) * std::exp(-0.5 * ssq / (t * t)) / (1.0 + t * t); };
    const std::vector<double> pts = {1.0 / 40.0, 0.1, 0.3, 0.6, 1.0};
    const double z = quad::integrate_or_throw(dens, pts);
    const double m = quad::integrate_or_throw([&](double t) { return t * dens(t); }, pts) / z;
    RngStream rng(12, 12);
    double sum = 0.0;
    for (int i = 0; i < 20000; ++i) {
      update_tau(s, c, rng);
      sum += s.tau;
    }
    CHECK(sum / 20000 == doctest::Approx(m).epsilon(0.02));
  }
}

TEST_CASE("null signal") {
  const auto out = run_chain(Eigen::VectorXd::Zero(50), short_chain(LogTMix{7.0}));
  CHECK((out.posterior_mean_beta.array().abs() < 0.05).all());
  CHECK(out.selected.count() == 0);
  CHECK(out.kept_draws == 2000);
  CHECK((out.posterior_mean_kappa.array() >= 0.0).all());
  CHECK((out.posterior_mean_kappa.array() <= 1.0).all());
}

TEST_CASE("a single large effect is kept") {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(50);
  y(7) = 20.0;
  for (Mixing mix : {Mixing{LogTMix{7.0}}, Mixing{LogLaplaceMix{}}, Mixing{HorseshoeMix{}}, Mixing{HorseshoePlusMix{}}}) {
    const auto out = run_chain(y, short_chain(mix));
    CAPTURE(mixing_name(mix));
    CHECK(out.selected(7));
    CHECK(out.selected.count() == 1);
    CHECK(out.posterior_mean_beta(7) == doctest::Approx(20.0).epsilon(0.1));
  }
}

TEST_CASE("shrinkage is monotone in |y|") {
  Eigen::VectorXd y(12);
  for (int i = 0; i < 12; ++i) y(i) = 0.5 * i;
  ModelConfig c = short_chain(LogTMix{7.0});
  c.iterations = 20000;
  c.burnin = 2000;
  const auto out = run_chain(y, c);
  for (int i = 1; i < 12; ++i) CHECK(out.posterior_mean_kappa(i) <= out.posterior_mean_kappa(i - 1) + 0.02);
}

TEST_CASE("ridge limits") {
  RngStream rng(13, 13);
  Eigen::VectorXd y(1000);
  for (auto& v : y) v = std::sqrt(1.25) * rng.normal();
  SUBCASE("ridge comparator keeps lambda = 1") {
    const auto out = run_chain(y, short_chain(RidgeFixed{}));
    CHECK(std::isnan(out.posterior_mean_psi));
    CHECK(out.mean_proposals == 0.0);
    const double k = out.posterior_mean_kappa(0);
    CHECK((out.posterior_mean_kappa.array() - k).abs().maxCoeff() < 1e-12);
  }
  SUBCASE("log-t with tiny fixed psi behaves like ridge") {
    ModelConfig c = short_chain(LogTMix{7.0});
    c.psi = PsiMode::fixed(1e-4);
    const auto out = run_chain(y, c);
    const double t = out.posterior_mean_tau;
    const Eigen::VectorXd ridge = (1.0 - 1.0 / (1.0 + t * t)) * y;
    CHECK((out.posterior_mean_beta - ridge).norm() <= 0.05 * ridge.norm());
  }
}

TEST_CASE("determinism and relabelling") {
  RngStream rng(14, 14);
  Eigen::VectorXd y(30);
  for (int i = 0; i < 30; ++i) y(i) = (i % 6 == 0 ? 5.0 : 0.0) + rng.normal();
  ModelConfig c = short_chain(LogTMix{7.0}, 21);
  const auto a = run_chain(y, c);
  const auto b = run_chain(y, c);
  CHECK((a.posterior_mean_beta.array() == b.posterior_mean_beta.array()).all());
  CHECK(a.posterior_mean_psi == b.posterior_mean_psi);
  c.chain_id = 1;
  const auto other = run_chain(y, c);
  CHECK((other.posterior_mean_beta.array() != a.posterior_mean_beta.array()).any());

  // Reversing the coordinates changes only Monte Carlo noise.
  c.iterations = 20000;
  c.burnin = 2000;
  const auto fwd = run_chain(y, c);
  const Eigen::VectorXd rev_y = y.reverse();
  const auto rev = run_chain(rev_y, c);
  CHECK((fwd.posterior_mean_beta - rev.posterior_mean_beta.reverse()).cwiseAbs().maxCoeff() < 0.1);
}
