#include "logscale/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "logscale/errors.hpp"
#include "logscale/xi_sampler.hpp"

namespace lss {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kSliceMaxSteps = 200;
constexpr int kTruncationMaxTries = 1000000;

bool uses_xi_sampler(const Mixing& m) {
  return std::holds_alternative<LogLaplaceMix>(m) || std::holds_alternative<LogTMix>(m);
}

// psi^2 ~ IG(shape, rate) restricted to psi^2 <= psi_max^2.
double sample_psi2(RngStream& rng, double shape, double rate, double psi_max) {
  const double cap = psi_max * psi_max;
  for (int i = 0; i < kTruncationMaxTries; ++i) {
    const double d = sample_inverse_gamma(rng, shape, rate);
    if (d <= cap) return d;
  }
  throw SamplerFailure("psi^2 truncation rejection exhausted its budget", shape, rate);
}

double sample_truncated_half_cauchy(RngStream& rng, double lo, double hi) {
  const double a = std::atan(lo);
  const double b = std::atan(hi);  // pi/2 for hi = inf
  for (;;) {
    const double t = std::tan(a + (b - a) * rng.uniform());
    if (t > lo && t < hi) return t;
  }
}

// Log density of u = log tau given S = sum (beta_j / lambda_j)^2 / sigma2.
double log_tau_target(double u, double n, double s, double lo, double hi) {
  if (!(u > lo && u < hi)) return -kInf;
  const double e2u = std::exp(2.0 * u);
  const double log1p_e2u = u > 20.0 ? 2.0 * u + std::log1p(1.0 / e2u) : std::log1p(e2u);
  return -(n - 1.0) * u - 0.5 * s * std::exp(-2.0 * u) - log1p_e2u;
}

}  // namespace

std::string mixing_name(const Mixing& m) {
  return std::visit(overloaded{
                        [](const LogLaplaceMix&) { return std::string("log-laplace"); },
                        [](const LogTMix&) { return std::string("log-t"); },
                        [](const HorseshoeMix&) { return std::string("horseshoe"); },
                        [](const HorseshoePlusMix&) { return std::string("hs-plus"); },
                        [](const RidgeFixed&) { return std::string("ridge"); },
                    },
                    m);
}

std::pair<double, double> resolve_tau_bounds(const ModelConfig& config, Eigen::Index n) {
  if (config.tau_bounds) return *config.tau_bounds;
  if (std::holds_alternative<RidgeFixed>(config.mixing)) return {0.0, kInf};
  return {1.0 / static_cast<double>(n), 1.0};
}

void validate(const ModelConfig& c, Eigen::Index n) {
  if (n < 1) throw DomainError("model needs at least one observation");
  if (!(c.sigma2 > 0.0) || !std::isfinite(c.sigma2)) throw DomainError("sigma2 must be positive");
  if (const auto* t = std::get_if<LogTMix>(&c.mixing); t && !(t->alpha > 0.0 && std::isfinite(t->alpha))) {
    throw DomainError("log-t degrees of freedom must be positive");
  }
  if (!c.psi.sampled && !(c.psi.value > 0.0 && std::isfinite(c.psi.value))) {
    throw DomainError("fixed psi must be positive");
  }
  if (!(c.psi_max > 0.0)) throw DomainError("psi_max must be positive");
  const auto [lo, hi] = resolve_tau_bounds(c, n);
  if (!(lo >= 0.0 && lo < hi)) throw DomainError("tau bounds must satisfy 0 <= low < high");
  if (c.iterations < 1 || c.burnin < 0 || c.burnin >= c.iterations) {
    throw DomainError("need iterations >= 1 and 0 <= burnin < iterations");
  }
  if (c.thin < 1) throw DomainError("thin must be >= 1");
}

Eigen::ArrayXd GibbsState::kappa() const {
  const double lt = 2.0 * std::log(tau);
  return xi.array().unaryExpr([lt](double x) { return 1.0 / (1.0 + std::exp(2.0 * x + lt)); });
}

GibbsState initial_state(const Eigen::VectorXd& y, const ModelConfig& c) {
  const Eigen::Index n = y.size();
  validate(c, n);
  if (!y.allFinite()) throw DomainError("observations must be finite");
  GibbsState s;
  s.y = y;
  s.beta = y;
  s.xi = Eigen::VectorXd::Zero(n);
  s.omega2 = Eigen::VectorXd::Ones(n);
  if (std::holds_alternative<HorseshoePlusMix>(c.mixing)) {
    s.eta2 = Eigen::VectorXd::Ones(n);
    s.zeta = Eigen::VectorXd::Ones(n);
  }
  s.sigma2 = c.sigma2;
  s.psi2 = c.psi.sampled ? std::min(1.0, c.psi_max * c.psi_max) : c.psi.value * c.psi.value;
  s.phi = 1.0;
  std::tie(s.tau_low, s.tau_high) = resolve_tau_bounds(c, n);
  if (std::isfinite(s.tau_high) && s.tau_low > 0.0) {
    s.tau = std::sqrt(s.tau_low * s.tau_high);
  } else {
    s.tau = std::clamp(1.0, s.tau_low, s.tau_high);
    if (!(s.tau > s.tau_low && s.tau < s.tau_high)) s.tau = 0.5 * (s.tau_low + std::min(s.tau_high, s.tau_low + 2.0));
  }
  // The beta-tau coupling moves tau up only slowly, so start no lower than the
  // moment estimate of the signal scale.
  if (n > 0) {
    const double excess = y.squaredNorm() / (static_cast<double>(n) * c.sigma2) - 1.0;
    const double guess = std::sqrt(std::max(excess, 0.0));
    if (guess > s.tau) {
      const double cap = std::isfinite(s.tau_high) ? std::exp(std::log(s.tau_high) - 1e-6) : guess;
      s.tau = std::max(s.tau, std::min(guess, cap));
    }
  }
  return s;
}

GibbsState draw_from_prior(Eigen::Index n, const ModelConfig& c, RngStream& rng) {
  GibbsState s = initial_state(Eigen::VectorXd::Zero(n), c);
  if (c.psi.sampled) {
    // Truncating psi^2 | phi would reweight phi by P(psi <= psi_max | phi); draw psi
    // from the truncated half-Cauchy and phi from its conditional instead.
    const double psi = sample_truncated_half_cauchy(rng, 0.0, c.psi_max);
    s.psi2 = psi * psi;
    s.phi = sample_inverse_gamma(rng, 1.0, 1.0 + 1.0 / s.psi2);
  }
  s.tau = sample_truncated_half_cauchy(rng, s.tau_low, s.tau_high);
  for (Eigen::Index j = 0; j < n; ++j) {
    std::visit(overloaded{
                   [&](const LogLaplaceMix&) {
                     s.omega2(j) = sample_exponential(rng, 1.0);
                     s.xi(j) = std::sqrt(s.omega2(j) * s.psi2) * rng.normal();
                   },
                   [&](const LogTMix& t) {
                     s.omega2(j) = sample_inverse_gamma(rng, 0.5 * t.alpha, 0.5 * t.alpha);
                     s.xi(j) = std::sqrt(s.omega2(j) * s.psi2) * rng.normal();
                   },
                   [&](const HorseshoeMix&) {
                     s.omega2(j) = sample_inverse_gamma(rng, 0.5, 1.0);
                     s.xi(j) = 0.5 * std::log(sample_inverse_gamma(rng, 0.5, 1.0 / s.omega2(j)));
                   },
                   [&](const HorseshoePlusMix&) {
                     s.zeta(j) = sample_inverse_gamma(rng, 0.5, 1.0);
                     s.eta2(j) = sample_inverse_gamma(rng, 0.5, 1.0 / s.zeta(j));
                     s.omega2(j) = sample_inverse_gamma(rng, 0.5, 1.0 / s.eta2(j));
                     s.xi(j) = 0.5 * std::log(sample_inverse_gamma(rng, 0.5, 1.0 / s.omega2(j)));
                   },
                   [&](const RidgeFixed&) { s.xi(j) = 0.0; },
               },
               c.mixing);
    const double sd = std::exp(s.xi(j)) * s.tau * std::sqrt(s.sigma2);
    s.beta(j) = sd * rng.normal();
    s.y(j) = s.beta(j) + std::sqrt(s.sigma2) * rng.normal();
  }
  return s;
}

void update_beta(GibbsState& s, const ModelConfig&, RngStream& rng) {
  const double lt = 2.0 * std::log(s.tau);
  const double sd_noise = std::sqrt(s.sigma2);
  for (Eigen::Index j = 0; j < s.size(); ++j) {
    const double shrink = 1.0 / (1.0 + std::exp(-(2.0 * s.xi(j) + lt)));  // 1 - kappa_j
    s.beta(j) = shrink * s.y(j) + sd_noise * std::sqrt(shrink) * rng.normal();
  }
}

long update_xi(GibbsState& s, const ModelConfig& c, RngStream& rng) {
  const double log_scale = std::log(2.0) + 2.0 * std::log(s.tau) + std::log(s.sigma2);
  long proposals = 0;
  if (uses_xi_sampler(c.mixing)) {
    for (Eigen::Index j = 0; j < s.size(); ++j) {
      const double b = std::abs(s.beta(j));
      const double log_m = b > 0.0 ? 2.0 * std::log(b) - log_scale : -kInf;
      const auto params = XiConditionalParams::from_log_m(log_m, s.omega2(j) * s.psi2);
      const XiDraw d = sample_xi(params, rng);
      s.xi(j) = d.xi;
      proposals += d.proposals;
    }
  } else if (!std::holds_alternative<RidgeFixed>(c.mixing)) {
    // lambda_j^2 ~ IG(1, 1/nu_j + beta_j^2 / (2 tau^2 sigma2))
    const double denom = std::exp(log_scale);
    for (Eigen::Index j = 0; j < s.size(); ++j) {
      const double rate = 1.0 / s.omega2(j) + s.beta(j) * s.beta(j) / denom;
      s.xi(j) = 0.5 * std::log(sample_inverse_gamma(rng, 1.0, rate));
    }
  }
  return proposals;
}

void update_omega(GibbsState& s, const ModelConfig& c, RngStream& rng) {
  const Eigen::Index n = s.size();
  std::visit(overloaded{
                 [&](const LogLaplaceMix&) {
                   const double psi = std::sqrt(s.psi2);
                   for (Eigen::Index j = 0; j < n; ++j) {
                     const double ax = std::abs(s.xi(j));
                     if (ax < 1e-12) {
                       // Limit of the conditional at xi = 0: omega^2 ~ Gamma(1/2, 1).
                       s.omega2(j) = sample_gamma(rng, 0.5, 1.0);
                     } else {
                       s.omega2(j) = 1.0 / sample_inverse_gaussian(rng, std::sqrt(2.0) * psi / ax, 2.0);
                     }
                   }
                 },
                 [&](const LogTMix& t) {
                   for (Eigen::Index j = 0; j < n; ++j) {
                     const double rate = s.xi(j) * s.xi(j) / (2.0 * s.psi2) + 0.5 * t.alpha;
                     s.omega2(j) = sample_inverse_gamma(rng, 0.5 * (t.alpha + 1.0), rate);
                   }
                 },
                 [&](const HorseshoeMix&) {
                   for (Eigen::Index j = 0; j < n; ++j) {
                     s.omega2(j) = sample_inverse_gamma(rng, 1.0, 1.0 + std::exp(-2.0 * s.xi(j)));
                   }
                 },
                 [&](const HorseshoePlusMix&) {
                   for (Eigen::Index j = 0; j < n; ++j) {
                     s.omega2(j) = sample_inverse_gamma(rng, 1.0, 1.0 / s.eta2(j) + std::exp(-2.0 * s.xi(j)));
                     s.eta2(j) = sample_inverse_gamma(rng, 1.0, 1.0 / s.zeta(j) + 1.0 / s.omega2(j));
                     s.zeta(j) = sample_inverse_gamma(rng, 1.0, 1.0 + 1.0 / s.eta2(j));
                   }
                 },
                 [&](const RidgeFixed&) {},
             },
             c.mixing);
}

void update_psi(GibbsState& s, const ModelConfig& c, RngStream& rng) {
  if (!uses_xi_sampler(c.mixing) || !c.psi.sampled) return;
  const double n = static_cast<double>(s.size());
  const double q = 0.5 * (s.xi.array().square() / s.omega2.array()).sum();
  s.psi2 = sample_psi2(rng, 0.5 * (n + 1.0), 1.0 / s.phi + q, c.psi_max);
  s.phi = sample_inverse_gamma(rng, 1.0, 1.0 + 1.0 / s.psi2);
}

void update_tau(GibbsState& s, const ModelConfig&, RngStream& rng) {
  const double n = static_cast<double>(s.size());
  const double ssq = (s.beta.array().square() * (-2.0 * s.xi.array()).exp()).sum() / s.sigma2;
  const double lo = s.tau_low > 0.0 ? std::log(s.tau_low) : -kInf;
  const double hi = std::isfinite(s.tau_high) ? std::log(s.tau_high) : kInf;
  auto f = [&](double u) { return log_tau_target(u, n, ssq, lo, hi); };

  // Slice sampling on u = log tau with stepping out and shrinkage.
  const double u0 = std::log(s.tau);
  const double level = f(u0) - sample_exponential(rng, 1.0);
  constexpr double w = 1.0;
  double left = u0 - w * rng.uniform();
  double right = left + w;
  for (int i = 0; i < kSliceMaxSteps && left > lo && f(left) > level; ++i) left -= w;
  for (int i = 0; i < kSliceMaxSteps && right < hi && f(right) > level; ++i) right += w;
  left = std::max(left, lo);
  right = std::min(right, hi);
  for (;;) {
    const double u1 = left + (right - left) * rng.uniform();
    if (f(u1) > level) {
      s.tau = std::exp(u1);
      return;
    }
    if (u1 < u0) {
      left = u1;
    } else {
      right = u1;
    }
    if (!(right - left > 1e-14 * (1.0 + std::abs(u0)))) return;  // slice collapsed onto u0
  }
}

long sweep(GibbsState& s, const ModelConfig& c, RngStream& rng) {
  update_beta(s, c, rng);
  const long proposals = update_xi(s, c, rng);
  update_omega(s, c, rng);
  update_psi(s, c, rng);
  update_tau(s, c, rng);
  return proposals;
}

ChainOutput run_chain(const Eigen::VectorXd& y, const ModelConfig& config) {
  GibbsState s = initial_state(y, config);
  RngStream rng(config.seed, config.chain_id);
  const Eigen::Index n = y.size();
  Eigen::VectorXd sum_beta = Eigen::VectorXd::Zero(n);
  Eigen::ArrayXd sum_kappa = Eigen::ArrayXd::Zero(n);
  double sum_psi = 0.0;
  double sum_tau = 0.0;
  long kept = 0;
  long proposals = 0;
  for (int it = 0; it < config.iterations; ++it) {
    try {
      proposals += sweep(s, config, rng);
    } catch (const SamplerFailure& e) {
      throw SamplerFailure(std::string(e.what()) + " at sweep " + std::to_string(it), e.m(), e.v());
    }
    if (it >= config.burnin && (it - config.burnin) % config.thin == 0) {
      sum_beta += s.beta;
      sum_kappa += s.kappa();
      sum_psi += std::sqrt(s.psi2);
      sum_tau += s.tau;
      ++kept;
    }
  }
  ChainOutput out;
  const double k = static_cast<double>(kept);
  out.posterior_mean_beta = sum_beta / k;
  out.posterior_mean_kappa = (sum_kappa / k).matrix();
  out.selected = (1.0 - out.posterior_mean_kappa.array()) > 0.5;
  if (uses_xi_sampler(config.mixing)) {
    out.posterior_mean_psi = sum_psi / k;
    out.mean_proposals = static_cast<double>(proposals) / (static_cast<double>(config.iterations) * n);
  }
  out.posterior_mean_tau = sum_tau / k;
  out.kept_draws = kept;
  return out;
}

}  // namespace lss
