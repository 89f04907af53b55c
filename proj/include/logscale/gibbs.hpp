#pragma once

// Systematic-scan Gibbs sampler for the normal means model
//   y_j ~ N(beta_j, sigma2),  beta_j ~ N(0, lambda_j^2 tau^2 sigma2),
// with xi_j = log lambda_j given a log-Laplace or log-t prior written as a
// normal scale mixture, xi_j | omega_j, psi ~ N(0, omega_j^2 psi^2), a
// half-Cauchy scale psi and a truncated half-Cauchy global scale tau.
// Horseshoe, horseshoe+ and ridge comparators share the beta and tau updates.

#include <Eigen/Core>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "logscale/randkit.hpp"

namespace lss {

struct LogLaplaceMix {};
struct LogTMix {
  double alpha = 7.0;
};
struct HorseshoeMix {};
struct HorseshoePlusMix {};
struct RidgeFixed {};

using Mixing = std::variant<LogLaplaceMix, LogTMix, HorseshoeMix, HorseshoePlusMix, RidgeFixed>;

struct PsiMode {
  bool sampled = true;
  double value = 1.0;  // used when !sampled

  static PsiMode adapt() { return {true, 1.0}; }
  static PsiMode fixed(double psi) { return {false, psi}; }
};

struct ModelConfig {
  Mixing mixing = LogTMix{};
  PsiMode psi = PsiMode::adapt();
  double sigma2 = 1.0;
  /// Unset means the default for the mixing: (1/n, 1), or (0, inf) for ridge.
  std::optional<std::pair<double, double>> tau_bounds;
  /// Upper truncation of the half-Cauchy prior on psi (infinite by default).
  double psi_max = std::numeric_limits<double>::infinity();
  int iterations = 10000;
  int burnin = 5000;
  int thin = 1;
  std::uint64_t seed = 1;
  std::uint64_t chain_id = 0;
};

std::string mixing_name(const Mixing& m);
/// Throws lss::DomainError on an inconsistent configuration.
void validate(const ModelConfig& config, Eigen::Index n);
std::pair<double, double> resolve_tau_bounds(const ModelConfig& config, Eigen::Index n);

struct GibbsState {
  Eigen::VectorXd y;
  Eigen::VectorXd beta;
  Eigen::VectorXd xi;      // log lambda_j
  Eigen::VectorXd omega2;  // mixing variances (log-scale priors) or nu_j (horseshoe family)
  Eigen::VectorXd eta2;    // horseshoe+ only: squared scales of lambda_j
  Eigen::VectorXd zeta;    // horseshoe+ only
  double psi2 = 1.0;
  double phi = 1.0;
  double tau = 1.0;
  double sigma2 = 1.0;
  double tau_low = 0.0;
  double tau_high = 1.0;

  Eigen::Index size() const { return y.size(); }
  /// kappa_j = 1 / (1 + lambda_j^2 tau^2)
  Eigen::ArrayXd kappa() const;
};

/// Starting point: beta = y, lambda = 1, unit auxiliaries, tau at the
/// geometric midpoint of its bounds (1 when unbounded), raised to the moment
/// estimate sqrt(mean(y^2)/sigma^2 - 1) when that is larger.
GibbsState initial_state(const Eigen::VectorXd& y, const ModelConfig& config);

/// Draw every latent quantity from the prior and y from the likelihood.
GibbsState draw_from_prior(Eigen::Index n, const ModelConfig& config, RngStream& rng);

void update_beta(GibbsState& s, const ModelConfig& c, RngStream& rng);
/// Returns the number of rejection-sampler proposals used.
long update_xi(GibbsState& s, const ModelConfig& c, RngStream& rng);
void update_omega(GibbsState& s, const ModelConfig& c, RngStream& rng);
void update_psi(GibbsState& s, const ModelConfig& c, RngStream& rng);
void update_tau(GibbsState& s, const ModelConfig& c, RngStream& rng);

/// One full sweep in the order beta, xi, omega, (psi, phi), tau. Returns proposals used.
long sweep(GibbsState& s, const ModelConfig& c, RngStream& rng);

struct ChainOutput {
  Eigen::VectorXd posterior_mean_beta;
  Eigen::VectorXd posterior_mean_kappa;
  Eigen::Array<bool, Eigen::Dynamic, 1> selected;
  double posterior_mean_psi = std::numeric_limits<double>::quiet_NaN();
  double posterior_mean_tau = 0.0;
  double mean_proposals = 0.0;  // per xi draw; 0 when the xi sampler is not used
  long kept_draws = 0;
};

/// burnin + kept sweeps from initial_state(y); deterministic given (seed, chain_id).
ChainOutput run_chain(const Eigen::VectorXd& y, const ModelConfig& config);

}  // namespace lss
