#pragma once

// Shrinkage-prior densities over xi = log(lambda), lambda and the shrinkage
// factor kappa = 1/(1 + lambda^2), the closed-form log-Laplace marginal of
// beta, and a quadrature marginal usable for every family.

#include <Eigen/Core>
#include <string>
#include <utility>
#include <variant>

namespace lss {

/// Asymmetric Laplace on xi with left scale psi1 and right scale psi2.
struct LogLaplace {
  double psi1 = 1.0;
  double psi2 = 1.0;
};
/// Student-t on xi with alpha degrees of freedom and scale psi.
struct LogT {
  double alpha = 7.0;
  double psi = 1.0;
};
/// Hyperbolic secant on xi with scale psi; psi = 1 is the horseshoe.
struct LogHypSech {
  double psi = 1.0;
};
/// z-distribution (beta-prime prior on lambda^2) with shapes a, b and scale s.
struct ZDist {
  double a = 0.5;
  double b = 0.5;
  double s = 1.0;
};
struct BayesLasso {};
struct Horseshoe {};
struct HorseshoePlus {};
/// Point mass at xi = location; has no density.
struct Ridge {};

using FamilyKind =
    std::variant<LogLaplace, LogT, LogHypSech, ZDist, BayesLasso, Horseshoe, HorseshoePlus, Ridge>;

struct PriorFamily {
  FamilyKind kind = Horseshoe{};
  /// Location of the xi density (log tau when the global scale is folded in).
  double location = 0.0;

  static PriorFamily log_laplace(double psi1, double psi2, double location = 0.0);
  static PriorFamily log_t(double alpha, double psi, double location = 0.0);
  static PriorFamily log_hyp_sech(double psi, double location = 0.0);
  static PriorFamily z_dist(double a, double b, double s = 1.0, double location = 0.0);
  static PriorFamily bayes_lasso(double location = 0.0);
  static PriorFamily horseshoe(double location = 0.0);
  static PriorFamily horseshoe_plus(double location = 0.0);
  static PriorFamily ridge(double location = 0.0);

  bool is_ridge() const { return std::holds_alternative<Ridge>(kind); }
};

/// Throws lss::DomainError if any scale or shape field is not strictly positive.
void validate(const PriorFamily& family);
std::string describe(const PriorFamily& family);

struct DensityPoint {
  double abscissa = 0.0;
  double density = 0.0;
  double log_density = 0.0;
};

/// Normalised log density over xi. Ridge throws lss::UnsupportedFamily.
double xi_log_density(const PriorFamily& family, double xi);
Eigen::ArrayXd xi_log_density(const PriorFamily& family, const Eigen::ArrayXd& xi);
inline double xi_density(const PriorFamily& family, double xi) {
  return std::exp(xi_log_density(family, xi));
}

DensityPoint xi_density_point(const PriorFamily& family, double xi);

/// p(lambda) = p_xi(log lambda) / lambda.
double lambda_density(const PriorFamily& family, double lambda);
Eigen::ArrayXd lambda_density(const PriorFamily& family, const Eigen::ArrayXd& lambda);

/// p(kappa) with kappa = 1/(1 + lambda^2), via xi = log((1-kappa)/kappa)/2.
double kappa_density(const PriorFamily& family, double kappa);

/// Closed-form marginal of beta under a log-Laplace(psi1, psi2) prior on
/// log(lambda) and beta | lambda ~ N(0, lambda^2).
double marginal_beta_log_laplace(double beta, double psi1, double psi2);

/// int N(beta; 0, exp(2 xi)) p(xi) dxi over xi in [location - 40, location + 40].
double marginal_beta_quadrature(const PriorFamily& family, double beta);

/// Prior CDF over xi by quadrature.
double xi_cdf(const PriorFamily& family, double xi);

struct Quartiles {
  double q25 = 0.0;
  double q75 = 0.0;
};

/// First and third quartiles of the xi density (tolerance 1e-6).
Quartiles iqr_xi(const PriorFamily& family);
/// The same quartiles mapped to the shrinkage coefficient 1 - kappa.
Quartiles iqr_one_minus_kappa(const PriorFamily& family);

enum class TailSide { NearZero, FarTail };

struct TailFit {
  double slope = 0.0;
  double intercept = 0.0;
  double beta_min = 0.0;
  double beta_max = 0.0;
};

/// Least-squares slope of log p(beta) against log|beta| over 25 log-spaced
/// points in [1e-6, 1e-4] (near zero) or [1e3, 1e5] (far tail).
TailFit tail_exponent(const PriorFamily& family, TailSide side);
/// Same fit over a caller-chosen window.
TailFit tail_exponent(const PriorFamily& family, double beta_min, double beta_max, int points = 25);

}  // namespace lss
