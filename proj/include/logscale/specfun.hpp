#pragma once

// Scalar special functions used by the log-Laplace marginal and the
// xi rejection sampler: principal-branch Lambert W, the generalised
// exponential integral E_s(x), and the incomplete gamma functions.
//
// The *_detail variants report convergence instead of throwing; the plain
// variants throw lss::ConvergenceError when an iteration cap is hit.

#include <cstdint>

namespace lss::specfun {

struct SpecFunResult {
  double value = 0.0;
  bool converged = false;
  std::uint32_t iterations = 0;
};

inline constexpr int kLambertMaxIter = 100;
inline constexpr double kLambertRelStep = 1e-14;
inline constexpr int kSeriesMaxIter = 10000;

/// W0(x) for x >= 0: Halley iteration started at 1 (x < 3) or
/// log x - log log x.
SpecFunResult lambert_w0_detail(double x);
double lambert_w0(double x);

/// W0(exp(log_x)), usable when exp(log_x) overflows; log_x = -inf gives 0.
double lambert_w0_from_log(double log_x);

/// E_s(x) = int_1^inf exp(-x t) t^-s dt for s > 0, x > 0.
SpecFunResult gen_exp_integral_detail(double s, double x);
double gen_exp_integral(double s, double x);
/// log E_s(x); finite for x far beyond the exp underflow threshold.
double log_gen_exp_integral(double s, double x);

/// gamma(s, x) = int_0^x v^(s-1) exp(-v) dv for s > 0, x >= 0.
SpecFunResult lower_inc_gamma_detail(double s, double x);
double lower_inc_gamma(double s, double x);

/// x^-s gamma(s, x), finite as x -> 0 (limit 1/s) and for huge x.
double lower_inc_gamma_scaled(double s, double x);

/// Gamma(s, x) for x > 0 and any real s that is not a non-positive integer
/// forced through Gamma(s) (s = 0 and negative s are supported).
SpecFunResult upper_inc_gamma_detail(double s, double x);
double upper_inc_gamma(double s, double x);

}  // namespace lss::specfun
