#include "logscale/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "logscale/errors.hpp"

namespace lss::specfun {

namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr double kEulerGamma = 0.57721566490153286061;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string(what) + ": non-finite argument");
}

double value_or_throw(const SpecFunResult& r, const char* what) {
  if (!r.converged) {
    throw ConvergenceError(std::string(what) + ": no convergence after " +
                           std::to_string(r.iterations) + " iterations");
  }
  return r.value;
}

// Riemann zeta at integer k >= 2.
double zeta_int(int k) {
  static constexpr double kSmall[] = {
      0.0, 0.0,
      1.6449340668482264365, 1.2020569031595942854, 1.0823232337111381915,
      1.0369277551433699263, 1.0173430619844491397, 1.0083492773819228268,
      1.0040773561979443394, 1.0020083928260822144};
  if (k < 10) return kSmall[k];
  double sum = 1.0;
  for (int n = 2; n <= 24; ++n) {
    const double t = std::pow(static_cast<double>(n), -k);
    sum += t;
    if (t < 1e-18) break;
  }
  return sum;
}

// log Gamma(1 + e) for |e| <= 0.25 via the zeta series, accurate in the
// relative sense as e -> 0.
double lgamma1p_small(double e) {
  double sum = -kEulerGamma * e;
  double pw = -e;  // (-e)^k
  for (int k = 2; k < 60; ++k) {
    pw *= -e;
    const double t = zeta_int(k) * pw / k;
    sum += t;
    if (std::abs(t) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// Modified Lentz evaluation of the E_s continued fraction. Returns log E_s(x).
SpecFunResult log_expint_cf(double s, double x) {
  double b = x + s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  SpecFunResult r;
  for (int i = 1; i <= kSeriesMaxIter; ++i) {
    const double an = -i * (s - 1.0 + i);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = c * d;
    h *= del;
    r.iterations = static_cast<std::uint32_t>(i);
    if (std::abs(del - 1.0) < kEps) {
      r.converged = true;
      break;
    }
  }
  r.value = std::log(h) - x;
  return r;
}

// E_s(x) for 0 < x < 1 by the power series
//   E_s(x) = Gamma(1-s) x^(s-1) - sum_k (-x)^k / (k! (1-s+k)),
// with the term that is singular at integer s merged analytically.
SpecFunResult expint_series(double s, double x) {
  const double a = 1.0 - s;
  const double log_x = std::log(x);
  const long n = std::lround(s);
  const double eps = static_cast<double>(n) - s;
  const bool merge = n >= 1 && std::abs(eps) <= 0.25;
  const long k0 = merge ? n - 1 : -1;

  double head;
  if (merge) {
    double delta = lgamma1p_small(eps) - eps * log_x;
    double harmonic = 0.0;
    for (long j = 1; j <= k0; ++j) {
      delta -= std::log1p(-eps / static_cast<double>(j));
      harmonic += 1.0 / static_cast<double>(j);
    }
    double ratio;  // expm1(delta) / eps, continuous at eps = 0
    if (eps == 0.0) {
      ratio = -kEulerGamma + harmonic - log_x;
    } else {
      ratio = std::expm1(delta) / eps;
    }
    double pref = (k0 % 2 == 0) ? 1.0 : -1.0;
    for (long k = 1; k <= k0; ++k) pref *= x / static_cast<double>(k);
    head = pref * ratio;
  } else {
    head = std::tgamma(a) * std::exp(-a * log_x);
  }

  SpecFunResult r;
  double sum = 0.0;
  double term = 1.0;  // (-x)^k / k!
  for (long k = 0; k <= kSeriesMaxIter; ++k) {
    if (k > 0) term *= -x / static_cast<double>(k);
    if (k != k0) {
      const double t = term / (a + static_cast<double>(k));
      sum += t;
      if (k > k0 && std::abs(t) < kEps * std::abs(sum) && k > 1) {
        r.converged = true;
        r.iterations = static_cast<std::uint32_t>(k);
        break;
      }
    }
  }
  r.value = head - sum;
  return r;
}

// x^-s gamma(s, x) by the series exp(-x) sum_k x^k / (s (s+1) ... (s+k)).
SpecFunResult lower_scaled_series(double s, double x) {
  double ap = s;
  double del = 1.0 / s;
  double sum = del;
  SpecFunResult r;
  for (int n = 1; n <= kSeriesMaxIter; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    r.iterations = static_cast<std::uint32_t>(n);
    if (std::abs(del) < std::abs(sum) * kEps) {
      r.converged = true;
      break;
    }
  }
  r.value = sum * std::exp(-x);
  return r;
}

// Lentz continued fraction for Gamma(a, x); returns log Gamma(a, x).
SpecFunResult log_upper_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  if (std::abs(b) < kTiny) d = 1.0 / kTiny;
  double h = d;
  SpecFunResult r;
  for (int i = 1; i <= kSeriesMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    r.iterations = static_cast<std::uint32_t>(i);
    if (std::abs(del - 1.0) < kEps) {
      r.converged = true;
      break;
    }
  }
  r.value = -x + a * std::log(x) + std::log(h);
  return r;
}

}  // namespace

SpecFunResult lambert_w0_detail(double x) {
  require_finite(x, "lambert_w0");
  if (x < 0.0) throw DomainError("lambert_w0: negative argument");
  SpecFunResult r;
  if (x == 0.0) {
    r.converged = true;
    return r;
  }
  double w = x < 3.0 ? 1.0 : std::log(x) - std::log(std::log(x));
  for (int t = 0; t < kLambertMaxIter; ++t) {
    const double ew = std::exp(w);
    const double v = w * ew - x;
    const double next = w - v / (ew * (w + 1.0) - v * (w + 2.0) / (2.0 * w + 2.0));
    r.iterations = static_cast<std::uint32_t>(t + 1);
    const bool done = std::abs(w - next) <= kLambertRelStep * std::abs(next);
    w = next;
    if (done || v == 0.0) {
      r.converged = true;
      break;
    }
  }
  r.value = w;
  return r;
}

double lambert_w0(double x) { return value_or_throw(lambert_w0_detail(x), "lambert_w0"); }

double lambert_w0_from_log(double log_x) {
  if (log_x == -std::numeric_limits<double>::infinity()) return 0.0;
  if (std::isnan(log_x)) throw DomainError("lambert_w0_from_log: NaN argument");
  if (log_x < 700.0) return lambert_w0(std::exp(log_x));
  // w + log w = log_x, Newton from the asymptotic start.
  double w = log_x - std::log(log_x);
  for (int t = 0; t < kLambertMaxIter; ++t) {
    const double f = w + std::log(w) - log_x;
    const double next = w - f / (1.0 + 1.0 / w);
    if (std::abs(next - w) <= kLambertRelStep * std::abs(next)) return next;
    w = next;
  }
  throw ConvergenceError("lambert_w0_from_log: no convergence");
}

SpecFunResult gen_exp_integral_detail(double s, double x) {
  require_finite(s, "gen_exp_integral");
  require_finite(x, "gen_exp_integral");
  if (s <= 0.0) throw DomainError("gen_exp_integral: order must be positive");
  if (x <= 0.0) throw DomainError("gen_exp_integral: argument must be positive");
  if (x >= 1.0) {
    SpecFunResult r = log_expint_cf(s, x);
    r.value = std::exp(r.value);
    return r;
  }
  return expint_series(s, x);
}

double gen_exp_integral(double s, double x) {
  return value_or_throw(gen_exp_integral_detail(s, x), "gen_exp_integral");
}

double log_gen_exp_integral(double s, double x) {
  require_finite(s, "log_gen_exp_integral");
  require_finite(x, "log_gen_exp_integral");
  if (s <= 0.0) throw DomainError("log_gen_exp_integral: order must be positive");
  if (x <= 0.0) throw DomainError("log_gen_exp_integral: argument must be positive");
  if (x >= 1.0) return value_or_throw(log_expint_cf(s, x), "log_gen_exp_integral");
  return std::log(value_or_throw(expint_series(s, x), "log_gen_exp_integral"));
}

SpecFunResult lower_inc_gamma_detail(double s, double x) {
  require_finite(s, "lower_inc_gamma");
  if (std::isnan(x)) throw DomainError("lower_inc_gamma: NaN argument");
  if (s <= 0.0) throw DomainError("lower_inc_gamma: shape must be positive");
  if (x < 0.0) throw DomainError("lower_inc_gamma: negative argument");
  SpecFunResult r;
  if (x == 0.0) {
    r.converged = true;
    return r;
  }
  if (x == std::numeric_limits<double>::infinity()) {
    r.value = std::tgamma(s);
    r.converged = true;
    return r;
  }
  if (x < s + 1.0) {
    r = lower_scaled_series(s, x);
    r.value *= std::exp(s * std::log(x));
    return r;
  }
  r = log_upper_cf(s, x);
  r.value = std::tgamma(s) - std::exp(r.value);
  return r;
}

double lower_inc_gamma(double s, double x) {
  return value_or_throw(lower_inc_gamma_detail(s, x), "lower_inc_gamma");
}

double lower_inc_gamma_scaled(double s, double x) {
  require_finite(s, "lower_inc_gamma_scaled");
  if (s <= 0.0) throw DomainError("lower_inc_gamma_scaled: shape must be positive");
  if (!(x >= 0.0)) throw DomainError("lower_inc_gamma_scaled: negative argument");
  if (x == 0.0) return 1.0 / s;
  if (x < s + 1.0) return value_or_throw(lower_scaled_series(s, x), "lower_inc_gamma_scaled");
  const double log_x = std::log(x);
  const double head = std::exp(std::lgamma(s) - s * log_x);
  const double upper = std::exp(value_or_throw(log_upper_cf(s, x), "lower_inc_gamma_scaled") -
                                s * log_x);
  return head - upper;
}

SpecFunResult upper_inc_gamma_detail(double s, double x) {
  require_finite(s, "upper_inc_gamma");
  require_finite(x, "upper_inc_gamma");
  if (x <= 0.0) throw DomainError("upper_inc_gamma: argument must be positive");
  SpecFunResult r;
  if (s > 0.0 && x < s + 1.0) {
    r = lower_scaled_series(s, x);
    r.value = std::tgamma(s) - r.value * std::exp(s * std::log(x));
    return r;
  }
  if (s <= 0.0 && x < 1.0) {
    // Gamma(s, x) = x^s E_{1-s}(x)
    r = expint_series(1.0 - s, x);
    r.value *= std::exp(s * std::log(x));
    return r;
  }
  r = log_upper_cf(s, x);
  r.value = std::exp(r.value);
  return r;
}

double upper_inc_gamma(double s, double x) {
  return value_or_throw(upper_inc_gamma_detail(s, x), "upper_inc_gamma");
}

}  // namespace lss::specfun
