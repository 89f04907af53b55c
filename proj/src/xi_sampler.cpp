#include "logscale/xi_sampler.hpp"

#include <cassert>
#include <numbers>
#include <string>

#include "logscale/errors.hpp"
#include "logscale/specfun.hpp"

namespace lss {

namespace {

// m exp(-2 xi) on the log scale; 0 when m = 0.
inline double m_exp(const XiConditionalParams& p, double xi) {
  return p.log_m == -std::numeric_limits<double>::infinity() ? 0.0 : std::exp(p.log_m - 2.0 * xi);
}

}  // namespace

XiConditionalParams XiConditionalParams::from_m(double m, double v) {
  if (!(m >= 0.0) || !std::isfinite(m)) throw DomainError("xi conditional: m must be finite and >= 0");
  return from_log_m(m < 1e-300 ? -std::numeric_limits<double>::infinity() : std::log(m), v);
}

XiConditionalParams XiConditionalParams::from_log_m(double log_m, double v) {
  if (std::isnan(log_m) || log_m == std::numeric_limits<double>::infinity()) {
    throw DomainError("xi conditional: log m must be < +inf");
  }
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("xi conditional: v must be finite and > 0");
  XiConditionalParams p;
  p.log_m = log_m < std::log(1e-300) ? -std::numeric_limits<double>::infinity() : log_m;
  p.v = v;
  return p;
}

double neg_log_density(const XiConditionalParams& p, double xi) {
  return xi * xi / (2.0 * p.v) + m_exp(p, xi) + xi;
}

double gradient(const XiConditionalParams& p, double xi) { return xi / p.v - 2.0 * m_exp(p, xi) + 1.0; }

double curvature(const XiConditionalParams& p, double xi) { return 1.0 / p.v + 4.0 * m_exp(p, xi); }

double xi_mode(const XiConditionalParams& p) {
  double xi = -p.v;
  if (p.log_m != -std::numeric_limits<double>::infinity()) {
    const double log_arg = std::log(4.0) + 2.0 * p.v + p.log_m + std::log(p.v);
    xi = 0.5 * specfun::lambert_w0_from_log(log_arg) - p.v;
    // Polish away the cancellation in W/2 - v when v is large.
    for (int i = 0; i < 2; ++i) xi -= gradient(p, xi) / curvature(p, xi);
  }
  return xi;
}

double Envelope::log_value(double xi) const {
  if (xi < xi0) return l_mode - (l0 + g0 * (xi - x0));
  if (xi > xi1) return l_mode - (l1 + g1 * (xi - x1));
  return 0.0;
}

Envelope build_envelope(const XiConditionalParams& p) {
  Envelope e;
  e.params = p;
  e.mode = xi_mode(p);
  e.l_mode = neg_log_density(p, e.mode);
  const double sd = 1.0 / std::sqrt(curvature(p, e.mode));
  e.x0 = e.mode - 0.8 * sd;
  e.x1 = e.mode + 1.1 * sd;
  e.g0 = gradient(p, e.x0);
  e.g1 = gradient(p, e.x1);
  e.l0 = neg_log_density(p, e.x0);
  e.l1 = neg_log_density(p, e.x1);
  e.xi0 = e.x0 - (e.l0 - e.l_mode) / e.g0;
  e.xi1 = e.x1 - (e.l1 - e.l_mode) / e.g1;
  e.k0 = std::exp(-e.l0 + e.l_mode - e.g0 * (e.xi0 - e.x0)) / std::abs(e.g0);
  e.k1 = std::exp(-e.l1 + e.l_mode - e.g1 * (e.xi1 - e.x1)) / std::abs(e.g1);
  e.k = e.k0 + e.k1 + (e.xi1 - e.xi0);
#ifndef NDEBUG
  assert(e.g0 < 0.0 && e.g1 > 0.0 && e.xi0 < e.xi1 && e.k > 0.0);
  assert(envelope_dominates(e, e.mode - 10.0 * std::sqrt(p.v), e.mode + 10.0 * std::sqrt(p.v)));
#endif
  return e;
}

bool envelope_dominates(const Envelope& env, double lo, double hi, int points) {
  for (int i = 0; i < points; ++i) {
    const double xi = lo + (hi - lo) * i / (points - 1);
    const double target = env.l_mode - neg_log_density(env.params, xi);
    if (target > env.log_value(xi) + 1e-12 * (1.0 + std::abs(target))) return false;
  }
  return true;
}

XiDraw sample_xi(const Envelope& env, RngStream& rng) {
  XiDraw out;
  const double p_tails = (env.k0 + env.k1) / env.k;
  const double p_left = env.k0 / env.k;
  for (int it = 1; it <= kXiMaxProposals; ++it) {
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    const double u3 = rng.uniform();
    double xi;
    double f;
    if (u1 < p_tails) {
      const bool left = u1 < p_left;
      const double g = left ? env.g0 : env.g1;
      const double x = left ? env.x0 : env.x1;
      const double l = left ? env.l0 : env.l1;
      xi = -std::log1p(-u2) / g + (left ? env.xi0 : env.xi1);
      f = l + g * (xi - x);
    } else {
      xi = u2 * (env.xi1 - env.xi0) + env.xi0;
      f = env.l_mode;
    }
    if (std::log(u3) < f - neg_log_density(env.params, xi)) {
      out.xi = xi;
      out.proposals = it;
      return out;
    }
  }
  throw SamplerFailure("xi rejection sampler exceeded " + std::to_string(kXiMaxProposals) + " proposals",
                       env.params.m(), env.params.v);
}

XiDraw sample_xi(const XiConditionalParams& p, RngStream& rng) { return sample_xi(build_envelope(p), rng); }

}  // namespace lss
