#pragma once

// Exact accept-reject sampler for the log-concave conditional of xi_j,
//   p(xi) ~ exp(-m exp(-2 xi) - xi - xi^2 / (2 v)),
// using an exponential-uniform-exponential envelope anchored on the mode.

#include <cmath>
#include <limits>

#include "logscale/randkit.hpp"

namespace lss {

struct XiConditionalParams {
  /// log m, with -inf for m = 0. Kept on the log scale because m spans
  /// dozens of orders of magnitude inside a chain.
  double log_m = -std::numeric_limits<double>::infinity();
  double v = 1.0;

  /// Throws lss::DomainError unless m >= 0 and v > 0 are finite. m < 1e-300 becomes 0.
  static XiConditionalParams from_m(double m, double v);
  static XiConditionalParams from_log_m(double log_m, double v);

  double m() const { return std::exp(log_m); }
};

/// L(xi), the negative log of the unnormalised target.
double neg_log_density(const XiConditionalParams& p, double xi);
/// g(xi) = L'(xi).
double gradient(const XiConditionalParams& p, double xi);
/// H(xi) = L''(xi) > 0.
double curvature(const XiConditionalParams& p, double xi);

/// Mode 0.5 W(4 exp(2v) m v) - v, with the W argument formed on the log scale.
double xi_mode(const XiConditionalParams& p);

struct Envelope {
  XiConditionalParams params;
  double mode = 0.0;
  double l_mode = 0.0;  // L at the mode
  double x0 = 0.0, x1 = 0.0;
  double g0 = 0.0, g1 = 0.0;  // g at the tangent points
  double l0 = 0.0, l1 = 0.0;  // L at the tangent points
  double xi0 = 0.0, xi1 = 0.0;
  double k0 = 0.0, k1 = 0.0, k = 0.0;

  /// log of the envelope (relative to exp(-L(mode))) at xi.
  double log_value(double xi) const;
};

Envelope build_envelope(const XiConditionalParams& p);

/// True when the envelope dominates exp(L(mode) - L(xi)) at `points` evenly
/// spaced abscissae of [lo, hi].
bool envelope_dominates(const Envelope& env, double lo, double hi, int points = 101);

struct XiDraw {
  double xi = 0.0;
  int proposals = 0;
};

inline constexpr int kXiMaxProposals = 1000;

/// One exact draw; throws lss::SamplerFailure carrying (m, v) if the cap is hit.
XiDraw sample_xi(const Envelope& env, RngStream& rng);
XiDraw sample_xi(const XiConditionalParams& p, RngStream& rng);

}  // namespace lss
