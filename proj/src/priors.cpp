#include "logscale/priors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <vector>

#include "logscale/errors.hpp"
#include "logscale/quadrature.hpp"
#include "logscale/specfun.hpp"

namespace lss {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;
constexpr double kHalfWidth = 40.0;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// log cosh(u), stable for large |u|.
double log_cosh(double u) {
  const double a = std::abs(u);
  return a + std::log1p(std::exp(-2.0 * a)) - kLn2;
}

// log(u / sinh u), with the removable singularity at 0.
double log_u_csch_u(double u) {
  const double a = std::abs(u);
  if (a < 1e-4) return std::log1p(-a * a / 6.0);
  return std::log(a) - (a + std::log1p(-std::exp(-2.0 * a)) - kLn2);
}

// log(1 + e^x)
double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string("prior parameter ") + name + " must be positive and finite");
  }
}

// Rough left/right spread of the xi density, used to place quadrature breakpoints.
std::pair<double, double> spread(const PriorFamily& f) {
  return std::visit(overloaded{
                        [](const LogLaplace& p) { return std::pair{p.psi1, p.psi2}; },
                        [](const LogT& p) { return std::pair{p.psi, p.psi}; },
                        [](const LogHypSech& p) { return std::pair{p.psi, p.psi}; },
                        [](const ZDist& p) { return std::pair{p.s / (2.0 * p.a), p.s / (2.0 * p.b)}; },
                        [](const BayesLasso&) { return std::pair{0.5, 0.5}; },
                        [](const auto&) { return std::pair{1.0, 1.0}; },
                    },
                    f.kind);
}

void add_spread_points(const PriorFamily& f, double lo, double hi, std::vector<double>& pts) {
  const auto [sl, sr] = spread(f);
  pts.push_back(f.location);
  for (double c : {0.25, 1.0, 4.0, 16.0, 64.0}) {
    pts.push_back(f.location - c * sl);
    pts.push_back(f.location + c * sr);
  }
  pts.push_back(lo);
  pts.push_back(hi);
}

std::vector<double> finalize_points(std::vector<double> pts, double lo, double hi) {
  std::vector<double> out;
  for (double p : pts) {
    if (std::isfinite(p) && p >= lo && p <= hi) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Integrates exp(logf) over the given partition, scaling by the largest sampled
// log value so the absolute tolerance acts relative to the integrand's peak.
double integrate_log(const std::function<double(double)>& logf, const std::vector<double>& pts) {
  double shift = -std::numeric_limits<double>::infinity();
  const double lo = pts.front();
  const double hi = pts.back();
  constexpr int kGrid = 800;
  for (int i = 0; i <= kGrid; ++i) shift = std::max(shift, logf(lo + (hi - lo) * i / kGrid));
  for (double p : pts) shift = std::max(shift, logf(p));
  if (!std::isfinite(shift)) return 0.0;
  auto f = [&](double x) { return std::exp(logf(x) - shift); };
  const double v = quad::integrate_or_throw(f, std::span<const double>(pts));
  return v * std::exp(shift);
}

}  // namespace

PriorFamily PriorFamily::log_laplace(double psi1, double psi2, double location) {
  PriorFamily f{LogLaplace{psi1, psi2}, location};
  validate(f);
  return f;
}
PriorFamily PriorFamily::log_t(double alpha, double psi, double location) {
  PriorFamily f{LogT{alpha, psi}, location};
  validate(f);
  return f;
}
PriorFamily PriorFamily::log_hyp_sech(double psi, double location) {
  PriorFamily f{LogHypSech{psi}, location};
  validate(f);
  return f;
}
PriorFamily PriorFamily::z_dist(double a, double b, double s, double location) {
  PriorFamily f{ZDist{a, b, s}, location};
  validate(f);
  return f;
}
PriorFamily PriorFamily::bayes_lasso(double location) { return {BayesLasso{}, location}; }
PriorFamily PriorFamily::horseshoe(double location) { return {Horseshoe{}, location}; }
PriorFamily PriorFamily::horseshoe_plus(double location) { return {HorseshoePlus{}, location}; }
PriorFamily PriorFamily::ridge(double location) { return {Ridge{}, location}; }

void validate(const PriorFamily& family) {
  if (!std::isfinite(family.location)) throw DomainError("prior location must be finite");
  std::visit(overloaded{
                 [](const LogLaplace& p) {
                   require_positive(p.psi1, "psi1");
                   require_positive(p.psi2, "psi2");
                 },
                 [](const LogT& p) {
                   require_positive(p.alpha, "alpha");
                   require_positive(p.psi, "psi");
                 },
                 [](const LogHypSech& p) { require_positive(p.psi, "psi"); },
                 [](const ZDist& p) {
                   require_positive(p.a, "a");
                   require_positive(p.b, "b");
                   require_positive(p.s, "s");
                 },
                 [](const auto&) {},
             },
             family.kind);
}

std::string describe(const PriorFamily& family) {
  char buf[160];
  std::visit(overloaded{
                 [&](const LogLaplace& p) {
                   std::snprintf(buf, sizeof buf, "log-laplace(psi1=%g, psi2=%g)", p.psi1, p.psi2);
                 },
                 [&](const LogT& p) {
                   std::snprintf(buf, sizeof buf, "log-t(alpha=%g, psi=%g)", p.alpha, p.psi);
                 },
                 [&](const LogHypSech& p) { std::snprintf(buf, sizeof buf, "log-hyp-sech(psi=%g)", p.psi); },
                 [&](const ZDist& p) {
                   std::snprintf(buf, sizeof buf, "z(a=%g, b=%g, s=%g)", p.a, p.b, p.s);
                 },
                 [&](const BayesLasso&) { std::snprintf(buf, sizeof buf, "bayes-lasso"); },
                 [&](const Horseshoe&) { std::snprintf(buf, sizeof buf, "horseshoe"); },
                 [&](const HorseshoePlus&) { std::snprintf(buf, sizeof buf, "horseshoe-plus"); },
                 [&](const Ridge&) { std::snprintf(buf, sizeof buf, "ridge"); },
             },
             family.kind);
  std::string out = buf;
  if (family.location != 0.0) {
    std::snprintf(buf, sizeof buf, " @ %g", family.location);
    out += buf;
  }
  return out;
}

double xi_log_density(const PriorFamily& family, double xi) {
  if (!std::isfinite(xi)) throw DomainError("xi_log_density: xi must be finite");
  const double d = xi - family.location;
  return std::visit(
      overloaded{
          [&](const LogLaplace& p) {
            const double psi = d < 0.0 ? p.psi1 : p.psi2;
            return -std::log(2.0 * psi) - std::abs(d) / psi;
          },
          [&](const LogT& p) {
            const double u = d / p.psi;
            return std::lgamma(0.5 * (p.alpha + 1.0)) - std::lgamma(0.5 * p.alpha) -
                   0.5 * std::log(kPi * p.alpha) - std::log(p.psi) -
                   0.5 * (p.alpha + 1.0) * std::log1p(u * u / p.alpha);
          },
          [&](const LogHypSech& p) { return -std::log(kPi * p.psi) - log_cosh(d / p.psi); },
          [&](const ZDist& p) {
            const double u = d / p.s;
            return kLn2 + std::lgamma(p.a + p.b) - std::lgamma(p.a) - std::lgamma(p.b) - std::log(p.s) +
                   2.0 * p.a * u - (p.a + p.b) * softplus(2.0 * u);
          },
          [&](const BayesLasso&) { return kLn2 + 2.0 * d - std::exp(2.0 * d); },
          [&](const Horseshoe&) { return -std::log(kPi) - log_cosh(d); },
          [&](const HorseshoePlus&) { return std::log(2.0 / (kPi * kPi)) + log_u_csch_u(d); },
          [&](const Ridge&) -> double {
            throw UnsupportedFamily("ridge is a point mass and has no xi density");
          },
      },
      family.kind);
}

Eigen::ArrayXd xi_log_density(const PriorFamily& family, const Eigen::ArrayXd& xi) {
  return xi.unaryExpr([&](double x) { return xi_log_density(family, x); });
}

DensityPoint xi_density_point(const PriorFamily& family, double xi) {
  const double ld = xi_log_density(family, xi);
  return {xi, std::exp(ld), ld};
}

double lambda_density(const PriorFamily& family, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("lambda_density: lambda must be positive");
  const double xi = std::log(lambda);
  return std::exp(xi_log_density(family, xi) - xi);
}

Eigen::ArrayXd lambda_density(const PriorFamily& family, const Eigen::ArrayXd& lambda) {
  return lambda.unaryExpr([&](double l) { return lambda_density(family, l); });
}

double kappa_density(const PriorFamily& family, double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw DomainError("kappa_density: kappa must lie in (0, 1)");
  const double xi = 0.5 * (std::log1p(-kappa) - std::log(kappa));
  return std::exp(xi_log_density(family, xi) - std::log(2.0 * kappa * (1.0 - kappa)));
}

double marginal_beta_log_laplace(double beta, double psi1, double psi2) {
  require_positive(psi1, "psi1");
  require_positive(psi2, "psi2");
  if (!std::isfinite(beta)) throw DomainError("marginal_beta_log_laplace: beta must be finite");
  const double pref = 1.0 / std::sqrt(32.0 * kPi);
  const double s1 = (1.0 + psi1) / (2.0 * psi1);
  const double s2 = (1.0 + psi2) / (2.0 * psi2);
  const double x = 0.5 * beta * beta;
  if (x == 0.0) {
    if (psi1 >= 1.0) throw PoleError("log-Laplace marginal has a pole at beta = 0 when psi1 >= 1");
    return pref * (2.0 / (1.0 - psi1) + 2.0 / (1.0 + psi2));
  }
  const double a1 = -std::log(psi1) + specfun::log_gen_exp_integral(s1, x);
  const double a2 = -std::log(psi2) + std::log(specfun::lower_inc_gamma_scaled(s2, x));
  return pref * std::exp(log_add(a1, a2));
}

double marginal_beta_quadrature(const PriorFamily& family, double beta) {
  if (!std::isfinite(beta)) throw DomainError("marginal_beta_quadrature: beta must be finite");
  if (family.is_ridge()) throw UnsupportedFamily("ridge has no marginal density over beta");
  validate(family);
  const double lo = family.location - kHalfWidth;
  const double hi = family.location + kHalfWidth;
  const double b2 = beta * beta;
  auto logf = [&](double xi) {
    return -0.5 * std::log(2.0 * kPi) - xi - 0.5 * b2 * std::exp(-2.0 * xi) + xi_log_density(family, xi);
  };
  std::vector<double> pts;
  add_spread_points(family, lo, hi, pts);
  if (beta != 0.0) {
    const double lb = std::log(std::abs(beta));
    for (double c : {-6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0}) pts.push_back(lb + c);
  }
  return integrate_log(logf, finalize_points(std::move(pts), lo, hi));
}

double xi_cdf(const PriorFamily& family, double xi) {
  if (family.is_ridge()) return xi >= family.location ? 1.0 : 0.0;
  const auto [sl, sr] = spread(family);
  const double lo = family.location - kHalfWidth * std::max(1.0, sl);
  const double hi = family.location + kHalfWidth * std::max(1.0, sr);
  if (xi <= lo) return 0.0;
  if (xi >= hi) return 1.0;
  std::vector<double> pts;
  add_spread_points(family, lo, xi, pts);
  auto pts_final = finalize_points(std::move(pts), lo, xi);
  auto f = [&](double x) { return std::exp(xi_log_density(family, x)); };
  return std::clamp(quad::integrate_or_throw(f, std::span<const double>(pts_final)), 0.0, 1.0);
}

Quartiles iqr_xi(const PriorFamily& family) {
  if (family.is_ridge()) throw UnsupportedFamily("ridge has no xi density");
  validate(family);
  const auto [sl, sr] = spread(family);
  auto quantile = [&](double p) {
    double a = family.location - kHalfWidth * std::max(1.0, sl);
    double b = family.location + kHalfWidth * std::max(1.0, sr);
    while (b - a > 1e-9) {
      const double mid = 0.5 * (a + b);
      if (xi_cdf(family, mid) < p) {
        a = mid;
      } else {
        b = mid;
      }
    }
    return 0.5 * (a + b);
  };
  return {quantile(0.25), quantile(0.75)};
}

Quartiles iqr_one_minus_kappa(const PriorFamily& family) {
  const Quartiles q = iqr_xi(family);
  auto shrink = [](double xi) { return 1.0 / (1.0 + std::exp(-2.0 * xi)); };
  return {shrink(q.q25), shrink(q.q75)};
}

TailFit tail_exponent(const PriorFamily& family, TailSide side) {
  return side == TailSide::NearZero ? tail_exponent(family, 1e-6, 1e-4) : tail_exponent(family, 1e3, 1e5);
}

TailFit tail_exponent(const PriorFamily& family, double beta_min, double beta_max, int points) {
  if (family.is_ridge()) throw UnsupportedFamily("ridge has no marginal density over beta");
  if (!(beta_min > 0.0 && beta_max > beta_min) || points < 2) {
    throw DomainError("tail_exponent: need 0 < beta_min < beta_max and at least two points");
  }
  const LogLaplace* ll = std::get_if<LogLaplace>(&family.kind);
  const bool closed_form = ll != nullptr && family.location == 0.0;
  Eigen::VectorXd lx(points), ly(points);
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    const double logb = std::log(beta_min) + t * (std::log(beta_max) - std::log(beta_min));
    const double b = std::exp(logb);
    const double p = closed_form ? marginal_beta_log_laplace(b, ll->psi1, ll->psi2)
                                 : marginal_beta_quadrature(family, b);
    if (!(p > 1e-300)) {
      throw RangeError("marginal density underflows on the tail window; shrink the grid");
    }
    lx(i) = logb;
    ly(i) = std::log(p);
  }
  const double mx = lx.mean();
  const double my = ly.mean();
  const double sxx = (lx.array() - mx).square().sum();
  const double sxy = ((lx.array() - mx) * (ly.array() - my)).sum();
  TailFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.beta_min = beta_min;
  fit.beta_max = beta_max;
  return fit;
}

}  // namespace lss
