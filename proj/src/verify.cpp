#include "logscale/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include "logscale/csv.hpp"
#include "logscale/errors.hpp"
#include "logscale/priors.hpp"
#include "logscale/quadrature.hpp"
#include "logscale/xi_sampler.hpp"

namespace lss::verify {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kKsCritical1pct = 1.6276;  // sqrt(N) D at the 1% level

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

CheckReport make(std::string name, std::vector<double> measured, std::vector<double> expected, double tol,
                 std::string provenance, bool ok, std::string note = {}) {
  CheckReport r;
  r.name = std::move(name);
  r.status = ok ? Status::Pass : Status::Fail;
  r.measured = std::move(measured);
  r.expected = std::move(expected);
  r.tolerance = tol;
  r.provenance = std::move(provenance);
  r.note = std::move(note);
  return r;
}

CheckReport failed_with(std::string name, const std::exception& e) {
  CheckReport r;
  r.name = std::move(name);
  r.status = Status::Fail;
  r.note = std::string("exception: ") + e.what();
  return r;
}

// Every sub-report of a group gets the group's wall time.
void stamp(std::vector<CheckReport>& reports, Clock::time_point t0) {
  const double dt = seconds_since(t0);
  for (auto& r : reports) r.runtime_seconds = dt;
}

bool within(double measured, double expected, double tol) { return std::abs(measured - expected) <= tol; }

// Normalised CDF of the xi conditional, evaluated at sorted abscissae.
std::vector<double> xi_conditional_cdf(const XiConditionalParams& p, const std::vector<double>& sorted) {
  const double mode = xi_mode(p);
  const double lm = neg_log_density(p, mode);
  const double sd = 1.0 / std::sqrt(curvature(p, mode));
  auto f = [&](double x) { return std::exp(lm - neg_log_density(p, x)); };
  const double lo = std::min(mode - 40.0 * sd, sorted.front() - sd);
  const double hi = std::max(mode + 40.0 * sd, sorted.back() + sd);
  std::vector<double> pts = {lo, mode - 10 * sd, mode - 3 * sd, mode - sd, mode, mode + sd, mode + 3 * sd,
                             mode + 10 * sd, hi};
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  quad::QuadOptions tight;
  tight.abs_tol = 1e-14;
  tight.rel_tol = 1e-12;
  const double z = quad::integrate(f, std::span<const double>(pts), tight).value;
  std::vector<double> cdf(sorted.size());
  double acc = quad::integrate(f, lo, sorted.front(), tight).value;
  cdf[0] = acc / z;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] > sorted[i - 1]) acc += quad::integrate(f, sorted[i - 1], sorted[i], tight).value;
    cdf[i] = acc / z;
  }
  return cdf;
}

// Batch-means standard error of a serially correlated sequence.
double batch_means_se(const std::vector<double>& x, int batches) {
  const std::size_t len = x.size() / static_cast<std::size_t>(batches);
  std::vector<double> means(static_cast<std::size_t>(batches), 0.0);
  for (int b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) s += x[static_cast<std::size_t>(b) * len + i];
    means[static_cast<std::size_t>(b)] = s / static_cast<double>(len);
  }
  double m = 0.0;
  for (double v : means) m += v;
  m /= batches;
  double ss = 0.0;
  for (double v : means) ss += (v - m) * (v - m);
  return std::sqrt(ss / (batches - 1) / batches);
}

double mean_of(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double sd_of(const std::vector<double>& x) {
  const double m = mean_of(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string join(const std::vector<double>& v, const char* sep, bool full_precision) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += full_precision ? csv::format_number(v[i]) : fmt(v[i]);
  }
  return out;
}

const MetricsRow* find_row(const std::vector<MetricsRow>& rows, double q, double a, const std::string& method) {
  for (const auto& r : rows) {
    if (r.method == method && std::abs(r.q_n - q) < 1e-12 && std::abs(r.A - a) < 1e-12) return &r;
  }
  return nullptr;
}

}  // namespace

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass:
      return "pass";
    case Status::Fail:
      return "fail";
    case Status::Skipped:
      return "skipped";
  }
  return "unknown";
}

double ks_statistic(const std::vector<double>& cdf) {
  const double n = static_cast<double>(cdf.size());
  double d = 0.0;
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    d = std::max(d, std::max(static_cast<double>(i + 1) / n - cdf[i], cdf[i] - static_cast<double>(i) / n));
  }
  return d;
}

double ks_pvalue(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double t = (sn + 0.12 + 0.11 / sn) * d;
  if (t < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    sum += (k % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

std::vector<CheckReport> check_theorem1(const Options& opt) {
  const auto t0 = Clock::now();
  std::vector<CheckReport> out;
  const double s = opt.tolerance_scale;
  const std::vector<double> psis = {0.5, 1.0, 2.0};
  const std::vector<double> betas = {-20, -5, -1, -0.1, -0.01, 0.01, 0.1, 1, 5, 20};
  try {
    double worst = 0.0;
    for (double p1 : psis) {
      for (double p2 : psis) {
        const auto fam = PriorFamily::log_laplace(p1, p2);
        for (double b : betas) {
          const double closed = marginal_beta_log_laplace(b, p1, p2);
          const double quad = marginal_beta_quadrature(fam, b);
          worst = std::max(worst, std::abs(closed - quad) / quad);
        }
      }
    }
    out.push_back(make("theorem1_closed_form_vs_quadrature", {worst}, {0.0}, 1e-8 * s,
                       "quadrature oracle over xi", worst <= 1e-8 * s,
                       "max relative error over 10 beta values x 9 (psi1, psi2) pairs"));
  } catch (const std::exception& e) {
    out.push_back(failed_with("theorem1_closed_form_vs_quadrature", e));
  }
  try {
    double asym = 0.0;
    for (double p1 : psis) {
      for (double p2 : psis) {
        for (double b : {0.5, 1.0, 3.0}) {
          asym = std::max(asym, std::abs(marginal_beta_log_laplace(b, p1, p2) - marginal_beta_log_laplace(-b, p1, p2)));
        }
      }
    }
    out.push_back(make("theorem1_symmetry", {asym}, {0.0}, 0.0, "exact: depends on beta^2 only", asym == 0.0));
  } catch (const std::exception& e) {
    out.push_back(failed_with("theorem1_symmetry", e));
  }
  try {
    const double closed = marginal_beta_log_laplace(0.0, 0.5, 0.5);
    const double quad = marginal_beta_quadrature(PriorFamily::log_laplace(0.5, 0.5), 0.0);
    const double near = marginal_beta_quadrature(PriorFamily::log_laplace(0.5, 0.5), 1e-6);
    const double rel = std::abs(closed - quad) / quad;
    bool pole_signalled = false;
    try {
      (void)marginal_beta_log_laplace(0.0, 1.0, 0.5);
    } catch (const PoleError&) {
      pole_signalled = true;
    }
    const bool ok = rel <= 1e-8 * s && std::abs(near - closed) / closed <= 1e-6 * s && pole_signalled;
    out.push_back(make("theorem1_finite_at_zero_psi1_below_one", {closed, quad, near}, {closed}, 1e-8 * s,
                       "published concentration result: bounded at zero when psi1 < 1; quadrature oracle", ok,
                       pole_signalled ? "psi1 = 1 at beta = 0 raises a pole error" : "psi1 = 1 did not raise"));
  } catch (const std::exception& e) {
    out.push_back(failed_with("theorem1_finite_at_zero_psi1_below_one", e));
  }
  stamp(out, t0);
  return out;
}

std::vector<CheckReport> check_tail_rates(const Options& opt) {
  const auto t0 = Clock::now();
  std::vector<CheckReport> out;
  const double s = opt.tolerance_scale;
  auto slope_check = [&](const std::string& name, const PriorFamily& fam, TailSide side, double expected,
                         const std::string& provenance) {
    try {
      const double slope = tail_exponent(fam, side).slope;
      out.push_back(make(name, {slope}, {expected}, 0.05 * s, provenance, within(slope, expected, 0.05 * s),
                         describe(fam)));
    } catch (const std::exception& e) {
      out.push_back(failed_with(name, e));
    }
  };
  slope_check("theorem2_near_zero_psi1_2", PriorFamily::log_laplace(2.0, 1.0), TailSide::NearZero, -0.5,
              "published rate |beta|^(-1+1/psi1)");
  slope_check("theorem2_near_zero_psi1_4", PriorFamily::log_laplace(4.0, 1.0), TailSide::NearZero, -0.75,
              "published rate |beta|^(-1+1/psi1)");
  slope_check("theorem2_near_zero_psi1_half", PriorFamily::log_laplace(0.5, 1.0), TailSide::NearZero, 0.0,
              "published rate O(1) for psi1 < 1");
  slope_check("theorem3_far_tail_psi2_2", PriorFamily::log_laplace(1.0, 2.0), TailSide::FarTail, -1.5,
              "published rate |beta|^(-1-1/psi2)");
  slope_check("theorem3_far_tail_psi2_1", PriorFamily::log_laplace(1.0, 1.0), TailSide::FarTail, -2.0,
              "published rate |beta|^(-1-1/psi2)");
  slope_check("theorem3_far_tail_psi2_half", PriorFamily::log_laplace(2.0, 0.5), TailSide::FarTail, -3.0,
              "published rate |beta|^(-1-1/psi2)");

  // Log-t far tail: slope window (-1.35, -1.0).
  const auto logt = PriorFamily::log_t(7.0, 0.05);
  try {
    const TailFit fit = tail_exponent(logt, TailSide::FarTail);
    const double lo = -1.35, hi = -1.0;
    const double centre = 0.5 * (lo + hi), half = 0.5 * (hi - lo) * s;
    out.push_back(make("theorem4_far_tail_log_t", {fit.slope}, {lo, hi}, half,
                       "published rate |beta|^-1 (log|beta|)^(-alpha-1), slope window", within(fit.slope, centre, half),
                       describe(logt) + "; the logarithmic factor steepens the finite-window slope"));
    // Slope of c |beta|^-1 L_t(|beta|) on the same window, the asymptotic form itself.
    Eigen::VectorXd lx(25), ly(25);
    for (int i = 0; i < 25; ++i) {
      const double lb = std::log(1e3) + i * (std::log(1e5) - std::log(1e3)) / 24.0;
      lx(i) = lb;
      ly(i) = -lb - 4.0 * std::log1p(lb * lb / (7.0 * 0.05 * 0.05));
    }
    const double mx = lx.mean(), my = ly.mean();
    const double asym = ((lx.array() - mx) * (ly.array() - my)).sum() / (lx.array() - mx).square().sum();
    out.push_back(make("theorem4_far_tail_log_t_vs_asymptotic_form", {fit.slope}, {asym}, 0.1 * s,
                       "least-squares slope of |beta|^-1 L_t(|beta|) on the same window",
                       within(fit.slope, asym, 0.1 * s), describe(logt)));
  } catch (const std::exception& e) {
    out.push_back(failed_with("theorem4_far_tail_log_t", e));
  }
  for (double psi : {1e-3, 0.1}) {
    const std::string name = "theorem4_near_zero_log_t_psi_" + fmt(psi);
    try {
      const auto fam = PriorFamily::log_t(7.0, psi);
      const double slope = tail_exponent(fam, TailSide::NearZero).slope;
      out.push_back(make(name, {slope}, {-0.2}, 0.0, "published divergence faster than |beta|^(-1+1/c); slope > -0.2",
                         slope > -0.2 * s, describe(fam)));
    } catch (const std::exception& e) {
      out.push_back(failed_with(name, e));
    }
  }
  for (double psi : {1e-3, 1e-2, 0.1}) {
    const std::string name = "log_t_pole_persistence_psi_" + fmt(psi);
    try {
      const auto fam = PriorFamily::log_t(7.0, psi);
      const double p2 = marginal_beta_quadrature(fam, 1e-2);
      const double p4 = marginal_beta_quadrature(fam, 1e-4);
      const double p6 = marginal_beta_quadrature(fam, 1e-6);
      out.push_back(make(name, {p2, p4, p6}, {}, 0.0, "published pole at zero for every psi",
                         p2 < p4 && p4 < p6, "marginal at beta = 1e-2, 1e-4, 1e-6 must increase"));
    } catch (const std::exception& e) {
      out.push_back(failed_with(name, e));
    }
  }
  stamp(out, t0);
  return out;
}

std::vector<CheckReport> check_propositions(const Options& opt) {
  const auto t0 = Clock::now();
  std::vector<CheckReport> out;
  const double s = opt.tolerance_scale;

  // Sandwich of the hyperbolic secant by the Laplace density of the same scale.
  try {
    double lo_ratio = std::numeric_limits<double>::infinity();
    double hi_ratio = 0.0;
    for (double psi : {0.25, 1.0, 4.0}) {
      const auto hs = PriorFamily::log_hyp_sech(psi);
      const auto ll = PriorFamily::log_laplace(psi, psi);
      for (int i = 0; i <= 600; ++i) {
        const double xi = -30.0 + 0.1 * i;
        const double r = std::exp(xi_log_density(hs, xi) - xi_log_density(ll, xi));
        lo_ratio = std::min(lo_ratio, r);
        hi_ratio = std::max(hi_ratio, r);
      }
    }
    const double eps = 1e-12 + (1.0 - s);
    out.push_back(make("prop3_sandwich_corrected_lower_2_over_pi", {lo_ratio, hi_ratio}, {2.0 / kPi, 4.0 / kPi},
                       1e-12, "analytic ratio (4/pi) / (1 + exp(-2|xi|/psi))",
                       lo_ratio >= 2.0 / kPi - eps && hi_ratio <= 4.0 / kPi + eps,
                       "ratio p_HS / p_LL on xi in [-30, 30], psi in {0.25, 1, 4}"));
    out.push_back(make("prop3_sandwich_printed_lower_pi_over_2", {lo_ratio}, {kPi / 2.0}, 0.0,
                       "published lower constant pi/2", lo_ratio >= kPi / 2.0,
                       "pi/2 exceeds the upper constant 4/pi, so the printed lower bound cannot hold"));
  } catch (const std::exception& e) {
    out.push_back(failed_with("prop3_sandwich", e));
  }

  // z-distribution bounded by the hyperbolic secant with psi = s/(2a).
  for (auto [a, sc] : std::vector<std::pair<double, double>>{{0.5, 1.0}, {2.0, 1.0}, {1.0, 3.0}}) {
    const std::string name = "prop1_z_over_sech_bounded_a_" + fmt(a) + "_s_" + fmt(sc);
    try {
      const auto z = PriorFamily::z_dist(a, a, sc);
      const auto h = PriorFamily::log_hyp_sech(sc / (2.0 * a));
      auto sup_ratio = [&](double half_width) {
        double m = 0.0;
        for (int i = 0; i <= 8000; ++i) {
          const double xi = -half_width + 2.0 * half_width * i / 8000.0;
          m = std::max(m, std::exp(xi_log_density(z, xi) - xi_log_density(h, xi)));
        }
        return m;
      };
      // The supremum is approached as |xi| grows, at rate exp(-|xi| / s).
      const double k40 = sup_ratio(40.0);
      const double k80 = sup_ratio(80.0);
      const double rel = std::abs(k80 - k40) / k40;
      out.push_back(make(name, {k40, k80}, {k40}, 1e-6 * s, "finite constant K, stable under grid extension",
                         std::isfinite(k80) && rel <= 1e-6 * s, "sup over log-lambda in [-40, 40] vs [-80, 80]"));
    } catch (const std::exception& e) {
      out.push_back(failed_with(name, e));
    }
  }

  // log-t / log-Laplace ratio grows toward both ends of the lambda axis.
  struct P4 {
    double alpha, psi, psi1, psi2;
  };
  for (const P4& p : {P4{7.0, 1.0, 1.0, 1.0}, P4{7.0, 0.1, 2.0, 0.5}, P4{1.0, 3.0, 0.5, 1.0}}) {
    const std::string name = "prop4_ratio_diverges_alpha_" + fmt(p.alpha) + "_psi_" + fmt(p.psi);
    try {
      const auto t = PriorFamily::log_t(p.alpha, p.psi);
      const auto ll = PriorFamily::log_laplace(p.psi1, p.psi2);
      auto log_ratio = [&](double xi) { return xi_log_density(t, xi) - xi_log_density(ll, xi); };
      bool mono = true;
      double prev_r = log_ratio(20.0), prev_l = log_ratio(-20.0);
      for (int i = 1; i <= 200; ++i) {
        const double x = 20.0 + 10.0 * i / 200.0;
        const double r = log_ratio(x), l = log_ratio(-x);
        mono = mono && r > prev_r && l > prev_l;
        prev_r = r;
        prev_l = l;
      }
      out.push_back(make(name, {log_ratio(-30.0), log_ratio(30.0)}, {}, 0.0,
                         "published divergence of the log-t / log-Laplace ratio", mono,
                         "log ratio strictly increasing on |log lambda| in [20, 30]; psi1=" + fmt(p.psi1) +
                             ", psi2=" + fmt(p.psi2)));
    } catch (const std::exception& e) {
      out.push_back(failed_with(name, e));
    }
  }

  // Concentration of the log-t kappa density around 1/2 for small psi.
  try {
    const double eps = 0.05, delta = 0.95, alpha = 7.0;
    auto mass = [&](double psi) {
      const auto fam = PriorFamily::log_t(alpha, psi);
      auto f = [&](double k) { return kappa_density(fam, k); };
      return quad::integrate_or_throw(f, std::vector<double>{0.5 - eps, 0.5, 0.5 + eps});
    };
    double lo = 1e-6, hi = 10.0;  // mass(lo) > delta > mass(hi)
    for (int i = 0; i < 80; ++i) {
      const double mid = std::sqrt(lo * hi);
      (mass(mid) > delta ? lo : hi) = mid;
    }
    const double psi_star = lo;
    const double m = mass(psi_star);
    out.push_back(make("prop5_log_t_concentration", {psi_star, m}, {delta}, 0.0,
                       "published existence of psi with the kappa mass near 1/2 above delta", m > delta,
                       "eps = 0.05, delta = 0.95, alpha = 7; psi* found by bisection"));
  } catch (const std::exception& e) {
    out.push_back(failed_with("prop5_log_t_concentration", e));
  }
  stamp(out, t0);
  return out;
}

std::vector<CheckReport> check_iqr_table(const Options& opt) {
  const auto t0 = Clock::now();
  std::vector<CheckReport> out;
  const double tol = 0.01 * opt.tolerance_scale;
  struct Row {
    std::string name;
    PriorFamily fam;
    double q25, q75;
    bool kappa_space;
  };
  const std::vector<Row> rows = {
      {"iqr_xi_bayes_lasso", PriorFamily::bayes_lasso(), -0.623, 0.163, false},
      {"iqr_xi_horseshoe", PriorFamily::horseshoe(), -0.881, 0.881, false},
      {"iqr_xi_horseshoe_plus", PriorFamily::horseshoe_plus(), -1.33, 1.33, false},
      {"iqr_xi_z_quarter_quarter", PriorFamily::z_dist(0.25, 0.25, 1.0), -1.53, 1.53, false},
      {"iqr_shrinkage_bayes_lasso", PriorFamily::bayes_lasso(), 0.223, 0.581, true},
      {"iqr_shrinkage_horseshoe", PriorFamily::horseshoe(), 0.15, 0.85, true},
      {"iqr_shrinkage_horseshoe_plus", PriorFamily::horseshoe_plus(), 0.062, 0.938, true},
  };
  for (const auto& r : rows) {
    try {
      const Quartiles q = r.kappa_space ? iqr_one_minus_kappa(r.fam) : iqr_xi(r.fam);
      out.push_back(make(r.name, {q.q25, q.q75}, {r.q25, r.q75}, tol,
                         r.kappa_space ? "published interquartile interval of 1 - kappa"
                                       : "published interquartile interval of xi",
                         within(q.q25, r.q25, tol) && within(q.q75, r.q75, tol), describe(r.fam)));
    } catch (const std::exception& e) {
      out.push_back(failed_with(r.name, e));
    }
  }
  stamp(out, t0);
  return out;
}

std::vector<CheckReport> check_sampler_exactness(const Options& opt) {
  const auto t0 = Clock::now();
  std::vector<CheckReport> out;
  const double s = opt.tolerance_scale;
  constexpr int kDraws = 100000;
  struct Pair {
    double m, v;
  };
  const std::vector<Pair> pairs = {{1e-3, 1.0}, {1.0, 1.0}, {1e3, 1.0}, {1.0, 1e-3}, {1.0, 1e3}, {1e3, 1e-3}};
  std::uint64_t sid = 0;
  for (const Pair& p : pairs) {
    const std::string name = "xi_sampler_ks_m_" + fmt(p.m) + "_v_" + fmt(p.v);
    try {
      const auto params = XiConditionalParams::from_m(p.m, p.v);
      const Envelope env = build_envelope(params);
      RngStream rng(20240611, ++sid);
      std::vector<double> draws(kDraws);
      for (auto& d : draws) d = sample_xi(env, rng).xi;
      std::sort(draws.begin(), draws.end());
      const double d = ks_statistic(xi_conditional_cdf(params, draws));
      const double scaled = std::sqrt(static_cast<double>(kDraws)) * d;
      out.push_back(make(name, {d, ks_pvalue(d, kDraws)}, {0.0}, kKsCritical1pct / std::sqrt(double(kDraws)) * s,
                         "quadrature-normalised CDF; KS at the 1% level", scaled < kKsCritical1pct * s,
                         "100000 draws"));
    } catch (const std::exception& e) {
      out.push_back(failed_with(name, e));
    }
  }
  try {
    // m = 0 reduces to N(-v, v).
    const double v = 2.0;
    const Envelope env = build_envelope(XiConditionalParams::from_m(0.0, v));
    RngStream rng(20240611, 99);
    std::vector<double> cdf(kDraws);
    for (auto& c : cdf) c = sample_xi(env, rng).xi;
    std::sort(cdf.begin(), cdf.end());
    for (auto& c : cdf) c = 0.5 * std::erfc(-(c + v) / std::sqrt(2.0 * v));
    const double d = ks_statistic(cdf);
    out.push_back(make("xi_sampler_ks_gaussian_case", {d, ks_pvalue(d, kDraws)}, {0.0},
                       kKsCritical1pct / std::sqrt(double(kDraws)) * s, "exact N(-v, v) when m = 0",
                       std::sqrt(double(kDraws)) * d < kKsCritical1pct * s, "v = 2"));
  } catch (const std::exception& e) {
    out.push_back(failed_with("xi_sampler_ks_gaussian_case", e));
  }
  try {
    const std::vector<double> grid = {1e-3, 1e-1, 1.0, 10.0, 1e3};
    double worst = 0.0, worst_m = 0.0, worst_v = 0.0;
    for (double m : grid) {
      for (double v : grid) {
        const Envelope env = build_envelope(XiConditionalParams::from_m(m, v));
        RngStream rng(7, ++sid);
        long total = 0;
        constexpr int kEffDraws = 20000;
        for (int i = 0; i < kEffDraws; ++i) total += sample_xi(env, rng).proposals;
        const double mean = static_cast<double>(total) / kEffDraws;
        if (mean > worst) {
          worst = mean;
          worst_m = m;
          worst_v = v;
        }
      }
    }
    out.push_back(make("xi_sampler_efficiency", {worst}, {1.3}, 0.3 * s,
                       "published worst case of about 1.2 proposals per draw; bound 1.3",
                       worst <= 1.0 + 0.3 * s,
                       "max over (m, v) in {1e-3, 0.1, 1, 10, 1e3}^2 at m=" + fmt(worst_m) + ", v=" + fmt(worst_v)));
  } catch (const std::exception& e) {
    out.push_back(failed_with("xi_sampler_efficiency", e));
  }
  stamp(out, t0);
  return out;
}

std::vector<CheckReport> check_geweke(const Options& opt, long cycles, double psi_max, std::uint64_t seed) {
  const auto t0 = Clock::now();
  std::vector<CheckReport> out;
  constexpr Eigen::Index n = 5;
  constexpr int kFunctions = 8;
  const char* fnames[kFunctions] = {"atan_abs_beta1", "atan_beta1_sq", "atan_xi1",  "atan_xi1_sq",
                                    "atan_psi",       "psi",           "tau",       "tau_sq"};
  auto features = [](const GibbsState& st, double* f) {
    const double psi = std::sqrt(st.psi2);
    f[0] = std::atan(std::abs(st.beta(0)));
    f[1] = std::atan(st.beta(0) * st.beta(0));
    f[2] = std::atan(st.xi(0));
    f[3] = std::atan(st.xi(0) * st.xi(0));
    f[4] = 2.0 / kPi * std::atan(psi);
    f[5] = psi;
    f[6] = st.tau;
    f[7] = st.tau * st.tau;
  };
  std::vector<std::pair<std::string, ModelConfig>> configs;
  for (int k = 0; k < 2; ++k) {
    ModelConfig c;
    c.mixing = k == 0 ? Mixing{LogLaplaceMix{}} : Mixing{LogTMix{7.0}};
    c.psi_max = psi_max;
    c.iterations = 2;
    c.burnin = 0;
    configs.emplace_back(k == 0 ? "log_laplace" : "log_t", c);
  }
  std::uint64_t sid = 1000;
  for (const auto& [label, cfg] : configs) {
    try {
      std::vector<std::vector<double>> mc(kFunctions), sc(kFunctions);
      for (auto& v : mc) v.reserve(static_cast<std::size_t>(cycles));
      for (auto& v : sc) v.reserve(static_cast<std::size_t>(cycles));
      double f[kFunctions];
      RngStream prior_rng(seed, ++sid);
      for (long i = 0; i < cycles; ++i) {
        const GibbsState st = draw_from_prior(n, cfg, prior_rng);
        features(st, f);
        for (int k = 0; k < kFunctions; ++k) mc[k].push_back(f[k]);
      }
      RngStream chain_rng(seed, ++sid);
      GibbsState st = draw_from_prior(n, cfg, chain_rng);
      const double sd_noise = std::sqrt(st.sigma2);
      for (long i = 0; i < cycles; ++i) {
        sweep(st, cfg, chain_rng);
        for (Eigen::Index j = 0; j < n; ++j) st.y(j) = st.beta(j) + sd_noise * chain_rng.normal();
        features(st, f);
        for (int k = 0; k < kFunctions; ++k) sc[k].push_back(f[k]);
      }
      for (int k = 0; k < kFunctions; ++k) {
        const double m1 = mean_of(mc[k]);
        const double se1 = sd_of(mc[k]) / std::sqrt(static_cast<double>(cycles));
        const double m2 = mean_of(sc[k]);
        const double se2 = batch_means_se(sc[k], 100);
        const double z = (m2 - m1) / std::sqrt(se1 * se1 + se2 * se2);
        out.push_back(make("geweke_" + label + "_" + fnames[k], {m2, m1, z}, {0.0}, 4.0 * opt.tolerance_scale,
                           "joint-distribution identity; |z| within 4 standard errors",
                           std::abs(z) <= 4.0 * opt.tolerance_scale,
                           "successive-conditional mean, marginal-conditional mean, z; n = 5, " +
                               std::to_string(cycles) + " cycles, psi truncated at " + fmt(psi_max)));
      }
    } catch (const std::exception& e) {
      out.push_back(failed_with("geweke_" + label, e));
    }
  }
  stamp(out, t0);
  return out;
}

std::vector<CheckReport> check_determinism(const Options&) {
  const auto t0 = Clock::now();
  std::vector<CheckReport> out;
  try {
    Eigen::VectorXd y(40);
    RngStream rng(5, 5);
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = (i < 4 ? 6.0 : 0.0) + rng.normal();
    ModelConfig c;
    c.iterations = 300;
    c.burnin = 100;
    c.seed = 11;
    const ChainOutput a = run_chain(y, c);
    const ChainOutput b = run_chain(y, c);
    const bool same = std::memcmp(a.posterior_mean_beta.data(), b.posterior_mean_beta.data(),
                                  sizeof(double) * static_cast<std::size_t>(y.size())) == 0 &&
                      std::memcmp(a.posterior_mean_kappa.data(), b.posterior_mean_kappa.data(),
                                  sizeof(double) * static_cast<std::size_t>(y.size())) == 0 &&
                      std::memcmp(&a.posterior_mean_psi, &b.posterior_mean_psi, sizeof(double)) == 0 &&
                      std::memcmp(&a.posterior_mean_tau, &b.posterior_mean_tau, sizeof(double)) == 0;
    out.push_back(make("determinism_chain", {}, {}, 0.0, "reproducibility contract", same,
                       "two log-t chains with equal seeds"));

    TableConfig t;
    t.n = 60;
    t.q_n = {0.1};
    t.A = {4.0};
    t.reps = 2;
    t.iterations = 200;
    t.burnin = 100;
    t.methods = {method_preset("log-t"), method_preset("horseshoe")};
    std::ostringstream s1, s2;
    write_metrics_csv(s1, run_table(t, 1));
    write_metrics_csv(s2, run_table(t, 2));
    out.push_back(make("determinism_simulation", {}, {}, 0.0, "reproducibility contract", s1.str() == s2.str(),
                       "identical CSV with 1 and 2 worker threads"));
  } catch (const std::exception& e) {
    out.push_back(failed_with("determinism", e));
  }
  stamp(out, t0);
  return out;
}

TableConfig desk_table_config() {
  TableConfig t;
  t.n = 500;
  t.q_n = {0.05, 0.2, 0.4};
  t.A = {2.0, 4.0, 8.0, 16.0};
  t.reps = 20;
  t.iterations = 4000;
  t.burnin = 2000;
  t.master_seed = 2017;
  t.methods = {method_preset("horseshoe"), method_preset("hs-plus"), method_preset("log-t"), method_preset("ridge")};
  return t;
}

std::vector<CheckReport> check_table1(const TableConfig& config, std::vector<MetricsRow>& rows, const Options& opt) {
  const auto t0 = Clock::now();
  std::vector<CheckReport> out;
  const double s = opt.tolerance_scale;
  try {
    rows = run_table(config, opt.threads);
  } catch (const std::exception& e) {
    out.push_back(failed_with("table1", e));
    stamp(out, t0);
    return out;
  }
  auto sse = [&](double q, double a, const std::string& m) {
    const MetricsRow* r = find_row(rows, q, a, m);
    return r ? r->mean_rel_sse_pct : std::numeric_limits<double>::quiet_NaN();
  };
  auto interval = [&](const std::string& name, double v, double lo, double hi, const std::string& prov) {
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo) * s;
    out.push_back(make(name, {v}, {lo, hi}, h, prov, std::isfinite(v) && within(v, c, h)));
  };
  interval("table1_log_t_q0.05_A16", sse(0.05, 16, "log-t"), 5.0, 10.0, "published relative SSE 7.03");
  interval("table1_ridge_q0.05_A16", sse(0.05, 16, "ridge"), 85.0, 100.0, "published relative SSE 92.71");
  {
    const double r = sse(0.4, 2, "ridge"), t = sse(0.4, 2, "log-t"), h = sse(0.4, 2, "hs-plus");
    out.push_back(make("table1_q0.4_A2_ridge_and_log_t_beat_hs_plus", {r, t, h}, {61.64, 65.54, 106.07}, 0.0,
                       "published relative SSE ordering", r < h && t < h, "ridge, log-t, hs-plus"));
  }
  {
    int worst_rank = 0;
    std::string where;
    std::vector<double> ranks;
    for (double q : config.q_n) {
      for (double a : config.A) {
        const double lt = sse(q, a, "log-t");
        int rank = 1;
        for (const char* m : {"horseshoe", "hs-plus", "ridge"}) {
          const double v = sse(q, a, m);
          if (std::isfinite(v) && v < lt) ++rank;
        }
        ranks.push_back(rank);
        if (rank > worst_rank) {
          worst_rank = rank;
          where = "q=" + fmt(q) + ", A=" + fmt(a);
        }
      }
    }
    out.push_back(make("table1_log_t_never_worse_than_third", ranks, {3.0}, 0.0,
                       "published ranking: never worse than third", worst_rank <= 3,
                       "rank of log-t per cell among horseshoe, hs-plus, log-t, ridge; worst at " + where));
  }
  {
    const MetricsRow* r = find_row(rows, 0.05, 8, "log-t");
    const double c = r ? r->mean_class_pct : std::numeric_limits<double>::quiet_NaN();
    out.push_back(make("table1_log_t_classification_q0.05_A8", {c}, {99.0}, 0.0,
                       "published classification 99.75; bound 99", std::isfinite(c) && c >= 99.0 - (1.0 - s)));
  }
  {
    const MetricsRow* weak = find_row(rows, 0.2, 2, "log-t");
    const MetricsRow* strong = find_row(rows, 0.2, 16, "log-t");
    const double pw = weak ? weak->mean_psi : std::numeric_limits<double>::quiet_NaN();
    const double ps = strong ? strong->mean_psi : std::numeric_limits<double>::quiet_NaN();
    out.push_back(make("adaptive_psi_signature_q0.2", {pw, ps}, {1.0, 1.0}, 0.0,
                       "published narrative: psi well below one at A=2, above one at A=16",
                       pw < 1.0 && ps > 1.0, "posterior mean psi of log-t averaged over replications at A=2 and A=16"));
  }
  int failures = 0;
  for (const auto& r : rows) failures += r.failures;
  out.push_back(make("table1_chain_failures", {static_cast<double>(failures)}, {0.0}, 0.0, "robustness",
                     failures == 0));
  stamp(out, t0);
  return out;
}

std::vector<CheckReport> run_all(Level level, const Options& opt) {
  std::vector<CheckReport> all;
  auto add = [&](std::vector<CheckReport> part) {
    for (auto& r : part) all.push_back(std::move(r));
  };
  add(check_theorem1(opt));
  add(check_tail_rates(opt));
  add(check_propositions(opt));
  add(check_iqr_table(opt));
  add(check_sampler_exactness(opt));
  add(check_determinism(opt));
  if (level == Level::Full) {
    add(check_geweke(opt));
    std::vector<MetricsRow> rows;
    add(check_table1(desk_table_config(), rows, opt));
  } else {
    CheckReport g;
    g.name = "geweke";
    g.status = Status::Skipped;
    g.note = "full level only";
    all.push_back(g);
    CheckReport t = g;
    t.name = "table1";
    all.push_back(t);
  }
  return all;
}

void write_text(std::ostream& out, const std::vector<CheckReport>& reports, bool with_runtime) {
  int pass = 0, fail = 0, skip = 0;
  for (const auto& r : reports) {
    char head[32];
    std::snprintf(head, sizeof head, "%-7s", to_string(r.status).c_str());
    out << head << ' ' << r.name;
    if (!r.measured.empty()) out << "  measured=[" << join(r.measured, ", ", false) << "]";
    if (!r.expected.empty()) out << " expected=[" << join(r.expected, ", ", false) << "]";
    if (r.tolerance > 0.0) out << " tol=" << fmt(r.tolerance);
    if (!r.provenance.empty()) out << "  (" << r.provenance << ")";
    if (with_runtime) {
      char rt[32];
      std::snprintf(rt, sizeof rt, "  %.2fs", r.runtime_seconds);
      out << rt;
    }
    if (!r.note.empty()) out << "  -- " << r.note;
    out << '\n';
    (r.status == Status::Pass ? pass : r.status == Status::Fail ? fail : skip)++;
  }
  out << pass << " passed, " << fail << " failed, " << skip << " skipped\n";
}

void write_csv(std::ostream& out, const std::vector<CheckReport>& reports) {
  csv::Writer w(out);
  w.header({"check_name", "status", "measured", "expected", "tolerance", "provenance", "note"});
  auto quote = [](std::string s) {
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  for (const auto& r : reports) {
    w.row({r.name, to_string(r.status), join(r.measured, ";", true), join(r.expected, ";", true),
           csv::format_number(r.tolerance), quote(r.provenance), quote(r.note)});
  }
}

}  // namespace lss::verify
