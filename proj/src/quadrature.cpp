#include "logscale/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "logscale/errors.hpp"

namespace lss::quad {

namespace {

// Kronrod 15-point abscissae and weights, with the embedded 7-point Gauss weights.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b, int& evals) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    kron += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  evals += 15;
  kron *= h;
  gauss *= h;
  return {a, b, kron, std::abs(kron - gauss)};
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, std::span<const double> breakpoints,
                     const QuadOptions& opts) {
  QuadResult out;
  if (breakpoints.size() < 2) return out;
  std::priority_queue<Segment> heap;
  double total = 0.0;
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i + 1] > breakpoints[i])) continue;
    Segment s = gk15(f, breakpoints[i], breakpoints[i + 1], out.evaluations);
    total += s.value;
    err += s.error;
    heap.push(s);
  }
  auto tolerance = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };
  int intervals = static_cast<int>(heap.size());
  while (!heap.empty() && err > tolerance() && intervals < opts.max_intervals) {
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      break;
    }
    Segment left = gk15(f, worst.a, mid, out.evaluations);
    Segment right = gk15(f, mid, worst.b, out.evaluations);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }
  // Re-sum to shed accumulated rounding from the incremental updates.
  total = 0.0;
  err = 0.0;
  std::vector<Segment> segs;
  segs.reserve(heap.size());
  while (!heap.empty()) {
    segs.push_back(heap.top());
    heap.pop();
  }
  std::sort(segs.begin(), segs.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
  for (const auto& s : segs) {
    total += s.value;
    err += s.error;
  }
  out.value = total;
  out.abs_error = err;
  out.converged = err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
  return out;
}

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts) {
  const double pts[2] = {a, b};
  return integrate(f, std::span<const double>(pts, 2), opts);
}

double integrate_or_throw(const std::function<double(double)>& f,
                          std::span<const double> breakpoints, const QuadOptions& opts) {
  QuadResult r = integrate(f, breakpoints, opts);
  if (!r.converged) {
    throw ConvergenceError("quadrature did not reach tolerance (error estimate " +
                               std::to_string(r.abs_error) + ")",
                           r.abs_error);
  }
  return r.value;
}

}  // namespace lss::quad
