#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature on finite intervals.

#include <functional>
#include <span>

namespace lss::quad {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-9;
  int max_intervals = 4000;
};

/// Integrates f over [a, b]; converged when the summed Kronrod error estimate
/// is below max(abs_tol, rel_tol * |value|).
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts = {});

/// Same, with the initial partition given by sorted breakpoints
/// (first and last entries are the limits).
QuadResult integrate(const std::function<double(double)>& f, std::span<const double> breakpoints,
                     const QuadOptions& opts = {});

/// Like integrate() but throws lss::ConvergenceError carrying the error estimate.
double integrate_or_throw(const std::function<double(double)>& f,
                          std::span<const double> breakpoints, const QuadOptions& opts = {});

}  // namespace lss::quad
