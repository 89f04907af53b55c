#pragma once

#include <stdexcept>
#include <string>

namespace lss {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative kernel (series, continued fraction, quadrature) did not converge.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double achieved_error = 0.0)
      : std::runtime_error(what), achieved_error_(achieved_error) {}
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

/// Result would leave the representable range of double precision.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// Density query for a family that has no density (the ridge point mass).
class UnsupportedFamily : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The marginal density diverges at the requested abscissa.
class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A rejection sampler exhausted its iteration cap.
class SamplerFailure : public std::runtime_error {
 public:
  SamplerFailure(const std::string& what, double m, double v)
      : std::runtime_error(what), m_(m), v_(v) {}
  double m() const noexcept { return m_; }
  double v() const noexcept { return v_; }

 private:
  double m_;
  double v_;
};

/// Malformed input file; line() is 1-based, 0 when not tied to a line.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, long line = 0) : std::invalid_argument(what), line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

}  // namespace lss
