#pragma once

// Minimal CSV plumbing: 17-significant-digit numbers, one row per line,
// trailing newline, and a reader for single-column numeric inputs.

#include <Eigen/Core>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <vector>

namespace lss::csv {

/// "%.17g"; non-finite values are written as NA.
std::string format_number(double x);

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}
  void header(std::initializer_list<std::string> names);
  void header(const std::vector<std::string>& names);
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& out_;
};

/// Reads the numeric column `name` from a CSV with a header row. Throws
/// lss::ParseError with the 1-based line number on malformed input.
Eigen::VectorXd read_column(std::istream& in, const std::string& name);
Eigen::VectorXd read_column_file(const std::string& path, const std::string& name);

}  // namespace lss::csv
