#include "logscale/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "logscale/errors.hpp"

namespace lss::csv {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, e - b + 1);
}

void write_cells(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

}  // namespace

std::string format_number(double x) {
  if (!std::isfinite(x)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void Writer::header(std::initializer_list<std::string> names) { write_cells(out_, std::vector<std::string>(names)); }
void Writer::header(const std::vector<std::string>& names) { write_cells(out_, names); }
void Writer::row(const std::vector<std::string>& cells) { write_cells(out_, cells); }

Eigen::VectorXd read_column(std::istream& in, const std::string& name) {
  std::string line;
  long lineno = 0;
  int col = -1;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!trim(line).empty()) break;
  }
  if (lineno == 0 || trim(line).empty()) throw ParseError("empty CSV input", lineno);
  const auto head = split(line);
  width = head.size();
  for (std::size_t i = 0; i < head.size(); ++i) {
    if (trim(head[i]) == name) col = static_cast<int>(i);
  }
  if (col < 0) throw ParseError("CSV header has no column '" + name + "'", lineno);

  std::vector<double> values;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != width) {
      throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(width) + " fields",
                       lineno);
    }
    const std::string cell = trim(cells[static_cast<std::size_t>(col)]);
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || end != cell.c_str() + cell.size() || !std::isfinite(v)) {
      throw ParseError("line " + std::to_string(lineno) + ": '" + cell + "' is not a finite number", lineno);
    }
    values.push_back(v);
  }
  if (values.empty()) throw ParseError("CSV has no data rows", lineno);
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Eigen::VectorXd read_column_file(const std::string& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_column(in, name);
}

}  // namespace lss::csv
