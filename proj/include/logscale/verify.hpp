#pragma once

// Numerical verification of the closed forms, tail rates, density bounds,
// published interquartile ranges, sampler exactness and the desk-scale
// simulation table. Every check is deterministic.

#include <iosfwd>
#include <cstdint>
#include <string>
#include <vector>

#include "logscale/sim.hpp"

namespace lss::verify {

enum class Status { Pass, Fail, Skipped };
std::string to_string(Status s);

struct CheckReport {
  std::string name;
  Status status = Status::Skipped;
  std::vector<double> measured;
  std::vector<double> expected;
  double tolerance = 0.0;
  std::string provenance;  // where the expected value comes from
  std::string note;
  double runtime_seconds = 0.0;

  bool passed() const { return status == Status::Pass; }
};

struct Options {
  /// Multiplies every tolerance; 0 turns each check into an exact-equality
  /// test and is used as a negative control.
  double tolerance_scale = 1.0;
  int threads = 0;
};

std::vector<CheckReport> check_theorem1(const Options& opt = {});
std::vector<CheckReport> check_tail_rates(const Options& opt = {});
std::vector<CheckReport> check_propositions(const Options& opt = {});
std::vector<CheckReport> check_iqr_table(const Options& opt = {});
/// KS exactness on six (m, v) pairs and proposal efficiency on a 5x5 grid.
std::vector<CheckReport> check_sampler_exactness(const Options& opt = {});
/// Joint-distribution (successive-conditional vs marginal-conditional) test at n = 5.
/// With a loose psi truncation the chain sticks for ~1e5 sweeps whenever a large
/// psi drives |beta| far above sigma, so the default keeps psi <= 2.
std::vector<CheckReport> check_geweke(const Options& opt = {}, long cycles = 200000, double psi_max = 2.0,
                                     std::uint64_t seed = 424242);
/// Bitwise reproducibility of a chain and a small simulation.
std::vector<CheckReport> check_determinism(const Options& opt = {});

/// The bundled desk-scale grid: n = 500, q in {0.05, 0.2, 0.4}, A in {2, 4, 8, 16},
/// 20 replications, 4000 iterations with 2000 burn-in.
TableConfig desk_table_config();
/// Table comparisons plus the adaptive-scale signature; `rows` receives the table.
std::vector<CheckReport> check_table1(const TableConfig& config, std::vector<MetricsRow>& rows,
                                      const Options& opt = {});

enum class Level { Fast, Full };
/// Fast excludes the joint-distribution test and the simulation table.
std::vector<CheckReport> run_all(Level level, const Options& opt = {});

/// One line per report; runtimes are optional so that output can be compared across runs.
void write_text(std::ostream& out, const std::vector<CheckReport>& reports, bool with_runtime = true);
/// CSV without runtimes so that reruns are byte-identical.
void write_csv(std::ostream& out, const std::vector<CheckReport>& reports);

/// Kolmogorov-Smirnov statistic of sorted draws against a CDF evaluated at those draws.
double ks_statistic(const std::vector<double>& cdf_at_sorted_draws);
/// Asymptotic Kolmogorov tail probability P(sqrt(N) D > t).
double ks_pvalue(double d, std::size_t n);

}  // namespace lss::verify
