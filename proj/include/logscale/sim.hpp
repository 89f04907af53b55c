#pragma once

// Monte-Carlo study of the sparse normal means problem: datasets with
// floor(q n) coefficients equal to A, every method fitted to the same data,
// squared error relative to least squares and classification accuracy.

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "logscale/gibbs.hpp"
#include "logscale/randkit.hpp"

namespace lss {

struct MethodSpec {
  std::string name;
  ModelConfig config;  // seed / chain_id are overwritten per replication
};

/// Preset for "log-t", "log-laplace", "horseshoe", "hs-plus" or "ridge".
MethodSpec method_preset(const std::string& name, double alpha = 7.0);

struct ScenarioConfig {
  int n = 500;
  double q_n = 0.05;
  double A = 16.0;
  int reps = 20;
  std::vector<MethodSpec> methods;
  int iterations = 4000;
  int burnin = 2000;
  std::uint64_t master_seed = 1;
};

struct TableConfig {
  int n = 500;
  std::vector<double> q_n;
  std::vector<double> A;
  int reps = 20;
  std::vector<MethodSpec> methods;
  int iterations = 4000;
  int burnin = 2000;
  std::uint64_t master_seed = 1;
};

/// Parses the scenario JSON document; throws lss::DomainError on invalid values.
TableConfig parse_table_config(const std::string& json_text);
void validate(const TableConfig& config);

struct Dataset {
  Eigen::VectorXd beta_true;
  Eigen::VectorXd y;
};

Dataset generate_dataset(int n, double q_n, double A, RngStream& rng);

/// 100 * sum (beta_hat - beta_true)^2 / n.
double relative_sse(const Eigen::VectorXd& beta_hat, const Eigen::VectorXd& beta_true);
/// 100 * share of coordinates whose selection flag matches beta_true != 0.
double classification_percent(const Eigen::Array<bool, Eigen::Dynamic, 1>& selected,
                              const Eigen::VectorXd& beta_true);
double classification_percent(const ChainOutput& out, const Eigen::VectorXd& beta_true);

struct RepResult {
  bool failed = false;
  std::string error;
  double rel_sse = 0.0;
  double class_pct = 0.0;
  double mean_psi = 0.0;
  double mean_tau = 0.0;
};

struct MetricsRow {
  std::string method;
  double q_n = 0.0;
  double A = 0.0;
  int reps = 0;
  double mean_rel_sse_pct = 0.0;
  double stderr_rel_sse = 0.0;
  double mean_class_pct = 0.0;
  double stderr_class = 0.0;
  double mean_psi = 0.0;
  int failures = 0;
  std::vector<RepResult> replications;
};

/// Stream ids used for data (method_index = -1) and chains.
std::uint64_t stream_id(int cell, int rep, int method_index);

/// One row per method. threads = 0 uses the hardware concurrency.
std::vector<MetricsRow> run_scenario(const ScenarioConfig& config, int threads = 0, int cell_index = 0);
/// Rows ordered by (q_n, A, method).
std::vector<MetricsRow> run_table(const TableConfig& config, int threads = 0);

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows);

}  // namespace lss
