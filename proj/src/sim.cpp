#include "logscale/sim.hpp"

#include <atomic>
#include <cmath>
#include <json.hpp>
#include <ostream>
#include <thread>

#include "logscale/csv.hpp"
#include "logscale/errors.hpp"

namespace lss {

namespace {

struct Task {
  int cell;
  int rep;
  int method;
};

void mean_and_stderr(const std::vector<double>& v, double& mean, double& se) {
  mean = std::numeric_limits<double>::quiet_NaN();
  se = std::numeric_limits<double>::quiet_NaN();
  if (v.empty()) return;
  double s = 0.0;
  for (double x : v) s += x;
  mean = s / static_cast<double>(v.size());
  if (v.size() < 2) return;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  se = std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
}

RepResult run_one(const ScenarioConfig& sc, int cell, int rep, int method) {
  RepResult r;
  try {
    RngStream data_rng(sc.master_seed, stream_id(cell, rep, -1));
    const Dataset d = generate_dataset(sc.n, sc.q_n, sc.A, data_rng);
    ModelConfig cfg = sc.methods[static_cast<std::size_t>(method)].config;
    cfg.iterations = sc.iterations;
    cfg.burnin = sc.burnin;
    cfg.seed = sc.master_seed;
    cfg.chain_id = stream_id(cell, rep, method);
    const ChainOutput out = run_chain(d.y, cfg);
    r.rel_sse = relative_sse(out.posterior_mean_beta, d.beta_true);
    r.class_pct = classification_percent(out, d.beta_true);
    r.mean_psi = out.posterior_mean_psi;
    r.mean_tau = out.posterior_mean_tau;
  } catch (const std::exception& e) {
    r.failed = true;
    r.error = e.what();
  }
  return r;
}

std::vector<std::vector<MetricsRow>> run_cells(const std::vector<ScenarioConfig>& cells,
                                               const std::vector<int>& cell_ids, int threads) {
  std::vector<Task> tasks;
  std::vector<std::vector<std::vector<RepResult>>> results(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto nm = cells[c].methods.size();
    results[c].assign(nm, std::vector<RepResult>(static_cast<std::size_t>(cells[c].reps)));
    for (int r = 0; r < cells[c].reps; ++r) {
      for (std::size_t m = 0; m < nm; ++m) tasks.push_back({static_cast<int>(c), r, static_cast<int>(m)});
    }
  }
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min<int>(threads, static_cast<int>(std::max<std::size_t>(1, tasks.size())));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& t = tasks[i];
      results[t.cell][t.method][t.rep] = run_one(cells[t.cell], cell_ids[t.cell], t.rep, t.method);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<std::vector<MetricsRow>> out(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::size_t m = 0; m < cells[c].methods.size(); ++m) {
      MetricsRow row;
      row.method = cells[c].methods[m].name;
      row.q_n = cells[c].q_n;
      row.A = cells[c].A;
      row.reps = cells[c].reps;
      row.replications = results[c][m];
      std::vector<double> sse, cls, psi;
      for (const auto& r : row.replications) {
        if (r.failed) {
          ++row.failures;
          continue;
        }
        sse.push_back(r.rel_sse);
        cls.push_back(r.class_pct);
        if (std::isfinite(r.mean_psi)) psi.push_back(r.mean_psi);
      }
      mean_and_stderr(sse, row.mean_rel_sse_pct, row.stderr_rel_sse);
      mean_and_stderr(cls, row.mean_class_pct, row.stderr_class);
      double se_unused;
      mean_and_stderr(psi, row.mean_psi, se_unused);
      out[c].push_back(std::move(row));
    }
  }
  return out;
}

ScenarioConfig cell_config(const TableConfig& t, double q, double a) {
  ScenarioConfig sc;
  sc.n = t.n;
  sc.q_n = q;
  sc.A = a;
  sc.reps = t.reps;
  sc.methods = t.methods;
  sc.iterations = t.iterations;
  sc.burnin = t.burnin;
  sc.master_seed = t.master_seed;
  return sc;
}

}  // namespace

MethodSpec method_preset(const std::string& name, double alpha) {
  MethodSpec m;
  m.name = name;
  if (name == "log-t") {
    m.config.mixing = LogTMix{alpha};
  } else if (name == "log-laplace") {
    m.config.mixing = LogLaplaceMix{};
  } else if (name == "horseshoe") {
    m.config.mixing = HorseshoeMix{};
  } else if (name == "hs-plus") {
    m.config.mixing = HorseshoePlusMix{};
  } else if (name == "ridge") {
    m.config.mixing = RidgeFixed{};
  } else {
    throw DomainError("unknown method '" + name + "'");
  }
  return m;
}

std::uint64_t stream_id(int cell, int rep, int method_index) {
  return (static_cast<std::uint64_t>(cell) << 40) | (static_cast<std::uint64_t>(rep) << 16) |
         static_cast<std::uint64_t>(method_index + 1);
}

void validate(const TableConfig& t) {
  if (t.n < 1) throw DomainError("n must be >= 1");
  if (t.reps < 1) throw DomainError("reps must be >= 1");
  if (t.q_n.empty() || t.A.empty() || t.methods.empty()) throw DomainError("q_n, A and methods must be non-empty");
  for (double q : t.q_n) {
    if (!(q >= 0.0 && q <= 1.0)) throw DomainError("q_n must lie in [0, 1]");
  }
  for (double a : t.A) {
    if (!std::isfinite(a)) throw DomainError("A must be finite");
  }
  if (t.iterations < 1 || t.burnin < 0 || t.burnin >= t.iterations) {
    throw DomainError("need iterations >= 1 and 0 <= burnin < iterations");
  }
  for (const auto& m : t.methods) {
    ModelConfig c = m.config;
    c.iterations = t.iterations;
    c.burnin = t.burnin;
    lss::validate(c, t.n);
  }
}

TableConfig parse_table_config(const std::string& json_text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario JSON: ") + e.what());
  }
  TableConfig t;
  try {
    auto list = [](const json& v) {
      std::vector<double> out;
      if (v.is_array()) {
        for (const auto& x : v) out.push_back(x.get<double>());
      } else {
        out.push_back(v.get<double>());
      }
      return out;
    };
    t.n = j.value("n", t.n);
    t.reps = j.value("reps", t.reps);
    t.iterations = j.value("iterations", t.iterations);
    t.burnin = j.value("burnin", t.burnin);
    t.master_seed = j.value("master_seed", t.master_seed);
    if (!j.contains("q_n") || !j.contains("A") || !j.contains("methods")) {
      throw DomainError("scenario JSON needs q_n, A and methods");
    }
    t.q_n = list(j.at("q_n"));
    t.A = list(j.at("A"));
    for (const auto& m : j.at("methods")) {
      if (m.is_string()) {
        t.methods.push_back(method_preset(m.get<std::string>()));
        continue;
      }
      MethodSpec spec = method_preset(m.at("name").get<std::string>(), m.value("alpha", 7.0));
      if (m.contains("label")) spec.name = m.at("label").get<std::string>();
      if (m.contains("psi")) {
        const auto& p = m.at("psi");
        if (p.is_string()) {
          if (p.get<std::string>() != "adapt") throw DomainError("psi must be \"adapt\" or a number");
        } else {
          spec.config.psi = PsiMode::fixed(p.get<double>());
        }
      }
      if (m.contains("tau_bounds")) {
        const auto& b = m.at("tau_bounds");
        spec.config.tau_bounds = std::pair{b.at(0).get<double>(), b.at(1).get<double>()};
      }
      t.methods.push_back(std::move(spec));
    }
  } catch (const json::exception& e) {
    throw DomainError(std::string("scenario JSON: ") + e.what());
  }
  validate(t);
  return t;
}

Dataset generate_dataset(int n, double q_n, double A, RngStream& rng) {
  if (n < 1 || !(q_n >= 0.0 && q_n <= 1.0)) throw DomainError("generate_dataset: need n >= 1, q_n in [0, 1]");
  Dataset d;
  d.beta_true = Eigen::VectorXd::Zero(n);
  const auto k = static_cast<Eigen::Index>(std::floor(q_n * n + 1e-9));
  for (Eigen::Index idx : sample_without_replacement(rng, n, k)) d.beta_true(idx) = A;
  d.y = d.beta_true + sample_normal_vector(rng, n);
  return d;
}

double relative_sse(const Eigen::VectorXd& beta_hat, const Eigen::VectorXd& beta_true) {
  if (beta_hat.size() != beta_true.size() || beta_true.size() == 0) {
    throw DomainError("relative_sse: length mismatch");
  }
  return 100.0 * (beta_hat - beta_true).squaredNorm() / static_cast<double>(beta_true.size());
}

double classification_percent(const Eigen::Array<bool, Eigen::Dynamic, 1>& selected,
                              const Eigen::VectorXd& beta_true) {
  if (selected.size() != beta_true.size() || beta_true.size() == 0) {
    throw DomainError("classification_percent: length mismatch");
  }
  const auto truth = (beta_true.array() != 0.0);
  const auto correct = (selected == truth).count();
  return 100.0 * static_cast<double>(correct) / static_cast<double>(beta_true.size());
}

double classification_percent(const ChainOutput& out, const Eigen::VectorXd& beta_true) {
  return classification_percent(out.selected, beta_true);
}

std::vector<MetricsRow> run_scenario(const ScenarioConfig& config, int threads, int cell_index) {
  if (config.methods.empty()) throw DomainError("run_scenario: no methods");
  return run_cells({config}, {cell_index}, threads).front();
}

std::vector<MetricsRow> run_table(const TableConfig& config, int threads) {
  validate(config);
  std::vector<ScenarioConfig> cells;
  std::vector<int> ids;
  for (double q : config.q_n) {
    for (double a : config.A) {
      ids.push_back(static_cast<int>(cells.size()));
      cells.push_back(cell_config(config, q, a));
    }
  }
  std::vector<MetricsRow> rows;
  for (auto& cell_rows : run_cells(cells, ids, threads)) {
    for (auto& r : cell_rows) rows.push_back(std::move(r));
  }
  return rows;
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  using csv::format_number;
  csv::Writer w(out);
  w.header({"method", "q_n", "A", "reps", "mean_rel_sse_pct", "stderr_rel_sse", "mean_class_pct", "stderr_class",
            "mean_psi", "failures"});
  for (const auto& r : rows) {
    w.row({r.method, format_number(r.q_n), format_number(r.A), std::to_string(r.reps),
           format_number(r.mean_rel_sse_pct), format_number(r.stderr_rel_sse), format_number(r.mean_class_pct),
           format_number(r.stderr_class), format_number(r.mean_psi), std::to_string(r.failures)});
  }
}

}  // namespace lss
