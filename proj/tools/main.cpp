#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "logscale/csv.hpp"
#include "logscale/errors.hpp"
#include "logscale/gibbs.hpp"
#include "logscale/priors.hpp"
#include "logscale/sim.hpp"
#include "logscale/verify.hpp"

namespace {

using lss::csv::format_number;

constexpr int kOk = 0;
constexpr int kRuntimeFailure = 1;
constexpr int kUsage = 2;

std::vector<double> parse_reals(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || *end != '\0') throw lss::DomainError(what + ": '" + cell + "' is not a number");
    out.push_back(v);
  }
  if (out.empty()) throw lss::DomainError(what + " is empty");
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lss::ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Empty path means standard output.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

struct FitArgs {
  std::string input, prior = "log-t", psi = "adapt", tau_bounds = "auto", output;
  double alpha = 7.0, sigma2 = 1.0;
  int iters = 10000, burnin = 5000;
  std::uint64_t seed = 1;
};

int run_fit(const FitArgs& a) {
  const Eigen::VectorXd y = lss::csv::read_column_file(a.input, "y");
  lss::ModelConfig cfg = lss::method_preset(a.prior, a.alpha).config;
  if (a.psi != "adapt") cfg.psi = lss::PsiMode::fixed(parse_reals(a.psi, "--psi").at(0));
  if (a.tau_bounds != "auto") {
    const auto b = parse_reals(a.tau_bounds, "--tau-bounds");
    if (b.size() != 2) throw lss::DomainError("--tau-bounds needs LOW,HIGH");
    cfg.tau_bounds = std::pair{b[0], b[1]};
  }
  cfg.sigma2 = a.sigma2;
  cfg.iterations = a.iters;
  cfg.burnin = a.burnin;
  cfg.seed = a.seed;
  lss::validate(cfg, y.size());

  const lss::ChainOutput out = lss::run_chain(y, cfg);
  std::ostringstream csv_text;
  lss::csv::Writer w(csv_text);
  w.header({"y", "beta_mean", "kappa_mean", "selected"});
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    w.row({format_number(y(i)), format_number(out.posterior_mean_beta(i)), format_number(out.posterior_mean_kappa(i)),
           out.selected(i) ? "1" : "0"});
  }
  emit(a.output, csv_text.str());
  std::cout << "prior=" << a.prior << " n=" << y.size() << " kept=" << out.kept_draws
            << " selected=" << out.selected.count() << " mean_psi=" << format_number(out.posterior_mean_psi)
            << " mean_tau=" << format_number(out.posterior_mean_tau) << '\n';
  return kOk;
}

int run_simulate(const std::string& config, const std::string& output, int threads) {
  const lss::TableConfig t = lss::parse_table_config(slurp(config));
  const auto rows = lss::run_table(t, threads);
  std::ostringstream text;
  lss::write_metrics_csv(text, rows);
  emit(output, text.str());
  int failures = 0;
  for (const auto& r : rows) failures += r.failures;
  if (failures > 0) {
    std::cerr << "simulate: " << failures << " chain(s) failed\n";
    return kRuntimeFailure;
  }
  return kOk;
}

lss::PriorFamily family_from(const std::string& name, const std::vector<double>& p) {
  auto need = [&](std::size_t k) {
    if (p.size() != k) {
      throw lss::DomainError("prior '" + name + "' takes " + std::to_string(k) + " parameter(s) in --params");
    }
  };
  if (name == "log-laplace") {
    need(2);
    return lss::PriorFamily::log_laplace(p[0], p[1]);
  }
  if (name == "log-t") {
    need(2);
    return lss::PriorFamily::log_t(p[0], p[1]);
  }
  if (name == "log-hyp-sech") {
    need(1);
    return lss::PriorFamily::log_hyp_sech(p[0]);
  }
  if (name == "z") {
    if (p.size() == 2) return lss::PriorFamily::z_dist(p[0], p[1]);
    need(3);
    return lss::PriorFamily::z_dist(p[0], p[1], p[2]);
  }
  if (name == "bayes-lasso") return lss::PriorFamily::bayes_lasso();
  if (name == "horseshoe") return lss::PriorFamily::horseshoe();
  if (name == "hs-plus") return lss::PriorFamily::horseshoe_plus();
  if (name == "ridge") return lss::PriorFamily::ridge();
  throw lss::DomainError("unknown prior '" + name + "'");
}

int run_prior_diag(const std::string& prior, const std::string& params, const std::string& what,
                   const std::string& grid, const std::string& output) {
  const lss::PriorFamily fam = family_from(prior, params.empty() ? std::vector<double>{} : parse_reals(params, "--params"));
  std::ostringstream text;
  lss::csv::Writer w(text);

  if (what == "iqr") {
    w.header({"quantity", "q25", "q75"});
    const auto x = lss::iqr_xi(fam);
    const auto k = lss::iqr_one_minus_kappa(fam);
    w.row({"xi", format_number(x.q25), format_number(x.q75)});
    w.row({"one_minus_kappa", format_number(k.q25), format_number(k.q75)});
    emit(output, text.str());
    return kOk;
  }
  if (what == "tail-slope") {
    w.header({"side", "slope", "intercept", "beta_min", "beta_max"});
    for (auto side : {lss::TailSide::NearZero, lss::TailSide::FarTail}) {
      const auto f = lss::tail_exponent(fam, side);
      w.row({side == lss::TailSide::NearZero ? "near_zero" : "far_tail", format_number(f.slope),
             format_number(f.intercept), format_number(f.beta_min), format_number(f.beta_max)});
    }
    emit(output, text.str());
    return kOk;
  }

  if (grid.empty()) throw lss::DomainError("--what " + what + " needs --grid MIN,MAX,N");
  const auto g = parse_reals(grid, "--grid");
  if (g.size() != 3) throw lss::DomainError("--grid needs MIN,MAX,N");
  const double n_real = g[2];
  if (!(n_real >= 1.0) || n_real != std::floor(n_real)) throw lss::DomainError("--grid N must be a positive integer");
  if (!(g[1] >= g[0])) throw lss::DomainError("--grid needs MIN <= MAX");
  const int n = static_cast<int>(n_real);

  const auto* ll = std::get_if<lss::LogLaplace>(&fam.kind);
  if (what == "marginal" && ll) {
    w.header({"beta", "marginal", "closed_form"});
  } else {
    w.header({"x", "value"});
  }
  for (int i = 0; i < n; ++i) {
    const double x = n == 1 ? g[0] : g[0] + (g[1] - g[0]) * i / (n - 1);
    if (what == "xi-density") {
      w.row({format_number(x), format_number(lss::xi_density(fam, x))});
    } else if (what == "lambda-density") {
      w.row({format_number(x), format_number(lss::lambda_density(fam, x))});
    } else if (what == "kappa-density") {
      w.row({format_number(x), format_number(lss::kappa_density(fam, x))});
    } else if (what == "marginal") {
      const double q = lss::marginal_beta_quadrature(fam, x);
      if (ll) {
        w.row({format_number(x), format_number(q), format_number(lss::marginal_beta_log_laplace(x, ll->psi1, ll->psi2))});
      } else {
        w.row({format_number(x), format_number(q)});
      }
    } else {
      throw lss::DomainError("unknown --what '" + what + "'");
    }
  }
  emit(output, text.str());
  return kOk;
}

int run_verify(const std::string& level, const std::string& report, int threads, double tolerance_scale) {
  lss::verify::Options opt;
  opt.threads = threads;
  opt.tolerance_scale = tolerance_scale;
  const auto reports =
      lss::verify::run_all(level == "full" ? lss::verify::Level::Full : lss::verify::Level::Fast, opt);
  lss::verify::write_text(std::cout, reports, false);
  // Wall times vary between runs, so they go to the diagnostic stream.
  std::string last;
  for (const auto& r : reports) {
    const std::string group = r.name.substr(0, r.name.find('_'));
    if (group == last) continue;
    last = group;
    char line[96];
    std::snprintf(line, sizeof line, "time %-14s %.2fs\n", group.c_str(), r.runtime_seconds);
    std::cerr << line;
  }
  if (!report.empty()) {
    std::ostringstream text;
    lss::verify::write_csv(text, reports);
    emit(report, text.str());
  }
  for (const auto& r : reports) {
    if (r.status == lss::verify::Status::Fail) return kRuntimeFailure;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive shrinkage with log-scale priors for the normal means problem"};
  app.require_subcommand(1);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit one dataset by Gibbs sampling");
  fit_cmd->add_option("--input", fit.input, "CSV with a column named y")->required();
  fit_cmd->add_option("--prior", fit.prior, "log-t | log-laplace | horseshoe | hs-plus | ridge")
      ->check(CLI::IsMember({"log-t", "log-laplace", "horseshoe", "hs-plus", "ridge"}));
  fit_cmd->add_option("--alpha", fit.alpha, "degrees of freedom of the log-t mixing");
  fit_cmd->add_option("--psi", fit.psi, "adapt, or a fixed value");
  fit_cmd->add_option("--sigma2", fit.sigma2, "known noise variance");
  fit_cmd->add_option("--iters", fit.iters, "total sweeps including burn-in");
  fit_cmd->add_option("--burnin", fit.burnin, "discarded sweeps");
  fit_cmd->add_option("--tau-bounds", fit.tau_bounds, "LOW,HIGH or auto");
  fit_cmd->add_option("--seed", fit.seed, "RNG seed");
  fit_cmd->add_option("--output", fit.output, "output CSV (standard output when omitted)");

  std::string sim_config, sim_output;
  int sim_threads = 0;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a simulation grid from a JSON config");
  sim_cmd->add_option("--config", sim_config, "scenario JSON")->required();
  sim_cmd->add_option("--output", sim_output, "metrics CSV (standard output when omitted)");
  sim_cmd->add_option("--threads", sim_threads, "worker threads, 0 = hardware concurrency");

  std::string pd_prior, pd_params, pd_what, pd_grid, pd_output;
  auto* pd_cmd = app.add_subcommand("prior-diag", "Densities, quartiles and tail slopes of a prior");
  pd_cmd->add_option("--prior", pd_prior, "log-laplace | log-t | log-hyp-sech | z | bayes-lasso | horseshoe | hs-plus")
      ->required();
  pd_cmd->add_option("--params", pd_params, "comma-separated family parameters");
  pd_cmd->add_option("--what", pd_what, "xi-density | lambda-density | kappa-density | marginal | iqr | tail-slope")
      ->required()
      ->check(CLI::IsMember({"xi-density", "lambda-density", "kappa-density", "marginal", "iqr", "tail-slope"}));
  pd_cmd->add_option("--grid", pd_grid, "MIN,MAX,N");
  pd_cmd->add_option("--output", pd_output, "output CSV (standard output when omitted)");

  std::string v_level = "fast", v_report;
  int v_threads = 0;
  double v_scale = 1.0;
  auto* v_cmd = app.add_subcommand("verify", "Run the numerical verification suite");
  v_cmd->add_option("--level", v_level, "fast | full")->check(CLI::IsMember({"fast", "full"}));
  v_cmd->add_option("--report", v_report, "CSV report path");
  v_cmd->add_option("--threads", v_threads, "worker threads for the simulation table");
  v_cmd->add_option("--tolerance-scale", v_scale, "multiplies every tolerance (0 = negative control)")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*fit_cmd) return run_fit(fit);
    if (*sim_cmd) return run_simulate(sim_config, sim_output, sim_threads);
    if (*pd_cmd) return run_prior_diag(pd_prior, pd_params, pd_what, pd_grid, pd_output);
    if (*v_cmd) return run_verify(v_level, v_report, v_threads, v_scale);
  } catch (const lss::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const lss::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const lss::UnsupportedFamily& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return kUsage;
}
