#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "logscale/csv.hpp"
#include "logscale/errors.hpp"
#include "logscale/sim.hpp"

using namespace lss;

TEST_CASE("dataset generation") {
  RngStream rng(1, stream_id(0, 0, -1));
  const Dataset d = generate_dataset(500, 0.05, 8.0, rng);
  CHECK(d.y.size() == 500);
  CHECK((d.beta_true.array() != 0.0).count() == 25);
  CHECK((d.beta_true.array() == 8.0).count() == 25);
  const Eigen::VectorXd noise = d.y - d.beta_true;
  CHECK(std::abs(noise.mean()) < 0.2);
  CHECK(generate_dataset(10, 0.0, 3.0, rng).beta_true.isZero());
  CHECK_THROWS_AS(generate_dataset(10, 1.5, 3.0, rng), DomainError);
}

TEST_CASE("stream ids keep data and methods apart") {
  CHECK(stream_id(0, 0, -1) != stream_id(0, 0, 0));
  CHECK(stream_id(1, 0, 0) != stream_id(0, 1, 0));
  CHECK(stream_id(0, 1, 0) != stream_id(0, 0, 1));
}

TEST_CASE("metrics") {
  Eigen::VectorXd truth = Eigen::VectorXd::Zero(4), est(4);
  truth(0) = 2.0;
  est << 1.0, 0.0, 1.0, 0.0;
  CHECK(relative_sse(est, truth) == doctest::Approx(50.0));
  Eigen::Array<bool, Eigen::Dynamic, 1> sel(4);
  sel << true, false, true, false;
  CHECK(classification_percent(sel, truth) == doctest::Approx(75.0));
  CHECK_THROWS_AS(relative_sse(est, Eigen::VectorXd::Zero(3)), DomainError);
}

TEST_CASE("config parsing") {
  const auto t = parse_table_config(R"({"n": 100, "q_n": [0.1, 0.2], "A": 4, "reps": 2,
      "iterations": 300, "burnin": 100,
      "methods": ["horseshoe", {"name": "log-t", "alpha": 5, "label": "lt5", "psi": 0.5},
                  {"name": "ridge", "tau_bounds": [0.01, 10]}]})");
  CHECK(t.n == 100);
  CHECK(t.q_n.size() == 2);
  CHECK(t.A.size() == 1);
  CHECK(t.methods.size() == 3);
  CHECK(t.methods[1].name == "lt5");
  CHECK(std::get<LogTMix>(t.methods[1].config.mixing).alpha == 5.0);
  CHECK_FALSE(t.methods[1].config.psi.sampled);
  CHECK(t.methods[2].config.tau_bounds->second == 10.0);

  CHECK_THROWS_AS(parse_table_config("{not json"), ParseError);
  CHECK_THROWS_AS(parse_table_config(R"({"q_n": [1.5], "A": [2], "methods": ["ridge"]})"), DomainError);
  CHECK_THROWS_AS(parse_table_config(R"({"q_n": [0.1], "A": [2], "methods": ["lasso"]})"), DomainError);
  CHECK_THROWS_AS(parse_table_config(R"({"q_n": [0.1], "A": [2], "methods": ["ridge"], "burnin": 9000})"),
                  DomainError);
}

TEST_CASE("small table is deterministic across thread counts") {
  TableConfig t;
  t.n = 80;
  t.q_n = {0.1};
  t.A = {2.0, 6.0};
  t.reps = 3;
  t.iterations = 400;
  t.burnin = 200;
  t.methods = {method_preset("log-t"), method_preset("ridge"), method_preset("hs-plus")};
  const auto a = run_table(t, 1);
  const auto b = run_table(t, 3);
  REQUIRE(a.size() == 6);
  std::ostringstream sa, sb;
  write_metrics_csv(sa, a);
  write_metrics_csv(sb, b);
  CHECK(sa.str() == sb.str());
  for (const auto& r : a) {
    CHECK(r.failures == 0);
    CHECK(r.replications.size() == 3);
    CHECK(std::isfinite(r.stderr_rel_sse));
  }
  CHECK(std::isnan(a[1].mean_psi));  // ridge has no psi
  CHECK(sa.str().rfind("method,q_n,A,reps,mean_rel_sse_pct,stderr_rel_sse,mean_class_pct,stderr_class,mean_psi,failures\n", 0) == 0);
  CHECK(sa.str().find(",NA,") != std::string::npos);
}

TEST_CASE("csv helpers") {
  CHECK(csv::format_number(0.1) == "0.10000000000000001");
  CHECK(csv::format_number(std::nan("")) == "NA");
  std::istringstream ok("x,y\n1,2.5\n3,-4\n\n");
  const auto col = csv::read_column(ok, "y");
  REQUIRE(col.size() == 2);
  CHECK(col(1) == -4.0);
  std::istringstream bad("y\n1\nabc\n");
  try {
    csv::read_column(bad, "y");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  std::istringstream missing("x\n1\n");
  CHECK_THROWS_AS(csv::read_column(missing, "y"), ParseError);
  std::istringstream ragged("y,z\n1\n");
  CHECK_THROWS_AS(csv::read_column(ragged, "y"), ParseError);
}
