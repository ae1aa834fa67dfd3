// Copyright 2026 The dsrm Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "dsrm/config.hpp"
#include "dsrm/csv.hpp"
#include "dsrm/errors.hpp"
#include "dsrm/metrics.hpp"
#include "dsrm/scenario.hpp"
#include "support/random.hpp"

using namespace dsrm;
using dsrm::testing::gaussian_matrix;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dsrm_experiment_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ScenarioConfig small_dlasso() {
  ScenarioConfig c = load_config(std::string(DSRM_CONFIG_DIR) + "/dlasso.cfg");
  return c;
}

}  // namespace

TEST_CASE("parse_config defaults and examples") {
  CHECK_THROWS_AS(parse_config(""), ValidationError);
  try {
    parse_config("# nothing\n\n");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "scenario");
  }
  const ScenarioConfig d = parse_config("scenario = duna\n");
  CHECK(d.c == 0.1);
  CHECK(d.mu == 0.1);
  CHECK(d.rank_true == 3);
  CHECK(d.rho == 3);
  CHECK_FALSE(d.lambda_star.has_value());
  CHECK(parse_config("scenario = dmc\nmu = 0.1\n").mu == 0.1);
  const ScenarioConfig full = parse_config(
      "scenario = drpca  # trailing comment\n"
      "n_agents=4\n t_cols = 12 \nf_flows = 8\nrank_true = 2\nrho = 4\nsigma = 0.5\n"
      "pi = 0.2\np_obs = 0.9\ncomm_range = 0.8\nlambda_star = 1.5\nlambda_1 = 0.25\n"
      "c = 2\nmu = 3\ntol = 1e-6\nmax_rounds = 7\nseed = 99\nout_path = some/dir\n"
      "topology = star\n");
  CHECK(full.scenario == ScenarioKind::kDrpca);
  CHECK(full.n_agents == 4);
  CHECK(full.t_cols == 12);
  CHECK(full.f_flows == 8);
  CHECK(full.rho == 4);
  CHECK(full.lambda_star.value() == 1.5);
  CHECK(full.lambda_1.value() == 0.25);
  CHECK(full.tol == 1e-6);
  CHECK(full.seed == 99);
  CHECK(full.out_path == "some/dir");
  CHECK(full.topology == Topology::kStar);

  try {
    parse_config("scenario = duna\nrho = 0\n");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "rho");
  }
  try {
    parse_config("scenario = duna\n\nbogus = 1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_config("scenario = duna\nrho = 2\nrho = 3\n"), ParseError);
  CHECK_THROWS_AS(parse_config("scenario = duna\nrho 3\n"), ParseError);
  CHECK_THROWS_AS(parse_config("scenario = duna\nrho = three\n"), ParseError);
  CHECK_THROWS_AS(parse_config("scenario = lda\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("scenario = duna\npi = 2\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("scenario = duna\nc = 0\n"), ValidationError);
  CHECK_THROWS_AS(load_config("/nonexistent/dsrm.cfg"), IoError);
}

TEST_CASE("resolved_f") {
  ScenarioConfig c = parse_config("scenario = duna\nn_agents = 5\n");
  CHECK(c.resolved_f() == 20);
  c = parse_config("scenario = drpca\n");
  CHECK(c.resolved_f() == 60);
  c = parse_config("scenario = dlasso\nn_agents = 4\n");
  CHECK(c.resolved_f() == 12);
  c = parse_config("scenario = dlasso\nf_flows = 30\nl_rows = 40\n");
  CHECK(c.resolved_f() == 30);
}

TEST_CASE("shipped configs parse") {
  for (const char* name : {"duna", "drpca", "dmc", "dlasso"}) {
    CAPTURE(name);
    const ScenarioConfig c = load_config(std::string(DSRM_CONFIG_DIR) + "/" + name + ".cfg");
    CHECK(to_string(c.scenario) == name);
  }
}

TEST_CASE("relative_error") {
  Rng rng = make_rng(1, Stream::kScratch);
  const Matrix t = gaussian_matrix(4, 3, rng);
  CHECK(relative_error(t, t) == 0.0);
  CHECK(relative_error(Matrix::Zero(4, 3), t) == doctest::Approx(1.0));
  CHECK(relative_error(2.0 * t, t) == doctest::Approx(1.0));
  CHECK_THROWS_AS(relative_error(t, Matrix::Zero(4, 3)), DegenerateTruth);
  CHECK_THROWS_AS(relative_error(t, Matrix::Zero(3, 3)), ShapeMismatch);
  CHECK(relative_or_absolute_error(t, Matrix::Zero(4, 3)) == doctest::Approx(t.norm()));
}

TEST_CASE("roc_curve") {
  Rng rng = make_rng(2, Stream::kSparse);
  const Matrix a0 = gen_sparse(40, 40, 0.05, rng);
  SUBCASE("perfect detector") {
    const auto curve = roc_curve(a0, a0, 50);
    for (const auto& p : curve) {
      if (p.threshold > 0.0 && p.threshold <= 1.0) {
        CHECK(p.p_d == 1.0);
        CHECK(p.p_fa == 0.0);
      }
    }
    CHECK(auc(curve) == doctest::Approx(1.0));
  }
  SUBCASE("zero estimate") {
    const auto curve = roc_curve(Matrix::Zero(40, 40), a0, 50);
    REQUIRE(curve.size() == 1);
    CHECK(curve[0].p_d == 0.0);
    CHECK(curve[0].p_fa == 0.0);
  }
  SUBCASE("random scores are at chance") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      Rng r = make_rng(seed, Stream::kScratch);
      const Matrix scores = gaussian_matrix(40, 40, r);
      const auto curve = roc_curve(scores, a0, 200);
      CHECK(std::abs(auc(curve) - 0.5) <= 0.1);
    }
  }
  SUBCASE("rates in [0,1] and nonincreasing in the threshold") {
    Rng r = make_rng(9, Stream::kScratch);
    const Matrix noisy = a0 + 0.4 * gaussian_matrix(40, 40, r);
    const auto curve = roc_curve(noisy, a0, 100);
    for (std::size_t i = 0; i < curve.size(); ++i) {
      CHECK(curve[i].p_d >= 0.0);
      CHECK(curve[i].p_d <= 1.0);
      CHECK(curve[i].p_fa >= 0.0);
      CHECK(curve[i].p_fa <= 1.0);
      if (i > 0) {
        REQUIRE(curve[i].threshold < curve[i - 1].threshold);
        CHECK(curve[i].p_d >= curve[i - 1].p_d);
        CHECK(curve[i].p_fa >= curve[i - 1].p_fa);
      }
    }
    CHECK(auc(curve) > 0.8);
  }
  CHECK_THROWS_AS(roc_curve(a0, Matrix::Zero(40, 40), 10), NoAnomalies);
}

TEST_CASE("csv round trip") {
  const fs::path dir = scratch_dir("csv");
  const std::string empty = (dir / "empty.csv").string();
  write_csv(empty, metrics_header(), std::vector<std::vector<double>>{});
  CHECK(slurp(empty) == "round,consensus_q,consensus_a,rel_err_x,rel_err_a,cost\n");

  MetricsRow row;
  row.round = 3;
  row.consensus_q = 0.1;
  row.consensus_a = 1.0 / 3.0;
  row.rel_err_x = 1e-300;
  row.rel_err_a = std::nextafter(1.0, 2.0);
  row.cost = -12345.678901234567;
  const std::string one = (dir / "one.csv").string();
  write_csv(one, metrics_header(), std::vector<std::vector<double>>{to_fields(row)});
  const std::string text = slurp(one);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  const CsvTable t = read_csv(one);
  REQUIRE(t.rows.size() == 1);
  const auto fields = to_fields(row);
  for (std::size_t i = 0; i < fields.size(); ++i) CHECK(parse_real(t.rows[0][i]) == fields[i]);
  CHECK(t.column("cost") == 5);
  CHECK_THROWS_AS(t.column("nope"), IoError);

  Rng rng = make_rng(4, Stream::kScratch);
  const Matrix m = gaussian_matrix(7, 5, rng) * 1e7;
  const std::string mp = (dir / "m.csv").string();
  write_matrix_csv(mp, m);
  CHECK(read_matrix_csv(mp) == m);
  write_matrix_csv(mp, Matrix(0, 0));
  CHECK(read_matrix_csv(mp).size() == 0);

  for (double v : {0.1, 1e-17, 123456789.123456789, -0.0, 5e-324}) {
    CHECK(parse_real(format_real(v)) == v);
  }
  CHECK_THROWS_AS(parse_real("1.0x"), ParseError);
  CHECK_THROWS_AS(write_csv(one, {"a", "b"}, std::vector<std::vector<double>>{{1.0}}),
                  ShapeMismatch);
  CHECK_THROWS_AS(write_csv((dir / "missing" / "x.csv").string(), {"a"},
                            std::vector<std::vector<double>>{}),
                  IoError);
  CHECK_THROWS_AS(read_csv((dir / "absent.csv").string()), IoError);
}

TEST_CASE("build_instance resolves lambdas") {
  ScenarioConfig c = small_dlasso();
  c.lambda_1_frac = 0.2;
  const Instance inst = build_instance(c);
  CHECK(inst.hp.lambda_1 ==
        doctest::Approx(0.2 * linf_norm(adjoint_residual(inst.pooled, inst.pooled.y))));
  c.lambda_1 = 0.7;
  CHECK(build_instance(c).hp.lambda_1 == 0.7);

  ScenarioConfig r = parse_config("scenario = drpca\nn_agents = 3\nt_cols = 9\nf_flows = 9\n"
                                  "rank_true = 2\nrho = 2\n");
  const Instance ri = build_instance(r);
  CHECK(ri.hp.lambda_star == doctest::Approx(0.3 * spectral_norm(ri.pooled.y)));
  CHECK(ri.pooled.design == Design::kIdentity);
  CHECK(ri.problem.n_agents() == 3);
  CHECK(ri.pooled.y == ri.data.y);

  ScenarioConfig p = r;
  p.topology = Topology::kPath;
  CHECK(build_instance(p).graph.graph.edges.size() == 2);
}

TEST_CASE("run_scenario on the dlasso preset") {
  const fs::path dir = scratch_dir("run");
  ScenarioConfig c = small_dlasso();
  c.out_path = (dir / "a").string();
  const ScenarioResult res = run_scenario(c);
  CHECK(res.exit_status() == 0);
  CHECK(res.max_agent_a_distance <= 1e-4);
  CHECK(res.centralized.converged);
  for (const char* f : {"metrics.csv", "a_hat.csv", "x_hat.csv", "l_hat.csv", "q_hat.csv",
                        "certificate.csv", "certificate_centralized.csv", "summary.csv"}) {
    CHECK(fs::exists(fs::path(c.out_path) / f));
  }
  const CsvTable m = read_csv(c.out_path + "/metrics.csv");
  CHECK(m.header == metrics_header());
  REQUIRE(static_cast<int>(m.rows.size()) == res.run.rounds);
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    CHECK(parse_real(m.rows[i][0]) == static_cast<double>(i + 1));
    for (const auto& f : m.rows[i]) CHECK(std::isfinite(parse_real(f)));
  }
  const CsvTable cert = read_csv(c.out_path + "/certificate.csv");
  CHECK(cert.header == std::vector<std::string>{"spectral_residual", "lambda_star",
                                                "condition_met", "res_eq13", "res_eq14",
                                                "res_eq15"});
  CHECK(cert.rows.size() == 1);

  // Byte-identical repeat.
  ScenarioConfig again = c;
  again.out_path = (dir / "b").string();
  run_scenario(again);
  for (const auto& entry : fs::directory_iterator(c.out_path)) {
    CHECK(slurp(entry.path()) == slurp(fs::path(again.out_path) / entry.path().filename()));
  }

  // Certify the saved estimates.
  const CertificateReport rep = certify_estimates(c, c.out_path);
  CHECK(rep.res_eq13 == doctest::Approx(res.certificate.res_eq13).epsilon(1e-9));

  ScenarioConfig capped = c;
  capped.max_rounds = 3;
  capped.out_path = (dir / "c").string();
  CHECK(run_scenario(capped, false).exit_status() == 2);
  CHECK_FALSE(fs::exists(capped.out_path));
}

TEST_CASE("run_scenario emits ROC for robust PCA") {
  const fs::path dir = scratch_dir("roc");
  ScenarioConfig c = parse_config(
      "scenario = drpca\nn_agents = 3\nt_cols = 20\nf_flows = 18\nrank_true = 2\nrho = 2\n"
      "pi = 0.05\nc = 3\nmu = 3\nlambda_star_frac = 0.01\nlambda_1_frac = 0.01\n"
      "max_rounds = 2000\ncomm_range = 0.9\n");
  c.out_path = dir.string();
  const ScenarioResult res = run_scenario(c);
  REQUIRE(res.auc.has_value());
  CHECK(*res.auc > 0.9);
  const CsvTable roc = read_csv(c.out_path + "/roc.csv");
  CHECK(roc.header == std::vector<std::string>{"threshold", "p_fa", "p_d"});
  CHECK_FALSE(roc.rows.empty());
  if (res.certificate.condition_met) CHECK(res.cost_gap() <= 1e-3);
}

TEST_CASE("graph export") {
  const fs::path dir = scratch_dir("graph");
  const Instance inst = build_instance(small_dlasso());
  write_graph_csvs(inst, dir.string());
  const CsvTable nodes = read_csv((dir / "nodes.csv").string());
  const CsvTable edges = read_csv((dir / "edges.csv").string());
  CHECK(nodes.header == std::vector<std::string>{"node", "x", "y"});
  CHECK(nodes.rows.size() == 5);
  CHECK(edges.rows.size() == inst.graph.graph.edges.size());
}
