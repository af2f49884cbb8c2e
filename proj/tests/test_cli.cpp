#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "caplab/cli.hpp"
#include "caplab/errors.hpp"
#include "caplab/gate_io.hpp"
#include "testutil.hpp"

using namespace caplab;
namespace cli = caplab::cli;
namespace fs = std::filesystem;

namespace {

OptimizerConfig fast_config(int restarts = 4) {
  OptimizerConfig c;
  c.restarts = restarts;
  return c;
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / name;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(CAPLAB_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("gate files round-trip and validate") {
  const fs::path path = temp_file("caplab_gate_roundtrip.json");
  const BipartiteGate gate = random_gate(2, 3, 42);
  save_gate(path.string(), gate);
  const BipartiteGate back = load_gate(path.string());
  CHECK(back.d_a() == 2);
  CHECK(back.d_b() == 3);
  CHECK(test::max_abs(back.matrix() - gate.matrix()) < 1e-12);

  // Malformed documents raise parse errors.
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  CHECK_THROWS_AS(load_gate(path.string()), parse_error);
  {
    std::ofstream out(path);
    out << R"({"d_a": 2, "d_b": 2, "matrix": [[1, 0], [0, 1]]})";
  }
  CHECK_THROWS_AS(load_gate(path.string()), parse_error);
  CHECK_THROWS_AS(load_gate("/nonexistent/gate.json"), parse_error);

  // A non-unitary matrix passes parsing but fails validation.
  {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < 4; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int j = 0; j < 4; ++j) row.push_back({i == j ? 0.5 : 0.0, 0.0});
      rows.push_back(row);
    }
    std::ofstream out(path);
    out << nlohmann::json{{"d_a", 2}, {"d_b", 2}, {"matrix", rows}};
  }
  CHECK_THROWS_AS(load_gate(path.string()), validity_error);
  fs::remove(path);
}

TEST_CASE("gate source resolution") {
  CHECK(resolve_gate("identity").matrix().isApprox(identity_gate().matrix()));
  CHECK(resolve_gate("swap").matrix().isApprox(swap_gate().matrix()));
  CHECK(resolve_gate("cnot").matrix().isApprox(cnot_gate().matrix()));
  CHECK(resolve_gate("cz").matrix().isApprox(cz_gate().matrix()));
  CHECK(resolve_gate("zz:0.25").matrix().isApprox(gate_zz(0.25).matrix()));
  CHECK_THROWS_AS(resolve_gate("zz:abc"), parse_error);
  CHECK_THROWS_AS(resolve_gate("zz:0.25xyz"), parse_error);
  CHECK_THROWS_AS(resolve_gate("no_such_file.json"), parse_error);
}

TEST_CASE("run_capacity reports and rendering determinism") {
  const OptimizerConfig config = fast_config();
  const cli::RunReport report = cli::run_capacity("swap", {"e_u_psi", "e_u"}, config);
  REQUIRE(report.capacities.size() == 2);
  CHECK(report.capacities[0].first == "e_u_psi");
  CHECK(report.capacities[0].second == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(report.capacities[1].second == doctest::Approx(2.0).epsilon(1e-6));

  // identity --which all: everything zero.
  const cli::RunReport zeros = cli::run_capacity("identity", {"all"}, config);
  CHECK(zeros.capacities.size() == cli::capacity_names().size());
  for (const auto& [name, value] : zeros.capacities)
    CHECK(value == doctest::Approx(0.0).epsilon(1e-6));

  // Identical inputs render byte-identically (timing excluded by default).
  const cli::RunReport again = cli::run_capacity("swap", {"e_u_psi", "e_u"}, config);
  CHECK(cli::render_json(report) == cli::render_json(again));
  CHECK(cli::render_table(report) == cli::render_table(again));

  // The JSON document carries the expected fields.
  const auto doc = nlohmann::json::parse(cli::render_json(report, true));
  CHECK(doc.at("gate") == "swap");
  CHECK(doc.at("capacities").at("e_u_psi").get<double>() ==
        doctest::Approx(2.0).epsilon(1e-9));
  CHECK(doc.at("config").at("restarts") == config.restarts);
  CHECK(doc.contains("wall_time_ms"));
  CHECK_FALSE(nlohmann::json::parse(cli::render_json(report)).contains("wall_time_ms"));

  CHECK_THROWS_AS(cli::run_capacity("swap", {"bogus"}, config), parse_error);
}

TEST_CASE("run_sweep_csv shape and validation") {
  OptimizerConfig config = fast_config();
  const std::string csv = cli::run_sweep_csv(0.3, 0.7, 3, config);
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "alpha,e_u_psi,delta_e_u,ratio");
  int rows = 0;
  std::string row;
  while (std::getline(lines, row)) ++rows;
  CHECK(rows == 3);

  // steps = 1: a single data row.
  const std::string one = cli::run_sweep_csv(0.3, 0.3, 1, config);
  CHECK(std::count(one.begin(), one.end(), '\n') == 2);

  CHECK_THROWS_AS(cli::run_sweep_csv(-0.1, 0.5, 3, config), parse_error);
  CHECK_THROWS_AS(cli::run_sweep_csv(0.5, 0.3, 3, config), parse_error);
  CHECK_THROWS_AS(cli::run_sweep_csv(0.1, 1.6, 3, config), parse_error);
}

TEST_CASE("run_verify holds on reference gates") {
  const OptimizerConfig config = fast_config();
  for (const char* src : {"identity", "swap", "zz:0.4"}) {
    const cli::RunReport report = cli::run_verify(src, config);
    CHECK(report.all_hold());
    for (const auto& r : report.inequalities)
      CHECK(r.holds == (r.lhs <= r.rhs + r.tolerance));
  }
}

TEST_CASE("run_verify holds on a batch of seeded random gates") {
  OptimizerConfig config = fast_config(3);
  const fs::path path = temp_file("caplab_verify_batch.json");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    save_gate(path.string(), random_gate(2, 2, 7000 + seed));
    const cli::RunReport report = cli::run_verify(path.string(), config);
    CHECK(report.all_hold());
  }
  fs::remove(path);
}

TEST_CASE("sweep output is deterministic for identical inputs") {
  OptimizerConfig config = fast_config(2);
  CHECK(cli::run_sweep_csv(0.2, 0.6, 3, config) ==
        cli::run_sweep_csv(0.2, 0.6, 3, config));
}

TEST_CASE("run_decompose") {
  const cli::DecomposeResult r = cli::run_decompose("cnot");
  CHECK(r.form.alphas[0] == doctest::Approx(test::kQuarterPi).epsilon(1e-10));
  CHECK(r.residual < 1e-9);
  CHECK(cli::render_decompose(r).find("alpha:") != std::string::npos);
  CHECK_THROWS_AS(cli::run_decompose("no_such_gate.json"), parse_error);
}

TEST_CASE("ensemble JSON dump schema") {
  const BipartiteGate gate = cnot_gate();
  const Ensemble ens = ensemble_dense(gate, max_entangled(2, "B_U", "B_anc"));
  const auto doc = nlohmann::json::parse(cli::ensemble_to_json(ens));
  REQUIRE(doc.contains("members"));
  REQUIRE(doc.contains("layout"));
  CHECK(doc.at("members").size() == 4);
  double total = 0.0;
  for (const auto& member : doc.at("members")) {
    total += member.at("probability").get<double>();
    CHECK(member.at("amplitudes").size() == ens.layout().total_dim());
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("caplab binary exit codes") {
  CHECK(run_binary("capacity --gate swap --which e_u_psi") == cli::kOk);
  CHECK(run_binary("decompose --gate cnot") == cli::kOk);
  CHECK(run_binary("decompose --gate nonexistent.json") == cli::kUsage);
  CHECK(run_binary("capacity --which e_u_psi") == cli::kUsage);  // missing --gate
  CHECK(run_binary("sweep --alpha-min 0.9 --alpha-max 0.2 --steps 2") == cli::kUsage);

  // Non-unitary gate file: validation error, exit 3.
  const fs::path bad = temp_file("caplab_bad_gate.json");
  {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < 4; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int j = 0; j < 4; ++j) row.push_back({i == j ? 0.5 : 0.0, 0.0});
      rows.push_back(row);
    }
    std::ofstream out(bad);
    out << nlohmann::json{{"d_a", 2}, {"d_b", 2}, {"matrix", rows}};
  }
  CHECK(run_binary("capacity --gate " + bad.string() + " --which e_u_psi") ==
        cli::kValidation);
  fs::remove(bad);

  // Decompose on a qutrit gate: unsupported, exit 4.
  const fs::path qutrit = temp_file("caplab_qutrit_gate.json");
  save_gate(qutrit.string(), random_gate(3, 3, 7));
  CHECK(run_binary("decompose --gate " + qutrit.string()) == cli::kUnsupported);
  fs::remove(qutrit);

  // verify exits 0 on a gate where every relation holds.
  CHECK(run_binary("verify --gate identity --restarts 2") == cli::kOk);

  // --dump-ensembles writes a parseable document.
  const fs::path dump = temp_file("caplab_ensembles.json");
  CHECK(run_binary("verify --gate cnot --restarts 2 --dump-ensembles " +
                   dump.string()) == cli::kOk);
  std::ifstream in(dump);
  REQUIRE(in.good());
  const auto doc = nlohmann::json::parse(in);
  CHECK(doc.contains("dense"));
  CHECK(doc.contains("dense_delta"));
  CHECK(doc.contains("phased"));
  CHECK(doc.at("dense").at("members").size() == 4);
  fs::remove(dump);
}
