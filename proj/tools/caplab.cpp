// caplab: entangling capacities and Holevo-information lower bounds for
// two-qudit gates, from the command line.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "caplab/cli.hpp"
#include "caplab/errors.hpp"

namespace {

using caplab::OptimizerConfig;
namespace cli = caplab::cli;

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void add_config_flags(CLI::App* app, OptimizerConfig& config) {
  app->add_option("--restarts", config.restarts, "Optimizer restarts per capacity")
      ->check(CLI::PositiveNumber);
  app->add_option("--tol", config.tolerance, "Optimizer tolerance")
      ->check(CLI::PositiveNumber);
  app->add_option("--seed", config.seed, "Base random seed");
  app->add_option("--max-iterations", config.max_iterations,
                  "Iteration cap per optimizer start")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entangling capacities and communication bounds for two-qudit gates"};
  app.require_subcommand(1);

  OptimizerConfig config;
  std::string gate_source;
  bool as_json = false;
  bool with_timings = false;

  auto* cap = app.add_subcommand("capacity", "Compute entangling capacities");
  std::string which = "all";
  cap->add_option("--gate", gate_source,
                  "identity|swap|cnot|cz|zz:<alpha> or a gate file path")
      ->required();
  cap->add_option("--which", which, "Comma-separated capacity names, or 'all'");
  cap->add_flag("--json", as_json, "Emit a JSON report");
  cap->add_flag("--timings", with_timings, "Include wall_time_ms in the JSON report");
  add_config_flags(cap, config);

  auto* sweep = app.add_subcommand("sweep", "CSV sweep of U(alpha) = exp(i alpha ZZ)");
  double alpha_min = 0.05, alpha_max = 0.7853981633974483;
  int steps = 12;
  std::string csv_out;
  sweep->add_option("--alpha-min", alpha_min, "Lower end of the sweep (radians)");
  sweep->add_option("--alpha-max", alpha_max, "Upper end of the sweep (radians)");
  sweep->add_option("--steps", steps, "Number of grid points");
  sweep->add_option("--output", csv_out, "Write the CSV here instead of stdout");
  add_config_flags(sweep, config);

  auto* verify = app.add_subcommand("verify", "Check the proven capacity relations");
  std::string ensemble_dump;
  verify->add_option("--gate", gate_source, "Gate source")->required();
  verify->add_flag("--json", as_json, "Emit a JSON report");
  verify->add_flag("--timings", with_timings, "Include wall_time_ms in the JSON report");
  verify->add_option("--dump-ensembles", ensemble_dump,
                     "Write the constructed ensembles to this JSON file");
  add_config_flags(verify, config);

  auto* dec = app.add_subcommand("decompose", "Two-qubit canonical form");
  dec->add_option("--gate", gate_source, "Gate source")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kUsage;
  }

  try {
    if (cap->parsed()) {
      const cli::RunReport report = cli::run_capacity(gate_source, split_csv(which), config);
      std::cout << (as_json ? cli::render_json(report, with_timings)
                            : cli::render_table(report));
      if (!as_json) std::cerr << "wall time: " << report.wall_time_ms << " ms\n";
      return cli::kOk;
    }
    if (sweep->parsed()) {
      const std::string csv = cli::run_sweep_csv(alpha_min, alpha_max, steps, config);
      if (csv_out.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(csv_out);
        if (!out) throw caplab::parse_error("cannot write '" + csv_out + "'");
        out << csv;
      }
      return cli::kOk;
    }
    if (verify->parsed()) {
      const cli::RunReport report = cli::run_verify(gate_source, config);
      std::cout << (as_json ? cli::render_json(report, with_timings)
                            : cli::render_table(report));
      if (!as_json) std::cerr << "wall time: " << report.wall_time_ms << " ms\n";
      if (!ensemble_dump.empty()) {
        std::ofstream out(ensemble_dump);
        if (!out) throw caplab::parse_error("cannot write '" + ensemble_dump + "'");
        out << cli::dump_verify_ensembles(gate_source, config);
      }
      return report.all_hold() ? cli::kOk : cli::kVerifyFailed;
    }
    if (dec->parsed()) {
      std::cout << cli::render_decompose(cli::run_decompose(gate_source));
      return cli::kOk;
    }
  } catch (const caplab::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kUsage;
  } catch (const caplab::unsupported_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kUnsupported;
  } catch (const caplab::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return cli::kValidation;
  }
  return cli::kUsage;
}
