#pragma once

#include <string>
#include <utility>
#include <vector>

#include "caplab/capacities.hpp"
#include "caplab/ensembles.hpp"
#include "caplab/kak.hpp"

namespace caplab::cli {

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kUsage = 2,
  kValidation = 3,
  kUnsupported = 4,
};

struct InequalityRecord {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  bool holds = false;  // always lhs <= rhs + tolerance
};

struct RunReport {
  std::string gate_descriptor;
  std::vector<std::pair<std::string, double>> capacities;
  std::vector<InequalityRecord> inequalities;
  OptimizerConfig config_echo;
  long wall_time_ms = 0;

  bool all_hold() const;
};

/// Canonical order of the capacity names accepted by `capacity --which`.
const std::vector<std::string>& capacity_names();

/// Computes the requested capacities ("all" expands to every name).
RunReport run_capacity(const std::string& gate_source,
                       const std::vector<std::string>& which,
                       const OptimizerConfig& config);

/// CSV sweep of gate_zz over [alpha_min, alpha_max]; columns
/// alpha,e_u_psi,delta_e_u,ratio. Throws parse_error for an invalid range
/// (the range must satisfy 0 < min < max <= pi/4, except steps = 1 which
/// permits min = max).
std::string run_sweep_csv(double alpha_min, double alpha_max, int steps,
                          const OptimizerConfig& config);

/// Evaluates the proven symmetry/ordering relations for one gate.
RunReport run_verify(const std::string& gate_source, const OptimizerConfig& config);

struct DecomposeResult {
  CanonicalForm form;
  double residual = 0.0;
};
DecomposeResult run_decompose(const std::string& gate_source);

std::string render_table(const RunReport& report);
std::string render_json(const RunReport& report, bool include_wall_time = false);
std::string render_decompose(const DecomposeResult& result);

/// Ensemble dump: one record per member with probability and amplitude list.
std::string ensemble_to_json(const Ensemble& ens);

/// Ensembles built during verification (dense, dense-delta, phased) as one
/// JSON document, for --dump-ensembles.
std::string dump_verify_ensembles(const std::string& gate_source,
                                  const OptimizerConfig& config);

}  // namespace caplab::cli
