#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace caplab {

/// Settings shared by every optimized capacity. The epsilon-supremum
/// arguments of the underlying definitions are realized as `tolerance`.
struct OptimizerConfig {
  int restarts = 20;
  int max_iterations = 250;
  double tolerance = 1e-6;
  std::uint64_t seed = 42;
  /// Optional per-side ancilla dimension override ("A_anc" / "B_anc").
  std::map<std::string, int> ancilla_dims;
};

struct MultistartResult {
  double value = 0.0;
  Eigen::VectorXd argmax;
  bool converged = false;
  int restarts_used = 0;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

/// L-BFGS ascent with central finite-difference gradients (step 1e-5) and a
/// backtracking line search. Returns the best point visited.
std::pair<double, Eigen::VectorXd> lbfgs_maximize(const Objective& f,
                                                  Eigen::VectorXd x0,
                                                  int max_iterations,
                                                  double tolerance);

/// Multi-start driver: `extra_starts` run first, then `config.restarts`
/// Gaussian starts seeded with config.seed + start index. Starts execute in
/// parallel up to the CAPLAB_THREADS budget; the merge picks the best value
/// (ties by lowest start index), so results are thread-count independent.
MultistartResult maximize_multistart(const Objective& f, int dim,
                                     const OptimizerConfig& config,
                                     const std::vector<Eigen::VectorXd>& extra_starts = {});

/// Worker-thread budget: CAPLAB_THREADS if set (>= 1), else the hardware
/// concurrency, clamped to [1, 16].
int thread_budget();

/// Map 2n unconstrained reals onto a normalized complex vector.
Eigen::VectorXcd params_to_state(const Eigen::VectorXd& v);
Eigen::VectorXd state_to_params(const Eigen::VectorXcd& amp);

/// Map n^2 unconstrained reals onto a Hermitian n x n matrix (diagonal first,
/// then re/im pairs of the upper triangle).
Eigen::MatrixXcd params_to_hermitian(const Eigen::VectorXd& v, int n);
Eigen::VectorXd hermitian_to_params(const Eigen::MatrixXcd& h);

}  // namespace caplab
