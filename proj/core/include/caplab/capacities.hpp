#pragma once

#include <optional>

#include "caplab/optimize.hpp"
#include "caplab/unitary.hpp"

namespace caplab {

enum class Direction { alice_to_bob, bob_to_alice };

/// Result of an optimized capacity. Optimizer values are certified lower
/// bounds on the corresponding supremum; `converged` means at least two
/// starts agreed within the configured tolerance.
struct CapacityReport {
  double value = 0.0;          // ebits
  StateVector argmax_state;    // best input found (see each capacity's docs)
  std::optional<Eigen::MatrixXcd> argmax_u0;  // best U_0, where applicable
  bool converged = false;
  int restarts_used = 0;
};

/// Exact Jamiolkowski capacity E(U |Psi>|Psi>), evaluated along two
/// independent routes (ancilla-state entropy and operator Schmidt spectrum)
/// that must agree within 1e-9.
double e_u_psi(const BipartiteGate& gate);

/// The four-factor layout (A_anc, A_U, B_U, B_anc) used by the optimizers.
SubsystemLayout capacity_layout(const BipartiteGate& gate, const OptimizerConfig& config);

/// Max entanglement from product inputs |phi>_A |chi>_B (ancilla dimension
/// d_anc = d_U per side unless overridden). argmax_state is the full product
/// input on the four-factor layout.
CapacityReport e_u(const BipartiteGate& gate, const OptimizerConfig& config = {});

/// Max single-use entanglement increase over arbitrary inputs. Internally
/// seeds from e_u's argmax (pass a precomputed report to skip that solve);
/// argmax_state is the full input state.
CapacityReport delta_e_u(const BipartiteGate& gate, const OptimizerConfig& config = {},
                         const CapacityReport* e_u_hint = nullptr);

/// max_{U_0} [E^Psi(U U_0) - E^Psi(U_0)]; argmax_u0 holds the best U_0 and
/// argmax_state the corresponding input U_0 |Psi>|Psi>.
CapacityReport delta_e_u_psi(const BipartiteGate& gate, const OptimizerConfig& config = {});

/// One side frozen at |Psi>, the other side's input optimized.
/// argmax_state is the optimized side's state alone (on (B_U, B_anc) for ->,
/// on (A_anc, A_U) for <-).
CapacityReport e_u_psi_onesided(const BipartiteGate& gate, Direction dir,
                                const OptimizerConfig& config = {});

/// Joint optimization over the free side's input and U_0.
CapacityReport delta_e_u_psi_onesided(const BipartiteGate& gate, Direction dir,
                                      const OptimizerConfig& config = {});

/// Dimension-expansion construction: embeds psi into an enlarged Bob factor,
/// swaps it into place with a product-preserving U_0 and verifies that the
/// embedded gate changes the A:B entanglement by exactly E(U psi) - E(psi)
/// (within 1e-9). Returns the entropies before and after the gate.
std::pair<double, double> expanded_delta_demo(const BipartiteGate& gate,
                                              const StateVector& psi);

/// true iff e_u_psi * (d_a d_b)^2 >= e_u - tolerance.
bool postselection_bound_check(const BipartiteGate& gate,
                               const OptimizerConfig& config = {});

/// Upper limit 2 log2 min(d_a, d_b) shared by every capacity here.
double capacity_cap(const BipartiteGate& gate);

}  // namespace caplab
