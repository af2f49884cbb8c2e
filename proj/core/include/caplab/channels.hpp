#pragma once

#include "caplab/capacities.hpp"
#include "caplab/unitary.hpp"

namespace caplab {

/// Channel rho_A -> Tr_A[U (rho (x) |chi><chi|) U^dag] induced by fixing
/// Bob's input. Input lives on A_U, output on B_U (x) B_anc.
class InducedChannel {
 public:
  InducedChannel(BipartiteGate gate, StateVector chi,
                 std::vector<Eigen::MatrixXcd> kraus);

  const BipartiteGate& gate() const { return gate_; }
  const StateVector& chi() const { return chi_; }
  const std::vector<Eigen::MatrixXcd>& kraus() const { return kraus_; }
  int input_dim() const { return gate_.d_a(); }
  long output_dim() const { return kraus_.front().rows(); }
  SubsystemLayout output_layout() const { return chi_.layout(); }

 private:
  BipartiteGate gate_;
  StateVector chi_;
  std::vector<Eigen::MatrixXcd> kraus_;
};

/// Kraus operators K_i = (<i|_{A_U} (x) I_B) U (I_{A_U} (x) |chi>); validates
/// sum K^dag K = I within 1e-10. chi must live on (B_U, B_anc); a trivial
/// B_anc of dimension 1 is allowed.
InducedChannel induce_channel(const BipartiteGate& gate, const StateVector& chi);

/// sum_i K rho K^dag on the channel's output layout.
DensityOperator apply_channel(const InducedChannel& ch, const DensityOperator& rho);

/// Quantum mutual information S(rho) + S(Phi(rho)) - S((Phi (x) I)(psi)),
/// with psi the eigendecomposition purification of rho against a reference
/// of dimension d_{A_U}.
double ce_objective(const InducedChannel& ch, const DensityOperator& rho);

/// Same value through the complementary output: the third entropy equals the
/// A_U marginal entropy of U (rho (x) chi) U^dag. Used as an independent
/// cross-check of ce_objective.
double ce_objective_env_route(const InducedChannel& ch, const DensityOperator& rho);

/// Entanglement-assisted capacity: concave ascent of ce_objective over
/// density operators parameterized as L L^dag / Tr, started at the maximally
/// mixed state. argmax_state is the purification of the best input.
CapacityReport ce_capacity(const InducedChannel& ch, const OptimizerConfig& config = {});

/// Lower bound on sup_chi C_E(Phi_chi): multi-start over |chi> seeded with
/// the one-sided-optimal input, ce_capacity inside. argmax_state is the best
/// chi found.
CapacityReport chi_c_lower_bound(const BipartiteGate& gate,
                                 const OptimizerConfig& config = {});

}  // namespace caplab
