#pragma once

#include <utility>
#include <vector>

#include "caplab/unitary.hpp"

namespace caplab {

/// Probability-weighted list of pure states on a shared layout.
class Ensemble {
 public:
  using Member = std::pair<double, StateVector>;

  /// Validates probabilities (>= 0, sum 1 within 1e-12) and layout equality.
  explicit Ensemble(std::vector<Member> members);

  const std::vector<Member>& members() const { return members_; }
  const SubsystemLayout& layout() const { return members_.front().second.layout(); }
  int size() const { return static_cast<int>(members_.size()); }

  /// New ensemble with `u` applied to every member.
  Ensemble apply(const Eigen::MatrixXcd& u) const;

  /// Average reduced state on the kept factors.
  DensityOperator average_state(const std::vector<std::string>& keep) const;

 private:
  std::vector<Member> members_;
};

/// chi = S(average) - sum_j p_j S(member_j), reduced to the kept factors.
double holevo(const Ensemble& ens, const std::vector<std::string>& keep);

/// Residuals of the two two-sided conditions.
struct ConditionReport {
  double gram_residual = 0.0;
  double intertwine_residual = 0.0;
  bool satisfied = false;
};
ConditionReport make_condition_report(double gram, double intertwine);

/// Dense-coding ensemble {1/d_a^2, V_j^{A_U} |Psi>_{A_U B_2} |chi>_B} on the
/// layout (A_U, B_U, B_anc, B_2). chi must live on (B_U, B_anc) with
/// d_Banc = d_{B_U}.
Ensemble ensemble_dense(const BipartiteGate& gate, const StateVector& chi);

/// Dense-coding ensemble with U_0 applied, {1/d_a^2, U_0 V_j |Psi>|Psi>}.
/// Returns the initial ensemble and the Holevo change under the gate; the
/// initial Holevo information equals E^Psi(U_0) within 1e-9 (checked).
std::pair<Ensemble, double> ensemble_dense_delta(const BipartiteGate& gate,
                                                 const Eigen::MatrixXcd& u0);

/// Phase-indexed ensemble of mutually orthogonal superpositions on
/// (A_anc, A_U, B_U, B_anc, B_2) with a d_a^2-dimensional B_2 register;
/// the phase index k runs over 0..d_a^2-1.
Ensemble ensemble_phased(const BipartiteGate& gate, const StateVector& chi);

/// max(|Gram(V_j|phi>) - I|_max, |sum_j V_j |phi><phi| V_j^dag - I|_max).
double check_con1(const std::vector<Eigen::MatrixXcd>& v_list, const StateVector& phi);

/// max_j |U (V_j^A (x) V_j^B) - (U_j^A (x) U_j^B) U|_max with the operators
/// embedded on (A_anc, A_U) and (B_U, B_anc); ancilla dimensions are inferred
/// from the operator sizes (dimension 1 recovers the on-gate-factors case).
double check_con2(const BipartiteGate& gate, const std::vector<Eigen::MatrixXcd>& va,
                  const std::vector<Eigen::MatrixXcd>& vb,
                  const std::vector<Eigen::MatrixXcd>& ua,
                  const std::vector<Eigen::MatrixXcd>& ub);

/// Residual of sum_j V_j^dag rho V_j = d Tr(rho) I as a superoperator
/// identity (exact for Weyl and Pauli sets).
double check_con3(const std::vector<Eigen::MatrixXcd>& v_list);

/// Outcome of the two-qubit V_{jk} construction. `representable` is false
/// when the state's ancilla expansion has a complex cross inner product, in
/// which case the operator lists are empty.
struct TwoQubitVjk {
  bool representable = false;
  double inner_imag = 0.0;  // imaginary part that blocked the construction
  std::vector<Eigen::MatrixXcd> va;  // 4 operators on (A_anc, A_U)
  std::vector<Eigen::MatrixXcd> vb;  // 4 operators on (B_U, B_anc)
};

/// Builds V_{jk}^A = V_b^k V_a^j (x) sigma_y^j and V_{jk}^B = sigma_y^j (x) I
/// from phi's expansion lambda_0 |psi_0>|0> + lambda_1 |psi_1>|1> on
/// (A_anc 2, A_U 2). Requires <psi_0|psi_1> real within 1e-9.
TwoQubitVjk two_qubit_vjk(const StateVector& phi);

/// Holevo increase on Alice's side under U^dag for the ensemble
/// {1/d_a^2, (U_j^A_U (x) U_j^B_U)^dag |psi>}; preconditions (con3) on va and
/// the intertwining (con4) must hold within 1e-9 (precondition_error carries
/// the residual otherwise). psi lives on (A_anc, A_U, B_U, B_anc).
double delta_ensemble_con34(const BipartiteGate& gate, const StateVector& psi,
                            const std::vector<Eigen::MatrixXcd>& va,
                            const std::vector<Eigen::MatrixXcd>& vb,
                            const std::vector<Eigen::MatrixXcd>& ua,
                            const std::vector<Eigen::MatrixXcd>& ub);

}  // namespace caplab
