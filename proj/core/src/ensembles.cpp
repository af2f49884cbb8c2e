#include "caplab/ensembles.hpp"

#include <cmath>
#include <numbers>

#include "caplab/capacities.hpp"
#include "caplab/errors.hpp"

namespace caplab {

namespace {

constexpr double kConditionTol = 1e-9;

void require_chi_layout(const StateVector& chi, const BipartiteGate& gate) {
  const SubsystemLayout expected{{"B_U", gate.d_b()}, {"B_anc", gate.d_b()}};
  if (chi.layout() != expected)
    throw layout_error("chi must live on (B_U:" + std::to_string(gate.d_b()) +
                       ", B_anc:" + std::to_string(gate.d_b()) + "), got " +
                       chi.layout().to_string());
}

}  // namespace

Ensemble::Ensemble(std::vector<Member> members) : members_(std::move(members)) {
  if (members_.empty()) throw validity_error("ensemble must not be empty");
  double total = 0.0;
  for (const auto& [p, state] : members_) {
    if (p < 0) throw validity_error("ensemble probabilities must be >= 0");
    if (state.layout() != members_.front().second.layout())
      throw layout_error("ensemble members must share one layout");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw validity_error("ensemble probabilities sum to " + std::to_string(total));
}

Ensemble Ensemble::apply(const Eigen::MatrixXcd& u) const {
  std::vector<Member> out;
  out.reserve(members_.size());
  for (const auto& [p, state] : members_) out.emplace_back(p, apply_unitary(u, state));
  return Ensemble(std::move(out));
}

DensityOperator Ensemble::average_state(const std::vector<std::string>& keep) const {
  Eigen::MatrixXcd avg;
  bool first = true;
  for (const auto& [p, state] : members_) {
    const DensityOperator red = partial_trace(state, keep);
    if (first) {
      avg = p * red.matrix();
      first = false;
    } else {
      avg += p * red.matrix();
    }
  }
  return DensityOperator(layout().subset(keep), std::move(avg));
}

double holevo(const Ensemble& ens, const std::vector<std::string>& keep) {
  double member_term = 0.0;
  for (const auto& [p, state] : ens.members()) {
    if (p < 1e-15) continue;
    member_term += p * von_neumann_entropy(partial_trace(state, keep));
  }
  return von_neumann_entropy(ens.average_state(keep)) - member_term;
}

ConditionReport make_condition_report(double gram, double intertwine) {
  return ConditionReport{gram, intertwine,
                         gram < kConditionTol && intertwine < kConditionTol};
}

Ensemble ensemble_dense(const BipartiteGate& gate, const StateVector& chi) {
  require_chi_layout(chi, gate);
  const int da = gate.d_a();
  // |Psi>_{A_U B_2} |chi>_B, reordered to (A_U, B_U, B_anc, B_2).
  const StateVector base = permute_factors(
      tensor(max_entangled(da, "A_U", "B_2"), chi), {"A_U", "B_U", "B_anc", "B_2"});
  const WeylSet weyl = weyl_set(da);
  const double p = 1.0 / (static_cast<double>(da) * da);

  std::vector<Ensemble::Member> members;
  members.reserve(weyl.operators.size());
  for (const auto& v : weyl.operators)
    members.emplace_back(p, apply_unitary(embed_on(v, base.layout(), {"A_U"}), base));
  return Ensemble(std::move(members));
}

std::pair<Ensemble, double> ensemble_dense_delta(const BipartiteGate& gate,
                                                 const Eigen::MatrixXcd& u0) {
  const StateVector chi = max_entangled(gate.d_b(), "B_U", "B_anc");
  Ensemble base = ensemble_dense(gate, chi);
  const Eigen::MatrixXcd u0e = embed_on(u0, base.layout(), {"A_U", "B_U"});
  Ensemble initial = base.apply(u0e);

  const std::vector<std::string> bob = {"B_U", "B_anc", "B_2"};
  const double chi_initial = holevo(initial, bob);
  const double expected = schmidt_entropy(u0, gate.d_a(), gate.d_b());
  if (std::abs(chi_initial - expected) > 1e-9)
    throw validity_error("initial ensemble Holevo information " +
                         std::to_string(chi_initial) + " is not E^Psi(U_0) = " +
                         std::to_string(expected));

  const Ensemble final_ens = initial.apply(embed(gate, initial.layout()));
  const double change = holevo(final_ens, bob) - chi_initial;
  return {std::move(initial), change};
}

Ensemble ensemble_phased(const BipartiteGate& gate, const StateVector& chi) {
  require_chi_layout(chi, gate);
  const int da = gate.d_a();
  const int d2 = da * da;
  const StateVector base = tensor(max_entangled(da, "A_anc", "A_U"), chi);
  const WeylSet weyl = weyl_set(da);

  // Precompute V_j^{A_anc} |base>; B_2 is appended as the least significant
  // factor, so member amplitudes interleave (base index, register j).
  std::vector<Eigen::VectorXcd> rotated;
  rotated.reserve(d2);
  for (const auto& v : weyl.operators)
    rotated.push_back(embed_on(v, base.layout(), {"A_anc"}) * base.amplitudes());

  std::vector<Factor> factors = base.layout().factors();
  factors.push_back({"B_2", d2});
  const SubsystemLayout layout(factors);

  std::vector<Ensemble::Member> members;
  members.reserve(d2);
  const double p = 1.0 / d2;
  for (int k = 0; k < d2; ++k) {
    Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(layout.total_dim());
    for (int j = 0; j < d2; ++j) {
      const cplx phase =
          std::polar(1.0 / da, 2.0 * std::numbers::pi * k * j / d2);
      for (long b = 0; b < base.dim(); ++b) amp(b * d2 + j) = phase * rotated[j](b);
    }
    members.emplace_back(p, StateVector(layout, std::move(amp)));
  }
  return Ensemble(std::move(members));
}

double check_con1(const std::vector<Eigen::MatrixXcd>& v_list, const StateVector& phi) {
  const long n = phi.dim();
  const long count = static_cast<long>(v_list.size());
  std::vector<Eigen::VectorXcd> states;
  states.reserve(v_list.size());
  for (const auto& v : v_list) {
    if (v.rows() != n || v.cols() != n)
      throw layout_error("condition operators must act on phi's full space");
    states.push_back(v * phi.amplitudes());
  }
  double gram_resid = 0.0;
  for (long j = 0; j < count; ++j)
    for (long k = 0; k < count; ++k) {
      const cplx g = states[j].dot(states[k]);
      gram_resid = std::max(gram_resid, std::abs(g - (j == k ? 1.0 : 0.0)));
    }
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& s : states) sum += s * s.adjoint();
  const double completeness_resid =
      (sum - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  return std::max(gram_resid, completeness_resid);
}

double check_con2(const BipartiteGate& gate, const std::vector<Eigen::MatrixXcd>& va,
                  const std::vector<Eigen::MatrixXcd>& vb,
                  const std::vector<Eigen::MatrixXcd>& ua,
                  const std::vector<Eigen::MatrixXcd>& ub) {
  if (va.size() != vb.size() || va.size() != ua.size() || va.size() != ub.size())
    throw layout_error("condition operator lists must have equal length");
  if (va.empty()) throw layout_error("condition operator lists must not be empty");
  const int a_anc = static_cast<int>(va.front().rows()) / gate.d_a();
  const int b_anc = static_cast<int>(vb.front().rows()) / gate.d_b();
  if (a_anc * gate.d_a() != va.front().rows() || b_anc * gate.d_b() != vb.front().rows())
    throw layout_error("operator sizes are not multiples of the gate factors");

  const SubsystemLayout layout{{"A_anc", a_anc},
                               {"A_U", gate.d_a()},
                               {"B_U", gate.d_b()},
                               {"B_anc", b_anc}};
  const Eigen::MatrixXcd u = embed(gate, layout);
  double resid = 0.0;
  for (size_t j = 0; j < va.size(); ++j) {
    const Eigen::MatrixXcd lhs = u * embed_on(va[j], layout, {"A_anc", "A_U"}) *
                                 embed_on(vb[j], layout, {"B_U", "B_anc"});
    const Eigen::MatrixXcd rhs = embed_on(ua[j], layout, {"A_anc", "A_U"}) *
                                 embed_on(ub[j], layout, {"B_U", "B_anc"}) * u;
    resid = std::max(resid, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  return resid;
}

double check_con3(const std::vector<Eigen::MatrixXcd>& v_list) {
  if (v_list.empty()) throw layout_error("condition operator list must not be empty");
  const long d = v_list.front().rows();
  // Superoperator of rho -> sum_j V_j^dag rho V_j against d Tr(rho) I
  // (column-major vec convention).
  Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (const auto& v : v_list) {
    if (v.rows() != d || v.cols() != d)
      throw layout_error("condition operators must share one dimension");
    l += kron(v.transpose(), v.adjoint());
  }
  Eigen::VectorXcd vec_id = Eigen::VectorXcd::Zero(d * d);
  for (long i = 0; i < d; ++i) vec_id(i * d + i) = 1.0;
  const Eigen::MatrixXcd target = static_cast<double>(d) * vec_id * vec_id.adjoint();
  return (l - target).cwiseAbs().maxCoeff();
}

TwoQubitVjk two_qubit_vjk(const StateVector& phi) {
  const SubsystemLayout expected{{"A_anc", 2}, {"A_U", 2}};
  if (phi.layout() != expected)
    throw layout_error("phi must live on (A_anc:2, A_U:2), got " +
                       phi.layout().to_string());
  const auto& v = phi.amplitudes();
  // phi = lambda_0 |psi_0>|0> + lambda_1 |psi_1>|1> in the A_U basis.
  Eigen::Vector2cd c0(v(0), v(2));
  Eigen::Vector2cd c1(v(1), v(3));
  const double l0 = c0.norm();
  const double l1 = c1.norm();

  auto perp = [](const Eigen::Vector2cd& x) {
    return Eigen::Vector2cd(-std::conj(x(1)), std::conj(x(0)));
  };
  Eigen::Vector2cd psi0 = l0 > 1e-12 ? Eigen::Vector2cd(c0 / l0) : perp(c1 / l1);
  Eigen::Vector2cd psi1 = l1 > 1e-12 ? Eigen::Vector2cd(c1 / l1) : perp(psi0);

  const cplx inner = psi0.dot(psi1);
  TwoQubitVjk out;
  out.inner_imag = inner.imag();
  if (std::abs(inner.imag()) > kConditionTol) return out;  // not representable
  const double a = inner.real();

  // Orthonormal frame {e0, e1} with psi0 = e0 and psi1 = a e0 + b e1, b >= 0.
  // The full complex projection is removed so a tolerated residual imaginary
  // part cannot tilt e1 towards e0.
  const Eigen::Vector2cd e0 = psi0;
  Eigen::Vector2cd rem = psi1 - inner * e0;
  const double b = rem.norm();
  const Eigen::Vector2cd e1 = b > 1e-9 ? Eigen::Vector2cd(rem / b) : perp(e0);

  // V_a exchanges psi0 and psi1; V_b sends each psi_i to a perpendicular
  // partner. Both are real rotations/reflections in the {e0, e1} frame.
  Eigen::MatrixXcd va2 = a * (e0 * e0.adjoint() - e1 * e1.adjoint()) +
                         b * (e1 * e0.adjoint() + e0 * e1.adjoint());
  if (b <= 1e-9) va2 = a * e0 * e0.adjoint() + e1 * e1.adjoint();
  const Eigen::MatrixXcd vb2 = e1 * e0.adjoint() - e0 * e1.adjoint();

  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd sy = pauli_y();
  out.representable = true;
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      Eigen::MatrixXcd anc = id;
      if (j) anc = va2 * anc;
      if (k) anc = vb2 * anc;
      out.va.push_back(kron(anc, j ? Eigen::MatrixXcd(sy) : Eigen::MatrixXcd(id)));
      out.vb.push_back(kron(j ? Eigen::MatrixXcd(sy) : Eigen::MatrixXcd(id), id));
    }
  return out;
}

double delta_ensemble_con34(const BipartiteGate& gate, const StateVector& psi,
                            const std::vector<Eigen::MatrixXcd>& va,
                            const std::vector<Eigen::MatrixXcd>& vb,
                            const std::vector<Eigen::MatrixXcd>& ua,
                            const std::vector<Eigen::MatrixXcd>& ub) {
  const double con3 = check_con3(va);
  if (con3 > kConditionTol)
    throw precondition_error("condition (con3) residual " + std::to_string(con3), con3);
  const double con4 = check_con2(gate, va, vb, ua, ub);
  if (con4 > kConditionTol)
    throw precondition_error("condition (con4) residual " + std::to_string(con4), con4);

  const auto& layout = psi.layout();
  for (const char* lbl : {"A_anc", "A_U", "B_U", "B_anc"})
    if (!layout.contains(lbl))
      throw layout_error("psi must live on (A_anc, A_U, B_U, B_anc)");

  std::vector<Ensemble::Member> members;
  const double p = 1.0 / static_cast<double>(va.size());
  for (size_t j = 0; j < va.size(); ++j) {
    const Eigen::MatrixXcd op =
        embed_on(ua[j].adjoint(), layout, {"A_U"}) *
        embed_on(ub[j].adjoint(), layout, {"B_U"});
    members.emplace_back(p, apply_unitary(op, psi));
  }
  const Ensemble ens((std::move(members)));
  const Ensemble after = ens.apply(embed(gate, layout).adjoint());

  const std::vector<std::string> alice = {"A_anc", "A_U"};
  return holevo(after, alice) - holevo(ens, alice);
}

}  // namespace caplab
