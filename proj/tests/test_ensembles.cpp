#include <doctest.h>

#include "caplab/capacities.hpp"
#include "caplab/ensembles.hpp"
#include "caplab/errors.hpp"
#include "caplab/kak.hpp"
#include "testutil.hpp"

using namespace caplab;
using caplab::test::binary_entropy;
using caplab::test::kQuarterPi;
using caplab::test::max_abs;

namespace {

StateVector basis_state(const SubsystemLayout& l, long index) {
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(l.total_dim());
  amp(index) = 1.0;
  return StateVector(l, amp);
}

OptimizerConfig fast_config(int restarts = 6) {
  OptimizerConfig c;
  c.restarts = restarts;
  return c;
}

}  // namespace

TEST_CASE("holevo information examples") {
  const SubsystemLayout l{{"x", 2}};
  const StateVector zero = basis_state(l, 0);
  const StateVector one = basis_state(l, 1);
  Eigen::VectorXcd plus_amp(2);
  plus_amp << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const StateVector plus(l, plus_amp);

  CHECK(holevo(Ensemble({{0.5, zero}, {0.5, one}}), {"x"}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(holevo(Ensemble({{0.5, plus}, {0.5, plus}}), {"x"}) ==
        doctest::Approx(0.0).epsilon(1e-12));
  // Average of |0> and |+>: eigenvalues (1 +- 1/sqrt 2)/2.
  CHECK(holevo(Ensemble({{0.5, zero}, {0.5, plus}}), {"x"}) ==
        doctest::Approx(binary_entropy((1.0 + 1.0 / std::sqrt(2.0)) / 2.0))
            .epsilon(1e-12));
  CHECK(holevo(Ensemble({{0.5, zero}, {0.5, plus}}), {"x"}) ==
        doctest::Approx(0.6008760366928562).epsilon(1e-11));

  CHECK_THROWS_AS(Ensemble({}), validity_error);
  CHECK_THROWS_AS(Ensemble({{0.7, zero}, {0.7, one}}), validity_error);
  // chi is bounded by the average-state entropy.
  const Ensemble mix({{0.25, zero}, {0.75, plus}});
  CHECK(holevo(mix, {"x"}) >= 0.0);
  CHECK(holevo(mix, {"x"}) <= von_neumann_entropy(mix.average_state({"x"})) + 1e-12);
}

TEST_CASE("transpose trick: (V (x) I)|Psi> = (I (x) V^T)|Psi>") {
  for (int d : {2, 3}) {
    const StateVector psi = max_entangled(d, "A", "B");
    const WeylSet w = weyl_set(d);
    for (const auto& v : w.operators) {
      const Eigen::VectorXcd lhs = embed_on(v, psi.layout(), {"A"}) * psi.amplitudes();
      const Eigen::VectorXcd rhs =
          embed_on(v.transpose(), psi.layout(), {"B"}) * psi.amplitudes();
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);
    }
  }
}

TEST_CASE("dense ensemble: identities and bound") {
  const std::vector<std::string> bob = {"B_U", "B_anc", "B_2"};
  for (int d : {2, 3}) {
    const BipartiteGate gate = random_gate(d, d, 40 + d);
    const StateVector chi = random_state(SubsystemLayout{{"B_U", d}, {"B_anc", d}}, 7);
    const Ensemble ens = ensemble_dense(gate, chi);
    CHECK(ens.size() == d * d);

    // Members never carry more than log2 d_a across the A_U cut.
    for (const auto& [p, state] : ens.members())
      CHECK(entanglement_entropy(state, {"A_U"}) <= std::log2(double(d)) + 1e-10);

    // Average over the Weyl orbit is maximally mixed on A_U (x) B_2.
    const DensityOperator avg_ab2 = ens.average_state({"A_U", "B_2"});
    CHECK(max_abs(avg_ab2.matrix() -
                  Eigen::MatrixXcd::Identity(d * d, d * d) / double(d * d)) < 1e-10);

    const Ensemble after = ens.apply(embed(gate, ens.layout()));

    // S(avg on B+B_2) = log2 d + E(U Psi chi) for this chi.
    const SubsystemLayout std_layout{
        {"A_anc", d}, {"A_U", d}, {"B_U", d}, {"B_anc", d}};
    const StateVector input = tensor(max_entangled(d, "A_anc", "A_U"), chi);
    const double e_chi = entanglement_entropy(
        apply_unitary(embed(gate, std_layout), input), {"A_anc", "A_U"});
    CHECK(von_neumann_entropy(after.average_state(bob)) ==
          doctest::Approx(std::log2(double(d)) + e_chi).epsilon(1e-9));

    // The Holevo information of the final ensemble is at least that E.
    CHECK(holevo(after, bob) >= e_chi - 1e-9);
  }

  // Mixed dimensions: the identities do not need d_a = d_b.
  {
    const BipartiteGate gate = random_gate(2, 3, 91);
    const StateVector chi = random_state(SubsystemLayout{{"B_U", 3}, {"B_anc", 3}}, 2);
    const Ensemble ens = ensemble_dense(gate, chi);
    const Ensemble after = ens.apply(embed(gate, ens.layout()));
    const SubsystemLayout std_layout{
        {"A_anc", 2}, {"A_U", 2}, {"B_U", 3}, {"B_anc", 3}};
    const double e_chi = entanglement_entropy(
        apply_unitary(embed(gate, std_layout),
                      tensor(max_entangled(2, "A_anc", "A_U"), chi)),
        {"A_anc", "A_U"});
    CHECK(von_neumann_entropy(after.average_state(bob)) ==
          doctest::Approx(1.0 + e_chi).epsilon(1e-9));
    CHECK(holevo(after, bob) >= e_chi - 1e-9);
  }

  // gate = I: final chi is zero but the bound holds with E = 0.
  const BipartiteGate id = identity_gate();
  const StateVector chi = max_entangled(2, "B_U", "B_anc");
  const Ensemble after = ensemble_dense(id, chi).apply(embed(id, SubsystemLayout{
      {"A_U", 2}, {"B_U", 2}, {"B_anc", 2}, {"B_2", 2}}));
  CHECK(holevo(after, bob) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(von_neumann_entropy(after.average_state(bob)) ==
        doctest::Approx(1.0).epsilon(1e-10));

  // SWAP with chi = |Psi>: 2 bits of Holevo information.
  const Ensemble dense_swap = ensemble_dense(swap_gate(), chi);
  CHECK(holevo(dense_swap.apply(embed(swap_gate(), dense_swap.layout())), bob) >=
        2.0 - 1e-9);

  CHECK_THROWS_AS(
      ensemble_dense(id, random_state(SubsystemLayout{{"B_U", 2}, {"wrong", 2}}, 1)),
      layout_error);
}

TEST_CASE("dense delta ensemble: exact Holevo bookkeeping") {
  const std::vector<std::string> bob = {"B_U", "B_anc", "B_2"};
  const OptimizerConfig config = fast_config();

  // u0 = I, gate = I: no change at all.
  const auto [ens0, change0] = ensemble_dense_delta(identity_gate(),
                                                    Eigen::MatrixXcd::Identity(4, 4));
  CHECK(change0 == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(holevo(ens0, bob) == doctest::Approx(0.0).epsilon(1e-10));

  // u0 = I: the change equals E^Psi of the gate exactly.
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const BipartiteGate gate = random_gate(2, 2, 50 + seed);
    const auto [ens, change] =
        ensemble_dense_delta(gate, Eigen::MatrixXcd::Identity(4, 4));
    CHECK(change == doctest::Approx(e_u_psi(gate)).epsilon(1e-9));
    // Initial members carry exactly log2 d_a ebits across A_U : rest.
    for (const auto& [p, state] : ens.members())
      CHECK(entanglement_entropy(state, {"A_U"}) ==
            doctest::Approx(1.0).epsilon(1e-10));
  }

  // The optimal U_0 turns the change into Delta E^Psi.
  const BipartiteGate gate = random_gate(2, 2, 77);
  const CapacityReport dpsi = delta_e_u_psi(gate, config);
  const auto [ens, change] = ensemble_dense_delta(gate, *dpsi.argmax_u0);
  CHECK(change == doctest::Approx(dpsi.value).epsilon(1e-9));
  CHECK(holevo(ens, bob) ==
        doctest::Approx(schmidt_entropy(*dpsi.argmax_u0, 2, 2)).epsilon(1e-9));
}

TEST_CASE("phased ensemble: orthonormal members and average identity") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const BipartiteGate gate = random_gate(2, 2, 60 + seed);
    const StateVector chi =
        random_state(SubsystemLayout{{"B_U", 2}, {"B_anc", 2}}, seed);
    const Ensemble ens = ensemble_phased(gate, chi);
    CHECK(ens.size() == 4);
    CHECK(ens.layout().dim("B_2") == 4);

    for (int j = 0; j < ens.size(); ++j)
      for (int k = 0; k < ens.size(); ++k) {
        const cplx g = ens.members()[j].second.overlap(ens.members()[k].second);
        CHECK(std::abs(g - (j == k ? 1.0 : 0.0)) < 1e-12);
      }

    // After U: S(avg on B+B_2) = E(U Psi chi) + 2 log2 d_a.
    const Ensemble after = ens.apply(embed(gate, ens.layout()));
    const SubsystemLayout std_layout{
        {"A_anc", 2}, {"A_U", 2}, {"B_U", 2}, {"B_anc", 2}};
    const double e_chi = entanglement_entropy(
        apply_unitary(embed(gate, std_layout),
                      tensor(max_entangled(2, "A_anc", "A_U"), chi)),
        {"A_anc", "A_U"});
    CHECK(von_neumann_entropy(after.average_state({"B_U", "B_anc", "B_2"})) ==
          doctest::Approx(e_chi + 2.0).epsilon(1e-9));
    CHECK(holevo(after, {"B_U", "B_anc", "B_2"}) >= e_chi - 1e-9);
  }

  // gate = I: bound still holds with E = 0.
  const StateVector chi = max_entangled(2, "B_U", "B_anc");
  const Ensemble ens = ensemble_phased(identity_gate(), chi);
  const Ensemble after = ens.apply(embed(identity_gate(), ens.layout()));
  CHECK(holevo(after, {"B_U", "B_anc", "B_2"}) >= -1e-12);
}

TEST_CASE("condition (con1) residuals") {
  // Weyl operators on A_anc with phi = |Psi> satisfy it exactly.
  const StateVector psi = max_entangled(2, "A_anc", "A_U");
  std::vector<Eigen::MatrixXcd> weyl_on_anc;
  for (const auto& v : weyl_set(2).operators)
    weyl_on_anc.push_back(kron(v, Eigen::MatrixXcd::Identity(2, 2)));
  CHECK(check_con1(weyl_on_anc, psi) < 1e-12);

  // A degenerate set (all identity) fails at scale d^2 - 1.
  const std::vector<Eigen::MatrixXcd> ids(4, Eigen::MatrixXcd::Identity(4, 4));
  CHECK(check_con1(ids, psi) > 1.0);

  CHECK(make_condition_report(1e-12, 1e-10).satisfied);
  CHECK_FALSE(make_condition_report(1e-4, 0.0).satisfied);
}

TEST_CASE("condition (con2) residuals") {
  // gate = I with identical lists: exact.
  std::vector<Eigen::MatrixXcd> locals;
  for (std::uint64_t s = 0; s < 4; ++s) locals.push_back(haar_unitary(4, 90 + s));
  CHECK(check_con2(identity_gate(), locals, locals, locals, locals) < 1e-12);

  // Canonical gates commute with sigma_y (x) sigma_y patterns.
  const BipartiteGate zz = gate_zz(0.4);
  std::vector<Eigen::MatrixXcd> va, vb;
  const Eigen::MatrixXcd id2 = Eigen::MatrixXcd::Identity(2, 2);
  va.push_back(id2);
  va.push_back(pauli_y());
  vb = va;
  CHECK(check_con2(zz, va, vb, va, vb) < 1e-12);

  // Mismatched lists give an O(1) residual.
  std::vector<Eigen::MatrixXcd> wrong = {haar_unitary(2, 1), haar_unitary(2, 2)};
  CHECK(check_con2(zz, va, vb, wrong, vb) > 0.1);
}

TEST_CASE("condition (con3) residual") {
  std::vector<Eigen::MatrixXcd> paulis = {Eigen::MatrixXcd::Identity(2, 2), pauli_x(),
                                          pauli_y(), pauli_z()};
  CHECK(check_con3(paulis) < 1e-12);
  for (int d : {2, 3}) {
    std::vector<Eigen::MatrixXcd> weyl;
    for (const auto& v : weyl_set(d).operators) weyl.push_back(v);
    CHECK(check_con3(weyl) < 1e-12);
  }
  const std::vector<Eigen::MatrixXcd> ids(4, Eigen::MatrixXcd::Identity(2, 2));
  CHECK(check_con3(ids) > 1.0);
}

TEST_CASE("two_qubit_vjk construction") {
  const SubsystemLayout a_layout{{"A_anc", 2}, {"A_U", 2}};

  // phi = |Psi>: the construction reduces to a Weyl-type set.
  const StateVector psi = max_entangled(2, "A_anc", "A_U");
  const TwoQubitVjk w = two_qubit_vjk(psi);
  REQUIRE(w.representable);
  REQUIRE(w.va.size() == 4);
  CHECK(check_con1(w.va, psi) < 1e-12);
  for (const auto& v : w.va)
    CHECK(max_abs(v.adjoint() * v - Eigen::MatrixXcd::Identity(4, 4)) < 1e-12);

  // Product phi (lambda_0 = 1): still valid, with psi_1 chosen perpendicular.
  const StateVector prod = tensor(random_state(SubsystemLayout{{"A_anc", 2}}, 3),
                                  basis_state(SubsystemLayout{{"A_U", 2}}, 0));
  const TwoQubitVjk wp = two_qubit_vjk(prod);
  REQUIRE(wp.representable);
  CHECK(check_con1(wp.va, prod) < 1e-9);

  // Complex inner product: typed failure, not an exception.
  Eigen::VectorXcd amp(4);
  const double r = 1.0 / std::sqrt(2.0);
  // psi_0 = |0>, psi_1 = (|0> i/2 + |1> sqrt(3)/2): inner product i/2.
  amp << r, r * cplx(0.0, 0.5), 0.0, r * std::sqrt(3.0) / 2.0;
  const TwoQubitVjk bad = two_qubit_vjk(StateVector(a_layout, amp));
  CHECK_FALSE(bad.representable);
  CHECK(bad.inner_imag == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(bad.va.empty());

  // Random admissible states: con1 within 1e-9, con2 exact on canonical
  // gates (the V^B pattern commutes with U_d).
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double t = uni(rng) * kQuarterPi * 2.0;
    const double a = 2.0 * uni(rng) - 1.0;
    const Eigen::Vector2cd psi0 =
        random_state(SubsystemLayout{{"A_anc", 2}}, 100 + trial).amplitudes();
    const Eigen::Vector2cd pperp(-std::conj(psi0(1)), std::conj(psi0(0)));
    const Eigen::Vector2cd psi1 =
        a * psi0 +
        std::sqrt(1.0 - a * a) * std::polar(1.0, uni(rng) * 6.28) * pperp;
    Eigen::VectorXcd phi_amp(4);
    phi_amp << std::cos(t) * psi0(0), std::sin(t) * psi1(0), std::cos(t) * psi0(1),
        std::sin(t) * psi1(1);
    const StateVector phi(a_layout, phi_amp);
    const TwoQubitVjk vjk = two_qubit_vjk(phi);
    REQUIRE(vjk.representable);
    CHECK(check_con1(vjk.va, phi) < 1e-9);

    std::array<double, 3> alphas{uni(rng) * kQuarterPi, uni(rng) * kQuarterPi / 2, 0.0};
    if (alphas[1] > alphas[0]) std::swap(alphas[0], alphas[1]);
    const BipartiteGate canon(2, 2, canonical_gate(alphas));
    CHECK(check_con2(canon, vjk.va, vjk.vb, vjk.va, vjk.vb) < 1e-9);
  }
}

TEST_CASE("delta ensemble from conditions (con3)/(con4)") {
  const std::vector<Eigen::MatrixXcd> paulis = {Eigen::MatrixXcd::Identity(2, 2),
                                                pauli_x(), pauli_y(), pauli_z()};
  const SubsystemLayout layout{{"A_anc", 2}, {"A_U", 2}, {"B_U", 2}, {"B_anc", 2}};

  // gate = I: increase 0, decrease 0.
  const StateVector psi0 = random_state(layout, 5);
  CHECK(delta_ensemble_con34(identity_gate(), psi0, paulis, paulis, paulis, paulis) ==
        doctest::Approx(0.0).epsilon(1e-10));

  // Canonical gates with the Pauli set: increase >= decrease under U^dag.
  const OptimizerConfig config = fast_config();
  const BipartiteGate gate = gate_zz(kQuarterPi);
  const CapacityReport deu = delta_e_u(gate, config);
  const StateVector witness =
      apply_unitary(embed(gate, layout), deu.argmax_state);
  const double increase =
      delta_ensemble_con34(gate, witness, paulis, paulis, paulis, paulis);
  const double decrease =
      entanglement_entropy(witness, {"A_anc", "A_U"}) -
      entanglement_entropy(apply_unitary(embed(gate, layout).adjoint(), witness),
                           {"A_anc", "A_U"});
  CHECK(decrease == doctest::Approx(deu.value).epsilon(1e-6));
  CHECK(increase >= decrease - 1e-6);
  CHECK(increase >= 1.0 - 1e-4);

  // Condition violations surface as precondition errors with the residual.
  const BipartiteGate generic = random_gate(2, 2, 8);
  CHECK_THROWS_AS(
      delta_ensemble_con34(generic, psi0, paulis, paulis, paulis, paulis),
      precondition_error);
  const std::vector<Eigen::MatrixXcd> ids(4, Eigen::MatrixXcd::Identity(2, 2));
  CHECK_THROWS_AS(delta_ensemble_con34(identity_gate(), psi0, ids, ids, ids, ids),
                  precondition_error);
}

TEST_CASE("role reversal maps forward results to backward ones") {
  const OptimizerConfig config = fast_config();
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const BipartiteGate gate = random_gate(2, 2, 70 + seed);
    const double fwd = e_u_psi_onesided(gate, Direction::alice_to_bob, config).value;
    const double rev_on_swapped =
        e_u_psi_onesided(swapped(gate), Direction::bob_to_alice, config).value;
    CHECK(fwd == doctest::Approx(rev_on_swapped).epsilon(1e-6));
  }
}
