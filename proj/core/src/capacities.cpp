#include "caplab/capacities.hpp"

#include <cmath>

#include "caplab/errors.hpp"

namespace caplab {

namespace {

int ancilla_dim(const OptimizerConfig& config, const std::string& side, int fallback) {
  const auto it = config.ancilla_dims.find(side);
  return it == config.ancilla_dims.end() ? fallback : it->second;
}

// Entanglement across the Alice/Bob split of a state on a four-factor layout
// (A_anc, A_U, B_U, B_anc): contiguous in index order, so a reshape suffices.
double entropy_a_b(const Eigen::VectorXcd& amp, long dim_a, long dim_b) {
  return detail::entropy_of_split(amp, dim_a, dim_b);
}

double clamp_capacity(double v, const BipartiteGate& gate) {
  const double cap = capacity_cap(gate);
  if (v > cap + 1e-6)
    throw validity_error("capacity value " + std::to_string(v) +
                         " exceeds 2 log2 min(d) = " + std::to_string(cap));
  return std::clamp(v, 0.0, cap);
}

Eigen::VectorXcd kron_vec(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  Eigen::VectorXcd out(a.size() * b.size());
  for (long i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

}  // namespace

double capacity_cap(const BipartiteGate& gate) {
  return 2.0 * std::log2(static_cast<double>(std::min(gate.d_a(), gate.d_b())));
}

SubsystemLayout capacity_layout(const BipartiteGate& gate, const OptimizerConfig& config) {
  return SubsystemLayout{{"A_anc", ancilla_dim(config, "A_anc", gate.d_a())},
                         {"A_U", gate.d_a()},
                         {"B_U", gate.d_b()},
                         {"B_anc", ancilla_dim(config, "B_anc", gate.d_b())}};
}

double e_u_psi(const BipartiteGate& gate) {
  // Route (a): entropy of the state dual to the gate.
  const SubsystemLayout layout{{"A_anc", gate.d_a()},
                               {"A_U", gate.d_a()},
                               {"B_U", gate.d_b()},
                               {"B_anc", gate.d_b()}};
  const StateVector input = tensor(max_entangled(gate.d_a(), "A_anc", "A_U"),
                                   max_entangled(gate.d_b(), "B_U", "B_anc"));
  const StateVector out = apply_unitary(embed(gate, layout), input);
  const long da2 = static_cast<long>(gate.d_a()) * gate.d_a();
  const double via_state = entropy_a_b(out.amplitudes(), da2, out.dim() / da2);

  // Route (b): entropy of the normalized squared operator Schmidt spectrum.
  const Eigen::VectorXd s = operator_schmidt(gate);
  const double total = static_cast<double>(gate.d_a()) * gate.d_b();
  const double via_schmidt = shannon_entropy(Eigen::VectorXd(s.array().square() / total));

  if (std::abs(via_state - via_schmidt) > 1e-9)
    throw validity_error("Jamiolkowski capacity routes disagree: " +
                         std::to_string(via_state) + " vs " + std::to_string(via_schmidt));
  return via_schmidt;
}

CapacityReport e_u(const BipartiteGate& gate, const OptimizerConfig& config) {
  const SubsystemLayout layout = capacity_layout(gate, config);
  const long na = layout.dim_of({"A_anc", "A_U"});
  const long nb = layout.dim_of({"B_U", "B_anc"});
  const Eigen::MatrixXcd u = embed(gate, layout);

  auto objective = [&](const Eigen::VectorXd& v) {
    const Eigen::VectorXcd phi = params_to_state(v.head(2 * na));
    const Eigen::VectorXcd chi = params_to_state(v.tail(2 * nb));
    return entropy_a_b(u * kron_vec(phi, chi), na, nb);
  };

  // |Psi>|Psi> is always reachable, so seed one start with it.
  Eigen::VectorXd psi_start(2 * (na + nb));
  if (layout.dim("A_anc") == gate.d_a() && layout.dim("B_anc") == gate.d_b()) {
    psi_start.head(2 * na) =
        state_to_params(max_entangled(gate.d_a(), "A_anc", "A_U").amplitudes());
    psi_start.tail(2 * nb) =
        state_to_params(max_entangled(gate.d_b(), "B_U", "B_anc").amplitudes());
  } else {
    Eigen::VectorXcd phi0 = Eigen::VectorXcd::Zero(na), chi0 = Eigen::VectorXcd::Zero(nb);
    phi0(0) = 1.0;
    chi0(0) = 1.0;
    psi_start.head(2 * na) = state_to_params(phi0);
    psi_start.tail(2 * nb) = state_to_params(chi0);
  }

  const MultistartResult r =
      maximize_multistart(objective, static_cast<int>(2 * (na + nb)), config, {psi_start});

  CapacityReport report{
      clamp_capacity(r.value, gate),
      StateVector(layout, kron_vec(params_to_state(r.argmax.head(2 * na)),
                                   params_to_state(r.argmax.tail(2 * nb)))),
      std::nullopt, r.converged, r.restarts_used};
  return report;
}

CapacityReport delta_e_u(const BipartiteGate& gate, const OptimizerConfig& config,
                         const CapacityReport* e_u_hint) {
  const SubsystemLayout layout = capacity_layout(gate, config);
  const long na = layout.dim_of({"A_anc", "A_U"});
  const long nb = layout.dim_of({"B_U", "B_anc"});
  const long n = layout.total_dim();
  const Eigen::MatrixXcd u = embed(gate, layout);

  auto objective = [&](const Eigen::VectorXd& v) {
    const Eigen::VectorXcd psi = params_to_state(v);
    return entropy_a_b(u * psi, na, nb) - entropy_a_b(psi, na, nb);
  };

  std::vector<Eigen::VectorXd> starts;
  // The dual state |Psi>|Psi> has no A:B entanglement, so its objective is
  // already E^Psi; the e_u argmax pushes the start up to E_U.
  if (layout.dim("A_anc") == gate.d_a() && layout.dim("B_anc") == gate.d_b()) {
    starts.push_back(state_to_params(
        tensor(max_entangled(gate.d_a(), "A_anc", "A_U"),
               max_entangled(gate.d_b(), "B_U", "B_anc"))
            .amplitudes()));
  }
  CapacityReport e_u_report;
  if (!e_u_hint) {
    e_u_report = e_u(gate, config);
    e_u_hint = &e_u_report;
  }
  if (e_u_hint->argmax_state.layout() == layout)
    starts.push_back(state_to_params(e_u_hint->argmax_state.amplitudes()));

  const MultistartResult r = maximize_multistart(objective, static_cast<int>(2 * n),
                                                 config, starts);
  return CapacityReport{clamp_capacity(r.value, gate),
                        StateVector(layout, params_to_state(r.argmax)), std::nullopt,
                        r.converged, r.restarts_used};
}

CapacityReport delta_e_u_psi(const BipartiteGate& gate, const OptimizerConfig& config) {
  const int n = static_cast<int>(gate.dim());
  const int da = gate.d_a(), db = gate.d_b();

  auto objective = [&](const Eigen::VectorXd& v) {
    const Eigen::MatrixXcd u0 = unitary_from_generator(params_to_hermitian(v, n));
    return schmidt_entropy(gate.matrix() * u0, da, db) - schmidt_entropy(u0, da, db);
  };

  // U_0 = I is admissible and gives E^Psi.
  const Eigen::VectorXd identity_start = Eigen::VectorXd::Zero(static_cast<long>(n) * n);
  const MultistartResult r =
      maximize_multistart(objective, n * n, config, {identity_start});

  const Eigen::MatrixXcd u0 = unitary_from_generator(params_to_hermitian(r.argmax, n));
  const SubsystemLayout layout{
      {"A_anc", da}, {"A_U", da}, {"B_U", db}, {"B_anc", db}};
  const StateVector input =
      apply_unitary(embed_on(u0, layout, {"A_U", "B_U"}),
            tensor(max_entangled(da, "A_anc", "A_U"), max_entangled(db, "B_U", "B_anc")));
  return CapacityReport{clamp_capacity(r.value, gate), input, u0, r.converged,
                        r.restarts_used};
}

CapacityReport e_u_psi_onesided(const BipartiteGate& gate, Direction dir,
                                const OptimizerConfig& config) {
  const SubsystemLayout layout{{"A_anc", gate.d_a()},
                               {"A_U", gate.d_a()},
                               {"B_U", gate.d_b()},
                               {"B_anc", gate.d_b()}};
  const long na = static_cast<long>(gate.d_a()) * gate.d_a();
  const long nb = static_cast<long>(gate.d_b()) * gate.d_b();
  const Eigen::MatrixXcd u = embed(gate, layout);
  const bool forward = dir == Direction::alice_to_bob;

  const Eigen::VectorXcd frozen =
      forward ? max_entangled(gate.d_a(), "A_anc", "A_U").amplitudes()
              : max_entangled(gate.d_b(), "B_U", "B_anc").amplitudes();
  const long free_dim = forward ? nb : na;

  auto objective = [&](const Eigen::VectorXd& v) {
    const Eigen::VectorXcd free_state = params_to_state(v);
    const Eigen::VectorXcd full =
        forward ? kron_vec(frozen, free_state) : kron_vec(free_state, frozen);
    return entropy_a_b(u * full, na, nb);
  };

  // chi = |Psi> recovers E^Psi, the floor of this capacity.
  const Eigen::VectorXd psi_start = state_to_params(
      forward ? max_entangled(gate.d_b(), "B_U", "B_anc").amplitudes()
              : max_entangled(gate.d_a(), "A_anc", "A_U").amplitudes());

  const MultistartResult r = maximize_multistart(
      objective, static_cast<int>(2 * free_dim), config, {psi_start});

  const SubsystemLayout free_layout =
      forward ? SubsystemLayout{{"B_U", gate.d_b()}, {"B_anc", gate.d_b()}}
              : SubsystemLayout{{"A_anc", gate.d_a()}, {"A_U", gate.d_a()}};
  return CapacityReport{clamp_capacity(r.value, gate),
                        StateVector(free_layout, params_to_state(r.argmax)),
                        std::nullopt, r.converged, r.restarts_used};
}

CapacityReport delta_e_u_psi_onesided(const BipartiteGate& gate, Direction dir,
                                      const OptimizerConfig& config) {
  const SubsystemLayout layout{{"A_anc", gate.d_a()},
                               {"A_U", gate.d_a()},
                               {"B_U", gate.d_b()},
                               {"B_anc", gate.d_b()}};
  const long na = static_cast<long>(gate.d_a()) * gate.d_a();
  const long nb = static_cast<long>(gate.d_b()) * gate.d_b();
  const Eigen::MatrixXcd u = embed(gate, layout);
  const bool forward = dir == Direction::alice_to_bob;
  const int n0 = static_cast<int>(gate.dim());

  const Eigen::VectorXcd frozen =
      forward ? max_entangled(gate.d_a(), "A_anc", "A_U").amplitudes()
              : max_entangled(gate.d_b(), "B_U", "B_anc").amplitudes();
  const long free_dim = forward ? nb : na;
  const long state_params = 2 * free_dim;

  auto objective = [&](const Eigen::VectorXd& v) {
    const Eigen::VectorXcd free_state = params_to_state(v.head(state_params));
    const Eigen::MatrixXcd u0 =
        unitary_from_generator(params_to_hermitian(v.tail(v.size() - state_params), n0));
    const Eigen::MatrixXcd u0e = embed_on(u0, layout, {"A_U", "B_U"});
    const Eigen::VectorXcd base =
        u0e * (forward ? kron_vec(frozen, free_state) : kron_vec(free_state, frozen));
    return entropy_a_b(u * base, na, nb) - entropy_a_b(base, na, nb);
  };

  std::vector<Eigen::VectorXd> starts;
  // (chi, U_0) = (|Psi>, argmax of Delta E^Psi) keeps the chain
  // Delta E^Psi <= Delta E^{Psi,*} honest at optimizer precision.
  const CapacityReport inner = delta_e_u_psi(gate, config);
  Eigen::VectorXd informed(state_params + static_cast<long>(n0) * n0);
  informed.head(state_params) = state_to_params(
      forward ? max_entangled(gate.d_b(), "B_U", "B_anc").amplitudes()
              : max_entangled(gate.d_a(), "A_anc", "A_U").amplitudes());
  // Recover a generator for the inner argmax U_0 (Schur basis is orthonormal
  // for a unitary, so exp(iH) reproduces it).
  {
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(*inner.argmax_u0);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n0, n0);
    for (int i = 0; i < n0; ++i)
      h += std::arg(schur.matrixT()(i, i)) * schur.matrixU().col(i) *
           schur.matrixU().col(i).adjoint();
    informed.tail(static_cast<long>(n0) * n0) =
        hermitian_to_params(0.5 * (h + h.adjoint().eval()));
  }
  starts.push_back(informed);

  const MultistartResult r = maximize_multistart(
      objective, static_cast<int>(state_params + static_cast<long>(n0) * n0), config,
      starts);

  const SubsystemLayout free_layout =
      forward ? SubsystemLayout{{"B_U", gate.d_b()}, {"B_anc", gate.d_b()}}
              : SubsystemLayout{{"A_anc", gate.d_a()}, {"A_U", gate.d_a()}};
  const Eigen::MatrixXcd u0 = unitary_from_generator(
      params_to_hermitian(r.argmax.tail(r.argmax.size() - state_params), n0));
  return CapacityReport{clamp_capacity(r.value, gate),
                        StateVector(free_layout, params_to_state(r.argmax.head(state_params))),
                        u0, r.converged, r.restarts_used};
}

std::pair<double, double> expanded_delta_demo(const BipartiteGate& gate,
                                              const StateVector& psi) {
  const auto& pl = psi.layout();
  for (const char* lbl : {"A_anc", "A_U", "B_U", "B_anc"})
    if (!pl.contains(lbl))
      throw layout_error("witness state must live on (A_anc, A_U, B_U, B_anc)");
  if (pl.dim("A_U") != gate.d_a() || pl.dim("B_U") != gate.d_b())
    throw layout_error("witness state factors do not match the gate dimensions");

  const int a_anc = pl.dim("A_anc");
  const int da = gate.d_a();
  const int big = a_anc * da;  // dim of Alice's component of psi

  const double e_before_direct = entanglement_entropy(psi, {"A_anc", "A_U"});
  const double e_after_direct = entanglement_entropy(
      apply_unitary(embed(gate, pl), psi), {"A_anc", "A_U"});

  // Enlarged layout: Alice holds (A_anc', A_U2, A_U1), Bob holds
  // (B_U1, B_U2, B_U3); the gate acts on (A_U1, B_U1) only.
  // |Psi>_A (x) psi-embedded-in-B_U, then U_0 swaps (A_U2, A_U1) <-> B_U3.
  StateVector psi_b = relabel(permute_factors(psi, {"B_U", "B_anc", "A_anc", "A_U"}),
                              {"B_U1", "B_U2", "B3a", "B3b"});
  psi_b = merge_factors(psi_b, {"B3a", "B3b"}, "B_U3");
  StateVector big_psi = split_factor(max_entangled(big, "A_anc2", "A_Um"), "A_Um",
                                     {{"A_U2", a_anc}, {"A_U1", da}});
  StateVector state = tensor(big_psi, psi_b);

  const Eigen::MatrixXcd u0 =
      swap_groups_operator(state.layout(), {"A_U2", "A_U1"}, {"B_U3"});
  state = apply_unitary(u0, state);

  const std::vector<std::string> alice = {"A_anc2", "A_U2", "A_U1"};
  const double before = entanglement_entropy(state, alice);
  const StateVector after_state =
      apply_unitary(embed(gate, state.layout(), "A_U1", "B_U1"), state);
  const double after = entanglement_entropy(after_state, alice);

  if (std::abs((after - before) - (e_after_direct - e_before_direct)) > 1e-9)
    throw validity_error("expanded construction does not reproduce the direct change");
  return {before, after};
}

bool postselection_bound_check(const BipartiteGate& gate, const OptimizerConfig& config) {
  const double lhs = e_u_psi(gate) *
                     std::pow(static_cast<double>(gate.d_a()) * gate.d_b(), 2.0);
  const double rhs = e_u(gate, config).value;
  return lhs >= rhs - config.tolerance;
}

}  // namespace caplab
