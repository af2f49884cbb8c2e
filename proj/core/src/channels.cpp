#include "caplab/channels.hpp"

#include <cmath>

#include "caplab/errors.hpp"

namespace caplab {

namespace {

// Purification |psi> = sum_i sqrt(l_i) |e_i>|i>_R with reference dim = rank
// space of rho; eigenvector phases fixed so the largest-magnitude component
// is real positive.
Eigen::VectorXcd purify(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  const long d = rho.rows();
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d * d);
  for (long i = 0; i < d; ++i) {
    const double l = es.eigenvalues()(i);
    if (l < 1e-15) continue;
    Eigen::VectorXcd e = es.eigenvectors().col(i);
    long imax = 0;
    for (long r = 1; r < d; ++r)
      if (std::abs(e(r)) > std::abs(e(imax))) imax = r;
    const cplx ph = e(imax) / std::abs(e(imax));
    e /= ph;
    // reference index i is the least significant factor
    for (long r = 0; r < d; ++r) psi(r * d + i) = std::sqrt(l) * e(r);
  }
  return psi;
}

double entropy_of_matrix(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()),
                                                     Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (long i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()(i);
    if (l > 1e-12) s -= l * std::log2(l);
  }
  return s;
}

}  // namespace

InducedChannel::InducedChannel(BipartiteGate gate, StateVector chi,
                               std::vector<Eigen::MatrixXcd> kraus)
    : gate_(std::move(gate)), chi_(std::move(chi)), kraus_(std::move(kraus)) {
  const int d_in = gate_.d_a();
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d_in, d_in);
  for (const auto& k : kraus_) sum += k.adjoint() * k;
  const double resid =
      (sum - Eigen::MatrixXcd::Identity(d_in, d_in)).cwiseAbs().maxCoeff();
  if (resid > 1e-10)
    throw validity_error("Kraus operators are not trace preserving: residual " +
                         std::to_string(resid));
}

InducedChannel induce_channel(const BipartiteGate& gate, const StateVector& chi) {
  if (chi.layout().num_factors() != 2 || !chi.layout().contains("B_U") ||
      !chi.layout().contains("B_anc") || chi.layout().dim("B_U") != gate.d_b())
    throw layout_error("chi must live on (B_U:" + std::to_string(gate.d_b()) +
                       ", B_anc), got " + chi.layout().to_string());

  const int da = gate.d_a();
  const long nb = chi.dim();  // d_b * d_banc
  std::vector<Factor> factors = {{"A_U", da}};
  for (const auto& f : chi.layout().factors()) factors.push_back(f);
  const SubsystemLayout layout(factors);
  const Eigen::MatrixXcd u = embed(gate, layout);

  // Column a of W = U (|a>_{A_U} (x) |chi>); Kraus block i = rows with
  // A_U digit i (A_U is the most significant factor).
  Eigen::MatrixXcd w(layout.total_dim(), da);
  for (int a = 0; a < da; ++a) {
    Eigen::VectorXcd in = Eigen::VectorXcd::Zero(layout.total_dim());
    in.segment(static_cast<long>(a) * nb, nb) = chi.amplitudes();
    w.col(a) = u * in;
  }
  std::vector<Eigen::MatrixXcd> kraus;
  kraus.reserve(da);
  for (int i = 0; i < da; ++i)
    kraus.push_back(w.middleRows(static_cast<long>(i) * nb, nb));
  return InducedChannel(gate, chi, std::move(kraus));
}

DensityOperator apply_channel(const InducedChannel& ch, const DensityOperator& rho) {
  if (rho.matrix().rows() != ch.input_dim())
    throw layout_error("channel input must live on A_U");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(ch.output_dim(), ch.output_dim());
  for (const auto& k : ch.kraus()) out += k * rho.matrix() * k.adjoint();
  return DensityOperator(ch.output_layout(), std::move(out));
}

double ce_objective(const InducedChannel& ch, const DensityOperator& rho) {
  const long d = ch.input_dim();
  const long nb = ch.output_dim();
  const double s_in = von_neumann_entropy(rho);

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(nb, nb);
  for (const auto& k : ch.kraus()) out += k * rho.matrix() * k.adjoint();
  const double s_out = entropy_of_matrix(out);

  // (Phi (x) I) on the purification; the reference is the trailing factor.
  const Eigen::VectorXcd psi = purify(rho.matrix());
  Eigen::MatrixXcd joint = Eigen::MatrixXcd::Zero(nb * d, nb * d);
  for (const auto& k : ch.kraus()) {
    // (K (x) I_d) psi, with psi reshaped to (input d) x (reference d).
    Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        m(psi.data(), d, d);
    const Eigen::MatrixXcd km = k * m;  // nb x d
    Eigen::VectorXcd v(nb * d);
    for (long r = 0; r < nb; ++r)
      for (long c = 0; c < d; ++c) v(r * d + c) = km(r, c);
    joint += v * v.adjoint();
  }
  const double s_joint = entropy_of_matrix(joint);
  return s_in + s_out - s_joint;
}

double ce_objective_env_route(const InducedChannel& ch, const DensityOperator& rho) {
  const double s_in = von_neumann_entropy(rho);
  const double s_out = von_neumann_entropy(apply_channel(ch, rho));
  // Entropy of the complementary (A_U) output of the dilation.
  const long d = ch.input_dim();
  Eigen::MatrixXcd env = Eigen::MatrixXcd::Zero(d, d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j)
      env(i, j) = (ch.kraus()[j].adjoint() * ch.kraus()[i] * rho.matrix()).trace();
  const double s_env = entropy_of_matrix(env);
  return s_in + s_out - s_env;
}

namespace {

Eigen::MatrixXcd params_to_density(const Eigen::VectorXd& v, int n) {
  // Unconstrained complex lower-triangular L with rho = L L^dag / Tr.
  Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(n, n);
  long k = 0;
  for (int i = 0; i < n; ++i) {
    l(i, i) = v(k++);
    for (int j = 0; j < i; ++j) {
      l(i, j) = cplx(v(k), v(k + 1));
      k += 2;
    }
  }
  Eigen::MatrixXcd rho = l * l.adjoint();
  const double tr = rho.trace().real();
  if (tr < 1e-14) return Eigen::MatrixXcd::Identity(n, n) / n;
  return rho / tr;
}

}  // namespace

CapacityReport ce_capacity(const InducedChannel& ch, const OptimizerConfig& config) {
  const int n = ch.input_dim();
  const int n_params = n * n;

  auto objective = [&](const Eigen::VectorXd& v) {
    const Eigen::MatrixXcd rho = params_to_density(v, n);
    const long nb = ch.output_dim();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(nb, nb);
    for (const auto& k : ch.kraus()) out += k * rho * k.adjoint();
    Eigen::MatrixXcd joint = Eigen::MatrixXcd::Zero(nb * n, nb * n);
    const Eigen::VectorXcd psi = purify(rho);
    for (const auto& k : ch.kraus()) {
      Eigen::VectorXcd v2(nb * n);
      for (long r = 0; r < nb; ++r) {
        Eigen::VectorXcd row = Eigen::VectorXcd::Zero(n);
        for (long a = 0; a < n; ++a)
          for (long c = 0; c < n; ++c) row(c) += k(r, a) * psi(a * n + c);
        v2.segment(r * n, n) = row;
      }
      joint += v2 * v2.adjoint();
    }
    return entropy_of_matrix(rho) + entropy_of_matrix(out) - entropy_of_matrix(joint);
  };

  // The objective is concave in rho, so the maximally mixed start suffices;
  // extra random starts stay as a cross-check.
  Eigen::VectorXd mixed_start = Eigen::VectorXd::Zero(n_params);
  for (int i = 0, k = 0; i < n; ++i) {
    mixed_start(k) = 1.0;
    k += 1 + 2 * i;
  }
  OptimizerConfig inner = config;
  inner.restarts = std::min(config.restarts, 3);
  const MultistartResult r =
      maximize_multistart(objective, n_params, inner, {mixed_start});

  const Eigen::MatrixXcd rho_best = params_to_density(r.argmax, n);
  const double mixed_value = objective(mixed_start);
  CapacityReport report;
  report.converged = r.converged;
  report.restarts_used = r.restarts_used;
  if (mixed_value > r.value) {
    report.value = mixed_value;
    report.argmax_state = StateVector::normalized(
        SubsystemLayout{{"A_U", n}, {"R", n}},
        purify(Eigen::MatrixXcd::Identity(n, n) / n));
  } else {
    report.value = r.value;
    report.argmax_state =
        StateVector::normalized(SubsystemLayout{{"A_U", n}, {"R", n}}, purify(rho_best));
  }
  report.value = std::max(report.value, 0.0);
  return report;
}

CapacityReport chi_c_lower_bound(const BipartiteGate& gate, const OptimizerConfig& config) {
  const SubsystemLayout chi_layout{{"B_U", gate.d_b()}, {"B_anc", gate.d_b()}};
  const long nb = chi_layout.total_dim();

  OptimizerConfig inner = config;
  inner.restarts = 1;
  inner.max_iterations = std::min(config.max_iterations, 150);

  auto objective = [&](const Eigen::VectorXd& v) {
    const StateVector chi(chi_layout, params_to_state(v));
    return ce_capacity(induce_channel(gate, chi), inner).value;
  };

  // Seed with the one-sided-optimal chi; its channel already attains
  // C_E >= E^{Psi,->}.
  OptimizerConfig seed_config = config;
  const CapacityReport onesided =
      e_u_psi_onesided(gate, Direction::alice_to_bob, seed_config);
  const Eigen::VectorXd informed = state_to_params(onesided.argmax_state.amplitudes());

  OptimizerConfig outer = config;
  outer.max_iterations = std::min(config.max_iterations, 60);
  const MultistartResult r =
      maximize_multistart(objective, static_cast<int>(2 * nb), outer, {informed});

  return CapacityReport{r.value, StateVector(chi_layout, params_to_state(r.argmax)),
                        std::nullopt, r.converged, r.restarts_used};
}

}  // namespace caplab
