#include "caplab/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "caplab/channels.hpp"
#include "caplab/errors.hpp"
#include "caplab/gate_io.hpp"

namespace caplab::cli {

namespace {

using nlohmann::ordered_json;

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

class Stopwatch {
 public:
  long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

InequalityRecord ineq(std::string name, double lhs, double rhs, double tol) {
  return InequalityRecord{std::move(name), lhs, rhs, tol, lhs <= rhs + tol};
}

ordered_json config_json(const OptimizerConfig& c) {
  return ordered_json{{"restarts", c.restarts},
                      {"max_iterations", c.max_iterations},
                      {"tolerance", c.tolerance},
                      {"seed", c.seed}};
}

}  // namespace

bool RunReport::all_hold() const {
  for (const auto& r : inequalities)
    if (!r.holds) return false;
  return true;
}

const std::vector<std::string>& capacity_names() {
  static const std::vector<std::string> names = {
      "e_u_psi",       "e_u",           "delta_e_u",          "delta_e_u_psi",
      "e_u_psi_fwd",   "e_u_psi_rev",   "delta_e_u_psi_fwd",  "delta_e_u_psi_rev"};
  return names;
}

RunReport run_capacity(const std::string& gate_source,
                       const std::vector<std::string>& which,
                       const OptimizerConfig& config) {
  const Stopwatch watch;
  const BipartiteGate gate = resolve_gate(gate_source);

  std::vector<std::string> requested = which;
  if (requested.size() == 1 && requested.front() == "all") requested = capacity_names();

  RunReport report;
  report.gate_descriptor = gate_source;
  report.config_echo = config;

  // delta_e_u reuses the e_u solve when both are requested.
  std::optional<CapacityReport> e_u_cache;
  auto e_u_report = [&]() -> const CapacityReport& {
    if (!e_u_cache) e_u_cache = e_u(gate, config);
    return *e_u_cache;
  };

  for (const auto& name : requested) {
    double value = 0.0;
    if (name == "e_u_psi") {
      value = e_u_psi(gate);
    } else if (name == "e_u") {
      value = e_u_report().value;
    } else if (name == "delta_e_u") {
      value = delta_e_u(gate, config, &e_u_report()).value;
    } else if (name == "delta_e_u_psi") {
      value = delta_e_u_psi(gate, config).value;
    } else if (name == "e_u_psi_fwd") {
      value = e_u_psi_onesided(gate, Direction::alice_to_bob, config).value;
    } else if (name == "e_u_psi_rev") {
      value = e_u_psi_onesided(gate, Direction::bob_to_alice, config).value;
    } else if (name == "delta_e_u_psi_fwd") {
      value = delta_e_u_psi_onesided(gate, Direction::alice_to_bob, config).value;
    } else if (name == "delta_e_u_psi_rev") {
      value = delta_e_u_psi_onesided(gate, Direction::bob_to_alice, config).value;
    } else {
      throw parse_error("unknown capacity '" + name + "'");
    }
    report.capacities.emplace_back(name, value);
  }
  report.wall_time_ms = watch.ms();
  return report;
}

std::string run_sweep_csv(double alpha_min, double alpha_max, int steps,
                          const OptimizerConfig& config) {
  constexpr double kQuarterPi = std::numbers::pi / 4.0;
  if (!(alpha_min > 0) || alpha_max > kQuarterPi + 1e-12 || steps < 1 ||
      (steps == 1 ? alpha_min > alpha_max : !(alpha_min < alpha_max)))
    throw parse_error("sweep range must satisfy 0 < alpha_min < alpha_max <= pi/4");

  std::ostringstream out;
  out << "alpha,e_u_psi,delta_e_u,ratio\n";
  for (int i = 0; i < steps; ++i) {
    const double alpha =
        steps == 1 ? alpha_min
                   : alpha_min + (alpha_max - alpha_min) * i / (steps - 1);
    const BipartiteGate gate = gate_zz(alpha);
    const double exact = e_u_psi(gate);
    const double delta = delta_e_u(gate, config).value;
    out << fmt_double(alpha) << ',' << fmt_double(exact) << ',' << fmt_double(delta)
        << ',' << fmt_double(delta / exact) << '\n';
  }
  return out.str();
}

RunReport run_verify(const std::string& gate_source, const OptimizerConfig& config) {
  const Stopwatch watch;
  const BipartiteGate gate = resolve_gate(gate_source);
  const double dd2 = std::pow(static_cast<double>(gate.d_a()) * gate.d_b(), 2.0);
  // Comparisons where both sides are independent optimizer estimates get the
  // combined optimizer tolerance; one-sided ones keep config.tolerance
  // because the larger side is seeded to dominate the smaller.
  const double chain_tol = std::max(1e-3, 10.0 * config.tolerance);

  const double eup = e_u_psi(gate);
  const double eup_dag = e_u_psi(gate.dagger());
  const CapacityReport eu = e_u(gate, config);
  const CapacityReport deu = delta_e_u(gate, config, &eu);
  const CapacityReport dpsi = delta_e_u_psi(gate, config);
  const CapacityReport one = e_u_psi_onesided(gate, Direction::alice_to_bob, config);

  const Ensemble dense = ensemble_dense(gate, one.argmax_state);
  const double chi_dense =
      holevo(dense.apply(embed(gate, dense.layout())), {"B_U", "B_anc", "B_2"});
  const auto [dense_delta, dchi] = ensemble_dense_delta(gate, *dpsi.argmax_u0);
  const CapacityReport ce = chi_c_lower_bound(gate, config);

  RunReport report;
  report.gate_descriptor = gate_source;
  report.config_echo = config;
  report.capacities = {
      {"e_u_psi", eup},
      {"e_u_psi_dagger", eup_dag},
      {"e_u", eu.value},
      {"delta_e_u", deu.value},
      {"delta_e_u_psi", dpsi.value},
      {"e_u_psi_fwd", one.value},
      {"chi_dense", chi_dense},
      {"delta_chi_dense", dchi},
      {"c_e_bound", ce.value},
  };
  report.inequalities = {
      ineq("time_symmetry |E_psi(U) - E_psi(U+)| <= 0", std::abs(eup - eup_dag), 0.0, 1e-9),
      ineq("E_psi <= E_psi_fwd", eup, one.value, config.tolerance),
      ineq("E_psi_fwd <= E_U", one.value, eu.value, chain_tol),
      ineq("E_U <= delta_E_U", eu.value, deu.value, config.tolerance),
      ineq("delta_E_psi <= delta_E_U", dpsi.value, deu.value, chain_tol),
      ineq("postselection E_U <= E_psi (d_a d_b)^2", eu.value, eup * dd2,
           config.tolerance),
      ineq("dense ensemble E_psi_fwd <= chi", one.value, chi_dense, config.tolerance),
      ineq("dense delta ensemble |dchi - delta_E_psi| <= 0",
           std::abs(dchi - dpsi.value), 0.0, 1e-9),
      ineq("channel E_psi_fwd <= C_E bound", one.value, ce.value, config.tolerance),
  };
  report.wall_time_ms = watch.ms();
  return report;
}

DecomposeResult run_decompose(const std::string& gate_source) {
  const BipartiteGate gate = resolve_gate(gate_source);
  if (gate.d_a() != 2 || gate.d_b() != 2)
    throw unsupported_error("decompose requires a two-qubit gate");
  DecomposeResult out;
  out.form = kak_decompose(gate);
  out.residual = (out.form.reconstruct() - gate.matrix()).cwiseAbs().maxCoeff();
  return out;
}

std::string render_table(const RunReport& report) {
  std::ostringstream out;
  out << "gate: " << report.gate_descriptor << "\n";
  if (!report.capacities.empty()) {
    out << "capacities (ebits):\n";
    for (const auto& [name, value] : report.capacities) {
      out << "  ";
      out.width(22);
      out.setf(std::ios::left);
      out << name;
      out.unsetf(std::ios::left);
      out << fmt_double(value) << "\n";
    }
  }
  if (!report.inequalities.empty()) {
    out << "inequalities:\n";
    for (const auto& r : report.inequalities) {
      out << "  [" << (r.holds ? "ok" : "FAIL") << "] " << r.name
          << "  (lhs=" << fmt_double(r.lhs) << ", rhs=" << fmt_double(r.rhs)
          << ", tol=" << fmt_double(r.tolerance) << ")\n";
    }
  }
  return out.str();
}

std::string render_json(const RunReport& report, bool include_wall_time) {
  ordered_json doc;
  doc["gate"] = report.gate_descriptor;
  ordered_json caps = ordered_json::object();
  for (const auto& [name, value] : report.capacities) caps[name] = value;
  doc["capacities"] = std::move(caps);
  ordered_json ineqs = ordered_json::array();
  for (const auto& r : report.inequalities)
    ineqs.push_back(ordered_json{{"name", r.name},
                                 {"lhs", r.lhs},
                                 {"rhs", r.rhs},
                                 {"tolerance", r.tolerance},
                                 {"holds", r.holds}});
  doc["inequalities"] = std::move(ineqs);
  doc["config"] = config_json(report.config_echo);
  if (include_wall_time) doc["wall_time_ms"] = report.wall_time_ms;
  return doc.dump(2) + "\n";
}

namespace {

std::string fmt_matrix2(const Eigen::Matrix2cd& m) {
  std::ostringstream out;
  out << "[[" << fmt_double(m(0, 0).real()) << (m(0, 0).imag() < 0 ? "" : "+")
      << fmt_double(m(0, 0).imag()) << "i, " << fmt_double(m(0, 1).real())
      << (m(0, 1).imag() < 0 ? "" : "+") << fmt_double(m(0, 1).imag()) << "i], ["
      << fmt_double(m(1, 0).real()) << (m(1, 0).imag() < 0 ? "" : "+")
      << fmt_double(m(1, 0).imag()) << "i, " << fmt_double(m(1, 1).real())
      << (m(1, 1).imag() < 0 ? "" : "+") << fmt_double(m(1, 1).imag()) << "i]]";
  return out.str();
}

}  // namespace

std::string render_decompose(const DecomposeResult& result) {
  std::ostringstream out;
  const auto& f = result.form;
  out << "alpha: (" << fmt_double(f.alphas[0]) << ", " << fmt_double(f.alphas[1])
      << ", " << fmt_double(f.alphas[2]) << ")\n";
  out << "global_phase: " << fmt_double(f.global_phase.real())
      << (f.global_phase.imag() < 0 ? "" : "+") << fmt_double(f.global_phase.imag())
      << "i\n";
  out << "before_a: " << fmt_matrix2(f.before_a) << "\n";
  out << "before_b: " << fmt_matrix2(f.before_b) << "\n";
  out << "after_a:  " << fmt_matrix2(f.after_a) << "\n";
  out << "after_b:  " << fmt_matrix2(f.after_b) << "\n";
  out << "reconstruction_residual: " << fmt_double(result.residual) << "\n";
  return out.str();
}

std::string ensemble_to_json(const Ensemble& ens) {
  ordered_json doc;
  ordered_json layout = ordered_json::array();
  for (const auto& f : ens.layout().factors())
    layout.push_back(ordered_json{{"label", f.label}, {"dim", f.dim}});
  doc["layout"] = std::move(layout);
  ordered_json members = ordered_json::array();
  for (const auto& [p, state] : ens.members()) {
    ordered_json amps = ordered_json::array();
    for (long i = 0; i < state.dim(); ++i)
      amps.push_back({state.amplitudes()(i).real(), state.amplitudes()(i).imag()});
    members.push_back(ordered_json{{"probability", p}, {"amplitudes", std::move(amps)}});
  }
  doc["members"] = std::move(members);
  return doc.dump(2) + "\n";
}

std::string dump_verify_ensembles(const std::string& gate_source,
                                  const OptimizerConfig& config) {
  const BipartiteGate gate = resolve_gate(gate_source);
  const CapacityReport one = e_u_psi_onesided(gate, Direction::alice_to_bob, config);
  const CapacityReport dpsi = delta_e_u_psi(gate, config);
  const Ensemble dense = ensemble_dense(gate, one.argmax_state);
  const auto [dense_delta, dchi] = ensemble_dense_delta(gate, *dpsi.argmax_u0);
  const Ensemble phased = ensemble_phased(gate, one.argmax_state);

  ordered_json doc;
  doc["gate"] = gate_source;
  doc["dense"] = nlohmann::ordered_json::parse(ensemble_to_json(dense));
  doc["dense_delta"] = nlohmann::ordered_json::parse(ensemble_to_json(dense_delta));
  doc["dense_delta_holevo_change"] = dchi;
  doc["phased"] = nlohmann::ordered_json::parse(ensemble_to_json(phased));
  return doc.dump(2) + "\n";
}

}  // namespace caplab::cli
