#include "caplab/gate_io.hpp"

#include <fstream>

#include <json.hpp>

#include "caplab/errors.hpp"

namespace caplab {

using nlohmann::json;

BipartiteGate load_gate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open gate file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw parse_error("gate file '" + path + "' is not valid JSON: " + e.what());
  }
  int da = 0, db = 0;
  Eigen::MatrixXcd m;
  try {
    da = doc.at("d_a").get<int>();
    db = doc.at("d_b").get<int>();
    if (da < 1 || db < 1) throw parse_error("gate dimensions must be positive");
    const auto& rows = doc.at("matrix");
    const long n = static_cast<long>(da) * db;
    if (static_cast<long>(rows.size()) != n)
      throw parse_error("gate matrix must have d_a*d_b rows");
    m.resize(n, n);
    for (long i = 0; i < n; ++i) {
      const auto& row = rows.at(i);
      if (static_cast<long>(row.size()) != n)
        throw parse_error("gate matrix row " + std::to_string(i) + " has wrong length");
      for (long j = 0; j < n; ++j) {
        const auto& entry = row.at(j);
        if (entry.size() != 2) throw parse_error("matrix entries must be [re, im] pairs");
        m(i, j) = cplx(entry.at(0).get<double>(), entry.at(1).get<double>());
      }
    }
  } catch (const json::exception& e) {
    throw parse_error("gate file '" + path + "' is malformed: " + e.what());
  }
  // File tolerance is looser than the in-memory invariant to absorb decimal
  // round-tripping.
  return BipartiteGate(da, db, std::move(m), 1e-8);
}

void save_gate(const std::string& path, const BipartiteGate& gate) {
  json rows = json::array();
  for (long i = 0; i < gate.dim(); ++i) {
    json row = json::array();
    for (long j = 0; j < gate.dim(); ++j)
      row.push_back({gate.matrix()(i, j).real(), gate.matrix()(i, j).imag()});
    rows.push_back(std::move(row));
  }
  json doc{{"d_a", gate.d_a()}, {"d_b", gate.d_b()}, {"matrix", std::move(rows)}};
  std::ofstream out(path);
  if (!out) throw parse_error("cannot write gate file '" + path + "'");
  out << doc.dump(1) << "\n";
}

BipartiteGate resolve_gate(const std::string& source) {
  if (source == "identity") return identity_gate();
  if (source == "swap") return swap_gate();
  if (source == "cnot") return cnot_gate();
  if (source == "cz") return cz_gate();
  if (source.rfind("zz:", 0) == 0) {
    const std::string arg = source.substr(3);
    try {
      size_t used = 0;
      const double alpha = std::stod(arg, &used);
      if (used != arg.size()) throw parse_error("trailing characters");
      return gate_zz(alpha);
    } catch (const parse_error&) {
      throw parse_error("cannot parse zz angle '" + arg + "'");
    } catch (const std::exception&) {
      throw parse_error("cannot parse zz angle '" + arg + "'");
    }
  }
  return load_gate(source);
}

}  // namespace caplab
