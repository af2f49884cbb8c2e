#pragma once

#include <string>

#include "caplab/unitary.hpp"

namespace caplab {

/// Loads a gate from a JSON document {"d_a": int, "d_b": int,
/// "matrix": [[[re, im], ...], ...]} in row-major A_U (x) B_U order.
/// Malformed documents raise parse_error; unitarity is validated at 1e-8 and
/// raises validity_error.
BipartiteGate load_gate(const std::string& path);

/// Writes the same format (full double precision).
void save_gate(const std::string& path, const BipartiteGate& gate);

/// Resolves a gate source: one of the builtin names
/// identity | swap | cnot | cz | zz:<alpha>, else a file path.
BipartiteGate resolve_gate(const std::string& source);

}  // namespace caplab
