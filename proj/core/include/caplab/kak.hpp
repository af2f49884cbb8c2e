#pragma once

#include <Eigen/Dense>
#include <array>

#include "caplab/unitary.hpp"

namespace caplab {

/// Two-qubit canonical form:
///   gate = global_phase * (after_a (x) after_b) * U_d(alphas) * (before_a (x) before_b)
/// with U_d(a) = exp(-i sum_j a_j sigma_j (x) sigma_j) and the angles in the
/// Weyl chamber pi/4 >= a1 >= a2 >= |a3|. All four local factors have unit
/// determinant.
struct CanonicalForm {
  std::array<double, 3> alphas{};
  Eigen::Matrix2cd before_a, before_b;
  Eigen::Matrix2cd after_a, after_b;
  cplx global_phase{1.0, 0.0};

  /// exp(-i sum_j alphas_j sigma_j (x) sigma_j).
  Eigen::Matrix4cd canonical_matrix() const;
  Eigen::Matrix4cd reconstruct() const;
};

Eigen::Matrix4cd canonical_gate(const std::array<double, 3>& alphas);

/// Magic-basis KAK decomposition of a two-qubit gate. Throws
/// unsupported_error unless d_a = d_b = 2; throws validity_error if the
/// reconstruction residual exceeds 1e-9.
CanonicalForm kak_decompose(const BipartiteGate& gate);

/// Nearest Kronecker factorization of a (tensor-product) 4x4 matrix:
/// returns (a, b) with k ~= a (x) b, both factors scaled so the product is
/// exact for true tensor products.
std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> kron_factor(const Eigen::Matrix4cd& k);

}  // namespace caplab
