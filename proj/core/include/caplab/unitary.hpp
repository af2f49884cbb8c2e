#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "caplab/state.hpp"

namespace caplab {

/// Unitary on A_U (x) B_U, stored row-major with A_U as the most significant
/// index, matching the layout convention.
class BipartiteGate {
 public:
  /// Validates ||U^dagger U - I||_max against `unitarity_tol`.
  BipartiteGate(int d_a, int d_b, Eigen::MatrixXcd matrix,
                double unitarity_tol = 1e-10);

  int d_a() const { return d_a_; }
  int d_b() const { return d_b_; }
  long dim() const { return static_cast<long>(d_a_) * d_b_; }
  const Eigen::MatrixXcd& matrix() const { return mat_; }

  BipartiteGate dagger() const;

 private:
  int d_a_, d_b_;
  Eigen::MatrixXcd mat_;
};

/// The d^2 shift/clock products V_{ab} = X^a Z^b.
struct WeylSet {
  int d = 0;
  std::vector<Eigen::MatrixXcd> operators;  // index j = a*d + b
};

/// Builds the Weyl set for dimension d: X|j> = |j+1 mod d>, Z|j> = w^j |j>.
WeylSet weyl_set(int d);

// Named gates.
BipartiteGate identity_gate(int d_a = 2, int d_b = 2);
BipartiteGate swap_gate(int d = 2);
BipartiteGate cnot_gate();
BipartiteGate cz_gate();
/// exp(i alpha sigma_z (x) sigma_z) = diag(e^{ia}, e^{-ia}, e^{-ia}, e^{ia}).
BipartiteGate gate_zz(double alpha);

/// Same gate viewed from the other side: d_a and d_b exchanged, matrix
/// conjugated by the factor swap.
BipartiteGate swapped(const BipartiteGate& gate);

/// Embed an operator acting on the listed factors (row-major over that list)
/// into the full layout, identity elsewhere.
Eigen::MatrixXcd embed_on(const Eigen::MatrixXcd& op, const SubsystemLayout& layout,
                          const std::vector<std::string>& labels);

/// Embed a bipartite gate on the factors labelled A_U and B_U.
Eigen::MatrixXcd embed(const BipartiteGate& gate, const SubsystemLayout& layout,
                       const std::string& label_a = "A_U",
                       const std::string& label_b = "B_U");

/// Operator Schmidt coefficients: singular values of the realigned
/// d_a^2 x d_b^2 matrix, descending. Their squares sum to d_a*d_b.
Eigen::VectorXd operator_schmidt(const BipartiteGate& gate);

/// Entropy of the normalized squared operator Schmidt coefficients of an
/// arbitrary unitary on A_U (x) B_U (the gate-state duality route).
double schmidt_entropy(const Eigen::MatrixXcd& u, int d_a, int d_b);

/// exp(iH) for Hermitian H (eigendecomposition route).
Eigen::MatrixXcd unitary_from_generator(const Eigen::MatrixXcd& h);

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the R
/// diagonal phases fixed.
Eigen::MatrixXcd haar_unitary(int n, std::mt19937_64& rng);
Eigen::MatrixXcd haar_unitary(int n, std::uint64_t seed);
BipartiteGate random_gate(int d_a, int d_b, std::uint64_t seed);

/// Permutation unitary exchanging the (row-major) contents of two groups of
/// factors with equal total dimension.
Eigen::MatrixXcd swap_groups_operator(const SubsystemLayout& layout,
                                      const std::vector<std::string>& group_x,
                                      const std::vector<std::string>& group_y);

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// Pauli matrices.
Eigen::Matrix2cd pauli_x();
Eigen::Matrix2cd pauli_y();
Eigen::Matrix2cd pauli_z();

}  // namespace caplab
