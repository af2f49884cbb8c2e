#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "caplab/layout.hpp"

namespace caplab {

using cplx = std::complex<double>;

/// Normalized pure state over a labeled tensor factorization.
class StateVector {
 public:
  /// Empty placeholder (used in report structs before they are filled in).
  StateVector() = default;

  /// Validates that the amplitude vector matches the layout dimension and is
  /// normalized to 1 within 1e-12.
  StateVector(SubsystemLayout layout, Eigen::VectorXcd amplitudes);

  /// Normalizes the amplitudes instead of rejecting them (throws on zero norm).
  static StateVector normalized(SubsystemLayout layout, Eigen::VectorXcd amplitudes);

  const SubsystemLayout& layout() const { return layout_; }
  const Eigen::VectorXcd& amplitudes() const { return amp_; }
  long dim() const { return amp_.size(); }

  cplx overlap(const StateVector& other) const;

 private:
  SubsystemLayout layout_;
  Eigen::VectorXcd amp_;
};

/// Positive semidefinite, unit-trace operator over a labeled factorization.
class DensityOperator {
 public:
  /// Validates hermiticity (anti-Hermitian part below 1e-9), unit trace
  /// within 1e-12 and eigenvalues >= -1e-10. The stored matrix is the
  /// symmetrized (rho + rho^dagger)/2.
  DensityOperator(SubsystemLayout layout, Eigen::MatrixXcd matrix);

  static DensityOperator from_state(const StateVector& psi);

  const SubsystemLayout& layout() const { return layout_; }
  const Eigen::MatrixXcd& matrix() const { return mat_; }

 private:
  SubsystemLayout layout_;
  Eigen::MatrixXcd mat_;
};

/// (1/sqrt(d)) sum_j |jj> on a two-factor layout of dims (d, d).
StateVector max_entangled(int d, const std::string& left = "L",
                          const std::string& right = "R");

/// Kronecker product of two states; layouts are concatenated, so labels must
/// not clash.
StateVector tensor(const StateVector& a, const StateVector& b);

/// Reduced operator on the kept factors, original factor order preserved.
DensityOperator partial_trace(const DensityOperator& rho,
                              const std::vector<std::string>& keep);
/// Same, computed directly from a pure state.
DensityOperator partial_trace(const StateVector& psi,
                              const std::vector<std::string>& keep);

/// -sum lambda_i log2 lambda_i over eigenvalues above 1e-12.
double von_neumann_entropy(const DensityOperator& rho);

/// Entropy of the reduced state after tracing out the `cut` factors (ebits).
/// `cut` must be a nonempty proper subset of the layout labels.
double entanglement_entropy(const StateVector& psi,
                            const std::vector<std::string>& cut);

/// Entropy of a probability vector (entries below 1e-12 contribute zero).
double shannon_entropy(const Eigen::VectorXd& p);

/// Haar-distributed pure state, deterministic per seed.
StateVector random_state(const SubsystemLayout& layout, std::uint64_t seed);

/// U |psi>; U must be square of the layout's total dimension.
StateVector apply_unitary(const Eigen::MatrixXcd& u, const StateVector& psi);

/// Reorder the tensor factors (amplitudes are permuted accordingly).
StateVector permute_factors(const StateVector& psi,
                            const std::vector<std::string>& new_order);

/// Rename factor labels in place; dimensions are untouched.
StateVector relabel(const StateVector& psi, const std::vector<std::string>& new_labels);

/// Reinterpret one factor as several adjacent ones (row-major split); pure
/// metadata change.
StateVector split_factor(const StateVector& psi, const std::string& label,
                         const std::vector<Factor>& parts);

/// Merge a run of adjacent factors into one; inverse of split_factor.
StateVector merge_factors(const StateVector& psi,
                          const std::vector<std::string>& labels,
                          const std::string& merged_label);

namespace detail {
/// Entropy across a contiguous split: amplitudes reshaped to rows x cols,
/// rows indexed by the leading factors. Used on hot optimizer paths.
double entropy_of_split(const Eigen::VectorXcd& amp, long rows, long cols);
}  // namespace detail

}  // namespace caplab
