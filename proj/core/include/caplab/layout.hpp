#pragma once

#include <initializer_list>
#include <string>
#include <vector>

namespace caplab {

/// One named tensor factor.
struct Factor {
  std::string label;
  int dim = 1;
};

/// Ordered list of named tensor factors.
///
/// Composite indices are row-major over the listed factor order: the leftmost
/// factor is the most significant digit. Every module in the library shares
/// this convention.
class SubsystemLayout {
 public:
  SubsystemLayout() = default;
  SubsystemLayout(std::initializer_list<Factor> factors);
  explicit SubsystemLayout(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const { return factors_; }
  int num_factors() const { return static_cast<int>(factors_.size()); }
  long total_dim() const { return total_dim_; }

  bool contains(const std::string& label) const;
  /// Position of the factor with this label; throws layout_error if absent.
  int position(const std::string& label) const;
  int dim(const std::string& label) const;

  /// Product of the dims of the listed labels.
  long dim_of(const std::vector<std::string>& labels) const;

  /// Layout made of the factors with the given labels, original order kept.
  SubsystemLayout subset(const std::vector<std::string>& labels) const;
  /// Labels of all factors not in the given set.
  std::vector<std::string> complement(const std::vector<std::string>& labels) const;
  std::vector<std::string> labels() const;

  /// Row-major strides: stride(i) = product of dims of factors after i.
  const std::vector<long>& strides() const { return strides_; }

  /// Decompose a composite index into per-factor digits.
  std::vector<int> digits(long index) const;
  /// Recompose a composite index from per-factor digits.
  long index(const std::vector<int>& digits) const;

  bool operator==(const SubsystemLayout& other) const;
  bool operator!=(const SubsystemLayout& other) const { return !(*this == other); }

  std::string to_string() const;

 private:
  void init();

  std::vector<Factor> factors_;
  std::vector<long> strides_;
  long total_dim_ = 1;
};

}  // namespace caplab
