#include "caplab/state.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "caplab/errors.hpp"

namespace caplab {

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kHermTol = 1e-9;
constexpr double kEigCutoff = 1e-12;

double log2_safe(double x) { return std::log2(x); }

}  // namespace

StateVector::StateVector(SubsystemLayout layout, Eigen::VectorXcd amplitudes)
    : layout_(std::move(layout)), amp_(std::move(amplitudes)) {
  if (amp_.size() != layout_.total_dim())
    throw layout_error("amplitude vector length " + std::to_string(amp_.size()) +
                       " does not match layout " + layout_.to_string());
  const double n = amp_.norm();
  if (std::abs(n - 1.0) > kNormTol)
    throw validity_error("state norm " + std::to_string(n) + " is not 1 within 1e-12");
}

StateVector StateVector::normalized(SubsystemLayout layout, Eigen::VectorXcd amplitudes) {
  const double n = amplitudes.norm();
  if (n < 1e-14) throw validity_error("cannot normalize a zero amplitude vector");
  StateVector out;
  out.layout_ = std::move(layout);
  out.amp_ = amplitudes / n;
  if (out.amp_.size() != out.layout_.total_dim())
    throw layout_error("amplitude vector length does not match layout");
  return out;
}

cplx StateVector::overlap(const StateVector& other) const {
  if (other.dim() != dim()) throw layout_error("overlap between different dimensions");
  return amp_.dot(other.amp_);  // conjugates *this
}

DensityOperator::DensityOperator(SubsystemLayout layout, Eigen::MatrixXcd matrix)
    : layout_(std::move(layout)), mat_(std::move(matrix)) {
  const long n = layout_.total_dim();
  if (mat_.rows() != n || mat_.cols() != n)
    throw layout_error("density matrix side does not match layout " + layout_.to_string());
  const double anti = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
  if (anti > kHermTol)
    throw validity_error("anti-Hermitian part " + std::to_string(anti) + " exceeds 1e-9");
  mat_ = 0.5 * (mat_ + mat_.adjoint().eval());
  const double tr = mat_.trace().real();
  if (std::abs(tr - 1.0) > kNormTol)
    throw validity_error("trace " + std::to_string(tr) + " is not 1 within 1e-12");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw validity_error("density operator has eigenvalue below -1e-10");
}

DensityOperator DensityOperator::from_state(const StateVector& psi) {
  return DensityOperator(psi.layout(),
                         psi.amplitudes() * psi.amplitudes().adjoint());
}

StateVector max_entangled(int d, const std::string& left, const std::string& right) {
  if (d < 1) throw layout_error("maximally entangled state needs dimension >= 1");
  SubsystemLayout layout{{left, d}, {right, d}};
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(static_cast<long>(d) * d);
  const double c = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j) amp(static_cast<long>(j) * d + j) = c;
  return StateVector(std::move(layout), std::move(amp));
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  std::vector<Factor> factors = a.layout().factors();
  for (const auto& f : b.layout().factors()) factors.push_back(f);
  SubsystemLayout layout(std::move(factors));  // rejects label clashes
  const long nb = b.dim();
  Eigen::VectorXcd amp(a.dim() * nb);
  for (long i = 0; i < a.dim(); ++i)
    amp.segment(i * nb, nb) = a.amplitudes()(i) * b.amplitudes();
  return StateVector(std::move(layout), std::move(amp));
}

namespace {

// Shared index bookkeeping for partial traces: strides of kept and traced
// factors inside the full layout, in their original order.
struct TraceIndexer {
  std::vector<long> keep_strides, trace_strides;
  std::vector<int> keep_dims, trace_dims;
  long keep_dim = 1, trace_dim = 1;

  TraceIndexer(const SubsystemLayout& layout, const std::vector<std::string>& keep) {
    for (const auto& l : keep) layout.position(l);  // validates labels
    for (int i = 0; i < layout.num_factors(); ++i) {
      const auto& f = layout.factors()[i];
      const bool kept =
          std::find(keep.begin(), keep.end(), f.label) != keep.end();
      if (kept) {
        keep_strides.push_back(layout.strides()[i]);
        keep_dims.push_back(f.dim);
        keep_dim *= f.dim;
      } else {
        trace_strides.push_back(layout.strides()[i]);
        trace_dims.push_back(f.dim);
        trace_dim *= f.dim;
      }
    }
  }

  // Full-layout offset of the k-th kept basis vector (t-th traced one).
  long offset(const std::vector<long>& strides, const std::vector<int>& dims,
              long sub) const {
    long off = 0;
    for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
      off += (sub % dims[i]) * strides[i];
      sub /= dims[i];
    }
    return off;
  }

  std::vector<long> keep_offsets() const {
    std::vector<long> out(keep_dim);
    for (long k = 0; k < keep_dim; ++k) out[k] = offset(keep_strides, keep_dims, k);
    return out;
  }
  std::vector<long> trace_offsets() const {
    std::vector<long> out(trace_dim);
    for (long t = 0; t < trace_dim; ++t) out[t] = offset(trace_strides, trace_dims, t);
    return out;
  }
};

}  // namespace

DensityOperator partial_trace(const DensityOperator& rho,
                              const std::vector<std::string>& keep) {
  const TraceIndexer ix(rho.layout(), keep);
  const auto koff = ix.keep_offsets();
  const auto toff = ix.trace_offsets();
  Eigen::MatrixXcd red = Eigen::MatrixXcd::Zero(ix.keep_dim, ix.keep_dim);
  const auto& m = rho.matrix();
  for (long i = 0; i < ix.keep_dim; ++i)
    for (long j = 0; j < ix.keep_dim; ++j) {
      cplx s = 0;
      for (long t = 0; t < ix.trace_dim; ++t) s += m(koff[i] + toff[t], koff[j] + toff[t]);
      red(i, j) = s;
    }
  return DensityOperator(rho.layout().subset(keep), std::move(red));
}

DensityOperator partial_trace(const StateVector& psi,
                              const std::vector<std::string>& keep) {
  const TraceIndexer ix(psi.layout(), keep);
  const auto koff = ix.keep_offsets();
  const auto toff = ix.trace_offsets();
  // Reduced state = A A^dagger for the kept x traced reshaping of psi.
  Eigen::MatrixXcd a(ix.keep_dim, ix.trace_dim);
  const auto& v = psi.amplitudes();
  for (long i = 0; i < ix.keep_dim; ++i)
    for (long t = 0; t < ix.trace_dim; ++t) a(i, t) = v(koff[i] + toff[t]);
  return DensityOperator(psi.layout().subset(keep), a * a.adjoint());
}

double von_neumann_entropy(const DensityOperator& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix(), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (long i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()(i);
    if (l > kEigCutoff) s -= l * log2_safe(l);
  }
  return s;
}

double shannon_entropy(const Eigen::VectorXd& p) {
  double s = 0.0;
  for (long i = 0; i < p.size(); ++i)
    if (p(i) > kEigCutoff) s -= p(i) * log2_safe(p(i));
  return s;
}

double entanglement_entropy(const StateVector& psi,
                            const std::vector<std::string>& cut) {
  if (cut.empty() || cut.size() >= psi.layout().factors().size())
    throw layout_error("cut must be a nonempty proper subset of the factors");
  const TraceIndexer ix(psi.layout(), cut);  // "kept" = traced-out side; symmetric
  const auto koff = ix.keep_offsets();
  const auto toff = ix.trace_offsets();
  Eigen::MatrixXcd a(ix.keep_dim, ix.trace_dim);
  const auto& v = psi.amplitudes();
  for (long i = 0; i < ix.keep_dim; ++i)
    for (long t = 0; t < ix.trace_dim; ++t) a(i, t) = v(koff[i] + toff[t]);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  double s = 0.0;
  for (long i = 0; i < svd.singularValues().size(); ++i) {
    const double p = svd.singularValues()(i) * svd.singularValues()(i);
    if (p > kEigCutoff) s -= p * log2_safe(p);
  }
  return s;
}

double detail::entropy_of_split(const Eigen::VectorXcd& amp, long rows, long cols) {
  Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      a(amp.data(), rows, cols);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  double s = 0.0;
  for (long i = 0; i < svd.singularValues().size(); ++i) {
    const double p = svd.singularValues()(i) * svd.singularValues()(i);
    if (p > kEigCutoff) s -= p * log2_safe(p);
  }
  return s;
}

StateVector random_state(const SubsystemLayout& layout, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd amp(layout.total_dim());
  for (long i = 0; i < amp.size(); ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    amp(i) = cplx(re, im);
  }
  return StateVector::normalized(layout, std::move(amp));
}

StateVector apply_unitary(const Eigen::MatrixXcd& u, const StateVector& psi) {
  if (u.rows() != psi.dim() || u.cols() != psi.dim())
    throw layout_error("operator side does not match state dimension");
  return StateVector(psi.layout(), u * psi.amplitudes());
}

StateVector permute_factors(const StateVector& psi,
                            const std::vector<std::string>& new_order) {
  const auto& layout = psi.layout();
  if (static_cast<int>(new_order.size()) != layout.num_factors())
    throw layout_error("permutation must list every factor exactly once");
  std::vector<int> src_pos;
  std::vector<Factor> new_factors;
  for (const auto& l : new_order) {
    src_pos.push_back(layout.position(l));
    new_factors.push_back(layout.factors()[src_pos.back()]);
  }
  SubsystemLayout new_layout(new_factors);
  Eigen::VectorXcd amp(psi.dim());
  const auto& v = psi.amplitudes();
  std::vector<int> new_digits(new_order.size());
  std::vector<int> old_digits(new_order.size());
  for (long i = 0; i < psi.dim(); ++i) {
    long rem = i;
    for (size_t k = 0; k < new_order.size(); ++k) {
      new_digits[k] = static_cast<int>(rem / new_layout.strides()[k]);
      rem %= new_layout.strides()[k];
    }
    for (size_t k = 0; k < new_order.size(); ++k) old_digits[src_pos[k]] = new_digits[k];
    amp(i) = v(layout.index(old_digits));
  }
  return StateVector(std::move(new_layout), std::move(amp));
}

StateVector relabel(const StateVector& psi, const std::vector<std::string>& new_labels) {
  if (static_cast<int>(new_labels.size()) != psi.layout().num_factors())
    throw layout_error("relabel needs one new label per factor");
  std::vector<Factor> factors = psi.layout().factors();
  for (size_t i = 0; i < new_labels.size(); ++i) factors[i].label = new_labels[i];
  return StateVector(SubsystemLayout(std::move(factors)), psi.amplitudes());
}

StateVector split_factor(const StateVector& psi, const std::string& label,
                         const std::vector<Factor>& parts) {
  const int pos = psi.layout().position(label);
  long prod = 1;
  for (const auto& p : parts) prod *= p.dim;
  if (prod != psi.layout().factors()[pos].dim)
    throw layout_error("split parts do not multiply to the factor dimension");
  std::vector<Factor> factors;
  for (int i = 0; i < psi.layout().num_factors(); ++i) {
    if (i == pos)
      for (const auto& p : parts) factors.push_back(p);
    else
      factors.push_back(psi.layout().factors()[i]);
  }
  return StateVector(SubsystemLayout(std::move(factors)), psi.amplitudes());
}

StateVector merge_factors(const StateVector& psi,
                          const std::vector<std::string>& labels,
                          const std::string& merged_label) {
  if (labels.empty()) throw layout_error("merge needs at least one label");
  const int first = psi.layout().position(labels.front());
  long prod = 1;
  for (size_t i = 0; i < labels.size(); ++i) {
    const int pos = psi.layout().position(labels[i]);
    if (pos != first + static_cast<int>(i))
      throw layout_error("merge requires adjacent factors in listed order");
    prod *= psi.layout().factors()[pos].dim;
  }
  std::vector<Factor> factors;
  for (int i = 0; i < psi.layout().num_factors(); ++i) {
    if (i == first) factors.push_back({merged_label, static_cast<int>(prod)});
    if (i >= first && i < first + static_cast<int>(labels.size())) continue;
    factors.push_back(psi.layout().factors()[i]);
  }
  return StateVector(SubsystemLayout(std::move(factors)), psi.amplitudes());
}

}  // namespace caplab
