#include "caplab/unitary.hpp"

#include <cmath>
#include <numbers>

#include "caplab/errors.hpp"

namespace caplab {

namespace {
const cplx kI(0.0, 1.0);
}

BipartiteGate::BipartiteGate(int d_a, int d_b, Eigen::MatrixXcd matrix,
                             double unitarity_tol)
    : d_a_(d_a), d_b_(d_b), mat_(std::move(matrix)) {
  if (d_a < 1 || d_b < 1) throw layout_error("gate dimensions must be >= 1");
  const long n = dim();
  if (mat_.rows() != n || mat_.cols() != n)
    throw layout_error("gate matrix side does not match d_a*d_b");
  const double resid =
      (mat_.adjoint() * mat_ - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (resid > unitarity_tol)
    throw validity_error("gate is not unitary: residual " + std::to_string(resid));
}

BipartiteGate BipartiteGate::dagger() const {
  return BipartiteGate(d_a_, d_b_, mat_.adjoint());
}

WeylSet weyl_set(int d) {
  if (d < 1) throw layout_error("Weyl set needs dimension >= 1");
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(d, d);
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(d, d);
  const double w = 2.0 * std::numbers::pi / d;
  for (int j = 0; j < d; ++j) {
    x((j + 1) % d, j) = 1.0;
    z(j, j) = std::polar(1.0, w * j);
  }
  WeylSet set;
  set.d = d;
  set.operators.reserve(static_cast<size_t>(d) * d);
  Eigen::MatrixXcd xa = Eigen::MatrixXcd::Identity(d, d);
  for (int a = 0; a < d; ++a) {
    Eigen::MatrixXcd v = xa;
    for (int b = 0; b < d; ++b) {
      set.operators.push_back(v);
      v = v * z;
    }
    xa = x * xa;
  }
  return set;
}

BipartiteGate identity_gate(int d_a, int d_b) {
  const long n = static_cast<long>(d_a) * d_b;
  return BipartiteGate(d_a, d_b, Eigen::MatrixXcd::Identity(n, n));
}

BipartiteGate swap_gate(int d) {
  const long n = static_cast<long>(d) * d;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(static_cast<long>(j) * d + i, static_cast<long>(i) * d + j) = 1.0;
  return BipartiteGate(d, d, std::move(m));
}

BipartiteGate cnot_gate() {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
  m(2, 2) = m(3, 3) = 0.0;
  m(2, 3) = m(3, 2) = 1.0;
  return BipartiteGate(2, 2, m);
}

BipartiteGate cz_gate() {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
  m(3, 3) = -1.0;
  return BipartiteGate(2, 2, m);
}

BipartiteGate gate_zz(double alpha) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  const cplx p = std::polar(1.0, alpha);
  m(0, 0) = p;
  m(1, 1) = std::conj(p);
  m(2, 2) = std::conj(p);
  m(3, 3) = p;
  return BipartiteGate(2, 2, m);
}

BipartiteGate swapped(const BipartiteGate& gate) {
  const int da = gate.d_a(), db = gate.d_b();
  const long n = gate.dim();
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(n, n);
  for (int a = 0; a < da; ++a)
    for (int b = 0; b < db; ++b)
      s(static_cast<long>(b) * da + a, static_cast<long>(a) * db + b) = 1.0;
  return BipartiteGate(db, da, s * gate.matrix() * s.transpose());
}

Eigen::MatrixXcd embed_on(const Eigen::MatrixXcd& op, const SubsystemLayout& layout,
                          const std::vector<std::string>& labels) {
  long sub_dim = 1;
  std::vector<long> sub_strides_in_full;
  std::vector<int> sub_dims;
  for (const auto& l : labels) {
    const int pos = layout.position(l);
    sub_strides_in_full.push_back(layout.strides()[pos]);
    sub_dims.push_back(layout.factors()[pos].dim);
    sub_dim *= layout.factors()[pos].dim;
  }
  if (op.rows() != sub_dim || op.cols() != sub_dim)
    throw layout_error("operator side does not match the listed factors");

  // Offset in the full index of each sub-space basis state.
  std::vector<long> sub_off(sub_dim);
  for (long s = 0; s < sub_dim; ++s) {
    long rem = s, off = 0;
    for (int i = static_cast<int>(sub_dims.size()) - 1; i >= 0; --i) {
      off += (rem % sub_dims[i]) * sub_strides_in_full[i];
      rem /= sub_dims[i];
    }
    sub_off[s] = off;
  }
  // Offsets of the spectator factors.
  const long n = layout.total_dim();
  const long rest_dim = n / sub_dim;
  std::vector<long> rest_off;
  rest_off.reserve(rest_dim);
  std::vector<long> rest_strides;
  std::vector<int> rest_dims;
  for (int i = 0; i < layout.num_factors(); ++i) {
    const auto& f = layout.factors()[i];
    if (std::find(labels.begin(), labels.end(), f.label) == labels.end()) {
      rest_strides.push_back(layout.strides()[i]);
      rest_dims.push_back(f.dim);
    }
  }
  for (long r = 0; r < rest_dim; ++r) {
    long rem = r, off = 0;
    for (int i = static_cast<int>(rest_dims.size()) - 1; i >= 0; --i) {
      off += (rem % rest_dims[i]) * rest_strides[i];
      rem /= rest_dims[i];
    }
    rest_off.push_back(off);
  }

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (long r = 0; r < rest_dim; ++r)
    for (long sr = 0; sr < sub_dim; ++sr)
      for (long sc = 0; sc < sub_dim; ++sc)
        out(rest_off[r] + sub_off[sr], rest_off[r] + sub_off[sc]) = op(sr, sc);
  return out;
}

Eigen::MatrixXcd embed(const BipartiteGate& gate, const SubsystemLayout& layout,
                       const std::string& label_a, const std::string& label_b) {
  if (layout.dim(label_a) != gate.d_a() || layout.dim(label_b) != gate.d_b())
    throw layout_error("layout factor dimensions do not match the gate");
  return embed_on(gate.matrix(), layout, {label_a, label_b});
}

Eigen::VectorXd operator_schmidt(const BipartiteGate& gate) {
  const int da = gate.d_a(), db = gate.d_b();
  Eigen::MatrixXcd r(static_cast<long>(da) * da, static_cast<long>(db) * db);
  const auto& m = gate.matrix();
  for (int ao = 0; ao < da; ++ao)
    for (int ai = 0; ai < da; ++ai)
      for (int bo = 0; bo < db; ++bo)
        for (int bi = 0; bi < db; ++bi)
          r(static_cast<long>(ao) * da + ai, static_cast<long>(bo) * db + bi) =
              m(static_cast<long>(ao) * db + bo, static_cast<long>(ai) * db + bi);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(r);
  return svd.singularValues();
}

double schmidt_entropy(const Eigen::MatrixXcd& u, int d_a, int d_b) {
  BipartiteGate g(d_a, d_b, u, 1e-8);
  const Eigen::VectorXd s = operator_schmidt(g);
  const double total = static_cast<double>(d_a) * d_b;
  Eigen::VectorXd p = s.array().square() / total;
  return shannon_entropy(p);
}

Eigen::MatrixXcd unitary_from_generator(const Eigen::MatrixXcd& h) {
  const double anti = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (anti > 1e-9)
    throw validity_error("generator is not Hermitian: residual " + std::to_string(anti));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (h + h.adjoint().eval()));
  Eigen::VectorXcd phases(es.eigenvalues().size());
  for (long i = 0; i < phases.size(); ++i)
    phases(i) = std::polar(1.0, es.eigenvalues()(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::MatrixXcd haar_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(i, j) = cplx(re, im);
    }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return q;
}

Eigen::MatrixXcd haar_unitary(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return haar_unitary(n, rng);
}

BipartiteGate random_gate(int d_a, int d_b, std::uint64_t seed) {
  return BipartiteGate(d_a, d_b, haar_unitary(d_a * d_b, seed));
}

Eigen::MatrixXcd swap_groups_operator(const SubsystemLayout& layout,
                                      const std::vector<std::string>& group_x,
                                      const std::vector<std::string>& group_y) {
  if (layout.dim_of(group_x) != layout.dim_of(group_y))
    throw layout_error("swapped groups must have equal total dimension");
  const long n = layout.total_dim();

  auto group_info = [&](const std::vector<std::string>& labels) {
    std::vector<long> strides;
    std::vector<int> dims;
    for (const auto& l : labels) {
      const int pos = layout.position(l);
      strides.push_back(layout.strides()[pos]);
      dims.push_back(layout.factors()[pos].dim);
    }
    return std::pair(strides, dims);
  };
  const auto [xs, xd] = group_info(group_x);
  const auto [ys, yd] = group_info(group_y);

  auto read = [](long idx, const std::vector<long>& strides, const std::vector<int>& dims) {
    long v = 0;
    for (size_t i = 0; i < dims.size(); ++i) v = v * dims[i] + (idx / strides[i]) % dims[i];
    return v;
  };
  auto write = [](long idx, long v, const std::vector<long>& strides,
                  const std::vector<int>& dims) {
    for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
      const long old_digit = (idx / strides[i]) % dims[i];
      idx += (v % dims[i] - old_digit) * strides[i];
      v /= dims[i];
    }
    return idx;
  };

  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
  for (long c = 0; c < n; ++c) {
    const long vx = read(c, xs, xd);
    const long vy = read(c, ys, yd);
    const long r = write(write(c, vy, xs, xd), vx, ys, yd);
    p(r, c) = 1.0;
  }
  return p;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

Eigen::Matrix2cd pauli_y() {
  Eigen::Matrix2cd m;
  m << 0, -kI, kI, 0;
  return m;
}

Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace caplab
