#include "caplab/kak.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "caplab/errors.hpp"

namespace caplab {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

// Magic basis: columns are (|00>+|11>)/s2, i(|01>+|10>)/s2, (|01>-|10>)/s2,
// i(|00>-|11>)/s2. Conjugation maps SU(2)xSU(2) onto SO(4) and makes the
// canonical gates diagonal.
Eigen::Matrix4cd magic_basis() {
  Eigen::Matrix4cd m;
  const double s = 1.0 / std::sqrt(2.0);
  m << s, 0, 0, kI * s,
       0, kI * s, s, 0,
       0, kI * s, -s, 0,
       s, 0, 0, -kI * s;
  return m;
}

Eigen::Matrix2cd pauli(int j) {
  switch (j) {
    case 0: return pauli_x();
    case 1: return pauli_y();
    default: return pauli_z();
  }
}

// Orthogonal diagonalization of a symmetric unitary matrix m2 = X + iY:
// X and Y are commuting real symmetric matrices, so they share a real
// orthogonal eigenbasis. Eigenvectors of X are refined inside each
// near-degenerate group by diagonalizing the projected Y block, then X is
// re-refined inside groups degenerate in both, which resolves fine X
// structure that the first pass grouped away.
Eigen::Matrix4d diagonalize_symmetric_unitary(const Eigen::Matrix4cd& m2) {
  const Eigen::Matrix4d x = m2.real();
  const Eigen::Matrix4d y = m2.imag();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> esx(x);
  Eigen::Matrix4d p = esx.eigenvectors();

  constexpr double kGroupTol = 1e-6;
  auto rayleigh = [&p](const Eigen::Matrix4d& m, int c) {
    return p.col(c).dot(m * p.col(c));
  };
  // Diagonalize `m` inside every run of consecutive columns whose key values
  // all coincide within the tolerance.
  auto refine = [&p](const Eigen::Matrix4d& m,
                     const std::vector<Eigen::Vector4d>& keys) {
    int start = 0;
    while (start < 4) {
      int end = start + 1;
      auto same = [&](int a, int b) {
        for (const auto& k : keys)
          if (std::abs(k(a) - k(b)) >= kGroupTol) return false;
        return true;
      };
      while (end < 4 && same(end, end - 1)) ++end;
      const int g = end - start;
      if (g > 1) {
        const Eigen::MatrixXd block =
            p.middleCols(start, g).transpose() * m * p.middleCols(start, g);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
            0.5 * (block + block.transpose()));
        p.middleCols(start, g) = p.middleCols(start, g) * es.eigenvectors();
      }
      start = end;
    }
  };

  refine(y, {esx.eigenvalues()});
  Eigen::Vector4d xv, yv;
  for (int c = 0; c < 4; ++c) {
    xv(c) = rayleigh(x, c);
    yv(c) = rayleigh(y, c);
  }
  refine(x, {xv, yv});

  // Deterministic column signs: largest-magnitude entry positive.
  for (int c = 0; c < 4; ++c) {
    int imax = 0;
    for (int r = 1; r < 4; ++r)
      if (std::abs(p(r, c)) > std::abs(p(imax, c))) imax = r;
    if (p(imax, c) < 0) p.col(c) = -p.col(c);
  }
  if (p.determinant() < 0) p.col(3) = -p.col(3);
  return p;
}

struct Folding {
  Eigen::Vector3d alpha;
  Eigen::Matrix4cd l1, l2;  // gate = phase * l1 * U_d(alpha) * l2
  cplx phase;

  // alpha_j += s*pi/2, compensated through l1 and the global phase:
  // U_d(a) = (i s) (sigma_j (x) sigma_j) U_d(a + s pi/2 e_j).
  void shift(int j, int s) {
    alpha(j) += s * kPi / 2.0;
    const Eigen::Matrix4cd c = kron(pauli(j), pauli(j));
    l1 = l1 * c;
    phase *= (s > 0) ? kI : -kI;
  }

  // Negate alpha_j and alpha_k via conjugation with sigma_l on qubit A.
  void flip(int j, int k) {
    const int l = 3 - j - k;
    const Eigen::Matrix4cd c = kron(pauli(l), Eigen::Matrix2cd::Identity());
    alpha(j) = -alpha(j);
    alpha(k) = -alpha(k);
    l1 = l1 * c;
    l2 = c * l2;
  }

  // Exchange alpha_j and alpha_k via the same axis-exchanging rotation on
  // both qubits (signs cancel in the tensor square).
  void swap(int j, int k) {
    const int l = 3 - j - k;
    Eigen::Matrix2cd r;
    if (l == 2) {  // x <-> y: rotate about z
      r << std::polar(1.0, -kPi / 4), 0, 0, std::polar(1.0, kPi / 4);
    } else if (l == 1) {  // x <-> z: Hadamard
      r << 1, 1, 1, -1;
      r /= std::sqrt(2.0);
    } else {  // y <-> z: rotate about x
      r = (Eigen::Matrix2cd::Identity() - kI * pauli_x()) / std::sqrt(2.0);
    }
    const Eigen::Matrix4cd c = kron(r, r);
    std::swap(alpha(j), alpha(k));
    l1 = l1 * c.adjoint();
    l2 = c * l2;
  }
};

}  // namespace

Eigen::Matrix4cd canonical_gate(const std::array<double, 3>& alphas) {
  Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
  for (int j = 0; j < 3; ++j) h += alphas[j] * kron(pauli(j), pauli(j));
  // The generator is Hermitian with commuting terms; exponentiate directly.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
  Eigen::Vector4cd ph;
  for (int i = 0; i < 4; ++i) ph(i) = std::polar(1.0, -es.eigenvalues()(i));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::Matrix4cd CanonicalForm::canonical_matrix() const {
  return canonical_gate(alphas);
}

Eigen::Matrix4cd CanonicalForm::reconstruct() const {
  return global_phase * kron(after_a, after_b) * canonical_matrix() *
         kron(before_a, before_b);
}

std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> kron_factor(const Eigen::Matrix4cd& k) {
  // Rearrange K[(i,k),(j,l)] into R[(i,j),(k,l)] = A(i,j) B(k,l); a tensor
  // product is rank one there.
  Eigen::Matrix4cd r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int kk = 0; kk < 2; ++kk)
        for (int l = 0; l < 2; ++l)
          r(2 * i + j, 2 * kk + l) = k(2 * i + kk, 2 * j + l);
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double s = std::sqrt(svd.singularValues()(0));
  Eigen::Matrix2cd a, b;
  a << svd.matrixU()(0, 0), svd.matrixU()(1, 0), svd.matrixU()(2, 0), svd.matrixU()(3, 0);
  a *= s;
  const Eigen::Vector4cd v = svd.matrixV().col(0).conjugate();
  b << v(0), v(1), v(2), v(3);
  b *= s;
  return {a, b};
}

CanonicalForm kak_decompose(const BipartiteGate& gate) {
  if (gate.d_a() != 2 || gate.d_b() != 2)
    throw unsupported_error("canonical form is only defined for two qubits");

  const Eigen::Matrix4cd m = magic_basis();
  const Eigen::Matrix4cd mdag = m.adjoint();

  // Normalize to SU(4), keeping the removed phase.
  const cplx det = gate.matrix().determinant();
  const double phase0 = std::arg(det) / 4.0;
  const Eigen::Matrix4cd u = gate.matrix() * std::polar(1.0, -phase0);

  const Eigen::Matrix4cd mu = mdag * u * m;
  const Eigen::Matrix4cd m2 = mu.transpose() * mu;
  const Eigen::Matrix4d p = diagonalize_symmetric_unitary(m2);

  // Eigenphase halves with the branch of the last entry fixed so that the
  // diagonal square root has unit determinant.
  Eigen::Vector4d theta;
  for (int j = 0; j < 3; ++j) {
    const cplx d = (p.col(j).transpose() * m2 * p.col(j))(0);
    theta(j) = 0.5 * std::arg(d);
  }
  theta(3) = -theta(0) - theta(1) - theta(2);
  Eigen::Vector4cd aval;
  for (int j = 0; j < 4; ++j) aval(j) = std::polar(1.0, theta(j));

  // mu = o1 * diag(aval) * o2 with o1, o2 in SO(4) (o1 is real by
  // construction; the imaginary part only carries roundoff).
  const Eigen::Matrix4cd o1c = mu * p.cast<cplx>() * aval.cwiseInverse().asDiagonal();
  const Eigen::Matrix4d o1 = o1c.real();
  const Eigen::Matrix4d o2 = p.transpose();

  Folding f;
  // theta = (-a1+a2-a3, -a1-a2+a3, a1+a2+a3, a1-a2-a3) in the magic order.
  f.alpha = Eigen::Vector3d(-(theta(0) + theta(1)) / 2.0, (theta(0) + theta(2)) / 2.0,
                            (theta(1) + theta(2)) / 2.0);
  f.l1 = m * o1.cast<cplx>() * mdag;
  f.l2 = m * o2.cast<cplx>() * mdag;
  f.phase = std::polar(1.0, phase0);

  // Fold into the Weyl chamber pi/4 >= a1 >= a2 >= |a3|.
  for (int j = 0; j < 3; ++j) {
    while (f.alpha(j) <= -kPi / 4.0) f.shift(j, +1);
    while (f.alpha(j) > kPi / 4.0) f.shift(j, -1);
  }
  auto negatives = [&] {
    std::vector<int> n;
    for (int j = 0; j < 3; ++j)
      if (f.alpha(j) < 0) n.push_back(j);
    return n;
  };
  while (negatives().size() >= 2) {
    const auto n = negatives();
    f.flip(n[0], n[1]);
  }
  // Order by magnitude, descending (bubble over the three entries).
  for (int pass = 0; pass < 2; ++pass)
    for (int j = 0; j < 2 - pass; ++j)
      if (std::abs(f.alpha(j)) < std::abs(f.alpha(j + 1))) f.swap(j, j + 1);
  if (f.alpha(0) < 0) f.flip(0, 2);
  if (f.alpha(1) < 0) f.flip(1, 2);
  // Chamber boundary: at a1 = pi/4 the sign of a3 is a gauge choice.
  if (f.alpha(0) > kPi / 4.0 - 1e-10 && f.alpha(2) < -1e-12) {
    f.flip(0, 2);
    f.shift(0, +1);
  }

  // Split the combined locals into single-qubit factors with det 1.
  CanonicalForm out;
  out.alphas = {f.alpha(0), f.alpha(1), f.alpha(2)};
  auto [a1, b1] = kron_factor(f.l1);
  auto [a2, b2] = kron_factor(f.l2);
  auto normalize_su2 = [&](Eigen::Matrix2cd& q) {
    const cplx d = q.determinant();
    const cplx root = std::sqrt(d);
    q /= root;
    return root;
  };
  cplx extra = normalize_su2(a1) * normalize_su2(b1) * normalize_su2(a2) * normalize_su2(b2);
  out.after_a = a1;
  out.after_b = b1;
  out.before_a = a2;
  out.before_b = b2;
  out.global_phase = f.phase * extra;

  const double resid = (out.reconstruct() - gate.matrix()).cwiseAbs().maxCoeff();
  if (resid > 1e-9)
    throw validity_error("canonical decomposition residual " + std::to_string(resid));
  return out;
}

}  // namespace caplab
