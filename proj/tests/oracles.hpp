#pragma once

// Reference implementations used only by the tests. They deliberately avoid
// the library's kernels: operators are dense 2^n matrices built from
// Kronecker products, fermions are explicit Jordan-Wigner matrices, and the
// Slater determinant is expanded by brute force.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "hubqa/gates.hpp"
#include "hubqa/pauli.hpp"

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat pauli_matrix(char p) {
  Mat m(2, 2);
  const cplx i{0, 1};
  switch (p) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m = Mat::Identity(2, 2);
  }
  return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

/// Operator acting as `ops[q]` on qubit q. Qubit 0 is the least significant
/// index bit, so it is the rightmost Kronecker factor.
inline Mat embed(const std::vector<Mat>& ops) {
  Mat out = Mat::Identity(1, 1);
  for (const auto& m : ops) out = kron(m, out);
  return out;
}

inline Mat pauli_string(int n, const std::map<int, hubqa::Pauli>& ops) {
  std::vector<Mat> f(static_cast<std::size_t>(n), Mat::Identity(2, 2));
  for (const auto& [q, p] : ops) f[static_cast<std::size_t>(q)] = pauli_matrix(p == hubqa::Pauli::X ? 'X' : p == hubqa::Pauli::Y ? 'Y' : 'Z');
  return embed(f);
}

inline Mat dense_operator(const hubqa::PauliTermSum& op, int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Mat h = op.identity_offset * Mat::Identity(dim, dim);
  for (const auto& t : op.terms) h += t.coeff * pauli_string(n, t.ops);
  return h;
}

/// Gate matrices written out entry by entry. Two-qubit matrices
/// use the basis |q_a q_b> = |00>, |01>, |10>, |11> with q_a the first listed qubit.
inline Mat gate_matrix(const hubqa::GateOp& g) {
  using hubqa::GateKind;
  const cplx i{0, 1};
  const double r = 1.0 / std::sqrt(2.0);
  const double th = g.angle;
  Mat m;
  switch (g.kind) {
    case GateKind::H: m = Mat(2, 2); m << r, r, r, -r; break;
    case GateKind::PlusX: m = Mat(2, 2); m << r, i * r, i * r, r; break;
    case GateKind::MinusX: m = Mat(2, 2); m << r, -i * r, -i * r, r; break;
    case GateKind::X: m = Mat(2, 2); m << 0, 1, 1, 0; break;
    case GateKind::RZ: m = Mat::Zero(2, 2); m(0, 0) = std::exp(-i * th / 2.0); m(1, 1) = std::exp(i * th / 2.0); break;
    case GateKind::RZZ:
      m = Mat::Zero(4, 4);
      m(0, 0) = m(3, 3) = std::exp(-i * th);
      m(1, 1) = m(2, 2) = std::exp(i * th);
      break;
    case GateKind::CNOT:
      m = Mat::Zero(4, 4);
      m(0, 0) = m(1, 1) = 1;
      m(2, 3) = m(3, 2) = 1;
      break;
    case GateKind::CRY: {
      m = Mat::Identity(4, 4);
      const double c = std::cos(th / 2.0), s = std::sin(th / 2.0);
      m(2, 2) = c;
      m(2, 3) = -s;
      m(3, 2) = s;
      m(3, 3) = c;
      break;
    }
  }
  return m;
}

/// Full 2^n unitary of one gate, by explicit index bookkeeping.
inline Mat full_gate(const hubqa::GateOp& g, int n) {
  const Mat m = gate_matrix(g);
  const Eigen::Index dim = Eigen::Index{1} << n;
  Mat u = Mat::Zero(dim, dim);
  if (g.arity() == 1) {
    const int q = g.qubits[0];
    for (Eigen::Index col = 0; col < dim; ++col) {
      const int b = static_cast<int>((col >> q) & 1);
      for (int out = 0; out < 2; ++out) {
        const Eigen::Index row = (col & ~(Eigen::Index{1} << q)) | (Eigen::Index{out} << q);
        u(row, col) += m(out, b);
      }
    }
    return u;
  }
  const int qa = g.qubits[0], qb = g.qubits[1];
  for (Eigen::Index col = 0; col < dim; ++col) {
    const int in = static_cast<int>(((col >> qa) & 1) * 2 + ((col >> qb) & 1));
    for (int out = 0; out < 4; ++out) {
      Eigen::Index row = col & ~((Eigen::Index{1} << qa) | (Eigen::Index{1} << qb));
      row |= Eigen::Index{(out >> 1) & 1} << qa;
      row |= Eigen::Index{out & 1} << qb;
      u(row, col) += m(out, in);
    }
  }
  return u;
}

template <class Range>
inline Mat circuit_unitary(const Range& gates, int n) {
  Mat u = Mat::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n);
  for (const auto& g : gates) u = full_gate(g, n) * u;
  return u;
}

/// Jordan-Wigner annihilation operator of mode j on n modes.
inline Mat annihilator(int j, int n) {
  Mat lower(2, 2);
  lower << 0, 1, 0, 0;  // |0><1|
  std::vector<Mat> f(static_cast<std::size_t>(n), Mat::Identity(2, 2));
  for (int q = 0; q < j; ++q) f[static_cast<std::size_t>(q)] = pauli_matrix('Z');
  f[static_cast<std::size_t>(j)] = lower;
  return embed(f);
}

using SpMat = Eigen::SparseMatrix<cplx>;

/// Jordan-Wigner annihilation operator of mode j on n modes, as a sparse
/// Kronecker product.
inline SpMat sparse_annihilator(int j, int n) {
  auto factor = [&](int q) {
    SpMat m(2, 2);
    if (q < j) {
      m.insert(0, 0) = 1.0;
      m.insert(1, 1) = -1.0;
    } else if (q == j) {
      m.insert(0, 1) = 1.0;
    } else {
      m.insert(0, 0) = 1.0;
      m.insert(1, 1) = 1.0;
    }
    return m;
  };
  SpMat out = factor(0);
  for (int q = 1; q < n; ++q) out = SpMat(Eigen::kroneckerProduct(factor(q), out));
  return out;
}

/// Sparse form of fock_hubbard, for sizes where dense products are too slow.
inline SpMat fock_hubbard_sparse(int L, double t, double u_eff) {
  const int n = 2 * L;
  std::vector<SpMat> c;
  for (int j = 0; j < n; ++j) c.push_back(sparse_annihilator(j, n));
  const Eigen::Index dim = Eigen::Index{1} << n;
  SpMat h(dim, dim);
  for (int s = 0; s < 2; ++s) {
    for (int j = 0; j + 1 < L; ++j) {
      const int a = s * L + j, b = a + 1;
      const SpMat ca = c[a].adjoint(), cb = c[b].adjoint();
      h -= t * (SpMat(ca * c[b]) + SpMat(cb * c[a]));
    }
  }
  for (int j = 0; j < L; ++j) {
    const SpMat up = c[j].adjoint(), down = c[L + j].adjoint();
    h += u_eff * SpMat(SpMat(up * c[j]) * SpMat(down * c[L + j]));
  }
  return h;
}

/// Hubbard Hamiltonian -t sum c^dag c + U_eff sum n_up n_down on the full Fock
/// space, built from fermion matrices; spin-up site j is mode j, spin-down is L + j.
inline Mat fock_hubbard(int L, double t, double u_eff) {
  const int n = 2 * L;
  std::vector<Mat> c;
  for (int j = 0; j < n; ++j) c.push_back(annihilator(j, n));
  const Eigen::Index dim = Eigen::Index{1} << n;
  Mat h = Mat::Zero(dim, dim);
  for (int s = 0; s < 2; ++s) {
    for (int j = 0; j + 1 < L; ++j) {
      const int a = s * L + j, b = a + 1;
      h -= t * (c[a].adjoint() * c[b] + c[b].adjoint() * c[a]);
    }
  }
  for (int j = 0; j < L; ++j) h += u_eff * (c[j].adjoint() * c[j]) * (c[L + j].adjoint() * c[L + j]);
  return h;
}

/// Indices of basis states with the given particle numbers per spin block.
inline std::vector<Eigen::Index> sector_indices(int L, int n_up, int n_down) {
  std::vector<Eigen::Index> out;
  const std::uint64_t block = (std::uint64_t{1} << L) - 1;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << (2 * L)); ++b) {
    if (std::popcount(b & block) == n_up && std::popcount(b >> L) == n_down) out.push_back(static_cast<Eigen::Index>(b));
  }
  return out;
}

inline Mat restrict(const Mat& m, const std::vector<Eigen::Index>& idx) {
  const auto d = static_cast<Eigen::Index>(idx.size());
  Mat out(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) out(r, c) = m(idx[r], idx[c]);
  return out;
}

inline Mat restrict(const SpMat& m, const std::vector<Eigen::Index>& idx) {
  const auto d = static_cast<Eigen::Index>(idx.size());
  std::vector<Eigen::Index> pos(static_cast<std::size_t>(m.rows()), -1);
  for (Eigen::Index i = 0; i < d; ++i) pos[static_cast<std::size_t>(idx[i])] = i;
  Mat out = Mat::Zero(d, d);
  for (Eigen::Index col = 0; col < m.outerSize(); ++col) {
    for (SpMat::InnerIterator it(m, col); it; ++it) {
      const auto r = pos[static_cast<std::size_t>(it.row())], c = pos[static_cast<std::size_t>(it.col())];
      if (r >= 0 && c >= 0) out(r, c) = it.value();
    }
  }
  return out;
}

inline Eigen::VectorXd spectrum(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  return es.eigenvalues();
}

/// Sector ground energy from the Fock-space matrix.
inline double fock_ground_energy(int L, int n_up, int n_down, double t, double u_eff) {
  return spectrum(restrict(fock_hubbard_sparse(L, t, u_eff), sector_indices(L, n_up, n_down)))[0];
}

/// Slater determinant of orbitals Q_up (spin-up) and Q_down, expanded over
/// occupation patterns: amplitude = det Q_up[:, S_up] * det Q_down[:, S_down].
inline Vec slater_state(const Eigen::MatrixXd& q_up, const Eigen::MatrixXd& q_down, int L) {
  Vec psi = Vec::Zero(Eigen::Index{1} << (2 * L));
  auto minor_det = [&](const Eigen::MatrixXd& q, std::uint64_t mask) {
    if (q.rows() == 0) return mask == 0 ? 1.0 : 0.0;
    if (std::popcount(mask) != q.rows()) return 0.0;
    Eigen::MatrixXd sub(q.rows(), q.rows());
    Eigen::Index col = 0;
    for (int j = 0; j < L; ++j)
      if (mask >> j & 1) sub.col(col++) = q.col(j);
    return sub.determinant();
  };
  const std::uint64_t block = (std::uint64_t{1} << L) - 1;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << (2 * L)); ++b) {
    psi[static_cast<Eigen::Index>(b)] = minor_det(q_up, b & block) * minor_det(q_down, b >> L);
  }
  return psi;
}

/// |<a|b>|^2 for normalized vectors.
inline double fidelity(const Vec& a, const Vec& b) { return std::norm(a.dot(b)); }

/// min over phi of the spectral norm of (A - e^{i phi} B).
inline double phase_aligned_distance(const Mat& a, const Mat& b) {
  const cplx tr = (b.adjoint() * a).trace();
  const cplx phase = std::abs(tr) > 0 ? tr / std::abs(tr) : cplx{1, 0};
  const Mat d = a - phase * b;
  Eigen::JacobiSVD<Mat> svd(d);
  return svd.singularValues()[0];
}

}  // namespace oracle
