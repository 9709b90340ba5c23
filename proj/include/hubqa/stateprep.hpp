#pragma once

// Free-fermion ground state of the hopping Hamiltonian in a fixed
// (N_up, N_down) sector, compiled into a Givens-rotation circuit.
//
// The occupied orbitals phi_m(j) = sqrt(2/(L+1)) sin(k_m j), k_m = m pi/(L+1),
// form the rows of an N x L matrix Q. Column rotations on adjacent sites
// reduce Q to [I_N | 0]; running the inverse rotations on |1..1 0..0> yields
// the Slater determinant of Q.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hubqa/circuit.hpp"
#include "hubqa/errors.hpp"
#include "hubqa/hamiltonian.hpp"

namespace hubqa {

/// Single-particle energy -2 t cos k of an open chain.
inline double band_energy(double k, double t_hop) { return -2.0 * t_hop * std::cos(k); }

/// The n lowest-energy momenta m pi/(L+1), m = 1..n.
inline std::vector<double> select_momenta(int L, int n) {
  if (L < 1 || n < 1 || n > L) {
    throw ArgumentError("select_momenta: need 1 <= N <= L (got L=" + std::to_string(L) + ", N=" + std::to_string(n) + ")");
  }
  std::vector<double> k;
  for (int m = 1; m <= n; ++m) k.push_back(m * std::numbers::pi / (L + 1));
  // Open-chain levels are non-degenerate, so the filled shell is unique.
  if (n < L && !(std::cos(k.back()) > std::cos((n + 1) * std::numbers::pi / (L + 1)))) {
    throw std::logic_error("select_momenta: degenerate Fermi level");
  }
  return k;
}

/// Sum of occupied single-particle energies for both spin species.
inline double free_fermion_energy(const HubbardParams& p) {
  double e = 0.0;
  for (int n : {p.n_up, p.n_down}) {
    if (n == 0) continue;
    for (double k : select_momenta(p.L, n)) e += band_energy(k, p.t_hop);
  }
  return e;
}

/// Rows are the occupied sine orbitals, columns the sites 1..L.
inline Eigen::MatrixXd orbital_matrix(int L, const std::vector<double>& momenta) {
  Eigen::MatrixXd q(static_cast<Eigen::Index>(momenta.size()), L);
  const double norm = std::sqrt(2.0 / (L + 1));
  for (std::size_t m = 0; m < momenta.size(); ++m) {
    for (int j = 1; j <= L; ++j) q(static_cast<Eigen::Index>(m), j - 1) = norm * std::sin(momenta[m] * j);
  }
  return q;
}

/// Rotation G(angle) = [[cos, sin], [-sin, cos]] on columns (column, column + 1),
/// acting as Q <- Q G.
struct GivensRotation {
  int column = 0;
  double angle = 0.0;
};

/// Rotations in elimination order.
using GivensPlan = std::vector<GivensRotation>;

/// Q <- Q G_1 G_2 ... for each rotation of the plan, in order.
inline void apply_givens_columns(Eigen::MatrixXd& q, const GivensPlan& plan) {
  for (const auto& r : plan) {
    const double c = std::cos(r.angle), s = std::sin(r.angle);
    const Eigen::VectorXd left = q.col(r.column), right = q.col(r.column + 1);
    q.col(r.column) = c * left - s * right;
    q.col(r.column + 1) = s * left + c * right;
  }
}

/// Adjacent-column rotations taking the row space of Q to span(e_1..e_N).
///
/// Q is first rotated among its rows (which leaves the Slater determinant
/// unchanged) into staircase form, row m supported on columns 0..L-N+m. Then
/// row by row, the rightmost nonzero entry is folded into its left neighbour,
/// at most N(L-N) rotations in total.
inline GivensPlan givens_decompose(const Eigen::MatrixXd& q) {
  const auto n = static_cast<int>(q.rows());
  const auto L = static_cast<int>(q.cols());
  if (n < 1 || n > L) throw ArgumentError("givens_decompose: need 1 <= rows <= cols");
  const double gram = (q * q.transpose() - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (gram > 1e-8) throw ArgumentError("givens_decompose: rows are not orthonormal (Gram residual " + std::to_string(gram) + ")");

  Eigen::MatrixXd w = q;
  for (int c = L - 1; c > L - n; --c) {
    for (int r = 0; r < c - (L - n); ++r) {
      const double a = w(r, c), b = w(r + 1, c);
      const double rho = std::hypot(a, b);
      if (rho == 0.0) continue;
      const Eigen::RowVectorXd upper = w.row(r), lower = w.row(r + 1);
      w.row(r) = (b * upper - a * lower) / rho;
      w.row(r + 1) = (a * upper + b * lower) / rho;
    }
  }

  GivensPlan plan;
  for (int m = 0; m < n; ++m) {
    for (int j = L - n + m; j > m; --j) {
      const double x = w(m, j), y = w(m, j - 1);
      if (std::abs(x) < 1e-15) continue;
      const GivensRotation rot{j - 1, std::atan2(-x, y)};
      apply_givens_columns(w, {rot});
      plan.push_back(rot);
    }
  }
  // A row that needed no rotation may keep a pivot of -1, a global sign of the state.
  Eigen::MatrixXd target = Eigen::MatrixXd::Zero(n, L);
  target.leftCols(n).setIdentity();
  const double err = (w.cwiseAbs() - target).cwiseAbs().maxCoeff();
  if (err > 1e-9) throw std::logic_error("givens_decompose: reduction residual " + std::to_string(err));
  return plan;
}

/// Two-qubit circuit for one rotation on modes (a, a+1):
/// CNOT(a+1 -> a), CRY(a -> a+1, -2 angle), CNOT(a+1 -> a).
/// It maps c_a^dagger -> cos c_a^dagger - sin c_{a+1}^dagger and
/// c_{a+1}^dagger -> sin c_a^dagger + cos c_{a+1}^dagger.
inline void append_givens_gates(Circuit& c, int a, double angle) {
  c.push(GateOp::cnot(a + 1, a));
  c.push(GateOp::cry(a, a + 1, -2.0 * angle));
  c.push(GateOp::cnot(a + 1, a));
}

/// X gates filling the first N_sigma modes of each spin block, then the
/// inverse Givens sequence of each block (spin-up on qubits 0..L-1, spin-down
/// on L..2L-1).
inline Circuit prep_circuit(const HubbardParams& p) {
  p.validate();
  Circuit c(p.n_qubits(), "prep");
  const int offsets[2] = {0, p.L};
  const int counts[2] = {p.n_up, p.n_down};
  for (int s = 0; s < 2; ++s) {
    for (int j = 0; j < counts[s]; ++j) c.push(GateOp::x(offsets[s] + j));
  }
  for (int s = 0; s < 2; ++s) {
    if (counts[s] == 0 || counts[s] == p.L) continue;
    const GivensPlan plan = givens_decompose(orbital_matrix(p.L, select_momenta(p.L, counts[s])));
    for (auto it = plan.rbegin(); it != plan.rend(); ++it) append_givens_gates(c, offsets[s] + it->column, it->angle);
  }
  return c;
}

}  // namespace hubqa
