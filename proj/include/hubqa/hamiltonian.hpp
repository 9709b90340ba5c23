#pragma once

// Open-boundary 1D Hubbard model: Jordan-Wigner qubit operator plus two
// classical references restricted to a fixed (N_up, N_down) sector, exact
// diagonalization and piecewise-constant dense time evolution.
//
// Mode / qubit layout: spin-up site j (0-based) is qubit j, spin-down site j
// is qubit L + j. Fermionic signs follow the Jordan-Wigner ordering of these
// 2L modes: c_m^dagger picks up (-1)^(number of occupied modes below m).

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "hubqa/errors.hpp"
#include "hubqa/pauli.hpp"
#include "hubqa/schedule.hpp"
#include "hubqa/simcore.hpp"

namespace hubqa {

struct HubbardParams {
  int L = 2;
  double t_hop = 1.0;
  double U = 0.0;
  int n_up = 1;
  int n_down = 1;

  static HubbardParams half_filled(int L, double U, double t_hop = 1.0) {
    if (L % 2 != 0) throw ArgumentError("half filling with N_down = L/2 needs an even L (got " + std::to_string(L) + ")");
    return {L, t_hop, U, L / 2, L / 2};
  }

  int n_qubits() const { return 2 * L; }
  int n_particles() const { return n_up + n_down; }
  bool half_filled() const { return n_up == n_down && n_particles() == L; }

  void validate() const {
    if (L < 1) throw ArgumentError("HubbardParams: L must be >= 1");
    if (n_up < 0 || n_up > L || n_down < 0 || n_down > L) {
      throw ArgumentError("HubbardParams: particle numbers must lie in [0, L]");
    }
    if (U < 0.0 || !std::isfinite(U)) throw ArgumentError("HubbardParams: U must be finite and >= 0");
    if (!std::isfinite(t_hop)) throw ArgumentError("HubbardParams: t_H must be finite");
  }
};

/// -(t/2) sum_{i != L-1} (X_i X_{i+1} + Y_i Y_{i+1}) + (sU/4) sum_i (I - Z_i)(I - Z_{i+L}),
/// with the interaction product expanded into identity, Z and ZZ terms.
/// Terms come in blocks: XX, YY, Z, ZZ (the last two only when sU != 0).
inline PauliTermSum qubit_hamiltonian(const HubbardParams& p, double s) {
  p.validate();
  if (!(s >= 0.0 && s <= 1.0)) throw ArgumentError("qubit_hamiltonian: s must lie in [0, 1]");
  PauliTermSum h;
  const int n = p.n_qubits();
  for (Pauli kind : {Pauli::X, Pauli::Y}) {
    for (int i = 0; i + 1 < n; ++i) {
      if (i == p.L - 1) continue;
      h.add(-p.t_hop / 2.0, {{i, kind}, {i + 1, kind}});
    }
  }
  const double g = s * p.U / 4.0;
  if (g != 0.0) {
    h.identity_offset = g * p.L;
    for (int q = 0; q < n; ++q) h.add(-g, {{q, Pauli::Z}});
    for (int i = 0; i < p.L; ++i) h.add(g, {{i, Pauli::Z}, {i + p.L, Pauli::Z}});
  }
  return h;
}

enum class Spin { Up, Down };

/// N_sigma = sum_j (I - Z_j) / 2 over the qubits of one spin species.
inline PauliTermSum number_operator(const HubbardParams& p, Spin spin) {
  PauliTermSum n;
  const int base = spin == Spin::Up ? 0 : p.L;
  n.identity_offset = p.L / 2.0;
  for (int j = 0; j < p.L; ++j) n.add(-0.5, {{base + j, Pauli::Z}});
  return n;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Fixed-(N_up, N_down) basis. Each spin species enumerates its occupation
/// masks in increasing numeric order; the sector index is up_index * n_down_states + down_index.
class SectorBasis {
 public:
  static constexpr int kMaxSites = 20;

  SectorBasis(int L, int n_up, int n_down) : L_(L) {
    if (L < 1 || L > kMaxSites) throw CapacityError("SectorBasis: L out of supported range");
    if (n_up < 0 || n_up > L || n_down < 0 || n_down > L) throw ArgumentError("SectorBasis: bad particle numbers");
    up_ = masks_with_popcount(L, n_up);
    down_ = masks_with_popcount(L, n_down);
    lookup_up_.assign(std::size_t{1} << L, -1);
    lookup_down_.assign(std::size_t{1} << L, -1);
    for (std::size_t i = 0; i < up_.size(); ++i) lookup_up_[up_[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < down_.size(); ++i) lookup_down_[down_[i]] = static_cast<int>(i);
  }

  explicit SectorBasis(const HubbardParams& p) : SectorBasis(p.L, p.n_up, p.n_down) {}

  int L() const { return L_; }
  std::size_t dim() const { return up_.size() * down_.size(); }
  std::size_t n_up_states() const { return up_.size(); }
  std::size_t n_down_states() const { return down_.size(); }
  const std::vector<std::uint32_t>& up_masks() const { return up_; }
  const std::vector<std::uint32_t>& down_masks() const { return down_; }

  std::uint32_t up_mask(std::size_t index) const { return up_[index / down_.size()]; }
  std::uint32_t down_mask(std::size_t index) const { return down_[index % down_.size()]; }

  /// Qubit-register basis index of a sector state (up bits low, down bits high).
  std::uint64_t qubit_index(std::size_t index) const {
    return std::uint64_t{up_mask(index)} | (std::uint64_t{down_mask(index)} << L_);
  }

  /// Sector index of a qubit basis index, or -1 if it lies outside the sector.
  long long index_of(std::uint64_t qubit_index) const {
    const std::uint32_t lo = static_cast<std::uint32_t>(qubit_index & ((std::uint64_t{1} << L_) - 1));
    const std::uint32_t hi = static_cast<std::uint32_t>(qubit_index >> L_);
    if ((hi >> L_) != 0) return -1;
    const int u = lookup_up_[lo];
    const int d = lookup_down_[hi];
    if (u < 0 || d < 0) return -1;
    return static_cast<long long>(u) * static_cast<long long>(down_.size()) + d;
  }

 private:
  static std::vector<std::uint32_t> masks_with_popcount(int L, int n) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t m = 0; m < (std::uint32_t{1} << L); ++m) {
      if (std::popcount(m) == n) out.push_back(m);
    }
    return out;
  }

  int L_;
  std::vector<std::uint32_t> up_, down_;
  std::vector<int> lookup_up_, lookup_down_;
};

namespace detail {

/// Sign of c_to^dagger c_from acting on a 2L-mode occupation mask, from the
/// Jordan-Wigner strings of both operators. Requires mode `from` occupied and
/// `to` empty.
inline int hop_sign(std::uint64_t mask, int from, int to) {
  const auto below = [](int m) { return (std::uint64_t{1} << m) - 1; };
  int flips = std::popcount(mask & below(from));
  const std::uint64_t after = mask ^ (std::uint64_t{1} << from);
  flips += std::popcount(after & below(to));
  return (flips % 2) ? -1 : 1;
}

}  // namespace detail

/// H(s) = T + s * U * D restricted to a sector: T is the hopping operator,
/// D the number of doubly occupied sites.
class SectorHamiltonian {
 public:
  explicit SectorHamiltonian(const HubbardParams& p) : params_(p), basis_(p) {
    p.validate();
    const std::size_t dim = basis_.dim();
    std::vector<Eigen::Triplet<double>> trips;
    double_occupancy_.resize(static_cast<Eigen::Index>(dim));
    const int L = p.L;
    for (std::size_t idx = 0; idx < dim; ++idx) {
      const std::uint64_t full = basis_.qubit_index(idx);
      double_occupancy_[static_cast<Eigen::Index>(idx)] = std::popcount(basis_.up_mask(idx) & basis_.down_mask(idx));
      for (int species = 0; species < 2; ++species) {
        const int base = species * L;
        for (int j = 0; j + 1 < L; ++j) {
          for (auto [from, to] : {std::pair{base + j, base + j + 1}, std::pair{base + j + 1, base + j}}) {
            const bool occupied = (full >> from) & 1U;
            const bool empty = !((full >> to) & 1U);
            if (!occupied || !empty) continue;
            const std::uint64_t target = full ^ (std::uint64_t{1} << from) ^ (std::uint64_t{1} << to);
            const long long row = basis_.index_of(target);
            trips.emplace_back(static_cast<int>(row), static_cast<int>(idx),
                               -p.t_hop * detail::hop_sign(full, from, to));
          }
        }
      }
    }
    hopping_.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    hopping_.setFromTriplets(trips.begin(), trips.end());
  }

  const SectorBasis& basis() const { return basis_; }
  const HubbardParams& params() const { return params_; }
  Eigen::Index dim() const { return hopping_.rows(); }
  const Eigen::SparseMatrix<double>& hopping() const { return hopping_; }
  const Eigen::VectorXd& double_occupancy() const { return double_occupancy_; }

  /// Dense matrix at interaction multiplier `strength` (s for the linear schedule).
  Eigen::MatrixXd dense(double strength) const {
    Eigen::MatrixXd h = Eigen::MatrixXd(hopping_);
    h.diagonal() += strength * params_.U * double_occupancy_;
    return h;
  }

  template <class Vec>
  Vec apply(const Vec& x, double strength) const {
    Vec y = hopping_ * x;
    y += (strength * params_.U * double_occupancy_).asDiagonal() * x;
    return y;
  }

 private:
  HubbardParams params_;
  SectorBasis basis_;
  Eigen::SparseMatrix<double> hopping_;
  Eigen::VectorXd double_occupancy_;
};

struct GroundState {
  double energy = 0.0;
  Eigen::VectorXd vector;
  int iterations = 0;  // Lanczos restarts; 0 for dense
};

inline constexpr std::size_t kDenseDiagLimit = 1024;
inline constexpr std::size_t kMaxSectorDim = 1000000;
inline constexpr std::size_t kMaxDenseEvolutionDim = 4096;

/// Lowest eigenpair of a symmetric operator given only y = A x. Restarted
/// Lanczos with full reorthogonalization; restarts from the current Ritz vector.
template <class Apply>
GroundState lanczos_ground(Apply&& apply, Eigen::Index dim, double tol = 1e-12, int krylov = 80, int max_restarts = 200) {
  krylov = static_cast<int>(std::min<Eigen::Index>(krylov, dim));
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd x(dim);
  for (Eigen::Index i = 0; i < dim; ++i) x[i] = normal(rng);
  x.normalize();
  Eigen::MatrixXd V(dim, krylov);
  double theta_prev = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < max_restarts; ++restart) {
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(krylov), beta = Eigen::VectorXd::Zero(krylov);
    V.col(0) = x;
    int m = krylov;
    for (int j = 0; j < krylov; ++j) {
      Eigen::VectorXd w = apply(Eigen::VectorXd(V.col(j)));
      alpha[j] = V.col(j).dot(w);
      // Two passes of classical Gram-Schmidt against the whole basis.
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd proj = V.leftCols(j + 1).transpose() * w;
        w -= V.leftCols(j + 1) * proj;
      }
      if (j + 1 == krylov) break;
      beta[j] = w.norm();
      if (beta[j] < 1e-14) {
        m = j + 1;
        break;
      }
      V.col(j + 1) = w / beta[j];
    }
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j < m; ++j) {
      T(j, j) = alpha[j];
      if (j + 1 < m) T(j, j + 1) = T(j + 1, j) = beta[j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const double theta = es.eigenvalues()[0];
    x = V.leftCols(m) * es.eigenvectors().col(0);
    x.normalize();
    const double resid = (apply(x) - theta * x).norm();
    const double scale = std::max(1.0, std::abs(theta));
    if (resid < 1e-8 * scale || (m < krylov && resid < 1e-6 * scale) ||
        (std::abs(theta - theta_prev) < tol * scale && resid < 1e-6 * scale)) {
      return {theta, x, restart + 1};
    }
    theta_prev = theta;
  }
  throw ConvergenceError("lanczos_ground: no convergence", 0.0);
}

/// Ground state of H(s) in the (N_up, N_down) sector. Dense eigensolver up to
/// kDenseDiagLimit, Lanczos above; CapacityError beyond kMaxSectorDim.
inline GroundState exact_diag(const HubbardParams& p, double s) {
  p.validate();
  const double dim = binomial(p.L, p.n_up) * binomial(p.L, p.n_down);
  if (dim > static_cast<double>(kMaxSectorDim)) {
    throw CapacityError("exact_diag: sector dimension " + std::to_string(static_cast<long long>(dim)) +
                        " exceeds " + std::to_string(kMaxSectorDim));
  }
  const SectorHamiltonian h(p);
  if (static_cast<std::size_t>(h.dim()) <= kDenseDiagLimit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense(s));
    return {es.eigenvalues()[0], es.eigenvectors().col(0), 0};
  }
  return lanczos_ground([&](const Eigen::VectorXd& x) { return h.apply(x, s); }, h.dim());
}

/// Embed a sector vector into the 2L-qubit register.
inline StateVector sector_to_statevector(const SectorBasis& basis, const Eigen::VectorXcd& v) {
  if (static_cast<std::size_t>(v.size()) != basis.dim()) throw ArgumentError("sector_to_statevector: size mismatch");
  StateVector s(2 * basis.L());
  s[0] = 0.0;
  for (std::size_t i = 0; i < basis.dim(); ++i) s[basis.qubit_index(i)] = v[static_cast<Eigen::Index>(i)];
  return s;
}

inline StateVector sector_to_statevector(const SectorBasis& basis, const Eigen::VectorXd& v) {
  return sector_to_statevector(basis, Eigen::VectorXcd(v.cast<cplx>()));
}

/// Sector components of a register state; amplitude outside the sector is dropped.
inline Eigen::VectorXcd statevector_to_sector(const SectorBasis& basis, const StateVector& s) {
  if (s.n_qubits() != 2 * basis.L()) throw ArgumentError("statevector_to_sector: qubit count mismatch");
  Eigen::VectorXcd v(static_cast<Eigen::Index>(basis.dim()));
  for (std::size_t i = 0; i < basis.dim(); ++i) v[static_cast<Eigen::Index>(i)] = s[basis.qubit_index(i)];
  return v;
}

/// Matrix of a Pauli-sum operator between sector states, built from Pauli
/// masks alone (no fermionic bookkeeping). `leak` receives the largest
/// amplitude the operator sends outside the sector from any basis state.
inline Eigen::MatrixXcd pauli_sum_in_sector(const PauliTermSum& op, const SectorBasis& basis, double* leak = nullptr) {
  const int n = 2 * basis.L();
  const auto dim = static_cast<Eigen::Index>(basis.dim());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  std::vector<PauliMask> masks;
  for (const auto& t : op.terms) masks.push_back(PauliMask::from(t.ops, n));
  static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  double worst = 0.0;
  for (Eigen::Index col = 0; col < dim; ++col) {
    const std::uint64_t b = basis.qubit_index(static_cast<std::size_t>(col));
    m(col, col) += op.identity_offset;
    std::map<std::uint64_t, cplx> outside;
    for (std::size_t t = 0; t < masks.size(); ++t) {
      const auto& mk = masks[t];
      cplx amp = op.terms[t].coeff * kIPow[mk.n_y % 4];
      if (std::popcount(b & mk.z_mask) % 2) amp = -amp;
      const std::uint64_t target = b ^ mk.x_mask;
      const long long row = basis.index_of(target);
      if (row < 0) {
        outside[target] += amp;
      } else {
        m(row, col) += amp;
      }
    }
    for (const auto& [k, a] : outside) worst = std::max(worst, std::abs(a));
  }
  if (leak) *leak = worst;
  return m;
}

/// Piecewise-constant evolution with exact dense exponentials
/// psi <- exp(-i tau H(s_n)) psi at the step midpoints s_n, with no product
/// formula splitting. Defaults to the s = 0 sector ground state as the start.
inline Eigen::VectorXcd tdse_reference(const HubbardParams& p, const AnnealSchedule& schedule,
                                       const Eigen::VectorXcd* initial = nullptr) {
  p.validate();
  schedule.validate();
  const double dim = binomial(p.L, p.n_up) * binomial(p.L, p.n_down);
  if (dim > static_cast<double>(kMaxDenseEvolutionDim)) {
    throw CapacityError("tdse_reference: sector dimension exceeds " + std::to_string(kMaxDenseEvolutionDim));
  }
  const SectorHamiltonian h(p);
  Eigen::VectorXcd psi;
  if (initial) {
    psi = *initial;
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense(0.0));
    psi = es.eigenvectors().col(0).cast<cplx>();
  }
  if (psi.size() != h.dim()) throw ArgumentError("tdse_reference: initial vector has wrong dimension");
  for (int n = 1; n <= schedule.n_steps(); ++n) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense(schedule.strength_at_step(n)));
    const Eigen::VectorXcd phases =
        (es.eigenvalues().cast<cplx>() * cplx{0.0, -schedule.tau}).array().exp().matrix();
    const Eigen::MatrixXcd vecs = es.eigenvectors().cast<cplx>();
    psi = vecs * phases.asDiagonal() * (vecs.adjoint() * psi);
  }
  return psi;
}

}  // namespace hubqa
