#pragma once

// Open-boundary Bethe-ansatz equations for the 1D Hubbard model.
//
//   2 k_j (L+1) = 2 pi j + sum_{b=+-1} sum_r phi(2 sin k_j + 2 b lambda_r)            j = 1..N
//   sum_{b} sum_l phi(2 b sin k_l + 2 lambda_r) = -2 pi r + sum_{b} sum_{s!=r} phi(lambda_r + b lambda_s)
//                                                                                   r = 1..M
// with phi(x) = -2 atan(2 x t / U), N = N_up + N_down, M = min(N_up, N_down).
// The ground-state energy is E = -2 t sum_j cos k_j.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hubqa/errors.hpp"
#include "hubqa/hamiltonian.hpp"

namespace hubqa {

struct BetheRoots {
  std::vector<double> k;       // charge momenta, 0 < k_1 < ... < k_N < pi
  std::vector<double> lambda;  // spin rapidities, strictly increasing

  Eigen::VectorXd packed() const {
    Eigen::VectorXd x(static_cast<Eigen::Index>(k.size() + lambda.size()));
    for (std::size_t i = 0; i < k.size(); ++i) x[static_cast<Eigen::Index>(i)] = k[i];
    for (std::size_t i = 0; i < lambda.size(); ++i) x[static_cast<Eigen::Index>(k.size() + i)] = lambda[i];
    return x;
  }

  static BetheRoots unpack(const Eigen::VectorXd& x, std::size_t n) {
    BetheRoots r;
    r.k.assign(x.data(), x.data() + n);
    r.lambda.assign(x.data() + n, x.data() + x.size());
    return r;
  }
};

/// phi(x) = -2 atan(2 x t / U): odd, bounded by pi in magnitude.
struct PhaseFunction {
  double t_hop = 1.0;
  double U = 1.0;

  double operator()(double x) const { return -2.0 * std::atan(2.0 * x * t_hop / U); }
  double derivative(double x) const {
    const double a = 2.0 * t_hop / U;
    return -2.0 * a / (1.0 + (a * x) * (a * x));
  }
};

namespace detail {

inline void require_bethe_params(const HubbardParams& p) {
  p.validate();
  if (!(p.U > 0.0)) throw ArgumentError("Bethe equations need U > 0");
}

inline int bethe_minority(const HubbardParams& p) { return std::min(p.n_up, p.n_down); }

}  // namespace detail

/// Componentwise LHS - RHS of the charge equations (first N entries) and the
/// spin equations (last M entries).
inline Eigen::VectorXd residual(const BetheRoots& roots, const HubbardParams& p) {
  detail::require_bethe_params(p);
  const int n = p.n_particles();
  const int m = detail::bethe_minority(p);
  if (static_cast<int>(roots.k.size()) != n || static_cast<int>(roots.lambda.size()) != m) {
    throw ArgumentError("residual: root arrays must have sizes N and min(N_up, N_down)");
  }
  const PhaseFunction phi{p.t_hop, p.U};
  const double two_pi = 2.0 * std::numbers::pi;
  Eigen::VectorXd f(n + m);
  for (int j = 0; j < n; ++j) {
    const double sk = 2.0 * std::sin(roots.k[j]);
    double sum = 0.0;
    for (int r = 0; r < m; ++r) sum += phi(sk + 2.0 * roots.lambda[r]) + phi(sk - 2.0 * roots.lambda[r]);
    f[j] = 2.0 * roots.k[j] * (p.L + 1) - two_pi * (j + 1) - sum;
  }
  for (int r = 0; r < m; ++r) {
    const double lr = roots.lambda[r];
    double lhs = 0.0;
    for (int l = 0; l < n; ++l) {
      const double sk = 2.0 * std::sin(roots.k[l]);
      lhs += phi(sk + 2.0 * lr) + phi(-sk + 2.0 * lr);
    }
    double rhs = -two_pi * (r + 1);
    for (int s = 0; s < m; ++s) {
      if (s == r) continue;
      rhs += phi(lr + roots.lambda[s]) + phi(lr - roots.lambda[s]);
    }
    f[n + r] = lhs - rhs;
  }
  return f;
}

/// Analytic Jacobian of residual() with respect to (k, lambda).
inline Eigen::MatrixXd jacobian(const BetheRoots& roots, const HubbardParams& p) {
  detail::require_bethe_params(p);
  const int n = p.n_particles();
  const int m = detail::bethe_minority(p);
  const PhaseFunction phi{p.t_hop, p.U};
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n + m, n + m);
  for (int j = 0; j < n; ++j) {
    const double sk = 2.0 * std::sin(roots.k[j]);
    const double dsk = 2.0 * std::cos(roots.k[j]);
    double dk = 2.0 * (p.L + 1);
    for (int r = 0; r < m; ++r) {
      const double dp = phi.derivative(sk + 2.0 * roots.lambda[r]);
      const double dm = phi.derivative(sk - 2.0 * roots.lambda[r]);
      dk -= (dp + dm) * dsk;
      jac(j, n + r) = -2.0 * (dp - dm);
    }
    jac(j, j) = dk;
  }
  for (int r = 0; r < m; ++r) {
    const double lr = roots.lambda[r];
    double dl = 0.0;
    for (int l = 0; l < n; ++l) {
      const double sk = 2.0 * std::sin(roots.k[l]);
      const double dsk = 2.0 * std::cos(roots.k[l]);
      const double dp = phi.derivative(sk + 2.0 * lr);
      const double dm = phi.derivative(-sk + 2.0 * lr);
      jac(n + r, l) = (dp - dm) * dsk;
      dl += 2.0 * (dp + dm);
    }
    for (int s = 0; s < m; ++s) {
      if (s == r) continue;
      const double dp = phi.derivative(lr + roots.lambda[s]);
      const double dm = phi.derivative(lr - roots.lambda[s]);
      dl -= dp + dm;
      jac(n + r, n + s) = -(dp - dm);
    }
    jac(n + r, n + r) = dl;
  }
  return jac;
}

inline double ground_energy(const BetheRoots& roots, const HubbardParams& p) {
  double e = 0.0;
  for (double k : roots.k) e += std::cos(k);
  return -2.0 * p.t_hop * e;
}

struct BetheOptions {
  double tolerance = 1e-10;  // on the infinity norm of the residual
  int max_iterations = 200;  // Newton iterations per homotopy stage
  int max_halvings = 60;     // backtracking halvings per Newton step
  double start_scale = 16.0; // homotopy starts at U >= start_scale * L * t
};

struct BetheSolution {
  BetheRoots roots;
  double energy = 0.0;
  double residual_norm = 0.0;
  int stages = 0;
  int iterations = 0;
  // Above half filling (N > L) the roots describe the hole sector
  // (L - N_up, L - N_down) and energy includes the shift U (N - L).
  bool particle_hole = false;
};

namespace detail {

inline bool roots_ordered(const Eigen::VectorXd& x, int n) {
  for (int j = 0; j < n; ++j) {
    if (!(x[j] > 0.0 && x[j] < std::numbers::pi)) return false;
    if (j > 0 && !(x[j] > x[j - 1])) return false;
  }
  for (Eigen::Index r = n + 1; r < x.size(); ++r) {
    if (!(x[r] > x[r - 1])) return false;
  }
  return true;
}

/// Spin rapidities with the momenta held fixed: Gauss-Seidel sweeps of a
/// bracketed bisection in each lambda_r, to a loose tolerance (Newton polishes). With N >= 2M each equation runs
/// from -2 pi r at lambda = 0 to a positive limit, so the bracket always holds.
inline std::vector<double> frozen_momenta_rapidities(const std::vector<double>& k, int m, const HubbardParams& p) {
  const PhaseFunction phi{p.t_hop, p.U};
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> lambda(static_cast<std::size_t>(m));
  // Start from the large-U scaling lambda ~ U/(4t) * tan(pi r / (2N)) spread.
  for (int r = 0; r < m; ++r) {
    lambda[r] = p.U / (4.0 * p.t_hop) * std::tan(std::numbers::pi * (r + 0.5) / (2.0 * (m + 1)));
  }
  auto eq = [&](int r, double lr) {
    double lhs = 0.0;
    for (double kk : k) {
      const double sk = 2.0 * std::sin(kk);
      lhs += phi(sk + 2.0 * lr) + phi(-sk + 2.0 * lr);
    }
    double rhs = -two_pi * (r + 1);
    for (int s = 0; s < m; ++s) {
      if (s != r) rhs += phi(lr + lambda[s]) + phi(lr - lambda[s]);
    }
    return lhs - rhs;
  };
  for (int sweep = 0; sweep < 500; ++sweep) {
    double change = 0.0;
    for (int r = 0; r < m; ++r) {
      double lo = 0.0, hi = std::max(1.0, 2.0 * lambda[r]);
      // The residual decreases in lambda_r (phi is decreasing); grow hi until the sign flips.
      int grow = 0;
      while (eq(r, hi) > 0.0 && grow++ < 200) hi *= 2.0;
      for (int it = 0; it < 200 && hi - lo > 1e-9 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (eq(r, mid) > 0.0 ? lo : hi) = mid;
      }
      const double next = 0.5 * (lo + hi);
      change = std::max(change, std::abs(next - lambda[r]));
      lambda[r] = next;
    }
    if (change < 1e-8 * std::max(1.0, lambda.empty() ? 1.0 : lambda.back())) break;
  }
  return lambda;
}

/// Damped Newton at fixed parameters; returns the residual infinity norm.
inline double newton_solve(Eigen::VectorXd& x, const HubbardParams& p, int n, const BetheOptions& opt, int& iterations) {
  auto res = [&](const Eigen::VectorXd& v) { return residual(BetheRoots::unpack(v, static_cast<std::size_t>(n)), p); };
  Eigen::VectorXd f = res(x);
  double norm = f.lpNorm<Eigen::Infinity>();
  for (int it = 0; it < opt.max_iterations && norm >= opt.tolerance; ++it) {
    ++iterations;
    const Eigen::MatrixXd jac = jacobian(BetheRoots::unpack(x, static_cast<std::size_t>(n)), p);
    const Eigen::VectorXd dx = jac.partialPivLu().solve(-f);
    double step = 1.0;
    bool accepted = false;
    for (int h = 0; h <= opt.max_halvings; ++h, step *= 0.5) {
      const Eigen::VectorXd trial = x + step * dx;
      if (!roots_ordered(trial, n)) continue;
      const Eigen::VectorXd ft = res(trial);
      const double nt = ft.lpNorm<Eigen::Infinity>();
      if (nt < norm) {
        x = trial;
        f = ft;
        norm = nt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return norm;
}

}  // namespace detail

/// Ground-state roots by homotopy in U: start at U_0 = U * 2^S >= start_scale * L * t,
/// where the momenta are the free values pi j/(L+1) and the rapidities follow
/// from the bisection above, then halve U stage by stage, re-solving with
/// damped Newton each time. Sectors with N_down > N_up are solved through the
/// spin-flipped sector (same spectrum); sectors with N > L through the
/// particle-hole transformed one, c_j -> (-1)^j c_j^dagger on the open chain.
inline BetheSolution solve_ground_state(const HubbardParams& params, const BetheOptions& opt = {}) {
  detail::require_bethe_params(params);
  if (params.n_particles() == 0) return {};
  if (params.n_particles() > params.L) {
    HubbardParams holes = params;
    holes.n_up = params.L - params.n_up;
    holes.n_down = params.L - params.n_down;
    BetheSolution sol = solve_ground_state(holes, opt);
    sol.energy += params.U * (params.n_particles() - params.L);
    sol.particle_hole = true;
    return sol;
  }
  HubbardParams p = params;
  if (p.n_down > p.n_up) std::swap(p.n_up, p.n_down);
  const int n = p.n_particles();
  const int m = p.n_down;
  if (n > 2 * p.L || p.n_up > p.L) throw ArgumentError("solve_ground_state: too many particles");

  int stages = 0;
  const double u_floor = opt.start_scale * p.L * std::abs(p.t_hop);
  while (p.U * std::ldexp(1.0, stages) < u_floor) ++stages;

  HubbardParams stage = p;
  stage.U = p.U * std::ldexp(1.0, stages);
  std::vector<double> k0(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) k0[j] = std::numbers::pi * (j + 1) / (p.L + 1);
  // More particles than sites per species at U -> infinity still fits since k uses all N.
  BetheRoots start{k0, detail::frozen_momenta_rapidities(k0, m, stage)};
  Eigen::VectorXd x = start.packed();

  BetheSolution sol;
  Eigen::VectorXd prev_scaled;  // (k, lambda * 4t/U) of the previous stage
  for (int s = stages; s >= 0; --s) {
    stage.U = p.U * std::ldexp(1.0, s);
    if (s != stages) {
      // Predictor: carry lambda in units of U/(4t), secant-extrapolated in log U.
      Eigen::VectorXd scaled = x;
      const double prev_u = stage.U * 2.0;
      scaled.tail(m) *= 4.0 * p.t_hop / prev_u;
      Eigen::VectorXd guess = scaled;
      if (prev_scaled.size() == scaled.size()) guess = 2.0 * scaled - prev_scaled;
      guess.tail(m) *= stage.U / (4.0 * p.t_hop);
      prev_scaled = scaled;
      if (detail::roots_ordered(guess, n)) {
        Eigen::VectorXd base = x;
        x = guess;
        int probe = 0;
        BetheOptions quick = opt;
        quick.max_iterations = 0;
        const double ng = detail::newton_solve(x, stage, n, quick, probe);
        Eigen::VectorXd xb = base;
        const double nb = detail::newton_solve(xb, stage, n, quick, probe);
        if (!(ng < nb)) x = base;
      }
    }
    const double norm = detail::newton_solve(x, stage, n, opt, sol.iterations);
    ++sol.stages;
    if (!(norm < opt.tolerance)) {
      throw ConvergenceError("solve_ground_state: no convergence at U = " + std::to_string(stage.U) +
                                 " (residual " + std::to_string(norm) + ")",
                             norm);
    }
    sol.residual_norm = norm;
  }
  if (!detail::roots_ordered(x, n)) throw SolverError("solve_ground_state: root ordering violated");
  sol.roots = BetheRoots::unpack(x, static_cast<std::size_t>(n));
  sol.energy = ground_energy(sol.roots, p);
  return sol;
}

struct TimingSample {
  int L = 0;
  double seconds = 0.0;  // median over repeats
  double energy = 0.0;
};

/// Median wall time of solve_ground_state at half filling for each L.
inline std::vector<TimingSample> timing_study(const std::vector<int>& sizes, double U, double t_hop = 1.0, int repeats = 5) {
  std::vector<TimingSample> out;
  for (int L : sizes) {
    const HubbardParams p = HubbardParams::half_filled(L, U, t_hop);
    std::vector<double> times;
    double energy = 0.0;
    for (int r = 0; r < std::max(1, repeats); ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      energy = solve_ground_state(p).energy;
      times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    std::nth_element(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(times.size() / 2), times.end());
    out.push_back({L, times[times.size() / 2], energy});
  }
  return out;
}

}  // namespace hubqa
