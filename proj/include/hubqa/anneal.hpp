#pragma once

// Second-order Trotterized annealing circuits for the Hubbard chain,
// H(s) = H_hop + f(s) U sum_i n_i,up n_i,down, and their execution.

#include <bit>
#include <chrono>
#include <cmath>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hubqa/bethe.hpp"
#include "hubqa/circuit.hpp"
#include "hubqa/hamiltonian.hpp"
#include "hubqa/records.hpp"
#include "hubqa/schedule.hpp"
#include "hubqa/simcore.hpp"
#include "hubqa/stateprep.hpp"

namespace hubqa {

/// How the hopping terms are split into commuting groups.
///   XxYyZz:   all XX terms, all YY terms, the interaction (default).
///   XyParity: (XX+YY) on pairs starting at even qubits, then at odd qubits;
///             each group conserves N_up and N_down exactly.
enum class Grouping { XxYyZz, XyParity };

inline std::string_view grouping_name(Grouping g) { return g == Grouping::XxYyZz ? "xx-yy-zz" : "xy-parity"; }

inline Grouping parse_grouping(std::string_view s) {
  if (s == "xx-yy-zz" || s == "xxyyzz") return Grouping::XxYyZz;
  if (s == "xy-parity" || s == "xyparity") return Grouping::XyParity;
  throw ArgumentError("unknown grouping '" + std::string(s) + "' (expected xx-yy-zz or xy-parity)");
}

struct TrotterOptions {
  Grouping grouping = Grouping::XxYyZz;
  // Fuse the trailing half hopping block of each step with the leading one of
  // the next. Off: every step is the full symmetric five-block product.
  bool merge_half_steps = true;
};

namespace detail {

/// Nearest-neighbour pairs (q, q+1) inside each spin block, with q of the given parity.
inline std::vector<std::pair<int, int>> hopping_pairs(int L, int parity) {
  std::vector<std::pair<int, int>> out;
  for (int q = parity; q + 1 < 2 * L; q += 2) {
    if (q == L - 1) continue;
    out.emplace_back(q, q + 1);
  }
  return out;
}

/// exp(-i theta sum XX) over all hopping pairs.
inline void append_xx(Circuit& c, int L, double theta) {
  for (int q = 0; q < 2 * L; ++q) c.push(GateOp::h(q));
  for (int parity : {0, 1}) {
    for (auto [a, b] : hopping_pairs(L, parity)) c.push(GateOp::rzz(a, b, theta));
  }
  for (int q = 0; q < 2 * L; ++q) c.push(GateOp::h(q));
}

/// exp(-i theta sum YY), using Y = (+X) Z (-X).
inline void append_yy(Circuit& c, int L, double theta) {
  for (int q = 0; q < 2 * L; ++q) c.push(GateOp::minus_x(q));
  for (int parity : {0, 1}) {
    for (auto [a, b] : hopping_pairs(L, parity)) c.push(GateOp::rzz(a, b, theta));
  }
  for (int q = 0; q < 2 * L; ++q) c.push(GateOp::plus_x(q));
}

/// exp(-i theta sum_i (I - Z_i)(I - Z_{i+L})) up to a global phase.
inline void append_zz(Circuit& c, int L, double theta) {
  for (int q = 0; q < 2 * L; ++q) c.push(GateOp::rz(q, -2.0 * theta));
  for (int i = 0; i < L; ++i) c.push(GateOp::rzz(i, i + L, theta));
}

/// exp(-i theta sum (XX + YY)) over the pairs of one parity.
inline void append_xy(Circuit& c, int L, int parity, double theta) {
  for (auto [a, b] : hopping_pairs(L, parity)) {
    c.push(GateOp::h(a));
    c.push(GateOp::h(b));
    c.push(GateOp::rzz(a, b, theta));
    c.push(GateOp::h(a));
    c.push(GateOp::h(b));
    c.push(GateOp::minus_x(a));
    c.push(GateOp::minus_x(b));
    c.push(GateOp::rzz(a, b, theta));
    c.push(GateOp::plus_x(a));
    c.push(GateOp::plus_x(b));
  }
}

// The hopping term is -t/2 sum (XX + YY), so a hopping factor exp(-i dt H_hop)
// has RZZ angle -t dt / 2.
inline void append_outer(Circuit& c, const HubbardParams& p, Grouping g, double dt) {
  const double theta = -p.t_hop * dt / 2.0;
  if (g == Grouping::XxYyZz) append_xx(c, p.L, theta);
  else append_xy(c, p.L, 0, theta);
}

inline void append_inner(Circuit& c, const HubbardParams& p, Grouping g, double dt) {
  const double theta = -p.t_hop * dt / 2.0;
  if (g == Grouping::XxYyZz) append_yy(c, p.L, theta);
  else append_xy(c, p.L, 1, theta);
}

// Interaction term f U / 4 sum (I - Z)(I - Z).
inline void append_interaction(Circuit& c, const HubbardParams& p, double strength, double dt) {
  append_zz(c, p.L, strength * p.U * dt / 4.0);
}

}  // namespace detail

/// Step n of the anneal. With merging on, step n is
/// [outer(tau or tau/2 for n = 1), interaction(tau/2), inner(tau), interaction(tau/2)]
/// and closing_segment() supplies the final outer(tau/2). With merging off the
/// step is the full symmetric product
/// outer(tau/2) interaction(tau/2) inner(tau) interaction(tau/2) outer(tau/2).
inline Circuit trotter_step(const HubbardParams& p, const AnnealSchedule& schedule, int n, const TrotterOptions& opt = {}) {
  p.validate();
  schedule.validate();
  const double tau = schedule.tau;
  const double f = schedule.strength_at_step(n);
  Circuit c(p.n_qubits(), "trotter[" + std::to_string(n) + "]");
  const bool merged_lead = opt.merge_half_steps && n > 1;
  detail::append_outer(c, p, opt.grouping, merged_lead ? tau : tau / 2.0);
  detail::append_interaction(c, p, f, tau / 2.0);
  detail::append_inner(c, p, opt.grouping, tau);
  detail::append_interaction(c, p, f, tau / 2.0);
  if (!opt.merge_half_steps) detail::append_outer(c, p, opt.grouping, tau / 2.0);
  return c;
}

/// Trailing half hopping block of a merged anneal.
inline Circuit closing_segment(const HubbardParams& p, const AnnealSchedule& schedule, const TrotterOptions& opt = {}) {
  Circuit c(p.n_qubits(), "closing");
  detail::append_outer(c, p, opt.grouping, schedule.tau / 2.0);
  return c;
}

/// prep, then trotter[1..n_steps], then (merged mode) closing.
inline Circuit build_anneal_circuit(const HubbardParams& p, const AnnealSchedule& schedule, const TrotterOptions& opt = {}) {
  p.validate();
  schedule.validate();
  Circuit c(p.n_qubits(), "anneal");
  c.append_segment(prep_circuit(p), "prep");
  for (int n = 1; n <= schedule.n_steps(); ++n) c.append_segment(trotter_step(p, schedule, n, opt), "trotter[" + std::to_string(n) + "]");
  if (opt.merge_half_steps) c.append_segment(closing_segment(p, schedule, opt), "closing");
  return c;
}

/// Exact ground energy of the interacting chain: free fermions at U = 0,
/// Bethe ansatz otherwise, exact diagonalization if the root solve fails.
inline double reference_energy(const HubbardParams& p) {
  if (p.U == 0.0) return free_fermion_energy(p);
  try {
    return solve_ground_state(p).energy;
  } catch (const ConvergenceError&) {
  } catch (const SolverError&) {
  }
  return exact_diag(p, 1.0).energy;
}

struct AnnealRun {
  StateVector state;
  GateTally gates;          // whole circuit
  GateTally trotter_gates;  // trotter[*] segments only
  double seconds = 0.0;
};

/// Builds the circuit and runs it from |0...0>.
inline AnnealRun simulate_anneal(const HubbardParams& p, const AnnealSchedule& schedule, const TrotterOptions& opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  StateVector state(p.n_qubits());
  const Circuit c = build_anneal_circuit(p, schedule, opt);
  apply_gates(state, c.gates());
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(state), count_gates(c), count_segment_gates(c, "trotter["), seconds};
}

/// Probability weight of the state inside the (N_up, N_down) sector.
inline double sector_weight(const StateVector& state, const HubbardParams& p) {
  const std::uint64_t block = (std::uint64_t{1} << p.L) - 1;
  double w = 0.0;
  const auto a = state.amplitudes();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::popcount(i & block) == p.n_up && std::popcount((i >> p.L) & block) == p.n_down) w += std::norm(a[i]);
  }
  return w;
}

/// Runs the anneal and scores it against the exact ground energy. Pass e0 to
/// skip recomputing it.
inline SweepRecord run_anneal(const HubbardParams& p, const AnnealSchedule& schedule, const TrotterOptions& opt = {},
                              const double* e0 = nullptr) {
  AnnealRun run = simulate_anneal(p, schedule, opt);
  SweepRecord r;
  r.L = p.L;
  r.U = p.U;
  r.t_H = p.t_hop;
  r.schedule = std::string(schedule_name(schedule.kind));
  r.grouping = std::string(grouping_name(opt.grouping));
  r.T_A = schedule.total_time;
  r.tau = schedule.tau;
  r.steps = schedule.n_steps();
  r.final_energy = expectation(run.state, qubit_hamiltonian(p, 1.0));
  r.E0 = e0 ? *e0 : reference_energy(p);
  r.delta_E = r.final_energy - r.E0;
  r.gates_1q = run.gates.one_qubit;
  r.gates_2q = run.gates.two_qubit;
  r.wall_seconds = run.seconds;
  return r;
}

}  // namespace hubqa
