// Anneals the half-filled L=4 chain at U=4 for a few total times and prints
// how close each run gets to the Bethe-ansatz ground energy.

#include <cstdio>

#include "hubqa/anneal.hpp"
#include "hubqa/bethe.hpp"

int main() {
  using namespace hubqa;
  const auto p = HubbardParams::half_filled(4, 4.0);
  const double e0 = solve_ground_state(p).energy;
  std::printf("L=%d U=%g  E0 = %.6f\n", p.L, p.U, e0);
  std::printf("%8s %8s %12s %12s %10s\n", "T_A", "steps", "E_final", "dE", "gates");
  for (double t : {1.0, 2.5, 5.0, 10.0, 20.0}) {
    const SweepRecord r = run_anneal(p, {ScheduleKind::Linear, t, 0.025}, {}, &e0);
    std::printf("%8.2f %8lld %12.6f %12.3e %10lld\n", r.T_A, r.steps, r.final_energy, r.delta_E, r.gates_1q + r.gates_2q);
  }
}
