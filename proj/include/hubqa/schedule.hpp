#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "hubqa/errors.hpp"

namespace hubqa {

enum class ScheduleKind { Linear, Sinusoidal };

inline std::string_view schedule_name(ScheduleKind k) { return k == ScheduleKind::Linear ? "linear" : "sinusoidal"; }

inline ScheduleKind parse_schedule(std::string_view s) {
  if (s == "linear") return ScheduleKind::Linear;
  if (s == "sinusoidal" || s == "sin") return ScheduleKind::Sinusoidal;
  throw ArgumentError("unknown schedule '" + std::string(s) + "' (expected linear or sinusoidal)");
}

/// Multiplier of U at anneal parameter s: s (linear) or
/// (sin(pi s - pi/2) + 1) / 2 (sinusoidal, flat at both ends).
inline double interaction_strength(ScheduleKind kind, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw ArgumentError("interaction_strength: s must lie in [0, 1]");
  if (kind == ScheduleKind::Linear) return s;
  return (std::sin(std::numbers::pi * s - std::numbers::pi / 2.0) + 1.0) / 2.0;
}

/// Total anneal time T_A split into n_steps = T_A / tau equal steps. The
/// Hamiltonian of step n (1-based) is frozen at its midpoint (n - 1/2) tau / T_A.
struct AnnealSchedule {
  ScheduleKind kind = ScheduleKind::Linear;
  double total_time = 1.0;
  double tau = 0.025;

  static constexpr double kMaxTau = 0.1;

  int n_steps() const { return static_cast<int>(std::llround(total_time / tau)); }

  void validate() const {
    if (!(total_time > 0.0) || !(tau > 0.0)) throw ArgumentError("AnnealSchedule: T_A and tau must be positive");
    if (tau > kMaxTau + 1e-15) throw ArgumentError("AnnealSchedule: tau must not exceed 0.1");
    const double ratio = total_time / tau;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
      throw ArgumentError("AnnealSchedule: T_A / tau must be an integer");
    }
  }

  double midpoint(int n) const {
    if (n < 1 || n > n_steps()) throw ArgumentError("AnnealSchedule: step index out of range");
    return (n * tau - tau / 2.0) / total_time;
  }

  double strength_at_step(int n) const { return interaction_strength(kind, midpoint(n)); }
};

}  // namespace hubqa
