#pragma once

// Power-law fits, onset detection on residual-energy curves, and the
// shot-based energy estimator.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hubqa/errors.hpp"
#include "hubqa/hamiltonian.hpp"
#include "hubqa/pauli.hpp"
#include "hubqa/records.hpp"
#include "hubqa/simcore.hpp"

namespace hubqa {

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
  int points = 0;
};

/// y = prefactor * x^exponent by least squares on (ln x, ln y).
inline PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 3) throw ArgumentError("fit_power_law: need at least 3 points");
  const double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0;
  for (auto [x, y] : pts) {
    if (!(x > 0.0) || !(y > 0.0)) throw ArgumentError("fit_power_law: coordinates must be positive");
    sx += std::log(x);
    sy += std::log(y);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (auto [x, y] : pts) {
    const double dx = std::log(x) - mx, dy = std::log(y) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw ArgumentError("fit_power_law: x values must not all coincide");
  PowerLawFit f;
  f.exponent = sxy / sxx;
  f.prefactor = std::exp(my - f.exponent * mx);
  f.r_squared = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  f.points = static_cast<int>(pts.size());
  return f;
}

struct OnsetOptions {
  double slope_tolerance = 0.25;
  int min_points = 3;
  int min_curve = 6;
};

struct Onset {
  bool found = false;
  double epsilon = 0.0;  // residual energy at the first point of the regime
  double alpha = 0.0;    // geometric mean of delta_E * T_A^p over the regime
  double onset_time = 0.0;
  std::size_t first = 0;  // index of the first in-regime point
  int points = 0;
  double slope = 0.0;  // least-squares slope over the regime
};

/// Longest tail of the curve whose adjacent log-log slopes all lie within
/// tolerance of -p. Curve points are (T_A, delta_E), ascending in T_A.
inline Onset detect_onset(const std::vector<std::pair<double, double>>& curve, double p, const OnsetOptions& opt = {}) {
  if (static_cast<int>(curve.size()) < opt.min_curve) {
    throw ArgumentError("detect_onset: need at least " + std::to_string(opt.min_curve) + " points");
  }
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (!(curve[i].first > 0.0)) throw ArgumentError("detect_onset: T_A must be positive");
    if (i > 0 && !(curve[i].first > curve[i - 1].first)) throw ArgumentError("detect_onset: curve must ascend in T_A");
  }
  auto slope_ok = [&](std::size_t j) {
    const auto [x0, y0] = curve[j];
    const auto [x1, y1] = curve[j + 1];
    if (!(y0 > 0.0) || !(y1 > 0.0)) return false;
    const double s = std::log(y1 / y0) / std::log(x1 / x0);
    return std::abs(s + p) <= opt.slope_tolerance;
  };
  std::size_t first = curve.size() - 1;
  while (first > 0 && slope_ok(first - 1)) --first;

  Onset out;
  out.points = static_cast<int>(curve.size() - first);
  out.first = first;
  if (out.points < opt.min_points) return out;
  out.found = true;
  double log_sum = 0.0;
  std::vector<std::pair<double, double>> tail(curve.begin() + static_cast<std::ptrdiff_t>(first), curve.end());
  for (auto [x, y] : tail) log_sum += std::log(y) + p * std::log(x);
  out.alpha = std::exp(log_sum / out.points);
  out.epsilon = curve[first].second;
  out.onset_time = curve[first].first;
  out.slope = fit_power_law(tail).exponent;
  return out;
}

struct SamplingEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
};

namespace detail {

enum class Basis { X, Y, Z };

inline std::optional<Basis> term_basis(const PauliTerm& t) {
  std::optional<Basis> b;
  for (const auto& [q, op] : t.ops) {
    const Basis here = op == Pauli::X ? Basis::X : op == Pauli::Y ? Basis::Y : Basis::Z;
    if (b && *b != here) return std::nullopt;
    b = here;
  }
  return b;
}

inline std::uint64_t support_mask(const PauliTerm& t) {
  std::uint64_t m = 0;
  for (const auto& [q, op] : t.ops) m |= std::uint64_t{1} << q;
  return m;
}

}  // namespace detail

/// Estimates <op> from projective measurements in three settings: all qubits
/// in the X basis (after H), in the Y basis (after -X), and in Z. Every term of
/// op must be a product of a single Pauli type. Each setting gets `shots`
/// samples; the standard error adds the per-setting variances in quadrature.
inline SamplingEstimate estimate_energy_sampling(const StateVector& state, const PauliTermSum& op, int shots, std::uint64_t seed) {
  if (shots < 100) throw ArgumentError("estimate_energy_sampling: need at least 100 shots per group");
  std::vector<std::pair<double, std::uint64_t>> groups[3];
  for (const auto& t : op.terms) {
    if (t.ops.empty()) throw ArgumentError("estimate_energy_sampling: identity terms belong in identity_offset");
    const auto b = detail::term_basis(t);
    if (!b) throw ArgumentError("estimate_energy_sampling: term mixes Pauli types");
    groups[static_cast<int>(*b)].emplace_back(t.coeff, detail::support_mask(t));
  }
  SamplingEstimate out{op.identity_offset, 0.0};
  double var = 0.0;
  std::seed_seq seq{seed};
  std::vector<std::uint64_t> seeds(3);
  seq.generate(seeds.begin(), seeds.end());
  for (int g = 0; g < 3; ++g) {
    if (groups[g].empty()) continue;
    StateVector rotated = state;
    for (int q = 0; q < state.n_qubits(); ++q) {
      if (g == 0) apply_gate(rotated, GateOp::h(q));
      if (g == 1) apply_gate(rotated, GateOp::minus_x(q));
    }
    const auto samples = sample_bitstrings(rotated, shots, seeds[static_cast<std::size_t>(g)]);
    double sum = 0.0, sum_sq = 0.0;
    for (std::uint64_t s : samples) {
      double v = 0.0;
      for (auto [c, mask] : groups[g]) v += detail::parity(s & mask) ? -c : c;
      sum += v;
      sum_sq += v * v;
    }
    const double mean = sum / shots;
    const double sample_var = std::max(0.0, (sum_sq - shots * mean * mean) / (shots - 1));
    out.estimate += mean;
    var += sample_var / shots;
  }
  out.standard_error = std::sqrt(var);
  return out;
}

/// Estimate of <H(s=1)> for the Hubbard chain.
inline SamplingEstimate estimate_energy_sampling(const StateVector& state, const HubbardParams& p, int shots, std::uint64_t seed) {
  return estimate_energy_sampling(state, qubit_hamiltonian(p, 1.0), shots, seed);
}

struct SizeOnset {
  int L = 0;
  Onset onset;
};

struct ScalingReport {
  double p = 2.0;
  std::vector<SizeOnset> sizes;
  std::optional<PowerLawFit> alpha_fit;    // alpha ~ L^a
  std::optional<PowerLawFit> epsilon_fit;  // epsilon ~ L^-b
  std::optional<double> a, b;
  std::optional<double> crossover_exponent;  // (a + b) / p
  std::optional<double> precision_exponent;  // a / p
  std::vector<std::string> gaps;
};

/// Per-size onsets and the L-scaling of alpha and epsilon. Records are grouped
/// by L; each group is one residual-energy curve.
inline ScalingReport scaling_report(const std::vector<SweepRecord>& records, double p, const OnsetOptions& opt = {}) {
  std::map<int, std::vector<std::pair<double, double>>> curves;
  for (const auto& r : records) curves[r.L].emplace_back(r.T_A, r.delta_E);
  ScalingReport rep;
  rep.p = p;
  std::vector<std::pair<double, double>> alphas, epsilons;
  for (auto& [L, curve] : curves) {
    std::sort(curve.begin(), curve.end());
    SizeOnset so{L, {}};
    if (static_cast<int>(curve.size()) < opt.min_curve) {
      rep.gaps.push_back("L=" + std::to_string(L) + ": curve too short");
    } else {
      so.onset = detect_onset(curve, p, opt);
      if (so.onset.found) {
        alphas.emplace_back(L, so.onset.alpha);
        epsilons.emplace_back(L, so.onset.epsilon);
      } else {
        rep.gaps.push_back("L=" + std::to_string(L) + ": no onset");
      }
    }
    rep.sizes.push_back(so);
  }
  if (alphas.size() < 3) {
    rep.gaps.push_back("fewer than 3 sizes with an onset; no L fits");
    return rep;
  }
  rep.alpha_fit = fit_power_law(alphas);
  rep.epsilon_fit = fit_power_law(epsilons);
  rep.a = rep.alpha_fit->exponent;
  rep.b = -rep.epsilon_fit->exponent;
  rep.crossover_exponent = (*rep.a + *rep.b) / p;
  rep.precision_exponent = *rep.a / p;
  return rep;
}

/// Log-spaced grid from lo to hi, `per_decade` points per decade, each value
/// rounded to a multiple of tau.
inline std::vector<double> log_grid(double lo, double hi, int per_decade, double tau) {
  if (!(lo > 0.0) || !(hi >= lo) || per_decade < 1 || !(tau > 0.0)) throw ArgumentError("log_grid: bad range");
  const int n = std::max(1, static_cast<int>(std::ceil(std::log10(hi / lo) * per_decade)));
  std::vector<double> out;
  for (int i = 0; i <= n; ++i) {
    const double x = lo * std::pow(hi / lo, static_cast<double>(i) / n);
    const double snapped = std::max(1.0, std::round(x / tau)) * tau;
    if (out.empty() || snapped > out.back() + tau / 2) out.push_back(snapped);
  }
  return out;
}

}  // namespace hubqa
