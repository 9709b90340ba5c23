#pragma once

// Statevector simulator. Qubit q is bit q of the amplitude index (qubit 0 is
// the least significant bit). Gates update amplitude pairs/quads in place;
// no 2^n x 2^n matrix is ever formed.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hubqa/errors.hpp"
#include "hubqa/gates.hpp"
#include "hubqa/pauli.hpp"

namespace hubqa {

using cplx = std::complex<double>;

inline constexpr int kMaxQubits = 28;

namespace detail {

inline constexpr std::size_t kParallelMinSize = std::size_t{1} << 14;

template <class F>
inline void parallel_for(std::size_t n, F&& body) {
#if defined(_OPENMP)
#pragma omp parallel for schedule(static) if (n >= kParallelMinSize)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) body(static_cast<std::size_t>(i));
#else
  for (std::size_t i = 0; i < n; ++i) body(i);
#endif
}

template <class F>
inline cplx parallel_sum(std::size_t n, F&& term) {
  double re = 0.0, im = 0.0;
#if defined(_OPENMP)
#pragma omp parallel for schedule(static) reduction(+ : re, im) if (n >= kParallelMinSize)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
    const cplx v = term(static_cast<std::size_t>(i));
    re += v.real();
    im += v.imag();
  }
#else
  for (std::size_t i = 0; i < n; ++i) {
    const cplx v = term(i);
    re += v.real();
    im += v.imag();
  }
#endif
  return {re, im};
}

/// Spread k over all bit positions except q (inserts a 0 at bit q).
inline std::size_t insert_zero(std::size_t k, int q) {
  const std::size_t low = k & ((std::size_t{1} << q) - 1);
  return ((k >> q) << (q + 1)) | low;
}

inline int parity(std::uint64_t x) { return __builtin_parityll(x); }

// Plain complex product. std::complex operator* goes through the Annex G
// inf/nan recovery path, which dominates the gate kernels.
inline cplx mul(cplx a, cplx b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

}  // namespace detail

class StateVector {
 public:
  /// |0...0> on n_qubits qubits.
  explicit StateVector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1) throw ArgumentError("StateVector needs at least one qubit");
    if (n_qubits > kMaxQubits) {
      throw CapacityError("StateVector: " + std::to_string(n_qubits) + " qubits exceeds the supported maximum of " +
                          std::to_string(kMaxQubits));
    }
    amps_.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
    amps_[0] = 1.0;
  }

  /// Takes ownership of raw amplitudes; length must be a power of two.
  static StateVector from_amplitudes(std::vector<cplx> amps) {
    const std::size_t size = amps.size();
    if (size < 2 || (size & (size - 1)) != 0) {
      throw ArgumentError("StateVector: amplitude count must be a power of two >= 2");
    }
    StateVector s(1);
    s.n_qubits_ = std::countr_zero(size);
    if (s.n_qubits_ > kMaxQubits) throw CapacityError("StateVector: too many amplitudes");
    s.amps_ = std::move(amps);
    return s;
  }

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return amps_.size(); }
  std::span<const cplx> amplitudes() const { return amps_; }
  std::span<cplx> amplitudes() { return amps_; }
  const cplx& operator[](std::size_t i) const { return amps_[i]; }
  cplx& operator[](std::size_t i) { return amps_[i]; }

  double norm_squared() const {
    return detail::parallel_sum(amps_.size(), [&](std::size_t i) { return cplx{std::norm(amps_[i]), 0.0}; })
        .real();
  }

  void normalize() {
    const double inv = 1.0 / std::sqrt(norm_squared());
    for (auto& a : amps_) a *= inv;
  }

 private:
  int n_qubits_;
  std::vector<cplx> amps_;
};

/// Computational basis state; bits[i] is the value of qubit i.
inline StateVector init_basis_state(int n_qubits, std::span<const int> bits) {
  if (static_cast<int>(bits.size()) != n_qubits) {
    throw ArgumentError("init_basis_state: bitstring has " + std::to_string(bits.size()) + " entries, expected " +
                        std::to_string(n_qubits));
  }
  StateVector s(n_qubits);
  std::size_t index = 0;
  for (int q = 0; q < n_qubits; ++q) {
    if (bits[q] != 0 && bits[q] != 1) throw ArgumentError("init_basis_state: bits must be 0 or 1");
    if (bits[q]) index |= std::size_t{1} << q;
  }
  s[0] = 0.0;
  s[index] = 1.0;
  return s;
}

inline StateVector init_basis_state(int n_qubits, std::initializer_list<int> bits) {
  return init_basis_state(n_qubits, std::span<const int>(bits.begin(), bits.size()));
}

namespace detail {

inline void apply_1q(std::span<cplx> a, int q, cplx m00, cplx m01, cplx m10, cplx m11) {
  const std::size_t stride = std::size_t{1} << q;
  parallel_for(a.size() / 2, [&](std::size_t k) {
    const std::size_t i0 = insert_zero(k, q);
    const std::size_t i1 = i0 | stride;
    const cplx v0 = a[i0], v1 = a[i1];
    a[i0] = mul(m00, v0) + mul(m01, v1);
    a[i1] = mul(m10, v0) + mul(m11, v1);
  });
}

/// Visits every index with qubit `control` = 1 and qubit `target` = 0.
template <class F>
inline void for_controlled_pairs(std::size_t size, int control, int target, F&& body) {
  const int lo = std::min(control, target), hi = std::max(control, target);
  const std::size_t cbit = std::size_t{1} << control;
  parallel_for(size / 4, [&](std::size_t k) {
    const std::size_t base = insert_zero(insert_zero(k, lo), hi) | cbit;
    body(base);
  });
}

}  // namespace detail

/// state <- U_gate state. Throws ArgumentError on bad qubit indices.
inline void apply_gate(StateVector& state, const GateOp& g) {
  g.validate(state.n_qubits());
  auto a = state.amplitudes();
  const int q0 = g.qubits[0];
  const int q1 = g.qubits[1];
  const double r = std::numbers::sqrt2 / 2.0;
  const cplx i{0.0, 1.0};
  switch (g.kind) {
    case GateKind::H:
      detail::apply_1q(a, q0, r, r, r, -r);
      break;
    case GateKind::PlusX:
      detail::apply_1q(a, q0, r, i * r, i * r, r);
      break;
    case GateKind::MinusX:
      detail::apply_1q(a, q0, r, -i * r, -i * r, r);
      break;
    case GateKind::X: {
      const std::size_t stride = std::size_t{1} << q0;
      detail::parallel_for(a.size() / 2, [&](std::size_t k) {
        const std::size_t i0 = detail::insert_zero(k, q0);
        std::swap(a[i0], a[i0 | stride]);
      });
      break;
    }
    case GateKind::RZ: {
      const cplx p0 = std::polar(1.0, -g.angle / 2.0), p1 = std::polar(1.0, g.angle / 2.0);
      detail::parallel_for(a.size(), [&](std::size_t k) { a[k] = detail::mul(a[k], ((k >> q0) & 1U) ? p1 : p0); });
      break;
    }
    case GateKind::RZZ: {
      const cplx same = std::polar(1.0, -g.angle), diff = std::polar(1.0, g.angle);
      detail::parallel_for(a.size(), [&](std::size_t k) {
        a[k] = detail::mul(a[k], (((k >> q0) ^ (k >> q1)) & 1U) ? diff : same);
      });
      break;
    }
    case GateKind::CNOT: {
      const std::size_t tbit = std::size_t{1} << q1;
      detail::for_controlled_pairs(a.size(), q0, q1, [&](std::size_t base) { std::swap(a[base], a[base | tbit]); });
      break;
    }
    case GateKind::CRY: {
      const std::size_t tbit = std::size_t{1} << q1;
      const double c = std::cos(g.angle / 2.0), s = std::sin(g.angle / 2.0);
      detail::for_controlled_pairs(a.size(), q0, q1, [&](std::size_t base) {
        const cplx v0 = a[base], v1 = a[base | tbit];
        a[base] = c * v0 - s * v1;
        a[base | tbit] = s * v0 + c * v1;
      });
      break;
    }
  }
}

template <class Range>
inline void apply_gates(StateVector& state, const Range& gates) {
  for (const GateOp& g : gates) apply_gate(state, g);
}

/// <a|b>
inline cplx inner_product(const StateVector& a, const StateVector& b) {
  if (a.size() != b.size()) throw ArgumentError("inner_product: size mismatch");
  return detail::parallel_sum(a.size(), [&](std::size_t k) { return detail::mul(std::conj(a[k]), b[k]); });
}

/// |<a|b>|^2, insensitive to global phase.
inline double fidelity(const StateVector& a, const StateVector& b) { return std::norm(inner_product(a, b)); }

/// <psi|P|psi> for a single Pauli string in mask form (complex; real for Hermitian P).
inline cplx pauli_expectation(std::span<const cplx> a, const PauliMask& m) {
  static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const cplx phase = kIPow[m.n_y % 4];
  const cplx sum = detail::parallel_sum(a.size(), [&](std::size_t b) {
    const cplx v = detail::mul(std::conj(a[b ^ m.x_mask]), a[b]);
    return detail::parity(b & m.z_mask) ? -v : v;
  });
  return phase * sum;
}

/// <psi|op|psi>. The imaginary part must vanish (to 1e-10 relative to the
/// coefficient norm) and is dropped.
inline double expectation(const StateVector& state, const PauliTermSum& op) {
  cplx total = op.identity_offset * state.norm_squared();
  for (const auto& term : op.terms) {
    const PauliMask m = PauliMask::from(term.ops, state.n_qubits());
    total += term.coeff * pauli_expectation(state.amplitudes(), m);
  }
  if (std::abs(total.imag()) > 1e-10 * std::max(1.0, op.coefficient_norm())) {
    throw std::logic_error("expectation: imaginary part " + std::to_string(total.imag()) +
                           " exceeds tolerance; operator not Hermitian?");
  }
  return total.real();
}

/// op|psi> as a raw amplitude vector (not normalized).
inline std::vector<cplx> apply_pauli_sum(std::span<const cplx> a, int n_qubits, const PauliTermSum& op) {
  std::vector<cplx> out(a.size());
  for (std::size_t b = 0; b < a.size(); ++b) out[b] = op.identity_offset * a[b];
  static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (const auto& term : op.terms) {
    const PauliMask m = PauliMask::from(term.ops, n_qubits);
    const cplx c = term.coeff * kIPow[m.n_y % 4];
    for (std::size_t b = 0; b < a.size(); ++b) {
      const cplx v = detail::mul(c, a[b]);
      out[b ^ m.x_mask] += detail::parity(b & m.z_mask) ? -v : v;
    }
  }
  return out;
}

/// Born-rule samples. Each sample is a basis index; bit q holds qubit q.
inline std::vector<std::uint64_t> sample_bitstrings(const StateVector& state, int shots, std::uint64_t seed) {
  if (shots < 1) throw ArgumentError("sample_bitstrings: shots must be >= 1");
  const auto a = state.amplitudes();
  std::vector<double> cumulative(a.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    acc += std::norm(a[k]);
    cumulative[k] = acc;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, acc);
  std::vector<std::uint64_t> out(static_cast<std::size_t>(shots));
  for (auto& o : out) {
    const double u = uniform(rng);
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    o = static_cast<std::uint64_t>(it - cumulative.begin());
  }
  return out;
}

/// Bit q of a sample.
inline int sample_bit(std::uint64_t sample, int q) { return static_cast<int>((sample >> q) & 1U); }

}  // namespace hubqa
