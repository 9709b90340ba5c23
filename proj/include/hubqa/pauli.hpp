#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hubqa/errors.hpp"

namespace hubqa {

enum class Pauli : std::uint8_t { X, Y, Z };

/// coeff * prod_q P_q. Qubit indices are distinct by construction (map keys).
struct PauliTerm {
  double coeff = 0.0;
  std::map<int, Pauli> ops;
};

/// Hermitian operator sum_t coeff_t P_t + identity_offset * I.
struct PauliTermSum {
  std::vector<PauliTerm> terms;
  double identity_offset = 0.0;

  PauliTermSum& add(double coeff, std::map<int, Pauli> ops) {
    terms.push_back({coeff, std::move(ops)});
    return *this;
  }

  /// Largest qubit index referenced, or -1 for a pure identity.
  int max_qubit() const {
    int m = -1;
    for (const auto& t : terms) {
      if (!t.ops.empty()) m = std::max(m, t.ops.rbegin()->first);
    }
    return m;
  }

  double coefficient_norm() const {
    double s = std::abs(identity_offset);
    for (const auto& t : terms) s += std::abs(t.coeff);
    return s;
  }

  PauliTermSum& operator+=(const PauliTermSum& other) {
    terms.insert(terms.end(), other.terms.begin(), other.terms.end());
    identity_offset += other.identity_offset;
    return *this;
  }
};

/// Bit-mask form of a Pauli string: P|b> = i^{n_y} (-1)^{|b & z_mask|} |b ^ x_mask>.
struct PauliMask {
  std::uint64_t x_mask = 0;
  std::uint64_t z_mask = 0;
  int n_y = 0;

  static PauliMask from(const std::map<int, Pauli>& ops, int n_qubits) {
    PauliMask m;
    for (const auto& [q, p] : ops) {
      if (q < 0 || q >= n_qubits) {
        throw ArgumentError("Pauli term references qubit " + std::to_string(q) + " but the state has " +
                            std::to_string(n_qubits) + " qubits");
      }
      const std::uint64_t bit = std::uint64_t{1} << q;
      if (p == Pauli::X || p == Pauli::Y) m.x_mask |= bit;
      if (p == Pauli::Z || p == Pauli::Y) m.z_mask |= bit;
      if (p == Pauli::Y) ++m.n_y;
    }
    return m;
  }
};

}  // namespace hubqa
