#pragma once

#include <array>
#include <cmath>
#include <string>
#include <string_view>

#include "hubqa/errors.hpp"

namespace hubqa {

// Gate set of the annealing circuits plus the three gates needed for Givens
// state preparation.
//
//   H        1/sqrt2 [[1, 1], [1, -1]]
//   PlusX    1/sqrt2 [[1, i], [i, 1]]     (= RX(-pi/2))
//   MinusX   1/sqrt2 [[1, -i], [-i, 1]]   (= RX(pi/2))
//   RZ(t)    diag(e^{-it/2}, e^{it/2})
//   RZZ(t)   exp(-i t Z(x)Z)              (full angle, not t/2)
//   X        Pauli X
//   CNOT     qubits[0] control, qubits[1] target
//   CRY(t)   qubits[0] control, RY(t) = exp(-i t/2 Y) on qubits[1]
enum class GateKind { H, PlusX, MinusX, RZ, RZZ, X, CNOT, CRY };

constexpr std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::PlusX: return "PlusX";
    case GateKind::MinusX: return "MinusX";
    case GateKind::RZ: return "RZ";
    case GateKind::RZZ: return "RZZ";
    case GateKind::X: return "X";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CRY: return "CRY";
  }
  return "?";
}

constexpr int gate_arity(GateKind kind) {
  switch (kind) {
    case GateKind::RZZ:
    case GateKind::CNOT:
    case GateKind::CRY: return 2;
    default: return 1;
  }
}

constexpr bool gate_has_angle(GateKind kind) {
  return kind == GateKind::RZ || kind == GateKind::RZZ || kind == GateKind::CRY;
}

struct GateOp {
  GateKind kind = GateKind::H;
  std::array<int, 2> qubits{0, -1};
  double angle = 0.0;

  int arity() const { return gate_arity(kind); }

  static GateOp h(int q) { return {GateKind::H, {q, -1}, 0.0}; }
  static GateOp plus_x(int q) { return {GateKind::PlusX, {q, -1}, 0.0}; }
  static GateOp minus_x(int q) { return {GateKind::MinusX, {q, -1}, 0.0}; }
  static GateOp x(int q) { return {GateKind::X, {q, -1}, 0.0}; }
  static GateOp rz(int q, double theta) { return {GateKind::RZ, {q, -1}, theta}; }
  static GateOp rzz(int a, int b, double theta) { return {GateKind::RZZ, {a, b}, theta}; }
  static GateOp cnot(int control, int target) { return {GateKind::CNOT, {control, target}, 0.0}; }
  static GateOp cry(int control, int target, double theta) {
    return {GateKind::CRY, {control, target}, theta};
  }

  /// Gate whose unitary is the inverse of this one.
  GateOp inverse() const {
    GateOp inv = *this;
    switch (kind) {
      case GateKind::PlusX: inv.kind = GateKind::MinusX; break;
      case GateKind::MinusX: inv.kind = GateKind::PlusX; break;
      case GateKind::RZ:
      case GateKind::RZZ:
      case GateKind::CRY: inv.angle = -angle; break;
      default: break;
    }
    return inv;
  }

  /// Throws ArgumentError unless indices fit in n_qubits, are distinct, and
  /// the angle is finite.
  void validate(int n_qubits) const {
    for (int i = 0; i < arity(); ++i) {
      if (qubits[i] < 0 || qubits[i] >= n_qubits) {
        throw ArgumentError("gate " + std::string(gate_name(kind)) + ": qubit index " +
                            std::to_string(qubits[i]) + " out of range for " +
                            std::to_string(n_qubits) + " qubits");
      }
    }
    if (arity() == 2 && qubits[0] == qubits[1]) {
      throw ArgumentError("gate " + std::string(gate_name(kind)) +
                          ": control and target must differ");
    }
    if (!std::isfinite(angle)) {
      throw ArgumentError("gate " + std::string(gate_name(kind)) + ": non-finite angle");
    }
  }

  friend bool operator==(const GateOp&, const GateOp&) = default;
};

}  // namespace hubqa
