#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hubqa/errors.hpp"
#include "hubqa/gates.hpp"

namespace hubqa {

/// Named half-open gate range [begin, end) inside a circuit.
struct Segment {
  std::string label;
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Flat gate list. Segments only annotate ranges (prep, trotter[n], ...);
/// they never nest and never change what gets executed.
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int n_qubits, std::string label = {}) : n_qubits_(n_qubits), label_(std::move(label)) {
    if (n_qubits < 1) throw ArgumentError("Circuit needs at least one qubit");
  }

  int n_qubits() const { return n_qubits_; }
  const std::string& label() const { return label_; }
  const std::vector<GateOp>& gates() const { return gates_; }
  const std::vector<Segment>& segments() const { return segments_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }

  void push(const GateOp& g) {
    g.validate(n_qubits_);
    gates_.push_back(g);
  }

  /// Appends `other`'s gates; its segments are carried over, shifted.
  void append(const Circuit& other) {
    if (other.n_qubits_ > n_qubits_) throw ArgumentError("Circuit::append: qubit count mismatch");
    const std::size_t offset = gates_.size();
    gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
    for (Segment s : other.segments_) {
      s.begin += offset;
      s.end += offset;
      segments_.push_back(std::move(s));
    }
  }

  /// Appends `other` as one labeled segment (dropping its inner segments).
  void append_segment(const Circuit& other, std::string label) {
    if (other.n_qubits_ > n_qubits_) throw ArgumentError("Circuit::append_segment: qubit count mismatch");
    const std::size_t begin = gates_.size();
    gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
    segments_.push_back({std::move(label), begin, gates_.size()});
  }

  void mark_segment(std::string label, std::size_t begin, std::size_t end) {
    if (begin > end || end > gates_.size()) throw ArgumentError("Circuit::mark_segment: bad range");
    segments_.push_back({std::move(label), begin, end});
  }

  void reserve(std::size_t n) { gates_.reserve(n); }

 private:
  int n_qubits_ = 1;
  std::string label_;
  std::vector<GateOp> gates_;
  std::vector<Segment> segments_;
};

struct GateTally {
  long long one_qubit = 0;
  long long two_qubit = 0;

  long long total() const { return one_qubit + two_qubit; }
  GateTally& operator+=(const GateTally& o) {
    one_qubit += o.one_qubit;
    two_qubit += o.two_qubit;
    return *this;
  }
  friend GateTally operator+(GateTally a, const GateTally& b) { return a += b; }
  friend bool operator==(const GateTally&, const GateTally&) = default;
};

template <class It>
inline GateTally count_gates(It first, It last) {
  GateTally t;
  for (; first != last; ++first) {
    if (first->arity() == 2) {
      ++t.two_qubit;
    } else {
      ++t.one_qubit;
    }
  }
  return t;
}

inline GateTally count_gates(const Circuit& c) { return count_gates(c.gates().begin(), c.gates().end()); }

/// Tally over all segments whose label starts with `prefix`.
inline GateTally count_segment_gates(const Circuit& c, std::string_view prefix) {
  GateTally t;
  for (const auto& s : c.segments()) {
    if (s.label.starts_with(prefix)) {
      t += count_gates(c.gates().begin() + static_cast<std::ptrdiff_t>(s.begin),
                       c.gates().begin() + static_cast<std::ptrdiff_t>(s.end));
    }
  }
  return t;
}

inline std::size_t count_segments(const Circuit& c, std::string_view prefix) {
  return static_cast<std::size_t>(
      std::count_if(c.segments().begin(), c.segments().end(), [&](const Segment& s) { return s.label.starts_with(prefix); }));
}

/// Greedy ASAP layering: a gate lands one layer after the latest gate on any
/// of its qubits. Returns the number of layers.
inline int circuit_depth(const Circuit& c) {
  std::vector<int> frontier(static_cast<std::size_t>(c.n_qubits()), 0);
  int depth = 0;
  for (const auto& g : c.gates()) {
    int layer = 0;
    for (int i = 0; i < g.arity(); ++i) layer = std::max(layer, frontier[g.qubits[i]]);
    ++layer;
    for (int i = 0; i < g.arity(); ++i) frontier[g.qubits[i]] = layer;
    depth = std::max(depth, layer);
  }
  return depth;
}

namespace detail {

inline std::string format_angle(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

/// OpenQASM 2.0 text. RZZ(t) is lowered to cx; rz(2t); cx (exact), PlusX and
/// MinusX to rx(-pi/2) / rx(pi/2) (exact). qelib1.inc has no cry, so a
/// circuit with CRY carries its own definition in terms of ry and cx.
inline std::string export_qasm(const Circuit& c) {
  std::ostringstream out;
  out << "OPENQASM 2.0;\n";
  out << "include \"qelib1.inc\";\n";
  if (std::any_of(c.gates().begin(), c.gates().end(), [](const GateOp& g) { return g.kind == GateKind::CRY; })) {
    out << "gate cry(theta) a,b { ry(theta/2) b; cx a,b; ry(-theta/2) b; cx a,b; }\n";
  }
  if (!c.label().empty()) out << "// " << c.label() << "\n";
  out << "qreg q[" << c.n_qubits() << "];\n";
  auto q = [](int i) { return "q[" + std::to_string(i) + "]"; };
  for (const auto& g : c.gates()) {
    const int a = g.qubits[0], b = g.qubits[1];
    switch (g.kind) {
      case GateKind::H: out << "h " << q(a) << ";\n"; break;
      case GateKind::X: out << "x " << q(a) << ";\n"; break;
      case GateKind::PlusX: out << "rx(-pi/2) " << q(a) << ";\n"; break;
      case GateKind::MinusX: out << "rx(pi/2) " << q(a) << ";\n"; break;
      case GateKind::RZ: out << "rz(" << detail::format_angle(g.angle) << ") " << q(a) << ";\n"; break;
      case GateKind::RZZ:
        out << "cx " << q(a) << "," << q(b) << ";\n";
        out << "rz(" << detail::format_angle(2.0 * g.angle) << ") " << q(b) << ";\n";
        out << "cx " << q(a) << "," << q(b) << ";\n";
        break;
      case GateKind::CNOT: out << "cx " << q(a) << "," << q(b) << ";\n"; break;
      case GateKind::CRY:
        out << "cry(" << detail::format_angle(g.angle) << ") " << q(a) << "," << q(b) << ";\n";
        break;
    }
  }
  return out.str();
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Accepts a plain number, or [-]pi[/k] / [-]k*pi.
inline double parse_angle(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  double sign = 1.0;
  if (!s.empty() && s[0] == '-') {
    sign = -1.0;
    s.erase(0, 1);
  }
  const double pi = 3.14159265358979323846;
  if (s == "pi") return sign * pi;
  if (s.starts_with("pi/")) return sign * pi / std::stod(s.substr(3));
  if (s.ends_with("*pi")) return sign * std::stod(s.substr(0, s.size() - 3)) * pi;
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw ArgumentError("QASM: cannot parse angle '" + std::string(text) + "'");
  return sign * v;
}

inline int parse_qubit_ref(std::string_view s) {
  s = trim(s);
  const auto open = s.find('['), close = s.find(']');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
    throw ArgumentError("QASM: bad qubit reference '" + std::string(s) + "'");
  }
  return std::stoi(std::string(s.substr(open + 1, close - open - 1)));
}

}  // namespace detail

/// Reads back the subset of OpenQASM 2.0 that export_qasm writes
/// (h, x, rx(+-pi/2), rz, cx, cry). RZZ blocks come back as cx/rz/cx.
/// Gate definitions are skipped; cry keeps its usual meaning.
inline Circuit parse_qasm(std::string_view source) {
  std::string body(source);
  for (std::size_t at = body.find("gate "); at != std::string::npos; at = body.find("gate ", at)) {
    if (at > 0 && !std::isspace(static_cast<unsigned char>(body[at - 1])) && body[at - 1] != ';') {
      ++at;
      continue;
    }
    const auto close = body.find('}', at);
    if (close == std::string::npos) throw ArgumentError("QASM: unterminated gate definition");
    body.erase(at, close + 1 - at);
  }
  const std::string_view text = body;
  Circuit c(1);
  bool have_register = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(';', pos);
    std::string_view stmt = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? text.size() : end + 1;
    // Drop // comments (they end at newline).
    std::string clean;
    for (std::size_t i = 0; i < stmt.size(); ++i) {
      if (stmt[i] == '/' && i + 1 < stmt.size() && stmt[i + 1] == '/') {
        while (i < stmt.size() && stmt[i] != '\n') ++i;
        continue;
      }
      clean.push_back(stmt[i]);
    }
    std::string_view s = detail::trim(clean);
    if (s.empty() || s.starts_with("OPENQASM") || s.starts_with("include")) continue;
    if (s.starts_with("qreg")) {
      const auto open = s.find('['), close = s.find(']');
      c = Circuit(std::stoi(std::string(s.substr(open + 1, close - open - 1))));
      have_register = true;
      continue;
    }
    if (!have_register) throw ArgumentError("QASM: gate before qreg");
    std::string name;
    double angle = 0.0;
    std::string_view args;
    const auto paren = s.find('(');
    const auto space = s.find_first_of(" \t\n");
    if (paren != std::string_view::npos && (space == std::string_view::npos || paren < space)) {
      const auto close = s.find(')', paren);
      name = std::string(s.substr(0, paren));
      angle = detail::parse_angle(s.substr(paren + 1, close - paren - 1));
      args = s.substr(close + 1);
    } else {
      name = std::string(s.substr(0, space));
      args = s.substr(space);
    }
    std::vector<int> qs;
    std::size_t start = 0;
    while (start <= args.size()) {
      const auto comma = args.find(',', start);
      qs.push_back(detail::parse_qubit_ref(args.substr(start, comma == std::string_view::npos ? args.npos : comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    const double half_pi = 1.57079632679489661923;
    if (name == "h") {
      c.push(GateOp::h(qs.at(0)));
    } else if (name == "x") {
      c.push(GateOp::x(qs.at(0)));
    } else if (name == "rx" && std::abs(angle + half_pi) < 1e-12) {
      c.push(GateOp::plus_x(qs.at(0)));
    } else if (name == "rx" && std::abs(angle - half_pi) < 1e-12) {
      c.push(GateOp::minus_x(qs.at(0)));
    } else if (name == "rz") {
      c.push(GateOp::rz(qs.at(0), angle));
    } else if (name == "cx") {
      c.push(GateOp::cnot(qs.at(0), qs.at(1)));
    } else if (name == "cry") {
      c.push(GateOp::cry(qs.at(0), qs.at(1), angle));
    } else {
      throw ArgumentError("QASM: unsupported statement '" + std::string(s) + "'");
    }
  }
  return c;
}

/// {"n_qubits", "label", "gates": [{"kind", "qubits", "angle"?}], "segments"}
inline nlohmann::ordered_json circuit_to_json(const Circuit& c) {
  nlohmann::ordered_json j;
  j["n_qubits"] = c.n_qubits();
  j["label"] = c.label();
  auto& gates = j["gates"] = nlohmann::ordered_json::array();
  for (const auto& g : c.gates()) {
    nlohmann::ordered_json jg;
    jg["kind"] = std::string(gate_name(g.kind));
    if (g.arity() == 2) {
      jg["qubits"] = {g.qubits[0], g.qubits[1]};
    } else {
      jg["qubits"] = {g.qubits[0]};
    }
    if (gate_has_angle(g.kind)) jg["angle"] = g.angle;
    gates.push_back(std::move(jg));
  }
  auto& segs = j["segments"] = nlohmann::ordered_json::array();
  for (const auto& s : c.segments()) segs.push_back({{"label", s.label}, {"begin", s.begin}, {"end", s.end}});
  return j;
}

}  // namespace hubqa
