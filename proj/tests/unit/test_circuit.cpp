#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "hubqa/anneal.hpp"
#include "hubqa/circuit.hpp"
#include "hubqa/simcore.hpp"
#include "oracles.hpp"

using namespace hubqa;

namespace {

Circuit random_circuit(int n, int gates, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> kind(0, 7), qubit(0, n - 1);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  Circuit c(n, "random");
  for (int k = 0; k < gates; ++k) {
    const int a = qubit(rng);
    int b = qubit(rng);
    while (b == a) b = qubit(rng);
    switch (kind(rng)) {
      case 0: c.push(GateOp::h(a)); break;
      case 1: c.push(GateOp::plus_x(a)); break;
      case 2: c.push(GateOp::minus_x(a)); break;
      case 3: c.push(GateOp::x(a)); break;
      case 4: c.push(GateOp::rz(a, angle(rng))); break;
      case 5: c.push(GateOp::rzz(a, b, angle(rng))); break;
      case 6: c.push(GateOp::cnot(a, b)); break;
      default: c.push(GateOp::cry(a, b, angle(rng))); break;
    }
  }
  return c;
}

AnnealSchedule one_step_schedule() { return {ScheduleKind::Linear, 1.0, 0.025}; }

}  // namespace

TEST(CountGates, EmptyCircuit) {
  Circuit c(3);
  EXPECT_EQ(count_gates(c), (GateTally{0, 0}));
  EXPECT_EQ(circuit_depth(c), 0);
}

TEST(CountGates, OneTrotterStepMatchesClosedForm) {
  for (int L = 2; L <= 20; ++L) {
    HubbardParams p{L, 1.0, 4.0, 1, 1};
    const auto tally = count_gates(trotter_step(p, one_step_schedule(), 2));
    EXPECT_EQ(tally.one_qubit, 12 * L) << "L=" << L;
    EXPECT_EQ(tally.two_qubit, 6 * L - 4) << "L=" << L;
  }
  const auto two = count_gates(trotter_step(HubbardParams::half_filled(2, 4), one_step_schedule(), 2));
  EXPECT_EQ(two, (GateTally{24, 8}));
  EXPECT_EQ(two.total(), 32);
  EXPECT_EQ(count_gates(trotter_step(HubbardParams::half_filled(20, 4), one_step_schedule(), 2)).total(), 356);
}

TEST(CountGates, AdditiveUnderConcatenation) {
  const auto a = random_circuit(5, 40, 1), b = random_circuit(5, 23, 2);
  Circuit ab = a;
  ab.append(b);
  EXPECT_EQ(count_gates(ab), count_gates(a) + count_gates(b));
  EXPECT_LE(circuit_depth(ab), circuit_depth(a) + circuit_depth(b));
}

TEST(CircuitDepth, ParallelSingleQubitGates) {
  Circuit c(6);
  for (int q = 0; q < 6; ++q) c.push(GateOp::h(q));
  EXPECT_EQ(circuit_depth(c), 1);
  c.push(GateOp::cnot(0, 1));
  c.push(GateOp::cnot(2, 3));
  EXPECT_EQ(circuit_depth(c), 2);
  c.push(GateOp::rz(1, 0.3));
  EXPECT_EQ(circuit_depth(c), 3);
}

TEST(Circuit, PushValidates) {
  Circuit c(2);
  EXPECT_THROW(c.push(GateOp::h(2)), ArgumentError);
  EXPECT_THROW(c.push(GateOp::cnot(0, 0)), ArgumentError);
  EXPECT_THROW(c.push(GateOp::rz(0, std::numeric_limits<double>::infinity())), ArgumentError);
  Circuit wide(4);
  wide.push(GateOp::h(3));
  EXPECT_THROW(c.append(wide), ArgumentError);
}

TEST(Circuit, SegmentsTrackStepBoundaries) {
  const auto p = HubbardParams::half_filled(2, 4);
  const AnnealSchedule s{ScheduleKind::Linear, 0.1, 0.025};
  const auto c = build_anneal_circuit(p, s);
  ASSERT_EQ(c.segments().size(), 6u);
  EXPECT_EQ(c.segments().front().label, "prep");
  EXPECT_EQ(c.segments()[1].label, "trotter[1]");
  EXPECT_EQ(c.segments().back().label, "closing");
  EXPECT_EQ(c.segments().back().end, c.size());
  EXPECT_EQ(count_segments(c, "trotter["), 4u);
}

TEST(ExportQasm, Header) {
  Circuit c(1);
  c.push(GateOp::h(0));
  const auto text = export_qasm(c);
  EXPECT_EQ(text.rfind("OPENQASM 2.0;", 0), 0u);
  EXPECT_NE(text.find("include \"qelib1.inc\";"), std::string::npos);
  EXPECT_NE(text.find("qreg q[1];"), std::string::npos);
  EXPECT_NE(text.find("h q[0];"), std::string::npos);
}

TEST(ExportQasm, RzzLowersToThreeLines) {
  Circuit c(2);
  c.push(GateOp::rzz(0, 1, 0.3));
  std::istringstream in(export_qasm(c));
  std::vector<std::string> body;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line.rfind("OPENQASM", 0) == 0 || line.rfind("include", 0) == 0 || line.rfind("qreg", 0) == 0 ||
        line.rfind("//", 0) == 0)
      continue;
    body.push_back(line);
  }
  ASSERT_EQ(body.size(), 3u);
  EXPECT_EQ(body[0].rfind("cx", 0), 0u);
  EXPECT_EQ(body[1].rfind("rz", 0), 0u);
  EXPECT_EQ(body[2].rfind("cx", 0), 0u);
}

TEST(ExportQasm, RoundTripPreservesStateUpToPhase) {
  for (int n : {2, 4, 6}) {
    const auto c = random_circuit(n, 60, 10 + n);
    const auto back = parse_qasm(export_qasm(c));
    EXPECT_EQ(back.n_qubits(), n);
    StateVector a(n), b(n);
    for (int q = 0; q < n; ++q) {
      apply_gate(a, GateOp::h(q));
      apply_gate(b, GateOp::h(q));
    }
    apply_gates(a, c.gates());
    apply_gates(b, back.gates());
    EXPECT_GT(fidelity(a, b), 1.0 - 1e-10) << "n=" << n;
  }
}

TEST(ExportQasm, ParseRejectsUnknownGate) {
  EXPECT_THROW(parse_qasm("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\nswap q[0],q[1];\n"), ArgumentError);
  EXPECT_THROW(parse_qasm("OPENQASM 2.0;\nh q[0];\n"), ArgumentError);
}

TEST(ExportQasm, DeterministicText) {
  const auto p = HubbardParams::half_filled(2, 4);
  const AnnealSchedule s{ScheduleKind::Linear, 0.05, 0.025};
  EXPECT_EQ(export_qasm(build_anneal_circuit(p, s)), export_qasm(build_anneal_circuit(p, s)));
}

TEST(CircuitJson, GateFields) {
  Circuit c(2, "demo");
  c.push(GateOp::h(0));
  c.push(GateOp::rzz(0, 1, 0.5));
  const auto j = circuit_to_json(c);
  EXPECT_EQ(j["n_qubits"], 2);
  EXPECT_EQ(j["label"], "demo");
  ASSERT_EQ(j["gates"].size(), 2u);
  EXPECT_EQ(j["gates"][0]["kind"], "H");
  EXPECT_FALSE(j["gates"][0].contains("angle"));
  EXPECT_DOUBLE_EQ(j["gates"][1]["angle"].get<double>(), 0.5);
}

TEST(ExportQasm, CryDefinitionMatchesGate) {
  Circuit plain(2);
  plain.push(GateOp::cnot(0, 1));
  EXPECT_EQ(export_qasm(plain).find("gate cry"), std::string::npos);

  const double theta = 1.234;
  Circuit c(2);
  c.push(GateOp::cry(0, 1, theta));
  const auto text = export_qasm(c);
  EXPECT_NE(text.find("gate cry(theta) a,b { ry(theta/2) b; cx a,b; ry(-theta/2) b; cx a,b; }"), std::string::npos);
  // The body with a = q0, b = q1, multiplied out from explicit matrices.
  auto ry = [](double t) {
    oracle::Mat m(2, 2);
    m << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2);
    return oracle::embed({oracle::Mat::Identity(2, 2), m});
  };
  const oracle::Mat cx = oracle::full_gate(GateOp::cnot(0, 1), 2);
  const oracle::Mat body = cx * ry(-theta / 2) * cx * ry(theta / 2);
  EXPECT_LT((body - oracle::full_gate(GateOp::cry(0, 1, theta), 2)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(parse_qasm(text).gates().size(), 1u);
}
