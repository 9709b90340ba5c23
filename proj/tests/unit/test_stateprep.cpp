#include <gtest/gtest.h>

#include "hubqa/hamiltonian.hpp"
#include "hubqa/simcore.hpp"
#include "hubqa/stateprep.hpp"
#include "oracles.hpp"

using namespace hubqa;

namespace {

StateVector prepared(const HubbardParams& p) {
  StateVector s(p.n_qubits());
  apply_gates(s, prep_circuit(p).gates());
  return s;
}

oracle::Vec to_vec(const StateVector& s) {
  oracle::Vec v(static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) v[static_cast<Eigen::Index>(i)] = s[i];
  return v;
}

Eigen::MatrixXd orbitals_or_empty(int L, int n) {
  return n == 0 ? Eigen::MatrixXd(0, L) : orbital_matrix(L, select_momenta(L, n));
}

}  // namespace

TEST(SelectMomenta, LowestLevels) {
  const double pi = std::numbers::pi;
  const auto k = select_momenta(5, 3);
  ASSERT_EQ(k.size(), 3u);
  EXPECT_DOUBLE_EQ(k[0], pi / 6);
  EXPECT_DOUBLE_EQ(k[1], 2 * pi / 6);
  EXPECT_DOUBLE_EQ(k[2], 3 * pi / 6);
  EXPECT_EQ(select_momenta(2, 1), std::vector<double>{pi / 3});
  EXPECT_EQ(select_momenta(5, 5).size(), 5u);
}

TEST(SelectMomenta, PreconditionViolations) {
  EXPECT_THROW(select_momenta(4, 0), ArgumentError);
  EXPECT_THROW(select_momenta(4, 5), ArgumentError);
  EXPECT_THROW(select_momenta(0, 1), ArgumentError);
}

TEST(OrbitalMatrix, RowsOrthonormal) {
  for (int L : {2, 5, 9, 16}) {
    const auto q = orbital_matrix(L, select_momenta(L, L));
    EXPECT_LT((q * q.transpose() - Eigen::MatrixXd::Identity(L, L)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(GivensDecompose, CanonicalInputNeedsNoRotations) {
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(2, 4);
  q(0, 0) = q(1, 1) = 1;
  EXPECT_TRUE(givens_decompose(q).empty());
}

TEST(GivensDecompose, SingleRotationForUnitAtSecondSite) {
  Eigen::MatrixXd q(1, 2);
  q << 0, 1;
  const auto plan = givens_decompose(q);
  ASSERT_EQ(plan.size(), 1u);
  EXPECT_EQ(plan[0].column, 0);
  EXPECT_NEAR(std::abs(plan[0].angle), std::numbers::pi / 2, 1e-15);
}

TEST(GivensDecompose, RejectsNonOrthonormalRows) {
  Eigen::MatrixXd q(2, 3);
  q << 1, 0, 0, 0.5, 0.5, 0;
  EXPECT_THROW(givens_decompose(q), ArgumentError);
}

TEST(GivensDecompose, ReducesToIdentityWithinBound) {
  for (int L = 1; L <= 10; ++L) {
    for (int n = 1; n <= L; ++n) {
      const auto q = orbital_matrix(L, select_momenta(L, n));
      const auto plan = givens_decompose(q);
      EXPECT_LE(static_cast<int>(plan.size()), n * (L - n));
      Eigen::MatrixXd w = q;
      apply_givens_columns(w, plan);
      // Row rotations commute with column rotations, so w spans e_1..e_N.
      EXPECT_LT((w.rightCols(L - n)).cwiseAbs().maxCoeff() + 0.0, 1e-9) << L << "," << n;
      EXPECT_NEAR(std::abs(w.leftCols(n).determinant()), 1.0, 1e-9);
      for (const auto& r : plan) {
        EXPECT_GE(r.column, 0);
        EXPECT_LT(r.column + 1, L);
      }
    }
  }
}

TEST(PrepCircuit, SingleSiteSingleParticle) {
  const auto c = prep_circuit(HubbardParams{1, 1.0, 0.0, 1, 0});
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.gates()[0], GateOp::x(0));
}

TEST(PrepCircuit, UsesOnlyFigureFiveBlocks) {
  const auto c = prep_circuit(HubbardParams{5, 1.0, 0.0, 3, 2});
  std::size_t i = 5;  // after the X gates
  for (int k = 0; k < 5; ++k) EXPECT_EQ(c.gates()[k].kind, GateKind::X);
  for (; i < c.size(); i += 3) {
    const auto& a = c.gates()[i];
    const auto& b = c.gates()[i + 1];
    const auto& d = c.gates()[i + 2];
    EXPECT_EQ(a.kind, GateKind::CNOT);
    EXPECT_EQ(b.kind, GateKind::CRY);
    EXPECT_EQ(d, a);
    EXPECT_EQ(a.qubits[0], a.qubits[1] + 1);
    EXPECT_EQ(b.qubits[0], a.qubits[1]);
    EXPECT_EQ(b.qubits[1], a.qubits[0]);
    // No rotation crosses the spin-block boundary.
    EXPECT_NE(a.qubits[1], 4);
  }
  EXPECT_EQ(i, c.size());
}

TEST(PrepCircuit, FreeFermionEnergies) {
  EXPECT_NEAR(expectation(prepared(HubbardParams::half_filled(2, 4.0)), qubit_hamiltonian(HubbardParams::half_filled(2, 4.0), 0.0)),
              -2.0, 1e-12);
  const HubbardParams p{5, 1.0, 4.0, 3, 2};
  EXPECT_NEAR(expectation(prepared(p), qubit_hamiltonian(p, 0.0)), -2.0 * (std::sqrt(3.0) + 1.0), 1e-12);
}

TEST(PrepCircuit, EnergyIsOccupiedLevelSum) {
  for (int L = 1; L <= 8; ++L) {
    for (int nu = 0; nu <= L; ++nu) {
      for (int nd = 0; nd <= L; ++nd) {
        if (nu + nd == 0) continue;
        const HubbardParams p{L, 0.8, 0.0, nu, nd};
        EXPECT_NEAR(expectation(prepared(p), qubit_hamiltonian(p, 0.0)), free_fermion_energy(p), 1e-10)
            << L << " " << nu << " " << nd;
      }
    }
  }
  const auto big = HubbardParams::half_filled(12, 0.0);
  EXPECT_NEAR(expectation(prepared(big), qubit_hamiltonian(big, 0.0)), free_fermion_energy(big), 1e-10);
}

// Brute-force Slater determinant expansion as the reference.
TEST(PrepCircuit, EqualsSlaterDeterminant) {
  for (int L = 1; L <= 6; ++L) {
    for (int nu = 0; nu <= L; ++nu) {
      for (int nd = 0; nd <= L; ++nd) {
        if (nu + nd == 0) continue;
        const HubbardParams p{L, 1.0, 0.0, nu, nd};
        const auto ref = oracle::slater_state(orbitals_or_empty(L, nu), orbitals_or_empty(L, nd), L);
        EXPECT_GT(oracle::fidelity(to_vec(prepared(p)), ref), 1.0 - 1e-12) << L << " " << nu << " " << nd;
      }
    }
  }
}

TEST(PrepCircuit, NumberEigenstate) {
  const HubbardParams p{6, 1.0, 0.0, 4, 2};
  const auto s = prepared(p);
  EXPECT_NEAR(expectation(s, number_operator(p, Spin::Up)), 4.0, 1e-12);
  EXPECT_NEAR(expectation(s, number_operator(p, Spin::Down)), 2.0, 1e-12);
  for (auto b : sample_bitstrings(s, 2000, 5)) {
    EXPECT_EQ(std::popcount(b & 0x3Fu), 4);
    EXPECT_EQ(std::popcount(b >> 6), 2);
  }
}
