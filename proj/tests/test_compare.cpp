#include <gtest/gtest.h>

#include <crc/compare.hpp>

using namespace crc;

TEST(Theta, P1113PairingAndGrading) {
  auto th = theta_p1113();
  EXPECT_TRUE(theta_pairing_defect(th).empty());
  auto g = theta_grading_defects(th);
  EXPECT_TRUE(g.empty()) << (g.empty() ? "" : g[0]);
  EXPECT_EQ(qroot_degree(th), Q(4));
}

// Moving the z-linear term of the 1_1/3 column onto the unit breaks homogeneity.
TEST(Theta, BareZTermBreaksGrading) {
  auto th = theta_p1113();
  auto& m1 = th.z[1];
  const GradedAlgebra& F = *th.dst;
  int one = F.index("1"), col = th.src->index("1_1/3");
  for (size_t i = 0; i < m1.size(); ++i) m1[i][col] = Sym(Q(0));
  m1[one][col] = Sym(Q(1));
  EXPECT_FALSE(theta_grading_defects(th).empty());
}

TEST(Theta, DependsOnQ) {
  EXPECT_GT(theta_q_derivative(theta_p1113(), Cplx(0.01)), Real(1e-3));
}

TEST(Theta, ConjugatesQuantumProduct) {
  for (double q : {1e-2, 1e-1}) {
    auto r = verify_theta_conjugation_p1113(Cplx(q));
    EXPECT_LT(r.residual, Real(1e-8)) << q;
    EXPECT_LT(r.theta_match, Real(1e-30)) << q;
    EXPECT_LT(r.z_dependence, Real(1e-30)) << q;
    EXPECT_LT(r.frobenius, Real(1e-30)) << q;
    EXPECT_LT(r.unit, Real(1e-30)) << q;
  }
}

TEST(Theta, P112PairingGradingAndLimit) {
  auto th = theta_p112();
  EXPECT_TRUE(theta_pairing_defect(th).empty());
  EXPECT_TRUE(theta_grading_defects(th).empty());
  EXPECT_TRUE(theta_vs_u_infinity().empty());
}

// Q[w]/(w^2 - 2): traces 2, 0, 4 for 1, w, w^2, and w * w^{-1} = 1.
TEST(QuotientRing, TraceAndInverse) {
  QuotientRing R{{Q(-2), Q(0), Q(1)}};
  EXPECT_EQ(R.trace(R.constant(1)), Q(2));
  EXPECT_EQ(R.trace(R.w()), Q(0));
  EXPECT_EQ(R.trace(R.mul(R.w(), R.w())), Q(4));
  auto a = R.add(R.w(), R.constant(3));
  EXPECT_EQ(R.mul(a, R.inv(a)), R.constant(1));
}

TEST(F2Jacobian, ExactGramAtRationalPoints) {
  Mat<Q> want = {{Q(0), Q(1)}, {Q(1), Q(2)}};
  for (auto [q1, q2] : std::vector<std::pair<Q, Q>>{{Q(1, 7), Q(2, 3)}, {Q(-3, 5), Q(1, 11)}, {Q(5, 2), Q(-4)}})
    EXPECT_EQ(f2_jacobian_gram_exact(q1, q2), want);
}

TEST(F2Jacobian, Pipeline) {
  auto ab = f2_jacobian_pipeline();
  EXPECT_GE(ab.exact_grams.size(), 5u);
  EXPECT_TRUE(ab.gram_exact);
  EXPECT_LT(ab.gram_numeric, Real(1e-8));
  EXPECT_TRUE(ab.commutator_zero);
  EXPECT_TRUE(ab.coordinates_exact);
  EXPECT_TRUE(ab.limit_ok);
  EXPECT_LT(ab.correspondence, Real(1e-8));
  EXPECT_TRUE(ab.theta_correspondence);
  EXPECT_TRUE(ab.ok(Real(1e-8)));
}

TEST(Specialization, P112AtQ004) {
  auto sp = verify_specialization_p112(Cplx(Real("0.04")));
  EXPECT_LT(sp.residual, Real(1e-8));
  EXPECT_LT(sp.pairing, Real(1e-8));
  // p1 o p2 differs from the classical p1 p2 by -q2 = -i sqrt(q) at this point
  EXPECT_LT(cabs(sp.unit_shift - Cplx(0, Real("-0.2"))), Real(1e-30));
}
