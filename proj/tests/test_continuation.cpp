#include <gtest/gtest.h>

#include <crc/givental.hpp>

using namespace crc;

TEST(ContinuedSeries, AnnihilatedByOrbifoldChartOperators) {
  for (auto id : {ModelId::F3, ModelId::F2}) {
    auto& m = toric_model(id);
    auto C = continued_series<Sym>(m, 6);
    EXPECT_FALSE(C.zero());
    for (auto& op : pf_operators_orbifold(m)) {
      auto r = apply_operator(op, C);
      EXPECT_TRUE(r.zero()) << model_name(id) << " " << op.str({"fy1", "fy2"});
    }
  }
}

TEST(ContinuedSeries, OnlyScrollsContinue) {
  EXPECT_THROW(chart_index(ModelId::P112), std::invalid_argument);
  EXPECT_EQ(chart_index(ModelId::F3), 3);
  EXPECT_EQ(chart_index(ModelId::F2), 2);
}

TEST(Barnes, IntegralMatchesBothResidueSums) {
  const GradedAlgebra* A = toric_model(ModelId::F3).alg.get();
  auto d = barnes_prepare(A, 0);
  // between the poles of Gamma(3s) and the first integer pole
  EXPECT_GT(d.c, Real(0));
  EXPECT_LT(d.c, Real(1));
  Cplx y_in(Real("0.02")), y_out(Real("0.05"));
  EXPECT_LT(rel_diff(barnes_integral(A, d, y_in), barnes_direct_sum(A, 0, y_in)), Real(1e-10));
  EXPECT_LT(rel_diff(barnes_integral(A, d, y_out), barnes_left_sum(A, 0, y_out)), Real(1e-10));
}

TEST(Barnes, ExtraResiduesVanishOnlyThroughNilpotency) {
  const GradedAlgebra* A = toric_model(ModelId::F3).alg.get();
  for (auto& r : extra_residues(A, 0, 3, Cplx(Real("0.05")))) EXPECT_TRUE(r.zero());
  // with p1^3 != 0 the same residues survive
  auto T = truncated_test_algebra(3);
  bool any = false;
  for (auto& r : extra_residues(T.get(), 0, 3, Cplx(Real("0.05")))) any = any || lz_norm(r) > Real(1e-30);
  EXPECT_TRUE(any);
}

class PerPair : public ::testing::TestWithParam<Pair> {};

TEST_P(PerPair, DerivedEqualsClosedForm) {
  auto d = compare_maps(u_matrix_closed_form(GetParam()), u_matrix_derived(GetParam()));
  EXPECT_TRUE(d.empty()) << d.size() << " entries differ";
}

TEST_P(PerPair, SymplecticGradedEquivariant) {
  auto U = u_matrix_closed_form(GetParam());
  EXPECT_TRUE(check_symplectic(U).empty());
  EXPECT_TRUE(check_grading(U).ok());
  EXPECT_TRUE(check_monodromy_equivariance(U).empty());
}

TEST_P(PerPair, OppositeSubspaceVerdict) {
  auto rep = check_opposite(u_matrix_closed_form(GetParam()));
  EXPECT_EQ(rep.preserved, GetParam() == Pair::P112_F2);
  if (!rep.preserved) EXPECT_FALSE(rep.witnesses.empty());
}

TEST_P(PerPair, PerturbationBreaksSymplecticity) {
  auto U = u_matrix_closed_form(GetParam());
  U.cols[0] += Lz<Sym>::scalar(U.dst, Sym(Q(1)), -1);
  EXPECT_FALSE(check_symplectic(U).empty());
}

INSTANTIATE_TEST_SUITE_P(Pairs, PerPair, ::testing::Values(Pair::P1113_F3, Pair::P112_F2),
                         [](const auto& info) { return std::string(info.param == Pair::P112_F2 ? "P112" : "P1113"); });

TEST(Continuation, P1113IdentityThroughSixthPower) {
  auto cr = check_continuation_identity(Pair::P1113_F3, 6, u_matrix_closed_form(Pair::P1113_F3));
  EXPECT_TRUE(cr.exact_mismatch.empty());
  EXPECT_LE(cr.numeric_norm, Real(1e-20));
  EXPECT_LE(cr.float_norm, Real(1e-20));
}

TEST(Continuation, F2Identity) {
  auto cr = check_continuation_identity(Pair::P112_F2, 6, u_matrix_closed_form(Pair::P112_F2));
  EXPECT_TRUE(cr.exact_mismatch.empty());
  EXPECT_LE(cr.numeric_norm, Real(1e-20));
}

TEST(Continuation, IdentityFailsForWrongMatrix) {
  auto U = u_matrix_closed_form(Pair::P1113_F3);
  U.cols[1] += Lz<Sym>::scalar(U.dst, Sym(Q(1)), 0);
  auto cr = check_continuation_identity(Pair::P1113_F3, 4, U);
  EXPECT_FALSE(cr.exact_mismatch.empty());
}

TEST(Pairs, NamesRoundTrip) {
  for (auto p : {Pair::P1113_F3, Pair::P112_F2}) EXPECT_EQ(parse_pair(pair_name(p)), p);
  EXPECT_THROW(parse_pair("p11-f1"), std::invalid_argument);
}
