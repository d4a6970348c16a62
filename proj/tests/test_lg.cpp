#include <gtest/gtest.h>

#include <crc/lg.hpp>

using namespace crc;

namespace {

std::vector<Cplx> values(const std::vector<CriticalPoint>& pts) {
  std::vector<Cplx> v;
  for (auto& p : pts) v.push_back(p.value);
  return v;
}

// For sum x_i subject to prod x_i^{w_i} = y the critical points are x_i = w_i lam with
// prod (w_i lam)^{w_i} = y, and the critical value is (sum w_i) lam.
std::vector<Cplx> weighted_oracle(const std::vector<int>& w, const Cplx& y) {
  int n = 0;
  Cplx c(1);
  for (int x : w) {
    n += x;
    c *= cpow_int(Cplx(x), x);
  }
  Cplx lam0 = croot(y / c, n);
  Real pi = boost::math::constants::pi<Real>();
  std::vector<Cplx> out;
  for (int k = 0; k < n; ++k) {
    Real a = 2 * pi * k / n;
    out.push_back(Cplx(n) * lam0 * Cplx(cos(a), sin(a)));
  }
  return out;
}

}  // namespace

TEST(CriticalPoints, Counts) {
  EXPECT_EQ(critical_points(lg_model(ModelId::F2, 1, {Cplx(0.001), Cplx(0.002)})).size(), 4u);
  EXPECT_EQ(critical_points(lg_model(ModelId::F3, 1, {Cplx(0.001), Cplx(0.002)})).size(), 6u);
  EXPECT_EQ(critical_points(lg_model(ModelId::P112, 1, {Cplx(0.01)})).size(), 4u);
  EXPECT_EQ(critical_points(lg_model(ModelId::P1113, 1, {Cplx(0.01)})).size(), 6u);
  EXPECT_EQ(critical_points(lg_model(ModelId::F3, 2, {Cplx(Real("0.3"), Real("0.1")), Cplx(Real("0.2"))})).size(), 6u);
}

TEST(CriticalPoints, GradientVanishesAndHessianNonzero) {
  for (auto id : {ModelId::F2, ModelId::F3}) {
    auto m = lg_model(id, 1, {Cplx(Real("0.01"), Real("0.003")), Cplx(Real("0.02"))});
    for (auto& p : critical_points(m, 40)) {
      EXPECT_LT(p.grad_norm, Real(1e-35));
      EXPECT_GT(cabs(p.hess), Real(1e-20));
      Real g = 0;
      for (auto& x : lg_log_gradient(m, p.w)) g = std::max(g, cabs(x));
      EXPECT_LT(g, Real(1e-35));
    }
  }
}

TEST(CriticalPoints, WeightedValuesMatchClosedForm) {
  Cplx y(Real("0.01"), Real("0.004"));
  auto v3 = values(critical_points(lg_model(ModelId::P1113, 1, {y}), 40));
  EXPECT_LT(multiset_distance(v3, weighted_oracle({1, 1, 1, 3}, y)), Real(1e-35));
  auto v2 = values(critical_points(lg_model(ModelId::P112, 1, {y}), 40));
  EXPECT_LT(multiset_distance(v2, weighted_oracle({1, 1, 2}, y)), Real(1e-35));
}

// The two charts describe the same function after y1 = fy1^{-r}, y2 = fy1 fy2.
TEST(CriticalPoints, ChartsAgree) {
  for (auto id : {ModelId::F2, ModelId::F3}) {
    std::vector<Cplx> y = {Cplx(Real("0.02"), Real("0.01")), Cplx(Real("0.03"))};
    auto m1 = lg_model(id, 1, y);
    auto m2 = lg_model(id, 2, to_orbifold_chart(id, y));
    EXPECT_LT(cabs(m1.A - m2.A), Real(1e-40));
    EXPECT_LT(cabs(m1.B - m2.B), Real(1e-40));
    EXPECT_LT(multiset_distance(values(critical_points(m1)), values(critical_points(m2))), Real(1e-35));
  }
}

// sum over critical points of 1/Hess vanishes in positive dimension.
TEST(ResiduePairing, UnitHasZeroNorm) {
  for (auto id : {ModelId::F2, ModelId::F3, ModelId::P112, ModelId::P1113}) {
    std::vector<Cplx> base = weighted_model(id) ? std::vector<Cplx>{Cplx(0.02)} : std::vector<Cplx>{Cplx(0.02), Cplx(0.05)};
    auto pts = critical_points(lg_model(id, 1, base));
    std::vector<Cplx> one(pts.size(), Cplx(1));
    EXPECT_LT(cabs(residue_pairing(one, one, pts)), Real(1e-35)) << model_name(id);
  }
}

TEST(MirrorFrame, GramMatchesPoincarePairing) {
  struct Case {
    ModelId id;
    std::vector<Cplx> base;
    int order;
    double tol;
  };
  for (auto& c : {Case{ModelId::F2, {Cplx(0.001), Cplx(0.002)}, 12, 1e-25},
                  Case{ModelId::F3, {Cplx(0.001), Cplx(0.002)}, 12, 1e-15},
                  Case{ModelId::P112, {Cplx(0.01)}, 10, 1e-40},
                  Case{ModelId::P1113, {Cplx(0.01)}, 10, 1e-40}}) {
    auto mf = mirror_frame(c.id, c.base, c.order);
    EXPECT_LT(mf.gram_residual, Real(c.tol)) << model_name(c.id);
    EXPECT_LT(cabs(mf.one_one), Real(1e-35)) << model_name(c.id);
  }
}

TEST(QuantumRing, BatyrevRelationsExact) {
  for (auto id : {ModelId::F2, ModelId::F3}) {
    auto qr = quantum_ring(id, {Cplx(0.01), Cplx(0.02)});
    EXPECT_TRUE(qr.semisimple);
    int checked = 0;
    for (auto& r : qr.relations)
      if (!r.informational) {
        EXPECT_LT(r.residual, Real(1e-40)) << r.name;
        ++checked;
      }
    EXPECT_GE(checked, 2);
  }
}

// p2(p2 - 2 p1) = q2 (1 - q1) on F2; the uncorrected reading is off by exactly q1.
TEST(QuantumRing, F2FlatRelation) {
  auto qr = quantum_ring(ModelId::F2, {Cplx(0.01), Cplx(0.02)});
  bool seen = false;
  for (auto& r : qr.relations) {
    if (r.name == "p2(p2-2p1) = q2(1-q1)") {
      EXPECT_LT(r.residual, Real(1e-40));
      seen = true;
    }
    if (r.name == "p2(p2-2p1) = q2") EXPECT_LT(abs(r.residual - Real(0.01)), Real(1e-30));
  }
  EXPECT_TRUE(seen);
}

TEST(QuantumRing, WeightedRelations) {
  auto a = quantum_ring(ModelId::P1113, {Cplx(0.01)});
  ASSERT_EQ(a.relations.size(), 1u);
  EXPECT_LT(a.relations[0].residual, Real(1e-40));
  auto b = quantum_ring(ModelId::P112, {Cplx(0.01)});
  ASSERT_EQ(b.relations.size(), 1u);
  EXPECT_LT(b.relations[0].residual, Real(1e-40));
}

TEST(ConnectionMatrix, SixthPowerIsScalar) {
  auto C = connection_matrix_p1113();
  auto C2 = mat_mul(C, C);
  auto C6 = mat_mul(mat_mul(C2, C2), C2);
  Sym want = Sym::atom(QR, 3) * Q(1, 27);
  for (size_t i = 0; i < 6; ++i)
    for (size_t j = 0; j < 6; ++j) EXPECT_TRUE((C6[i][j] - (i == j ? want : Sym(Q(0)))).zero()) << i << "," << j;
}

// c1 = 6p, so the spectrum of p o is the set of critical values divided by 6.
TEST(ConnectionMatrix, SpectrumIsCriticalValuesOverSix) {
  Cplx y(Real("0.01"));
  auto M = eval_mat(connection_matrix_p1113(), AtomValues(croot(y, 3)));
  auto ev = eigenvalues_c(M);
  for (auto& e : ev) e *= Cplx(6);
  auto crit = values(critical_points(lg_model(ModelId::P1113, 1, {y}), 40));
  EXPECT_LT(multiset_distance(ev, crit), Real(1e-12));
}

TEST(Birkhoff, ZMatPolyInverse) {
  ZMat V = ZMat::identity(2);
  Mat<Cplx> n = {{Cplx(0), Cplx(1)}, {Cplx(0), Cplx(0)}};
  V.at(1) = n;
  auto W = zmat_poly_inverse(V);
  auto P = V * W;
  EXPECT_LT(P.norm_except(0), Real(1e-40));
  EXPECT_LT(max_abs(mat_sub(P.get(0), mat_id<Cplx>(2))), Real(1e-40));
}

TEST(LgModel, BadInput) {
  EXPECT_THROW(lg_model(ModelId::F2, 3, {Cplx(1), Cplx(1)}), std::invalid_argument);
  EXPECT_THROW(critical_points(lg_model(ModelId::F2, 1, {Cplx(0.01), Cplx(0.01)}), 5), std::invalid_argument);
}
