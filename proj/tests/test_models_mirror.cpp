#include <gtest/gtest.h>

#include <crc/mirror.hpp>

using namespace crc;

namespace {

const ModelId kAll[] = {ModelId::F2, ModelId::F3, ModelId::P112, ModelId::P1113};

Q factorial(long n) {
  Q f = 1;
  for (long i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

class PerModel : public ::testing::TestWithParam<ModelId> {};

TEST_P(PerModel, PicardFuchsAnnihilatesIFunction) {
  auto& m = toric_model(GetParam());
  auto I = i_function<Q>(m, Q(10));
  for (auto& r : pf_check(pf_operators(m), I)) EXPECT_TRUE(r.zero()) << series_str(r).substr(0, 300);
}

TEST_P(PerModel, GenericOperatorsEqualHardcoded) {
  auto& m = toric_model(GetParam());
  auto ops = pf_operators(m), ref = pf_operators_reference(GetParam());
  ASSERT_EQ(ops.size(), ref.size());
  for (size_t i = 0; i < ops.size(); ++i) EXPECT_EQ(ops[i].normal_form(), ref[i].normal_form()) << ops[i].str(m.vars);
}

// Within one power of y, deg(class) + 2 * (z exponent) is constant.
TEST_P(PerModel, IFunctionIsHomogeneous) {
  auto& m = toric_model(GetParam());
  auto I = i_function<Q>(m, Q(6));
  for (auto& [k, v] : I.terms) {
    std::optional<Q> d;
    for (auto& [zp, e] : v.c)
      for (size_t b = 0; b < e.size(); ++b) {
        if (e[b] == 0) continue;
        Q w = m.alg->deg[b] + Q(2 * zp);
        if (!d) d = w;
        EXPECT_EQ(*d, w) << model_name(GetParam()) << " term " << k[0];
      }
  }
}

// A perturbed series is no longer annihilated.
TEST_P(PerModel, PicardFuchsDetectsPerturbation) {
  auto& m = toric_model(GetParam());
  auto I = i_function<Q>(m, Q(6));
  std::vector<int> k(m.nvars(), 0);
  k[0] = m.ram[0];
  auto bump = Lz<Q>::scalar(m.alg.get(), Q(1), -7);
  I.add_term(k, bump);
  size_t nz = 0;
  for (auto& r : pf_check(pf_operators(m), I)) nz += r.terms.size();
  EXPECT_GT(nz, 0u);
}

INSTANTIATE_TEST_SUITE_P(Models, PerModel, ::testing::ValuesIn(kAll),
                         [](const auto& info) { return model_name(info.param); });

// Two coordinates of weight one on the 1/2 sector contribute (z/2)^{-2}, the weight-two one
// contributes (2p + z)^{-1}, and p annihilates the twisted class.
TEST(IFunction, P112FirstTwistedCoefficient) {
  auto& m = toric_model(ModelId::P112);
  auto I = i_function<Q>(m, Q(1));
  auto c = I.coeff({1});
  ASSERT_EQ(c.c.size(), 1u);
  EXPECT_EQ(c.min_pow(), -3);
  EXPECT_EQ(c.at(-3), scale<Q>(m.alg->elem("1_1/2"), Q(4)));
}

// D3 (D3 - z) / (p1 + z)^2 with D3 = p2 - 2 p1, p1^2 = 0, p2^2 = 2 p1 p2 reduces to -(p2 - 2p1)/z.
TEST(IFunction, F2FirstFiberCoefficient) {
  auto& m = toric_model(ModelId::F2);
  auto I = i_function<Q>(m, Q(1));
  auto c = I.coeff({1, 0});
  ASSERT_EQ(c.c.size(), 1u);
  auto want = sub(scale<Q>(m.alg->elem("p1"), Q(2)), m.alg->elem("p2"));
  EXPECT_EQ(c.at(-1), want);
}

TEST(IFunction, OrderLimit) { EXPECT_THROW(i_function<Q>(toric_model(ModelId::F3), Q(41)), std::invalid_argument); }

TEST(IFunction, DescriptorValidation) {
  nlohmann::json j = {{"algebra", "F2"},
                      {"vars", {"y1", "y2"}},
                      {"ram", {1, 1}},
                      {"charges", {{1, 1, -2, 0}, {0, 0, 1}}},
                      {"pf_charges", {{0, 1}, {1, 2}, {1, 1}, {1, 0}}}};
  EXPECT_THROW(model_from_json(j), std::invalid_argument);
}

// log q1 - log y1 = sum_k 3 (-1)^k (3k-1)! / k!^3 y1^k for F3.
TEST(MirrorMap, F3ForwardClosedForm) {
  auto mm = mirror_map(toric_model(ModelId::F3), 10);
  for (long k = 1; k <= 10; ++k) {
    Q want = Q(k % 2 ? -3 : 3) * factorial(3 * k - 1) / (factorial(k) * factorial(k) * factorial(k));
    EXPECT_EQ(mm.f[0][k], want) << k;
    EXPECT_EQ(mm.f[1][k], want / Q(-3)) << k;
  }
}

TEST(MirrorMap, F3InverseSeries) {
  auto inv = inverse_mirror_map(mirror_map(toric_model(ModelId::F3), 10));
  std::vector<Q> y1 = {0, 1, 6, 9, 56, -300}, u = {1, -2, 5, -32, 286, -3038};
  for (size_t k = 0; k < y1.size(); ++k) {
    EXPECT_EQ(inv.y1[k], y1[k]) << k;
    EXPECT_EQ(inv.u[k], u[k]) << k;
  }
}

TEST(MirrorMap, InverseComposesToIdentity) {
  for (auto id : {ModelId::F2, ModelId::F3}) {
    auto mm = mirror_map(toric_model(id), 10);
    auto inv = inverse_mirror_map(mm);
    auto [a, b] = forward_factors(mm);
    size_t N = 11;
    // q1 = y1 a(y1) evaluated at y1(q1)
    Taylor<Q> q1 = tmul(inv.y1, tcompose(a, inv.y1, N), N);
    for (size_t k = 0; k < N; ++k) EXPECT_EQ(q1[k], Q(k == 1 ? 1 : 0)) << model_name(id) << " " << k;
    // q2 = y2 b(y1) and y2 = q2 u(q1)
    Taylor<Q> one = tmul(inv.u, tcompose(b, inv.y1, N), N);
    for (size_t k = 0; k < N; ++k) EXPECT_EQ(one[k], Q(k == 0 ? 1 : 0)) << model_name(id) << " " << k;
  }
}

// y1 = q1 / (1 + q1)^2 and y2 = q2 (1 + q1).
TEST(MirrorMap, F2Inverse) {
  auto inv = inverse_mirror_map(mirror_map(toric_model(ModelId::F2), 10));
  for (long k = 1; k <= 10; ++k) EXPECT_EQ(inv.y1[k], Q(k % 2 ? k : -k)) << k;
  EXPECT_EQ(inv.u[0], Q(1));
  EXPECT_EQ(inv.u[1], Q(1));
  for (size_t k = 2; k < inv.u.size(); ++k) EXPECT_EQ(inv.u[k], Q(0));
  auto r = f2_closed_form_check(mirror_map(toric_model(ModelId::F2), 10));
  EXPECT_TRUE(r.q1_match);
  EXPECT_TRUE(r.q2_match);
  EXPECT_TRUE(r.identity_match);
}

TEST(MirrorMap, WeightedModelsHaveTrivialMap) {
  auto mm = mirror_map(toric_model(ModelId::P1113), 10);
  for (auto& f : mm.f)
    for (auto& c : f) EXPECT_EQ(c, Q(0));
}

TEST(FlatSeries, P1113Coefficients) {
  auto fc = flat_compare_p1113(12);
  EXPECT_TRUE(fc.support_ok);
  EXPECT_EQ(fc.dF_of_t1[2], Q(1, 2));
  EXPECT_EQ(fc.dF_of_t1[5], Q(-1) / (Q(9) * factorial(5)));
  EXPECT_EQ(fc.dF_of_t1[8], Q(1) / (Q(3) * factorial(8)));
  EXPECT_EQ(fc.dF_of_t1[11], Q(-1093) / (Q(243) * factorial(11)));
}

TEST(FlatSeries, RejectsTinyOrder) { EXPECT_THROW(flat_compare_p1113(1), std::invalid_argument); }
