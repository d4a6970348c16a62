#pragma once
// Mirror maps read from the z^{-1} part of the I-function, their inverses, the
// I-function rewritten in flat coordinates, and the P(1,1,1,3) flat-coordinate series.

#include <string>
#include <vector>

#include "models.hpp"

namespace crc {

// Coordinates c with target = sum_i c_i * vecs[i]; throws when target is outside the span.
inline std::vector<Q> solve_in_span(const std::vector<std::vector<Q>>& vecs, const std::vector<Q>& target) {
  size_t n = vecs.size(), m = target.size();
  Mat<Q> a = mat_zero<Q>(m, n + 1);
  for (size_t r = 0; r < m; ++r) {
    for (size_t c = 0; c < n; ++c) a[r][c] = vecs[c][r];
    a[r][n] = target[r];
  }
  std::vector<int> pivcol;
  size_t row = 0;
  for (size_t c = 0; c < n && row < m; ++c) {
    size_t p = row;
    while (p < m && a[p][c] == 0) ++p;
    if (p == m) continue;
    std::swap(a[p], a[row]);
    for (size_t r = 0; r < m; ++r) {
      if (r == row || a[r][c] == 0) continue;
      Q f = a[r][c] / a[row][c];
      for (size_t k = c; k <= n; ++k) a[r][k] -= f * a[row][k];
    }
    pivcol.push_back(int(c));
    ++row;
  }
  for (size_t r = row; r < m; ++r)
    if (a[r][n] != 0) throw math_error("solve_in_span: vector not in span");
  std::vector<Q> x(n, Q(0));
  for (size_t r = 0; r < pivcol.size(); ++r) x[pivcol[r]] = a[r][n] / a[r][pivcol[r]];
  return x;
}

// log q_i = log y_i + f_i(y_1); the map is triangular for the models at hand.
struct MirrorMap {
  ModelId id;
  int order = 0;
  std::vector<Taylor<Q>> f;  // f[i][k] = coefficient of y1^k
};

struct InverseMirrorMap {
  ModelId id;
  int order = 0;
  Taylor<Q> y1;  // y1(q1)
  Taylor<Q> u;   // y2 = q2 * u(q1); identity for one-parameter models
};

inline MirrorMap mirror_map(const ToricModel& m, int order) {
  auto I = i_function<Q>(m, Q(order));
  MirrorMap mm;
  mm.id = m.id;
  mm.order = order;
  mm.f.assign(m.nvars(), Taylor<Q>(order + 1, Q(0)));
  for (auto& [k, v] : I.terms) {
    auto e = v.at(-1);
    bool k_zero = std::all_of(k.begin(), k.end(), [](int x) { return x == 0; });
    if (k_zero) {
      if (!is_zero(e) || !is_zero(sub(v.at(0), lift<Q>(m.alg->elem("1")))) || v.max_pow() > 0)
        throw math_error("mirror_map: I-function is not z(1 + O(1/z)) at degree 0");
      continue;
    }
    if (v.max_pow() > -1) throw math_error("mirror_map: nonnegative z power at positive degree");
    if (is_zero(e)) continue;
    for (size_t i = 1; i < k.size(); ++i)
      if (k[i] != 0) throw math_error("mirror_map: map is not triangular");
    if (m.ram[0] != 1) throw math_error("mirror_map: fractional mirror map not supported");
    auto c = solve_in_span(m.alg->gens, e);
    for (size_t i = 0; i < c.size(); ++i) mm.f[i][k[0]] += c[i];
  }
  return mm;
}

inline InverseMirrorMap inverse_mirror_map(const MirrorMap& mm) {
  size_t N = mm.order + 1;
  InverseMirrorMap inv;
  inv.id = mm.id;
  inv.order = mm.order;
  // q1 = y1 exp(f1(y1))
  auto e1 = texp(mm.f[0], N);
  Taylor<Q> g(N, Q(0));
  for (size_t k = 1; k < N; ++k) g[k] = e1[k - 1];
  inv.y1 = trevert(g, N);
  if (mm.f.size() > 1) {
    auto f2 = tcompose(mm.f[1], inv.y1, N);
    inv.u = texp(tscale(f2, Q(-1)), N);
  } else {
    inv.u = Taylor<Q>(N, Q(0));
    inv.u[0] = 1;
  }
  return inv;
}

// Forward map as series: q1 = y1 * a(y1), q2 = y2 * b(y1).
inline std::pair<Taylor<Q>, Taylor<Q>> forward_factors(const MirrorMap& mm) {
  size_t N = mm.order + 1;
  auto a = texp(mm.f[0], N);
  Taylor<Q> b(N, Q(0));
  b[0] = 1;
  if (mm.f.size() > 1) b = texp(mm.f[1], N);
  return {a, b};
}

// sqrt(1 - 4y) as a power series.
inline Taylor<Q> sqrt_one_minus_4y(size_t N) {
  Taylor<Q> s(N, Q(0));
  // binomial(1/2, k) (-4)^k
  Q c = 1;
  for (size_t k = 0; k < N; ++k) {
    s[k] = c;
    c = c * (Q(1, 2) - Q(long(k))) / Q(long(k + 1)) * Q(-4);
  }
  return s;
}

struct F2ClosedFormReport {
  bool q1_match = false, q2_match = false, identity_match = false;
  int order = 0;
};

// Compares the series mirror map of F2 with the closed forms in sqrt(1-4y1), and the
// identity 1 - 4 q1/(1+q1)^2 = ((1-q1)/(1+q1))^2 as power series in q1.
inline F2ClosedFormReport f2_closed_form_check(const MirrorMap& mm) {
  if (mm.id != ModelId::F2) throw std::invalid_argument("f2_closed_form_check: F2 only");
  size_t N = mm.order + 1;
  auto [a, b] = forward_factors(mm);
  auto s = sqrt_one_minus_4y(N);
  Taylor<Q> onep = s;
  onep[0] += 1;
  auto sq = tmul(onep, onep, N);
  Taylor<Q> four(N, Q(0));
  four[0] = 4;
  F2ClosedFormReport r;
  r.order = mm.order;
  r.q1_match = tdiv(four, sq, N) == a;
  r.q2_match = tscale(onep, Q(1, 2)) == b;
  // y1 = q1/(1+q1)^2 and sqrt(1-4y1) = (1-q1)/(1+q1)
  Taylor<Q> opq(N, Q(0)), omq(N, Q(0)), q(N, Q(0));
  opq[0] = omq[0] = 1;
  if (N > 1) opq[1] = 1, omq[1] = -1, q[1] = 1;
  auto y1 = tdiv(q, tmul(opq, opq, N), N);
  auto lhs = tcompose(s, y1, N);
  auto rhs = tdiv(omq, opq, N);
  r.identity_match = lhs == rhs;
  // and the inverse map agrees with y1 = q1/(1+q1)^2, y2 = q2 (1+q1)
  auto inv = inverse_mirror_map(mm);
  r.identity_match = r.identity_match && inv.y1 == y1 && inv.u == opq;
  return r;
}

// z^{-1} J(q) = exp(-sum_i p_i f_i(y(q))/z) * sum_d y(q)^d I_d under the q^{p/z} prefactor.
inline CohSeries<Q> flat_j_function(const ToricModel& m, int order) {
  auto I = i_function<Q>(m, Q(order));
  if (m.id == ModelId::P1113 || m.id == ModelId::P112) return I;
  auto mm = mirror_map(m, order);
  auto inv = inverse_mirror_map(mm);
  size_t N = order + 1;
  const GradedAlgebra* A = m.alg.get();
  CohSeries<Q> body(A, {"q1", "q2"}, m.ram, Q(order));
  Taylor<Q> v(N, Q(0));  // y1(q1)/q1
  for (size_t k = 1; k < N; ++k) v[k - 1] = inv.y1[k];
  for (auto& [k, L] : I.terms) {
    Taylor<Q> T(N, Q(0));
    T[0] = 1;
    for (int i = 0; i < k[0]; ++i) T = tmul(T, v, N);
    for (int i = 0; i < k[1]; ++i) T = tmul(T, inv.u, N);
    for (size_t j = 0; j < N; ++j)
      if (T[j] != 0) body.add_term({k[0] + int(j), k[1]}, L * T[j]);
  }
  CohSeries<Q> x(A, {"q1", "q2"}, m.ram, Q(order));
  std::vector<Taylor<Q>> F;
  for (auto& fi : mm.f) F.push_back(tcompose(fi, inv.y1, N));
  for (size_t j = 1; j < N; ++j) {
    Elem<Q> e(A->size(), Q(0));
    for (size_t i = 0; i < F.size(); ++i) e = add(e, scale(A->gens[i], -F[i][j]));
    x.add_term({int(j), 0}, Lz<Q>::elem(A, e, -1));
  }
  CohSeries<Q> E(A, {"q1", "q2"}, m.ram, Q(order));
  E.add_term({0, 0}, Lz<Q>::one(A));
  CohSeries<Q> pw = E;
  for (long n = 1;; ++n) {
    pw = series_mul(pw, x);
    if (pw.zero()) break;
    for (auto& [k, L] : pw.terms) pw.terms[k] = L * (Q(1) / Q(n));
    E = E + pw;
  }
  auto X = series_mul(E, body);
  X.pref = m.alg->gens;
  return X;
}

// Table of <phi^alpha / z(z - psi)> coefficients: degree -> coefficient of q^d in z^{-1} J.
inline std::map<std::vector<Q>, Lz<Q>> gw_extract(const ToricModel& m, int order) {
  auto X = flat_j_function(m, order);
  std::map<std::vector<Q>, Lz<Q>> out;
  for (auto& [k, v] : X.terms) {
    std::vector<Q> d;
    for (size_t i = 0; i < k.size(); ++i) d.push_back(Q(k[i]) / Q(X.ram[i]));
    out[d] = v;
  }
  return out;
}

// ---------------------------------------------------------------- P(1,1,1,3) flat coordinates

struct FlatCompare {
  Taylor<Q> t1_of_y;      // frak t_1 in frak y_1
  Taylor<Q> dF_of_y;      // 3 dF/dt_1 in frak y_1
  Taylor<Q> dF_of_t1;     // 3 dF/dt_1 in frak t_1
  bool support_ok = true; // only powers 3n+2 occur in dF_of_t1
};

inline FlatCompare flat_compare_p1113(int order) {
  if (order < 2) throw std::invalid_argument("flat_compare_p1113: order too small to compose");
  size_t N = order + 1;
  FlatCompare fc;
  fc.t1_of_y.assign(N, Q(0));
  fc.dF_of_y.assign(N, Q(0));
  auto fill = [&](Taylor<Q>& t, long off) {
    Q prod = 1, fact = 1;
    for (long j = 1; j <= off; ++j) fact *= j;
    for (long n = 0; 3 * n + off < long(N); ++n) {
      if (n > 0) {
        prod *= (Q(n - 1) + Q(off, 3)) * (Q(n - 1) + Q(off, 3)) * (Q(n - 1) + Q(off, 3));
        for (long j = 3 * (n - 1) + off + 1; j <= 3 * n + off; ++j) fact *= j;
      }
      t[3 * n + off] = (n % 2 ? Q(-1) : Q(1)) * prod / fact;
    }
  };
  fill(fc.t1_of_y, 1);
  fill(fc.dF_of_y, 2);
  auto y_of_t = trevert(fc.t1_of_y, N);
  fc.dF_of_t1 = tcompose(fc.dF_of_y, y_of_t, N);
  for (size_t k = 0; k < N; ++k)
    if (fc.dF_of_t1[k] != 0 && k % 3 != 2) fc.support_ok = false;
  return fc;
}

}  // namespace crc
