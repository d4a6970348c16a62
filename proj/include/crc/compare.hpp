#pragma once
// Crepant-resolution comparisons: the gauge map Theta for P(1,1,1,3)/F3 and P(1,1,2)/F2,
// numeric conjugation checks, and the elementary F2 -> P(1,1,2) pipeline.

#include "givental.hpp"
#include "lg.hpp"

namespace crc {

// Theta as a polynomial in z with symbolic entries; the atom QR is q^{1/qroot}.
struct ThetaMap {
  const GradedAlgebra* src = nullptr;  // orbifold
  const GradedAlgebra* dst = nullptr;  // resolution
  int qroot = 1;
  std::map<int, Mat<Sym>> z;  // z power -> dst x src matrix

  Mat<Sym> at_z0() const {
    auto it = z.find(0);
    return it == z.end() ? mat_zero<Sym>(dst->size(), src->size()) : it->second;
  }
  Mat<Cplx> numeric(const Cplx& q, int zpow = 0) const {
    auto it = z.find(zpow);
    if (it == z.end()) return mat_zero<Cplx>(dst->size(), src->size());
    return eval_mat(it->second, AtomValues(croot(q, qroot)));
  }
};

namespace detail {
inline void set_col(Mat<Sym>& m, size_t col, const Elem<Sym>& e) {
  for (size_t i = 0; i < e.size(); ++i) m[i][col] = e[i];
}
inline Elem<Sym> sym_elem(const GradedAlgebra& A, const std::string& n) { return lift<Sym>(A.elem(n)); }
}  // namespace detail

inline Sym beta_p1113(int i) {
  Sym g = i == 1 ? Sym::atom(G3) : Sym::gamma23_cubed();
  return Sym::pi() * qfrac(2, 9) * g.inv();
}

// Theta(y, z) for P(1,1,1,3) -> F3. Its z-linear term multiplies (p2 - 3p1): degree
// bookkeeping rules out a bare z * 1 there.
inline ThetaMap theta_p1113() {
  auto P = build_model_algebra(ModelId::P1113);
  auto F = build_model_algebra(ModelId::F3);
  const GradedAlgebra& A = *F;
  ThetaMap th;
  th.src = P.get();
  th.dst = F.get();
  th.qroot = 3;
  auto m0 = mat_zero<Sym>(A.size(), P->size());
  auto m1 = m0;
  Elem<Sym> p2 = scale(detail::sym_elem(A, "p2"), Sym(qfrac(1, 3)));
  Elem<Sym> pp = detail::sym_elem(A, "pp1");
  Elem<Sym> one = detail::sym_elem(A, "1");
  Sym b1 = beta_p1113(1), b2 = beta_p1113(2), s3 = Sym::sqrt3(), y13 = Sym::atom(QR);
  Elem<Sym> pw = one;
  for (int i = 0; i <= 3; ++i) {
    detail::set_col(m0, i, pw);
    pw = mul(A, pw, p2);
  }
  // p^3 -> (p2/3)^3 - sqrt3 b1 y^{1/3} pp
  auto c3 = add(mul(A, mul(A, p2, p2), p2), scale(pp, -(s3 * b1 * y13)));
  detail::set_col(m0, 3, c3);
  auto c4 = add(scale(one, b1 / b2 * y13), scale(mul(A, pp, pp), Sym::pi() * qfrac(2, 3) * b1));
  detail::set_col(m0, 4, c4);
  detail::set_col(m1, 4, scale(pp, -(s3 * b1)));
  detail::set_col(m0, 5, scale(pp, s3 * b2));
  th.z[0] = m0;
  th.z[1] = m1;
  return th;
}

inline ThetaMap theta_p112() {
  auto P = build_model_algebra(ModelId::P112);
  auto F = build_model_algebra(ModelId::F2);
  const GradedAlgebra& A = *F;
  ThetaMap th;
  th.src = P.get();
  th.dst = F.get();
  th.qroot = 2;
  auto m0 = mat_zero<Sym>(A.size(), P->size());
  Elem<Sym> p2 = scale(detail::sym_elem(A, "p2"), Sym(qfrac(1, 2)));
  detail::set_col(m0, 0, detail::sym_elem(A, "1"));
  detail::set_col(m0, 1, p2);
  detail::set_col(m0, 2, mul(A, p2, p2));
  detail::set_col(m0, 3, scale(detail::sym_elem(A, "pp1"), Sym::imag() * qfrac(-1, 2)));
  th.z[0] = m0;
  return th;
}

// Theta^T g_F Theta - g_orb at z = 0; empty when the pairing is preserved exactly.
inline std::vector<EntryDiff> theta_pairing_defect(const ThetaMap& th) {
  auto T = th.at_z0();
  std::vector<EntryDiff> out;
  for (size_t a = 0; a < th.src->size(); ++a)
    for (size_t b = 0; b < th.src->size(); ++b) {
      Sym s;
      for (size_t i = 0; i < th.dst->size(); ++i)
        for (size_t j = 0; j < th.dst->size(); ++j)
          if (th.dst->gram[i][j] != 0 && !T[i][a].zero() && !T[j][b].zero()) s += T[i][a] * T[j][b] * th.dst->gram[i][j];
      s -= Sym(th.src->gram[a][b]);
      if (!s.zero()) {
        Laurent l;
        l[0] = s;
        out.push_back({a, b, l});
      }
    }
  return out;
}

// Real degree of the root of q carried by QR: 2 <c1, curve> / qroot.
inline Q qroot_degree(const ThetaMap& th) {
  Q c1 = 0;
  for (size_t i = 0; i < th.src->size(); ++i) c1 += th.src->c1[i] * (th.src->labels[i] == "p" ? 1 : 0);
  return Q(2) * c1 / Q(th.qroot);
}

// Each monomial z^k QR^e in entry (i, j) must satisfy deg_i + 2k + e deg(QR) = deg_j.
inline std::vector<std::string> theta_grading_defects(const ThetaMap& th) {
  std::vector<std::string> out;
  Q dq = qroot_degree(th);
  for (auto& [k, m] : th.z)
    for (size_t i = 0; i < m.size(); ++i)
      for (size_t j = 0; j < m[i].size(); ++j)
        for (auto& [mono, c] : m[i][j].t) {
          Q d = th.dst->deg[i] + Q(2 * k) + Q(int(mono[QR])) * dq;
          if (d != th.src->deg[j])
            out.push_back("entry (" + th.dst->labels[i] + ", " + th.src->labels[j] + ") z^" + std::to_string(k) +
                          " has degree " + qstr(d) + ", expected " + qstr(th.src->deg[j]));
        }
  return out;
}

// Largest |d Theta(q) / d q| over the entries at a sample point, by exact differentiation
// in QR.
inline Real theta_q_derivative(const ThetaMap& th, const Cplx& q) {
  Real best = 0;
  Cplx qr = croot(q, th.qroot);
  AtomValues av(qr);
  auto T = th.at_z0();
  for (auto& row : T)
    for (auto& x : row) {
      Sym d;
      for (auto& [mono, c] : x.t)
        if (mono[QR]) {
          Sym t;
          Mono m = mono;
          m[QR] = static_cast<std::int8_t>(m[QR] - 1);
          t.t[m] = c * K(Q(int(mono[QR])));
          d += t;
        }
      // d/dq = (d/dQR) * QR / (qroot q)
      Cplx v = eval(d, av) * qr / (Cplx(th.qroot) * q);
      best = std::max(best, cabs(v));
    }
  return best;
}

// ---------------------------------------------------------------- P(1,1,1,3) conjugation

struct ThetaConjugation {
  Cplx q;
  int order = 0;
  Real residual = 0;        // |A_F3 - Theta(q) A_P Theta(q)^{-1}|
  Real z_dependence = 0;    // size of the z != 0 part of the gauge-transformed connection
  Real theta_match = 0;     // Birkhoff factor against Theta(y, z)
  Real tail = 0;            // contribution of V_k, k >= 2, at the sample point
  Real frobenius = 0;       // |g C - C^T g|
  Real unit = 0;            // |C 1 - p2/3|
  Real order0 = 0;
  Real d_module = 0;        // |z D M - M A_P| on the frame series
  Mat<Cplx> A_F3;
};

// The F3 side comes from the continued I-function at fy1 = 0 in the frame P_i:
// M = L V with L in 1 + O(1/z); then C = V A_P V^{-1} - z (D V) V^{-1} is the matrix of
// (p2/3) o at (q1, q2) = (1, q^{1/3}).
inline ThetaConjugation verify_theta_conjugation_p1113(const Cplx& q, int order = 24) {
  if (q == Cplx(0)) throw std::invalid_argument("verify_theta_conjugation_p1113: q = 0 is the cusp");
  if (order < 4) throw std::invalid_argument("verify_theta_conjugation_p1113: order must be >= 4");
  const ToricModel& f3 = toric_model(ModelId::F3);
  const GradedAlgebra* A = f3.alg.get();
  size_t n = A->size();
  auto full = continued_series<Cplx>(f3, order, 0);
  CohSeries<Cplx> f(A, {"fy2"}, {1}, Q(order));
  f.pref = {A->elem("p2")};
  for (auto& [k, v] : full.terms)
    if (k[0] == 0) f.add_term({k[1]}, v);
  auto ops = orbifold_frame(ModelId::P1113, 1, 0, qfrac(1, 3));
  auto fs = frame_series(f, ops);
  auto b = birkhoff(fs);
  ThetaConjugation out;
  out.q = q;
  out.order = order;
  out.order0 = b.order0_residual;
  Cplx t = croot(q, 3);
  AtomValues av(t);
  auto AP = eval_mat(connection_matrix_p1113(), av);

  // z D M = M A_P with D = (1/3) fy2 d/dfy2 and the p2/3 prefactor rule
  {
    ZMat ap = ZMat::constant(eval_mat(connection_matrix_p1113(), AtomValues(Cplx(1))));
    Mat<Cplx> P2 = mat_zero<Cplx>(n, n);
    auto p2 = A->elem("p2");
    for (size_t j = 0; j < n; ++j) {
      auto col = mul(*A, p2, lift<Q>(basis_vec<Q>(*A, j)));
      for (size_t i = 0; i < n; ++i) P2[i][j] = Cplx(to_real(col[i] / 3));
    }
    // A_P = ap0 + t * ap1 splits by the QR power
    ZMat ap0 = ZMat::constant(eval_mat(connection_matrix_p1113(), AtomValues(Cplx(0))));
    ZMat ap1 = ap - ap0;
    Real worst = 0, scale = 0;
    for (auto& [k, Mk] : fs.M) {
      if (key_degree(k, fs.ram) + 1 > fs.valid) continue;
      ZMat lhs = ZMat::constant(P2) * Mk;
      ZMat zk(n);
      zk.c[1] = mat_id<Cplx>(n);
      lhs = lhs + zk * Mk * Cplx(Real(k[0]) / 3);
      ZMat rhs = Mk * ap0;
      if (k[0] >= 1) {
        auto it = fs.M.find({k[0] - 1});
        if (it != fs.M.end()) rhs = rhs + it->second * ap1;
      }
      worst = std::max(worst, (lhs - rhs).norm());
      scale = std::max(scale, Mk.norm());
    }
    out.d_module = worst / (1 + scale);
  }

  ZMat V = eval_series(b.V, {t}, n);
  ZMat DV(n);
  std::map<std::vector<int>, ZMat> tailmap;
  for (auto& [k, m] : b.V) {
    DV = DV + m * (cpow_int(t, k[0]) * Cplx(Real(k[0]) / 3));
    if (k[0] >= 2) tailmap[k] = m;
  }
  out.tail = eval_series(tailmap, {t}, n).norm();
  ZMat Vinv = zmat_poly_inverse(V);
  ZMat zDV(n);
  for (auto& [k, m] : DV.c) zDV.c[k + 1] = m;
  ZMat C = V * ZMat::constant(AP) * Vinv - zDV * Vinv;
  out.z_dependence = C.norm_except(0);
  out.A_F3 = C.get(0);

  ThetaMap th = theta_p1113();
  auto T0 = th.numeric(q, 0);
  auto T1 = th.numeric(q, 1);
  out.theta_match = std::max(max_abs(mat_sub(V.get(0), T0)), max_abs(mat_sub(V.get(1), T1)));
  for (auto& [k, m] : V.c)
    if (k != 0 && k != 1) out.theta_match = std::max(out.theta_match, max_abs(m));
  auto conj = mat_mul(mat_mul(T0, AP), mat_inv(T0));
  out.residual = max_abs(mat_sub(out.A_F3, conj));

  Mat<Cplx> g(n, std::vector<Cplx>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) g[i][j] = Cplx(to_real(A->gram[i][j]));
  out.frobenius = max_abs(mat_sub(mat_mul(g, out.A_F3), mat_mul(transpose(out.A_F3), g)));
  auto p2 = A->elem("p2");
  for (size_t i = 0; i < n; ++i)
    out.unit = std::max(out.unit, cabs(out.A_F3[i][0] - Cplx(to_real(p2[i] / 3))));
  return out;
}

// ---------------------------------------------------------------- exact arithmetic in Q[w]/(P)

struct QuotientRing {
  std::vector<Q> P;  // monic, P[k] = coefficient of w^k

  size_t deg() const { return P.size() - 1; }
  std::vector<Q> reduce(std::vector<Q> a) const {
    size_t d = deg();
    for (size_t k = a.size(); k-- > d;) {
      Q c = a[k];
      if (c == 0) continue;
      for (size_t j = 0; j <= d; ++j) a[k - d + j] -= c * P[j];
    }
    a.resize(d, Q(0));
    return a;
  }
  std::vector<Q> mul(const std::vector<Q>& a, const std::vector<Q>& b) const {
    std::vector<Q> r(a.size() + b.size(), Q(0));
    for (size_t i = 0; i < a.size(); ++i)
      for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return reduce(r);
  }
  std::vector<Q> add(std::vector<Q> a, const std::vector<Q>& b, const Q& s = 1) const {
    a.resize(std::max(a.size(), b.size()), Q(0));
    for (size_t i = 0; i < b.size(); ++i) a[i] += s * b[i];
    return reduce(a);
  }
  std::vector<Q> constant(const Q& c) const {
    std::vector<Q> r(deg(), Q(0));
    r[0] = c;
    return r;
  }
  std::vector<Q> w() const {
    std::vector<Q> r(deg(), Q(0));
    r[1] = 1;
    return r;
  }
  // Inverse through the regular representation.
  std::vector<Q> inv(const std::vector<Q>& a) const {
    size_t d = deg();
    Mat<Q> M = mat_zero<Q>(d, d);
    std::vector<Q> col = reduce(a);
    for (size_t j = 0; j < d; ++j) {
      for (size_t i = 0; i < d; ++i) M[i][j] = col[i];
      col = mul(col, w());
    }
    auto Mi = mat_inv(M);
    std::vector<Q> r(d);
    for (size_t i = 0; i < d; ++i) r[i] = Mi[i][0];
    return r;
  }
  // Sum of the values over the roots of P.
  Q trace(const std::vector<Q>& a) const {
    size_t d = deg();
    std::vector<Q> s(d, Q(0));
    // Newton identities for power sums of the roots
    s[0] = Q(long(d));
    for (size_t k = 1; k < d; ++k) {
      Q acc = Q(long(k)) * P[d - k];
      for (size_t i = 1; i < k; ++i) acc += P[d - i] * s[k - i];
      s[k] = -acc;
    }
    Q t = 0;
    auto r = reduce(a);
    for (size_t k = 0; k < d; ++k) t += r[k] * s[k];
    return t;
  }
};

// ---------------------------------------------------------------- the elementary F2 pipeline

struct F2Jacobian {
  std::vector<std::pair<Q, Q>> exact_points;  // (q1, q2)
  std::vector<Mat<Q>> exact_grams;
  bool gram_exact = false;
  std::vector<std::vector<Cplx>> numeric_points;  // (y1, y2)
  Real gram_numeric = 0;
  bool commutator_zero = false;
  bool coordinates_exact = false;
  K limit_phi1_fy1, limit_phi1_fy2, limit_phi2_fy1, limit_phi2_fy2;  // coefficients of d/dfy1, fy2 d/dfy2
  bool limit_ok = false;
  Real correspondence = 0;  // against p1 -> -i 1_1/2 + p, p2 -> 2p in the P(1,1,2) mirror frame
  bool theta_correspondence = false;
  bool ok(Real tol) const {
    return gram_exact && gram_numeric < tol && commutator_zero && coordinates_exact && limit_ok &&
           correspondence < tol && theta_correspondence;
  }
};

// KS(phi_1), KS(phi_2) Gram at an exact point y1 = q1/(1+q1)^2, y2 = q2 (1+q1), where
// sqrt(1 - 4 y1) = (1-q1)/(1+q1).
inline Mat<Q> f2_jacobian_gram_exact(const Q& q1, const Q& q2) {
  Q y1 = q1 / ((1 + q1) * (1 + q1)), y2 = q2 * (1 + q1), s = (1 - q1) / (1 + q1);
  // (w^2 - y2)^2 - 4 y1 y2^2
  QuotientRing R{{y2 * y2 - 4 * y1 * y2 * y2, Q(0), -2 * y2, Q(0), Q(1)}};
  auto w = R.w(), wi = R.inv(R.w());
  auto X = R.mul(R.add(R.mul(w, w), R.constant(y2), -1), R.mul(wi, R.constant(qfrac(1, 2))));
  auto Bw = R.mul(R.constant(y2), wi);
  auto d1 = X;
  auto d2 = R.add(R.mul(R.constant(2), X), Bw);
  auto ks1 = R.add(R.mul(R.constant(s), d1), R.mul(R.constant((1 - s) / 2), d2));
  auto ks2 = d2;
  // log Hessian in (w1, w) at w1 = X: det = 2X (4X + y2/w + w) - 4X^2
  auto h22 = R.add(R.add(R.mul(R.constant(4), X), Bw), w);
  auto hess = R.add(R.mul(R.mul(R.constant(2), X), h22), R.mul(X, X), -4);
  auto hi = R.inv(hess);
  std::vector<std::vector<Q>> ks = {ks1, ks2};
  Mat<Q> g = mat_zero<Q>(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) g[i][j] = R.trace(R.mul(R.mul(ks[i], ks[j]), hi));
  return g;
}

inline Cplx f2_jacobian_sqrt(const Cplx& y1) { return sqrt(Cplx(1) - Cplx(4) * y1); }

inline F2Jacobian f2_jacobian_pipeline(int precision = 40) {
  F2Jacobian rep;
  // (i) exact Gram at rational points and numeric Gram at complex points
  rep.exact_points = {{qfrac(1, 10), qfrac(1, 7)}, {qfrac(1, 5), qfrac(2, 3)}, {qfrac(-1, 3), qfrac(1, 2)},
                      {qfrac(2, 7), Q(3)}, {qfrac(1, 2), qfrac(-1, 5)}};
  Mat<Q> target = {{Q(0), Q(1)}, {Q(1), Q(2)}};
  rep.gram_exact = true;
  for (auto& [a, b] : rep.exact_points) {
    auto g = f2_jacobian_gram_exact(a, b);
    rep.exact_grams.push_back(g);
    rep.gram_exact = rep.gram_exact && g == target;
  }
  rep.numeric_points = {{Cplx(0.01), Cplx(0.02)},
                        {Cplx(0.05, 0.02), Cplx(0.3, -0.1)},
                        {Cplx(-0.1), Cplx(1.5)},
                        {Cplx(0.2, -0.05), Cplx(-0.7, 0.4)},
                        {Cplx(0.001, 0.003), Cplx(0.004)}};
  for (auto& y : rep.numeric_points) {
    auto lg = lg_model(ModelId::F2, 1, y);
    auto pts = critical_points(lg, precision);
    Cplx s = f2_jacobian_sqrt(y[0]);
    std::vector<Cplx> k1, k2;
    for (auto& p : pts) {
      auto d = base_log_derivatives(lg, p.w);
      k1.push_back(s * d[0] + (Cplx(1) - s) / Cplx(2) * d[1]);
      k2.push_back(d[1]);
    }
    std::vector<std::vector<Cplx>> ks = {k1, k2};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        rep.gram_numeric = std::max(rep.gram_numeric, cabs(residue_pairing(ks[i], ks[j], pts) - Cplx(to_real(target[i][j]))));
  }

  // (ii) [phi1, phi2] for fields sum_a c_a(y1) y_a d/dy_a with series coefficients
  {
    size_t N = 16;
    auto s = sqrt_one_minus_4y(N);
    std::vector<Taylor<Q>> phi1 = {s, s}, phi2 = {Taylor<Q>(N, Q(0)), Taylor<Q>(N, Q(0))};
    for (auto& x : phi1[1]) x = -x / 2;
    phi1[1][0] += qfrac(1, 2);
    phi2[1][0] = 1;
    // [X, Y]_a = X(Y_a) - Y(X_a); coefficients depend on y1 only, so X(f) = X_1 * y1 f'(y1)
    auto apply = [&](const std::vector<Taylor<Q>>& X, const Taylor<Q>& f) {
      Taylor<Q> d(N, Q(0));
      for (size_t k = 0; k < N; ++k) d[k] = Q(long(k)) * f[k];
      return tmul(X[0], d, N);
    };
    rep.commutator_zero = true;
    for (int a = 0; a < 2; ++a) {
      auto c = apply(phi1, phi2[a]);
      auto e = apply(phi2, phi1[a]);
      for (size_t k = 0; k < N; ++k) rep.commutator_zero = rep.commutator_zero && c[k] == e[k];
    }
  }

  // (iii) q_i d/dq_i pushes forward to phi_i under y1 = q1/(1+q1)^2, y2 = q2 (1+q1)
  {
    size_t N = 16;
    Taylor<Q> opq(N, Q(0)), q(N, Q(0));
    opq[0] = 1;
    opq[1] = 1;
    q[1] = 1;
    auto y1 = tdiv(q, tmul(opq, opq, N), N);
    // q1 d/dq1 log y1 = 1 - 2 q1/(1+q1), q1 d/dq1 log y2 = q1/(1+q1)
    auto q_over = tdiv(q, opq, N);
    Taylor<Q> dl1(N, Q(0));
    dl1[0] = 1;
    for (size_t k = 0; k < N; ++k) dl1[k] -= 2 * q_over[k];
    auto s_of_q = tcompose(sqrt_one_minus_4y(N), y1, N);
    Taylor<Q> half(N, Q(0));
    for (size_t k = 0; k < N; ++k) half[k] = ((k == 0 ? Q(1) : Q(0)) - s_of_q[k]) / 2;
    rep.coordinates_exact = dl1 == s_of_q && q_over == half;
    // q2 d/dq2: log y1 -> 0, log y2 -> 1, which is phi2 = y2 d/dy2
  }

  // (iv) limit of the frame along sqrt(q1) = -i lambda at lambda = 1, in (fy1, fy2) =
  // ((1+q1) q1^{-1/2}, q1^{1/2} q2)
  {
    K s = K(Q(0)) - K::imag();  // q1^{1/2}
    K q1 = s * s;
    // q1 d/dq1 fy1 = q1^{1/2} - (1+q1) q1^{-1/2} / 2; q1 d/dq1 log fy2 = 1/2
    rep.limit_phi1_fy1 = s - (K(Q(1)) + q1) * s.inv() * K(qfrac(1, 2));
    rep.limit_phi1_fy2 = K(qfrac(1, 2));
    rep.limit_phi2_fy1 = K(Q(0));
    rep.limit_phi2_fy2 = K(Q(1));
    rep.limit_ok = (K(Q(1)) + q1).zero() && rep.limit_phi1_fy1 == K(Q(0)) - K::imag();
  }

  // (v) in the P(1,1,2) mirror frame at y = q, KS(phi_1) and KS(phi_2) at fy1 = 0 have
  // coordinates -i 1_1/2 + p and 2p
  {
    Cplx qv(0.04);
    auto mf = mirror_frame(ModelId::P112, {qv}, 12, precision);
    auto lg = lg_model(ModelId::F2, 2, {Cplx(0), sqrt(qv)});
    auto pts = critical_points(lg, precision);
    size_t n = mf.J.size();
    Mat<Cplx> E = mat_zero<Cplx>(n, n);
    for (size_t k = 0; k < n; ++k)
      for (size_t a = 0; a < n; ++a) E[k][a] = mf.J[a][k];
    auto Ei = mat_inv(E);
    std::vector<Cplx> k1, k2;
    for (auto& cp : mf.pts) {
      // same critical locus; fy2 d/dfy2 W = 2u, d/dfy1 W = fy2 / w
      size_t best = 0;
      for (size_t j = 1; j < pts.size(); ++j)
        if (cabs(pts[j].value - cp.value) < cabs(pts[best].value - cp.value)) best = j;
      auto& w = pts[best].w;
      Cplx u = tagged_value(lg, w, "A");
      Cplx dfy1 = sqrt(qv) / w.back();
      k1.push_back(Cplx(0, -1) * dfy1 + u);
      k2.push_back(Cplx(2) * u);
    }
    auto c1 = mat_vec(Ei, k1), c2 = mat_vec(Ei, k2);
    std::vector<Cplx> e1 = {Cplx(0), Cplx(1), Cplx(0), Cplx(0, -1)}, e2 = {Cplx(0), Cplx(2), Cplx(0), Cplx(0)};
    for (size_t a = 0; a < n; ++a)
      rep.correspondence = std::max({rep.correspondence, cabs(c1[a] - e1[a]), cabs(c2[a] - e2[a])});
    // and exactly through Theta: Theta(-i 1_1/2 + p) = p1, Theta(2p) = p2
    auto T = theta_p112().at_z0();
    const GradedAlgebra& F = *build_model_algebra(ModelId::F2);
    auto p1 = F.elem("p1"), p2 = F.elem("p2");
    bool ok = true;
    for (size_t i = 0; i < F.size(); ++i) {
      Sym a = T[i][1] - Sym::imag() * T[i][3];
      Sym b = T[i][1] * Q(2);
      ok = ok && a == Sym(p1[i]) && b == Sym(p2[i]);
    }
    rep.theta_correspondence = ok;
  }
  return rep;
}

// ---------------------------------------------------------------- P(1,1,2) specialization

struct Specialization {
  Cplx q;
  Real residual = 0;   // Theta M_P(x) Theta^{-1} - M_F(Theta x), x = p, 1_1/2
  Real pairing = 0;    // |Theta^T g_F Theta - g_P| numerically
  Cplx fy2;            // q1^{1/2} q2 on the path
  Cplx unit_shift;     // p1 o p2 - p1p2 as a multiple of 1
};

// Product matrices of the Jacobi ring in a basis whose images at the critical points are
// the columns of E (E[k][a] = image of basis vector a at point k).
inline Mat<Cplx> product_matrix(const Mat<Cplx>& E, const std::vector<Cplx>& f) {
  size_t n = E.size();
  auto D = mat_zero<Cplx>(n, n);
  for (size_t k = 0; k < n; ++k) D[k][k] = f[k];
  return mat_mul(mat_mul(mat_inv(E), D), E);
}

inline Specialization verify_specialization_p112(const Cplx& q, int precision = 40) {
  if (q == Cplx(0)) throw std::invalid_argument("verify_specialization_p112: q = 0 is the cusp");
  Specialization sp;
  sp.q = q;
  // P(1,1,2): Jacobi ring through its mirror frame
  auto mf = mirror_frame(ModelId::P112, {q}, 12, precision);
  size_t n = mf.J.size();
  Mat<Cplx> EP = mat_zero<Cplx>(n, n);
  for (size_t k = 0; k < n; ++k)
    for (size_t a = 0; a < n; ++a) EP[k][a] = mf.J[a][k];
  // F2 at q1 = -1 (q1^{1/2} = -i) and q2 = i sqrt(q): fy1 = 0, fy2 = q1^{1/2} q2
  Cplx s1(0, -1), q2 = Cplx(0, 1) * sqrt(q);
  sp.fy2 = s1 * q2;
  auto lg = lg_model(ModelId::F2, 2, {Cplx(0), sp.fy2});
  auto pts = critical_points(lg, precision);
  Mat<Cplx> EF = mat_zero<Cplx>(n, n);
  std::vector<Cplx> kp1, kp2;
  for (auto& cp : mf.pts) {
    size_t best = 0;
    for (size_t j = 1; j < pts.size(); ++j)
      if (cabs(pts[j].value - cp.value) < cabs(pts[best].value - cp.value)) best = j;
    auto& w = pts[best].w;
    Cplx u = tagged_value(lg, w, "A");
    // limit frame: phi1 -> -i d/dfy1 + fy2 d/dfy2 / 2, phi2 -> fy2 d/dfy2
    Cplx a = Cplx(0, -1) * sp.fy2 / w.back() + u, b = Cplx(2) * u;
    kp1.push_back(a);
    kp2.push_back(b);
  }
  // The flat class p1p2 differs from p1 o p2 by a multiple of 1 (grading), fixed by
  // <p1p2, p1p2> = 0 and <p1p2, 1> = 1 in the residue metric.
  std::vector<Cplx> kk(n);
  for (size_t k = 0; k < n; ++k) kk[k] = kp1[k] * kp2[k];
  sp.unit_shift = residue_pairing(kk, kk, mf.pts) / Cplx(2);
  for (size_t k = 0; k < n; ++k) {
    EF[k][0] = 1;
    EF[k][1] = kp1[k];
    EF[k][2] = kp2[k];
    EF[k][3] = kk[k] - sp.unit_shift;
  }
  auto th = theta_p112();
  auto T = th.numeric(q);
  auto Ti = mat_inv(T);
  const GradedAlgebra& F = *th.dst;
  // F-basis images: phi = 1, p1, p2, p1p2 -> columns of EF
  for (size_t x : {size_t(1), size_t(3)}) {
    auto MP = product_matrix(EP, mf.J[x]);
    std::vector<Cplx> fx(n, Cplx(0));
    for (size_t k = 0; k < n; ++k)
      for (size_t i = 0; i < F.size(); ++i) fx[k] += T[i][x] * EF[k][i];
    auto MF = product_matrix(EF, fx);
    sp.residual = std::max(sp.residual, max_abs(mat_sub(mat_mul(mat_mul(T, MP), Ti), MF)));
  }
  Mat<Cplx> gF(F.size(), std::vector<Cplx>(F.size())), gP(n, std::vector<Cplx>(n));
  for (size_t i = 0; i < F.size(); ++i)
    for (size_t j = 0; j < F.size(); ++j) gF[i][j] = Cplx(to_real(F.gram[i][j]));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) gP[i][j] = Cplx(to_real(th.src->gram[i][j]));
  sp.pairing = max_abs(mat_sub(mat_mul(mat_mul(transpose(T), gF), T), gP));
  return sp;
}

// Theta for P(1,1,2) against the z = infinity limit of the closed-form U (only z^{<=0} terms).
inline std::vector<EntryDiff> theta_vs_u_infinity() {
  auto U = u_matrix_closed_form(Pair::P112_F2);
  auto T = theta_p112().at_z0();
  std::vector<EntryDiff> out;
  for (size_t i = 0; i < U.dst->size(); ++i)
    for (size_t j = 0; j < U.src->size(); ++j) {
      auto e = U.entry(i, j);
      Laurent d;
      for (auto& [k, v] : e)
        if (k > 0) d[k] = v;
      Sym z0 = e.count(0) ? e.at(0) : Sym();
      if (z0 != T[i][j]) d[0] = z0 - T[i][j];
      if (!d.empty()) out.push_back({i, j, d});
    }
  return out;
}

}  // namespace crc
