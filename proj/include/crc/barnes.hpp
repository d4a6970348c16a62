#pragma once
// Analytic continuation of the F-model I-functions into the orbifold chart
// (y1 = fy1^{-r}, y2 = fy1 fy2), the Mellin-Barnes integral behind it, and numeric checks.

#include <boost/math/special_functions/legendre.hpp>

#include "models.hpp"
#include "numeric.hpp"

namespace crc {

// r = 3 for F3 and 2 for F2: the negative entry of the first charge vector.
inline int chart_index(ModelId id) {
  if (id == ModelId::F3) return 3;
  if (id == ModelId::F2) return 2;
  throw std::invalid_argument("continuation is defined for F2 and F3 only");
}

namespace detail {

// Gamma(a + x)^e Taylor data, shifting negative non-integer bases up to (0, 1].
template <class S>
Taylor<S> gamma_pow_taylor_any(const Q& a, int e, size_t N) {
  if (a > 0 || denominator(a) == 1) return gamma_pow_taylor<S>(a, e, N);
  // Gamma(a + x) = Gamma(a + n + x) / prod_{j<n} (a + j + x)
  Q b = a;
  Taylor<S> prod(N, S(0));
  prod[0] = S(1);
  while (b < 0) {
    Taylor<S> lin(2, S(0));
    lin[0] = Field<S>::from(b);
    lin[1] = S(1);
    prod = tmul(prod, lin, N);
    b += 1;
  }
  Taylor<S> pe(N, S(0));
  pe[0] = S(1);
  for (int i = 0; i < std::abs(e); ++i) pe = tmul(pe, prod, N);
  auto g = gamma_pow_taylor<S>(b, e, N);
  if (e > 0) return tdiv(g, pe, N);
  return tmul(g, pe, N);
}

template <class S>
Lz<S> jet(const Taylor<S>& f, const GradedAlgebra* A, const std::vector<Q>& cls, const Q& c, int zpow) {
  Lz<S> x = lz_var<S>(A, cls, zpow) * Field<S>::from(c);
  return jet_apply(f, x, Lz<S>::one(A));
}

}  // namespace detail

// z^{-1} I in the orbifold chart of F2/F3, as a series in fy1, fy2 with prefactor fy2^{p2/z}:
//   Gamma(1+p1/z)^r Gamma(1+p2/z) Gamma(1+pp/z)
//     * sum (-1)^{k+l} sin(pi pp/z) / (r sin(pi pp/(r z) + (l-k) pi/r)) fy1^k fy2^l
//       / (k! z^{2l} Gamma(1 + p2/(r z) + (l-k)/r)^r Gamma(1 + p2/z + l))
// For even r the sum over y1 needs (-y1)^s in the Barnes kernel, which adds the phase
// exp(i pi (l - k + pp/z) / r); the branch -y1 = e^{i pi} y1 is used.
template <class S>
CohSeries<S> continued_series(const ToricModel& m, int order, int kmax = -1) {
  int r = chart_index(m.id);
  if (order < 0 || order > 40) throw std::invalid_argument("continued_series: order out of range 0..40");
  const GradedAlgebra* A = m.alg.get();
  size_t N = A->dim_c + 1;
  const auto& p1 = A->elem("p1");
  const auto& p2 = A->elem("p2");
  const auto& pp = A->elem("pp1");
  Lz<S> front = detail::jet(gamma_pow_taylor<S>(Q(1), r, N), A, p1, 1, -1) *
                detail::jet(gamma_pow_taylor<S>(Q(1), 1, N), A, p2, 1, -1) *
                detail::jet(gamma_pow_taylor<S>(Q(1), 1, N), A, pp, 1, -1);
  if (r % 2 == 0) {
    S ipi = GammaData<S>::pi() * GammaData<S>::from_k(K::imag()) * Field<S>::from(qfrac(1, r));
    front = front * detail::jet(tscale_arg(exp_taylor<S>(N), ipi), A, pp, 1, -1);
  }
  CohSeries<S> out(A, {"fy1", "fy2"}, {1, 1}, Q(order));
  out.pref = {{}, p2};
  std::map<long, Lz<S>> by_shift;  // depends on l - k only
  auto shifted = [&](long j) -> const Lz<S>& {
    auto it = by_shift.find(j);
    if (it != by_shift.end()) return it->second;
    Lz<S> sr = detail::jet(sin_ratio_taylor<S>(r, j, N), A, pp, 1, -1);
    Lz<S> g;
    try {
      g = detail::jet(detail::gamma_pow_taylor_any<S>(1 + Q(j) / Q(r), -r, N), A, p2, Q(1) / Q(r), -1);
    } catch (const math_error& e) {
      throw math_error("continued_series: shift l-k=" + std::to_string(j) + ": " + e.what());
    }
    return by_shift.emplace(j, sr * g).first->second;
  };
  Q kfact = 1;
  if (kmax < 0 || kmax > order) kmax = order;
  for (int k = 0; k <= kmax; ++k) {
    if (k) kfact *= k;
    for (int l = 0; k + l <= order; ++l) {
      Lz<S> t;
      try {
        t = shifted(l - k) * detail::jet(gamma_pow_taylor<S>(Q(1 + l), -1, N), A, p2, 1, -1);
      } catch (const math_error& e) {
        throw math_error("continued_series: term (k,l)=(" + std::to_string(k) + "," + std::to_string(l) +
                         "): " + e.what());
      }
      t = (front * t).shift(-2 * l) * Field<S>::from(((k + l) % 2 ? Q(-1) : Q(1)) / kfact);
      if (r % 2 == 0) {
        auto [sn, cs] = sincos_rational_pi(Q(l - k) / Q(r));
        t = t * GammaData<S>::from_k(cs + K::imag() * sn);
      }
      out.add_term({k, l}, t);
    }
  }
  return out;
}

// Box operators rewritten in the orbifold chart and cleared of negative fy1 powers.
inline std::vector<PFOperator> pf_operators_orbifold(const ToricModel& m) {
  int r = chart_index(m.id);
  std::vector<PFOperator> out;
  for (auto& op : pf_operators(m)) {
    PFOperator t;
    long lo = 0;
    for (auto& term : op.terms) lo = std::min(lo, -r * term.yexp[0] + term.yexp[1]);
    for (auto& term : op.terms) {
      PFTerm nt;
      nt.coef = term.coef;
      nt.yexp = {-r * term.yexp[0] + term.yexp[1] - lo, term.yexp[1]};
      for (auto& f : term.factors) {
        // D_{y1} = (D_{fy2} - D_{fy1}) / r, D_{y2} = D_{fy2}
        Q a = f.dcoef[0], b = f.dcoef[1];
        nt.factors.push_back({{-a / Q(r), a / Q(r) + b}, f.zcoef});
      }
      t.terms.push_back(nt);
    }
    out.push_back(t);
  }
  return out;
}

// ---------------------------------------------------------------- numeric Mellin-Barnes check (F3, z = 1)

struct BarnesOptions {
  int gl_points = 30;
  double t_max = 80;
  double tail_tol = 1e-45;
  int max_terms = 4000;
};

struct BarnesData {
  int m = 0;
  Real c;                                     // abscissa of the vertical line
  std::vector<Cplx> nodes;                    // s on the line, Im s >= 0
  std::vector<Real> weights;
  std::vector<Lz<Cplx>> kernel;               // Gamma part of the integrand at each node
};

namespace detail {

inline const std::pair<std::vector<Real>, std::vector<Real>>& gauss_legendre(int n) {
  static std::map<int, std::pair<std::vector<Real>, std::vector<Real>>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto z = boost::math::legendre_p_zeros<Real>(n);  // nonnegative zeros
  std::vector<Real> x, w;
  for (auto& r : z) {
    Real d = boost::math::legendre_p_prime(n, r);
    Real wt = 2 / ((1 - r * r) * d * d);
    x.push_back(r);
    w.push_back(wt);
    if (r != 0) {
      x.push_back(-r);
      w.push_back(wt);
    }
  }
  return cache.emplace(n, std::make_pair(x, w)).first->second;
}

inline Cplx pi_c() { return Cplx(boost::math::constants::pi<Real>()); }

inline Lz<Cplx> scalar_c(const GradedAlgebra* A, const Cplx& c) { return Lz<Cplx>::scalar(A, c); }

// y^{s + cls} for complex y and a nilpotent class
inline Lz<Cplx> power_jet(const GradedAlgebra* A, const Cplx& y, const Cplx& s, const std::vector<Q>& cls) {
  Cplx ly = log(y);
  size_t N = A->dim_c + 1;
  Taylor<Cplx> f(N);
  Cplx ys = exp(ly * s), pw(1);
  Real fact = 1;
  for (size_t k = 0; k < N; ++k) {
    if (k) fact *= Real(long(k)), pw *= ly;
    f[k] = ys * pw / Cplx(fact);
  }
  return jet_apply(f, lz_var<Cplx>(A, cls, 0), Lz<Cplx>::one(A));
}

}  // namespace detail

// The Gamma part Gamma(-pp + 3s - m) Gamma(s) Gamma(1-s) / Gamma(1 + p1 + s)^3.
inline Lz<Cplx> barnes_kernel(const GradedAlgebra* A, int m, const Cplx& s) {
  size_t N = A->dim_c + 1;
  Cplx pi = detail::pi_c();
  auto g1 = jet_apply(gamma_pow_taylor_c(Cplx(3) * s - Cplx(m), 1, N), lz_var<Cplx>(A, A->elem("pp1"), 0) * Cplx(-1),
                      Lz<Cplx>::one(A));
  auto g2 = jet_apply(gamma_pow_taylor_c(Cplx(1) + s, -3, N), lz_var<Cplx>(A, A->elem("p1"), 0), Lz<Cplx>::one(A));
  return (g1 * g2) * (pi / sin(pi * s));
}

// (-1)^m sin(-pi pp) / pi
inline Lz<Cplx> barnes_prefactor(const GradedAlgebra* A, int m) {
  size_t N = A->dim_c + 2;
  auto f = sin_taylor<Cplx>(Cplx(0), Cplx(1), N);
  f = tscale_arg(f, Cplx(-1) * detail::pi_c());
  for (auto& x : f) x /= detail::pi_c();
  return jet_apply(f, lz_var<Cplx>(A, A->elem("pp1"), 0), Lz<Cplx>::one(A)) * Cplx(m % 2 ? -1 : 1);
}

// Line abscissa: left of every integer pole above m/3, right of every pole of Gamma(3s - m).
inline Real barnes_abscissa(int m) {
  Q base = Q(m) / 3;
  Q gap = Q(m / 3 + 1) - base;
  Q half = gap / 2;
  Q off = std::min(qfrac(1, 4), half);
  return to_real(base + off);
}

inline BarnesData barnes_prepare(const GradedAlgebra* A, int m, const BarnesOptions& opt = {}) {
  BarnesData d;
  d.m = m;
  d.c = barnes_abscissa(m);
  const auto& gl = detail::gauss_legendre(opt.gl_points);
  std::vector<std::pair<Real, Real>> panels;
  for (int i = 0; i < 4; ++i) panels.push_back({Real(i) / 4, Real(i + 1) / 4});
  for (int t = 1; t < opt.t_max; ++t) panels.push_back({Real(t), Real(t + 1)});
  Real tol = Real(opt.tail_tol);
  Real total = 0;
  for (auto& [a, b] : panels) {
    Real mid = (a + b) / 2, half = (b - a) / 2;
    Real pn = 0;
    for (size_t i = 0; i < gl.first.size(); ++i) {
      Cplx s(d.c, mid + half * gl.first[i]);
      auto k = barnes_kernel(A, m, s);
      Real w = gl.second[i] * half;
      Real nk = 0;
      for (auto& [zp, e] : k.c)
        for (auto& x : e) nk = std::max(nk, cabs(x));
      pn = std::max(pn, nk * w);
      d.nodes.push_back(s);
      d.weights.push_back(w);
      d.kernel.push_back(std::move(k));
    }
    total = std::max(total, pn);
    // the kernel decays like exp(-pi t); y^s can add at most exp(|arg y| t)
    if (a > 4 && pn < tol * total) break;
  }
  return d;
}

// pp-prefactor times [ line integral + residues at the integer poles left of the line ];
// equals the direct sum where that converges.
inline Lz<Cplx> barnes_integral(const GradedAlgebra* A, const BarnesData& d, const Cplx& y1) {
  const auto& p1 = A->elem("p1");
  bool real_y = y1.imag() == 0 && y1.real() > 0;
  Lz<Cplx> acc(A);
  for (size_t i = 0; i < d.nodes.size(); ++i) {
    const Cplx& s = d.nodes[i];
    Lz<Cplx> v = d.kernel[i] * detail::power_jet(A, y1, s, p1);
    if (real_y) {
      // K(conj s) = conj K(s): the two half-lines give 2 Re
      for (auto& [zp, e] : v.c)
        for (auto& x : e) x = Cplx(2 * x.real(), 0);
    } else {
      // lower half-line explicitly
      Cplx sb = conj(s);
      v += barnes_kernel(A, d.m, sb) * detail::power_jet(A, y1, sb, p1);
    }
    acc += v * Cplx(d.weights[i]);
  }
  // (1/2 pi i) * integral from +i inf to -i inf = -(1/2 pi) * integral dt
  Lz<Cplx> line = acc * (Cplx(-1) / (Cplx(2) * detail::pi_c()));
  Lz<Cplx> res(A);
  for (int n = 0; 3 * n <= d.m; ++n) {
    // Res_{s=n} Gamma(s)Gamma(1-s) = (-1)^n; the prefactor combines with Gamma(-pp+3n-m) below
    // so the residue is added in the already-combined form.
    size_t N = A->dim_c + 1;
    auto g1 = jet_apply(gamma_pow_taylor<Cplx>(Q(1 + d.m - 3 * n), -1, N), lz_var<Cplx>(A, A->elem("pp1"), 0),
                        Lz<Cplx>::one(A));
    auto g2 = jet_apply(gamma_pow_taylor<Cplx>(Q(1 + n), -3, N), lz_var<Cplx>(A, p1, 0), Lz<Cplx>::one(A));
    res += g1 * g2 * detail::power_jet(A, y1, Cplx(n), p1);
  }
  return barnes_prefactor(A, d.m) * line + res;
}

inline Real lz_norm(const Lz<Cplx>& v) {
  Real n = 0;
  for (auto& [k, e] : v.c)
    for (auto& x : e) n = std::max(n, cabs(x));
  return n;
}

// sum_n y1^{n+p1} / (Gamma(1+p1+n)^3 Gamma(1+pp+m-3n)), |y1| < 1/27.
inline Lz<Cplx> barnes_direct_sum(const GradedAlgebra* A, int m, const Cplx& y1, const BarnesOptions& opt = {}) {
  size_t N = A->dim_c + 1;
  Lz<Cplx> acc(A);
  int small = 0;
  for (int n = 0; n < opt.max_terms; ++n) {
    auto g1 = jet_apply(gamma_pow_taylor<Cplx>(Q(1 + m - 3 * n), -1, N), lz_var<Cplx>(A, A->elem("pp1"), 0),
                        Lz<Cplx>::one(A));
    auto g2 = jet_apply(gamma_pow_taylor<Cplx>(Q(1 + n), -3, N), lz_var<Cplx>(A, A->elem("p1"), 0), Lz<Cplx>::one(A));
    auto t = g1 * g2 * detail::power_jet(A, y1, Cplx(n), A->elem("p1"));
    acc += t;
    Real tn = lz_norm(t), an = lz_norm(acc);
    small = (n > 3 && tn < Real(opt.tail_tol) * an) ? small + 1 : 0;
    if (small >= 3) return acc;
  }
  throw math_error("barnes_direct_sum: no convergence (|y1| must be below 1/27)");
}

// sum_n (-1)^{m+n}/n! sin(pi pp)/(3 sin(pi pp/3 + (m-n) pi/3)) y1^{(m-n+p2)/3} / Gamma(1+(p2+m-n)/3)^3,
// |y1| > 1/27.
inline Lz<Cplx> barnes_left_sum(const GradedAlgebra* A, int m, const Cplx& y1, const BarnesOptions& opt = {}) {
  size_t N = A->dim_c + 1;
  Lz<Cplx> acc(A);
  Real fact = 1;
  int small = 0;
  auto p2 = A->elem("p2");
  auto p2third = scale(p2, qfrac(1, 3));
  for (int n = 0; n < opt.max_terms; ++n) {
    if (n) fact *= n;
    long j = m - n;
    auto sr = jet_apply(sin_ratio_taylor<Cplx>(3, j, N), lz_var<Cplx>(A, A->elem("pp1"), 0), Lz<Cplx>::one(A));
    auto g = jet_apply(detail::gamma_pow_taylor_any<Cplx>(1 + Q(j) / 3, -3, N), lz_var<Cplx>(A, p2third, 0),
                       Lz<Cplx>::one(A));
    Cplx sgn((m + n) % 2 ? -1 : 1);
    auto t = sr * g * detail::power_jet(A, y1, Cplx(to_real(Q(j) / 3)), p2third) * (sgn / Cplx(fact));
    acc += t;
    Real tn = lz_norm(t), an = lz_norm(acc);
    small = (n > 6 && tn < Real(opt.tail_tol) * an) ? small + 1 : 0;
    if (small >= 3) return acc;
  }
  throw math_error("barnes_left_sum: no convergence (|y1| must exceed 1/27)");
}

inline Real rel_diff(const Lz<Cplx>& a, const Lz<Cplx>& b) {
  Real d = lz_norm(a - b), s = std::max(lz_norm(a), lz_norm(b));
  return s == 0 ? d : d / s;
}

// ---------------------------------------------------------------- residues at s = -1 - n

// Nilpotent test ring Q[p1, pp1] / (degree > top) with p2 = pp1 + 3 p1; used to see that the
// vanishing of the extra residues depends on p1^3 = 0.
inline AlgebraPtr truncated_test_algebra(int top) {
  GradedAlgebra A;
  A.name = "trunc" + std::to_string(top);
  A.dim_c = top;
  std::vector<std::pair<int, int>> mons;
  for (int d = 0; d <= top; ++d)
    for (int i = d; i >= 0; --i) mons.push_back({i, d - i});
  size_t n = mons.size();
  for (auto& [i, j] : mons) {
    A.labels.push_back("p1^" + std::to_string(i) + "pp^" + std::to_string(j));
    A.deg.push_back(2 * (i + j));
  }
  A.age.assign(n, Q(0));
  A.table.assign(n, std::vector<std::optional<std::vector<Q>>>(n));
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) {
      std::vector<Q> v(n, Q(0));
      int i = mons[a].first + mons[b].first, j = mons[a].second + mons[b].second;
      for (size_t c = 0; c < n; ++c)
        if (mons[c].first == i && mons[c].second == j) v[c] = 1;
      A.table[a][b] = v;
    }
  A.gram = mat_id<Q>(n);
  A.dual.assign(n, std::vector<Q>(n, Q(0)));
  auto e = [&](size_t k) {
    std::vector<Q> v(n, Q(0));
    v[k] = 1;
    return v;
  };
  A.named["1"] = e(0);
  A.named["p1"] = e(1);
  A.named["pp1"] = e(2);
  A.named["p2"] = add(e(2), scale(e(1), Q(3)));
  A.gen_names = {"p1", "p2"};
  A.gens = {A.named["p1"], A.named["p2"]};
  return std::make_shared<const GradedAlgebra>(std::move(A));
}

// Prefactor times the residue of the integrand at s = -1-n:
//   (-1)^m sin(-pi pp)/pi * (-1)^{1+n} Gamma(-pp - k) / Gamma(p1 - n)^3 * y1^{-1-n+p1},  k = m + 3 + 3n
//   = (-1)^{m+1+n+k} / (Gamma(1 + pp + k) Gamma(p1 - n)^3) * y1^{-1-n+p1}
// and 1/Gamma(p1 - n) carries a factor p1.
inline std::vector<Lz<Cplx>> extra_residues(const GradedAlgebra* A, int m, int nmax, const Cplx& y1) {
  std::vector<Lz<Cplx>> out;
  size_t N = A->dim_c + 1;
  for (int n = 0; n <= nmax; ++n) {
    int k = m + 3 + 3 * n;
    auto g1 = jet_apply(gamma_pow_taylor<Cplx>(Q(1 + k), -1, N), lz_var<Cplx>(A, A->elem("pp1"), 0),
                        Lz<Cplx>::one(A));
    auto g2 = jet_apply(gamma_pow_taylor<Cplx>(Q(-n), -3, N), lz_var<Cplx>(A, A->elem("p1"), 0), Lz<Cplx>::one(A));
    Cplx sgn((m + 1 + n + k) % 2 ? -1 : 1);
    out.push_back(g1 * g2 * detail::power_jet(A, y1, Cplx(-1 - n), A->elem("p1")) * sgn);
  }
  return out;
}

}  // namespace crc
