#pragma once
// Gamma-function Taylor data: exact (symbolic atoms) at rational base points and
// numeric at complex base points; sin-ratio jets.

#include <boost/math/special_functions/bernoulli.hpp>

#include "coh.hpp"

namespace crc {

// ---------------------------------------------------------------- complex log-gamma / polygamma

namespace detail {
inline const std::vector<Real>& bernoulli_table() {
  static std::vector<Real> b = [] {
    std::vector<Real> v(61);
    for (int k = 0; k <= 60; ++k) v[k] = boost::math::bernoulli_b2n<Real>(k);
    return v;
  }();
  return b;
}
constexpr double kShift = 40.0;
constexpr int kTerms = 40;
}  // namespace detail

// log Gamma(z) up to an additive multiple of 2 pi i; exp() of it is Gamma(z).
inline Cplx lgamma_c(Cplx z) {
  if (z.real() <= 0 && boost::multiprecision::abs(z.imag()) < Real("1e-40") &&
      z.real() == boost::multiprecision::round(z.real()))
    throw math_error("lgamma_c: pole at nonpositive integer");
  Cplx acc(0);
  // ln z + ln(z+1) + ... accumulated as log of a product in chunks to limit branch noise
  Cplx prod(1);
  int cnt = 0;
  while (cabs(z) < detail::kShift || z.real() < detail::kShift / 2) {
    prod *= z;
    z += 1;
    if (++cnt == 8) {
      acc += log(prod);
      prod = Cplx(1);
      cnt = 0;
    }
  }
  acc += log(prod);
  const auto& B = detail::bernoulli_table();
  Real half = Real(1) / 2;
  Cplx r = (z - half) * log(z) - z + half * log(2 * boost::math::constants::pi<Real>());
  Cplx zinv = Cplx(1) / z, z2 = zinv * zinv, pw = zinv;
  for (int k = 1; k <= detail::kTerms; ++k) {
    r += pw * Cplx(B[k] / Real(2 * k * (2 * k - 1)));
    pw *= z2;
  }
  return r - acc;
}

inline Cplx gamma_c(const Cplx& z) { return exp(lgamma_c(z)); }

// psi^{(n)}(z) for n >= 0.
inline Cplx polygamma_c(int n, Cplx z) {
  if (z.real() <= 0 && boost::multiprecision::abs(z.imag()) < Real("1e-40") &&
      z.real() == boost::multiprecision::round(z.real()))
    throw math_error("polygamma_c: pole at nonpositive integer");
  Real nf = 1;
  for (int j = 2; j <= n; ++j) nf *= j;
  Real sign = (n % 2) ? Real(1) : Real(-1);  // (-1)^{n+1}
  Cplx corr(0);
  while (cabs(z) < detail::kShift || z.real() < detail::kShift / 2) {
    Cplx t = Cplx(1) / z, p = t;
    for (int j = 0; j < n; ++j) p *= t;
    corr += p;  // 1/z^{n+1}
    z += 1;
  }
  // psi^{(n)}(z) = psi^{(n)}(z+N) - (-1)^n n! sum 1/(z+j)^{n+1}
  Cplx shift = corr * Cplx((n % 2 ? Real(-1) : Real(1)) * nf);
  const auto& B = detail::bernoulli_table();
  Cplx zinv = Cplx(1) / z;
  Cplx r;
  if (n == 0) {
    r = log(z) - zinv / 2;
    Cplx z2 = zinv * zinv, pw = z2;
    for (int k = 1; k <= detail::kTerms; ++k) {
      r -= pw * Cplx(B[k] / Real(2 * k));
      pw *= z2;
    }
  } else {
    // (-1)^{n+1} [ (n-1)!/z^n + n!/(2 z^{n+1}) + sum B_2k (2k+n-1)!/((2k)! z^{2k+n}) ]
    Real nm1f = nf / n;
    Cplx zn(1);
    for (int j = 0; j < n; ++j) zn *= zinv;
    Cplx s = zn * Cplx(nm1f) + zn * zinv * Cplx(nf / 2);
    Cplx pw = zn * zinv * zinv;
    Real ratio = nm1f;  // (2k+n-1)!/(2k)! built incrementally
    for (int k = 1; k <= detail::kTerms; ++k) {
      // (2k+n-1)!/(2k)! = prod_{j=2k+1}^{2k+n-1} j
      Real f = 1;
      for (int j = 2 * k + 1; j <= 2 * k + n - 1; ++j) f *= j;
      ratio = f;
      s += pw * Cplx(B[k] * ratio);
      pw *= zinv * zinv;
    }
    r = s * Cplx(sign);
  }
  return r - shift;
}

// ---------------------------------------------------------------- Taylor data of Gamma powers

// Taylor coefficients of Gamma(a + x)^e at a complex point (numeric).
inline Taylor<Cplx> gamma_pow_taylor_c(const Cplx& a, int e, size_t N) {
  Taylor<Cplx> ex(N, Cplx(0));
  Real fact = 1;
  for (size_t k = 1; k < N; ++k) {
    fact *= Real(long(k));
    ex[k] = polygamma_c(int(k) - 1, a) * Cplx(Real(e) / fact);
  }
  auto t = texp(ex, N);
  Cplx g = exp(lgamma_c(a) * Cplx(Real(e)));
  for (auto& c : t) c *= g;
  return t;
}

inline Q frac_part_q(const Q& x) {
  Zint n = numerator(x), d = denominator(x);
  Zint r = n % d;
  if (r < 0) r += d;
  return Q(r) / Q(d);
}

// Symbolic polygamma values psi^{(m)}(a) for a in {1/3, 2/3, 1/2, 1} + Z_{>=0}.
inline Sym psi_sym(int m, const Q& a) {
  Q base = frac_part_q(a);
  if (base == 0) base = 1;
  Q diff = a - base;
  Zint nshift = numerator(diff);
  if (nshift < 0 || denominator(diff) != 1) throw math_error("psi_sym: base point not supported");
  Sym v;
  Q mf = 1;
  for (int j = 2; j <= m; ++j) mf *= j;
  if (base == 1) {
    // psi(1) = -gamma; psi^{(m)}(1) = (-1)^{m+1} m! zeta(m+1)
    switch (m) {
      case 0: v = -Sym::atom(EGAMMA); break;
      case 1: v = Sym::pi(2) * qfrac(1, 6); break;
      case 2: v = Sym::atom(ZETA3) * Q(-2); break;
      case 3: v = Sym::pi(4) * qfrac(6, 90); break;
      default: throw math_error("psi_sym: order too high at 1");
    }
  } else if (base == qfrac(1, 2)) {
    switch (m) {
      case 0: v = -Sym::atom(EGAMMA) - Sym::atom(LN2) * Q(2); break;
      case 1: v = Sym::pi(2) * qfrac(1, 2); break;
      case 2: v = Sym::atom(ZETA3) * Q(-14); break;
      case 3: v = Sym::pi(4); break;
      default: throw math_error("psi_sym: order too high at 1/2");
    }
  } else if (base == qfrac(1, 3) || base == qfrac(2, 3)) {
    if (m > 2) throw math_error("psi_sym: order too high at " + qstr(base));
    int atom = (base == qfrac(1, 3) ? PSI0A : PSI0B) + m;
    v = Sym::atom(atom);
  } else {
    throw math_error("psi_sym: unsupported base point " + qstr(base));
  }
  // psi^{(m)}(b + n) = psi^{(m)}(b) + (-1)^m m! sum_{j<n} 1/(b+j)^{m+1}
  Q corr = 0;
  for (Zint j = 0; j < nshift; ++j) {
    Q t = 1 / (base + Q(j)), p = 1;
    for (int i = 0; i <= m; ++i) p *= t;
    corr += p;
  }
  return v + Sym((m % 2 ? -mf : mf) * corr);
}

// Gamma(a)^e symbolically for a in {1/3, 2/3, 1/2, 1} + Z_{>=0}.
inline Sym gamma_pow_sym(const Q& a, int e) {
  Q base = frac_part_q(a);
  if (base == 0) base = 1;
  Q poch = 1;  // Gamma(a) = Gamma(base) * prod_{j} (base + j)
  for (Q b = base; b < a; b += 1) poch *= b;
  Sym g;
  if (base == 1) g = Sym(1);
  else if (base == qfrac(1, 2)) {
    if (e % 2) throw math_error("gamma_pow_sym: odd power of Gamma(1/2)");
    g = Sym::pi(e / 2);
    Q pe = 1;
    for (int i = 0; i < std::abs(e); ++i) pe *= poch;
    return g * (e > 0 ? pe : 1 / pe);
  } else if (base == qfrac(1, 3) || base == qfrac(2, 3)) {
    if (e % 3) throw math_error("gamma_pow_sym: power of Gamma(1/3) not divisible by 3");
    Sym cube = base == qfrac(1, 3) ? Sym::atom(G3) : Sym::gamma23_cubed();
    g = Sym(1);
    for (int i = 0; i < std::abs(e) / 3; ++i) g = g * cube;
    if (e < 0) g = g.inv();
  } else {
    throw math_error("gamma_pow_sym: unsupported base point " + qstr(base));
  }
  Q pe = 1;
  for (int i = 0; i < std::abs(e); ++i) pe *= poch;
  return g * (e > 0 ? pe : 1 / pe);
}


// Scalar-field dependent base data.
template <class S>
struct GammaData;

template <>
struct GammaData<Sym> {
  static Sym psi(int m, const Q& a) { return psi_sym(m, a); }
  static Sym gpow(const Q& a, int e) { return gamma_pow_sym(a, e); }
  static Sym pi() { return Sym::pi(); }
  static Sym from_k(const K& k) { return Sym(k); }
};

template <>
struct GammaData<Cplx> {
  static Cplx psi(int m, const Q& a) { return polygamma_c(m, Cplx(to_real(a))); }
  static Cplx gpow(const Q& a, int e) { return exp(lgamma_c(Cplx(to_real(a))) * Cplx(Real(e))); }
  static Cplx pi() { return Cplx(boost::math::constants::pi<Real>()); }
  static Cplx from_k(const K& k) { return k.eval(); }
};

// Taylor coefficients of Gamma(a + x)^e in x. At a nonpositive integer a = -k only e < 0
// is allowed: 1/Gamma(-k + x) = x (x-1) ... (x-k) / Gamma(1 + x).
template <class S>
Taylor<S> gamma_pow_taylor(const Q& a, int e, size_t N) {
  if (a <= 0 && denominator(a) == 1) {
    if (e >= 0) throw math_error("gamma_pow_taylor: pole of Gamma at " + qstr(a));
    long k = static_cast<long>(-numerator(a));
    Taylor<S> poly(N, S(0));
    poly[0] = S(1);
    for (long j = 0; j <= k; ++j) {
      // multiply by (x - j)
      Taylor<S> lin(2, S(0));
      lin[0] = Field<S>::from(Q(-j));
      lin[1] = S(1);
      poly = tmul(poly, lin, N);
    }
    auto r1 = gamma_pow_taylor<S>(Q(1), -1, N);
    Taylor<S> one = tmul(poly, r1, N);
    Taylor<S> out(N, S(0));
    out[0] = S(1);
    for (int i = 0; i < -e; ++i) out = tmul(out, one, N);
    return out;
  }
  if (a <= 0) throw math_error("gamma_pow_taylor: base point must be positive or a pole");
  Taylor<S> ex(N, S(0));
  Q fact = 1;
  for (size_t k = 1; k < N; ++k) {
    fact *= long(k);
    ex[k] = GammaData<S>::psi(int(k) - 1, a) * Field<S>::from(Q(e) / fact);
  }
  auto t = texp(ex, N);
  S g = GammaData<S>::gpow(a, e);
  for (auto& c : t) c = c * g;
  return t;
}

// Taylor coefficients of sin(pi x) / (n sin(pi x / n + j pi / n)), cancelling the common zero
// when j is divisible by n.
template <class S>
Taylor<S> sin_ratio_taylor(int n, long j, size_t N) {
  auto [sj, cj] = sincos_rational_pi(Q(j) / Q(n));
  Taylor<S> num = sin_taylor<S>(S(0), S(1), N + 1);
  Taylor<S> den = sin_taylor<S>(GammaData<S>::from_k(sj), GammaData<S>::from_k(cj), N + 1);
  S pi = GammaData<S>::pi();
  num = tscale_arg(num, pi);
  den = tscale_arg(den, pi * Field<S>::from(qfrac(1, n)));
  for (auto& c : den) c = c * Field<S>::from(Q(n));
  auto r = tdiv(num, den, N);
  r.resize(N);
  return r;
}

}  // namespace crc
