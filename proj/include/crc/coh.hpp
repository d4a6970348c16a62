#pragma once
// Graded (orbifold) cohomology algebras of P(1,1,2), F2, P(1,1,1,3), F3 and
// functional calculus on nilpotent elements.

#include <functional>
#include <type_traits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "linalg.hpp"
#include "scalar.hpp"

namespace crc {

enum class ModelId { F2, F3, P112, P1113 };

inline std::string model_name(ModelId m) {
  switch (m) {
    case ModelId::F2: return "F2";
    case ModelId::F3: return "F3";
    case ModelId::P112: return "P112";
    case ModelId::P1113: return "P1113";
  }
  return "?";
}

inline ModelId parse_model(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (s == "F2") return ModelId::F2;
  if (s == "F3") return ModelId::F3;
  if (s == "P112") return ModelId::P112;
  if (s == "P1113") return ModelId::P1113;
  throw std::invalid_argument("unknown model: " + s);
}

template <class S>
using Elem = std::vector<S>;

struct GradedAlgebra {
  std::string name;
  int dim_c = 0;                       // complex dimension of the space
  std::vector<std::string> labels;     // basis phi_0..phi_{N-1}
  std::vector<Q> deg;                  // real degrees, age shift included
  std::vector<Q> age;
  std::vector<std::vector<std::optional<std::vector<Q>>>> table;  // nullopt: undefined product
  Mat<Q> gram;
  Mat<Q> dual;                         // dual[i] = coordinates of phi^i
  std::vector<std::string> gen_names;  // degree-2 generators
  std::vector<std::vector<Q>> gens;
  std::vector<Q> c1;
  std::map<std::string, std::vector<Q>> named;  // p, p1, p2, pp1, 1_1/3, ...

  size_t size() const { return labels.size(); }
  const std::vector<Q>& elem(const std::string& n) const {
    auto it = named.find(n);
    if (it == named.end()) throw std::invalid_argument(name + ": no element named " + n);
    return it->second;
  }
  int index(const std::string& label) const {
    for (size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == label) return int(i);
    throw std::invalid_argument(name + ": no basis label " + label);
  }
};

using AlgebraPtr = std::shared_ptr<const GradedAlgebra>;

template <class S>
Elem<S> lift(const std::vector<Q>& v) {
  Elem<S> r;
  r.reserve(v.size());
  for (auto& x : v) r.push_back(Field<S>::from(x));
  return r;
}

template <class S>
Elem<S> basis_vec(const GradedAlgebra& A, size_t i) {
  Elem<S> r(A.size(), S(0));
  r[i] = S(1);
  return r;
}

template <class S>
bool is_zero(const Elem<S>& a) {
  for (auto& x : a)
    if (!Field<S>::zero(x)) return false;
  return true;
}

template <class S>
Elem<S> add(const Elem<S>& a, const Elem<S>& b) {
  Elem<S> r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

template <class S>
Elem<S> sub(const Elem<S>& a, const Elem<S>& b) {
  Elem<S> r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

template <class S>
Elem<S> scale(const Elem<S>& a, const std::type_identity_t<S>& c) {
  Elem<S> r = a;
  for (auto& x : r) x = x * c;
  return r;
}

template <class S>
Elem<S> mul(const GradedAlgebra& A, const Elem<S>& a, const Elem<S>& b) {
  size_t n = A.size();
  Elem<S> r(n, S(0));
  for (size_t i = 0; i < n; ++i) {
    if (Field<S>::zero(a[i])) continue;
    for (size_t j = 0; j < n; ++j) {
      if (Field<S>::zero(b[j])) continue;
      auto& e = A.table[i][j];
      if (!e) throw math_error(A.name + ": product " + A.labels[i] + "*" + A.labels[j] + " is undefined");
      S ab = a[i] * b[j];
      for (size_t k = 0; k < n; ++k)
        if ((*e)[k] != 0) r[k] += ab * Field<S>::from((*e)[k]);
    }
  }
  return r;
}

template <class S>
S poincare_pair(const GradedAlgebra& A, const Elem<S>& a, const Elem<S>& b) {
  S r(0);
  for (size_t i = 0; i < A.size(); ++i) {
    if (Field<S>::zero(a[i])) continue;
    for (size_t j = 0; j < A.size(); ++j)
      if (A.gram[i][j] != 0 && !Field<S>::zero(b[j])) r += a[i] * b[j] * Field<S>::from(A.gram[i][j]);
  }
  return r;
}

// Mixed-algebra calls are rejected by comparing algebra identities.
template <class S>
S poincare_pair(const AlgebraPtr& A, const Elem<S>& a, const AlgebraPtr& B, const Elem<S>& b) {
  if (A.get() != B.get()) throw std::invalid_argument("poincare_pair: elements of different algebras");
  return poincare_pair(*A, a, b);
}

// Matrix of x -> a*x; column j is a*phi_j.
template <class S>
Mat<S> mult_matrix(const GradedAlgebra& A, const Elem<S>& a) {
  size_t n = A.size();
  auto m = mat_zero<S>(n, n);
  for (size_t j = 0; j < n; ++j) {
    auto col = mul(A, a, basis_vec<S>(A, j));
    for (size_t i = 0; i < n; ++i) m[i][j] = col[i];
  }
  return m;
}

template <class S>
std::string elem_str(const GradedAlgebra& A, const Elem<S>& a) {
  std::string out;
  for (size_t i = 0; i < A.size(); ++i) {
    if (Field<S>::zero(a[i])) continue;
    if (!out.empty()) out += " + ";
    out += "(" + Field<S>::str(a[i]) + ")*" + A.labels[i];
  }
  return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------- construction

namespace detail {

// Q[p1,p2]/(p1^n, p2^2 - c p1 p2) in the monomial basis p1^a p2^b, b in {0,1}, a < n.
struct ScrollRing {
  int n, c;
  int idx(int a, int b) const { return b * n + a; }
  int size() const { return 2 * n; }
  // p1^a p2^b reduced
  std::vector<Q> mono(int a, int b) const {
    std::vector<Q> v(size(), Q(0));
    if (b == 0) {
      if (a < n) v[idx(a, 0)] = 1;
      return v;
    }
    Q coef = 1;
    while (b >= 2) {
      coef *= c;
      ++a;
      --b;
    }
    if (a < n) v[idx(a, 1)] = coef;
    return v;
  }
  std::vector<Q> mul(const std::vector<Q>& x, const std::vector<Q>& y) const {
    std::vector<Q> r(size(), Q(0));
    for (int i = 0; i < size(); ++i) {
      if (x[i] == 0) continue;
      for (int j = 0; j < size(); ++j) {
        if (y[j] == 0) continue;
        auto m = mono(i % n + j % n, i / n + j / n);
        for (int k = 0; k < size(); ++k) r[k] += x[i] * y[j] * m[k];
      }
    }
    return r;
  }
  // integral of p1^(n-1) p2 is 1
  Q integrate(const std::vector<Q>& x) const { return x[idx(n - 1, 1)]; }
};

inline void finish_duals(GradedAlgebra& A) {
  auto ginv = mat_inv(A.gram);
  size_t n = A.size();
  A.dual.assign(n, std::vector<Q>(n, Q(0)));
  // <phi_i, phi^j> = delta: phi^j = sum_k ginv[k][j] phi_k
  for (size_t j = 0; j < n; ++j)
    for (size_t k = 0; k < n; ++k) A.dual[j][k] = ginv[k][j];
}

inline GradedAlgebra build_scroll(ModelId id) {
  const bool f3 = id == ModelId::F3;
  ScrollRing R{f3 ? 3 : 2, f3 ? 3 : 2};
  GradedAlgebra A;
  A.name = model_name(id);
  A.dim_c = R.n;
  std::vector<std::vector<Q>> phi;  // phi_i in monomial coordinates
  auto P1 = R.mono(1, 0), P2 = R.mono(0, 1), ONE = R.mono(0, 0);
  auto lin = [&](std::vector<std::pair<Q, std::vector<Q>>> terms) {
    std::vector<Q> v(R.size(), Q(0));
    for (auto& [c, m] : terms)
      for (int k = 0; k < R.size(); ++k) v[k] += c * m[k];
    return v;
  };
  std::vector<Q> pp1;  // p2 - c p1
  if (f3) {
    pp1 = lin({{1, P2}, {-3, P1}});
    phi = {ONE,
           lin({{qfrac(1, 3), P2}}),
           lin({{qfrac(1, 3), R.mono(1, 1)}}),
           lin({{qfrac(1, 3), pp1}}),
           lin({{qfrac(-1, 3), R.mul(P1, pp1)}}),
           lin({{qfrac(1, 3), R.mono(2, 1)}})};
    A.labels = {"1", "p2/3", "p1p2/3", "(p2-3p1)/3", "-p1(p2-3p1)/3", "p1^2p2/3"};
    A.deg = {0, 2, 4, 2, 4, 6};
  } else {
    pp1 = lin({{1, P2}, {-2, P1}});
    phi = {ONE, P1, P2, R.mono(1, 1)};
    A.labels = {"1", "p1", "p2", "p1p2"};
    A.deg = {0, 2, 2, 4};
  }
  size_t n = phi.size();
  A.age.assign(n, Q(0));
  // monomial -> phi coordinates
  Mat<Q> Phi = mat_zero<Q>(R.size(), n);
  for (size_t j = 0; j < n; ++j)
    for (int k = 0; k < R.size(); ++k) Phi[k][j] = phi[j][k];
  auto Pinv = mat_inv(Phi);
  auto to_phi = [&](const std::vector<Q>& m) { return mat_vec(Pinv, m); };
  A.table.assign(n, std::vector<std::optional<std::vector<Q>>>(n));
  A.gram = mat_zero<Q>(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      auto prod = R.mul(phi[i], phi[j]);
      A.table[i][j] = to_phi(prod);
      A.gram[i][j] = R.integrate(prod);
    }
  finish_duals(A);
  A.gen_names = {"p1", "p2"};
  A.gens = {to_phi(P1), to_phi(P2)};
  A.named["1"] = to_phi(ONE);
  A.named["p1"] = A.gens[0];
  A.named["p2"] = A.gens[1];
  A.named["pp1"] = to_phi(pp1);
  A.c1 = to_phi(lin({{2, P2}}));
  return A;
}

// Weighted projective line/plane P(1,..,1,w): untwisted p^k, twisted 1_{f}.
inline GradedAlgebra build_weighted(ModelId id) {
  const bool p3 = id == ModelId::P1113;
  int w = p3 ? 3 : 2;         // the nontrivial weight
  int D = p3 ? 3 : 2;         // complex dimension
  GradedAlgebra A;
  A.name = model_name(id);
  A.dim_c = D;
  for (int k = 0; k <= D; ++k) {
    A.labels.push_back(k == 0 ? "1_0" : k == 1 ? "p" : "p^" + std::to_string(k));
    A.deg.push_back(2 * k);
    A.age.push_back(0);
  }
  std::vector<Q> fr;
  if (p3) {
    A.labels.push_back("1_1/3");
    A.deg.push_back(4);
    A.age.push_back(2);
    A.labels.push_back("1_2/3");
    A.deg.push_back(2);
    A.age.push_back(1);
    fr = {qfrac(1, 3), qfrac(2, 3)};
  } else {
    A.labels.push_back("1_1/2");
    A.deg.push_back(2);
    A.age.push_back(1);
    fr = {qfrac(1, 2)};
  }
  size_t n = A.labels.size(), nu = D + 1;
  A.table.assign(n, std::vector<std::optional<std::vector<Q>>>(n));
  A.gram = mat_zero<Q>(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      std::vector<Q> v(n, Q(0));
      if (i < nu && j < nu) {
        if (i + j <= size_t(D)) v[i + j] = 1;
        if (i + j == size_t(D)) A.gram[i][j] = qfrac(1, w);
        A.table[i][j] = v;
      } else if (i < nu || j < nu) {
        size_t u = i < nu ? i : j, t = i < nu ? j : i;
        if (u == 0) v[t] = 1;  // 1_0 * 1_f = 1_f, p^k * 1_f = 0
        A.table[i][j] = v;
      } else {
        // twisted x twisted: left undefined; pairing pairs f with 1-f
        Q fi = fr[i - nu], fj = fr[j - nu];
        if (fi + fj == 1) A.gram[i][j] = qfrac(1, w);
      }
    }
  finish_duals(A);
  std::vector<Q> p(n, Q(0));
  p[1] = 1;
  A.gen_names = {"p"};
  A.gens = {p};
  A.named["1"] = basis_vec<Q>(A, 0);
  A.named["p"] = p;
  for (size_t k = 0; k < fr.size(); ++k) A.named["1_" + qstr(fr[k])] = basis_vec<Q>(A, nu + k);
  A.named["1_0"] = basis_vec<Q>(A, 0);
  A.c1 = scale(p, Q(D + w));  // (sum of weights) p
  return A;
}

}  // namespace detail

inline AlgebraPtr build_model_algebra(ModelId id) {
  static std::map<ModelId, AlgebraPtr> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(id);
  if (it != cache.end()) return it->second;
  GradedAlgebra A = (id == ModelId::F2 || id == ModelId::F3) ? detail::build_scroll(id) : detail::build_weighted(id);
  auto ptr = std::make_shared<const GradedAlgebra>(std::move(A));
  cache[id] = ptr;
  return ptr;
}

// Exhaustive axiom checks; returns human-readable failures (empty when all hold).
inline std::vector<std::string> check_axioms(const GradedAlgebra& A) {
  std::vector<std::string> bad;
  size_t n = A.size();
  auto e = [&](size_t i) { return basis_vec<Q>(A, i); };
  auto one = A.elem("1");
  auto defined = [&](size_t i, size_t j) { return A.table[i][j].has_value(); };
  for (size_t i = 0; i < n; ++i) {
    if (mul(A, one, e(i)) != e(i)) bad.push_back("unit fails on " + A.labels[i]);
    for (size_t j = 0; j < n; ++j) {
      if (A.gram[i][j] != A.gram[j][i]) bad.push_back("pairing not symmetric");
      if (defined(i, j) != defined(j, i) || (defined(i, j) && *A.table[i][j] != *A.table[j][i]))
        bad.push_back("not commutative: " + A.labels[i] + "," + A.labels[j]);
      if (defined(i, j)) {
        auto ab = *A.table[i][j];
        for (size_t k = 0; k < n; ++k)
          if (ab[k] != 0 && A.deg[k] != A.deg[i] + A.deg[j])
            bad.push_back("degree additivity: " + A.labels[i] + "*" + A.labels[j]);
      }
      for (size_t k = 0; k < n; ++k) {
        try {
          auto l = mul(A, mul(A, e(i), e(j)), e(k));
          auto r = mul(A, e(i), mul(A, e(j), e(k)));
          if (l != r) bad.push_back("not associative");
          // Frobenius: <ab, c> = <a, bc>
          if (poincare_pair(A, mul(A, e(i), e(j)), e(k)) != poincare_pair(A, e(i), mul(A, e(j), e(k))))
            bad.push_back("Frobenius fails");
        } catch (const math_error&) {
          // triples touching an undefined product are skipped
        }
      }
    }
  }
  if (rank_q(A.gram) != n) bad.push_back("pairing degenerate");
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (poincare_pair(A, e(i), A.dual[j]) != (i == j ? Q(1) : Q(0))) bad.push_back("dual basis mismatch");
  return bad;
}

// ---------------------------------------------------------------- Hard Lefschetz

struct LefschetzReport {
  struct Row {
    int k;
    int src_dim, dst_dim, rank;
    bool bijective;
  };
  std::vector<Row> rows;
  bool holds = true;
  Q variance;
};

inline LefschetzReport hard_lefschetz_check(const GradedAlgebra& A, const std::vector<Q>& omega) {
  for (size_t i = 0; i < A.size(); ++i)
    if (omega[i] != 0 && A.deg[i] != 2) throw std::invalid_argument("hard_lefschetz_check: omega must have degree 2");
  LefschetzReport rep;
  int n = A.dim_c;
  auto in_degree = [&](int d) {
    std::vector<size_t> v;
    for (size_t i = 0; i < A.size(); ++i)
      if (A.deg[i] == d) v.push_back(i);
    return v;
  };
  for (size_t i = 0; i < A.size(); ++i) rep.variance += (A.deg[i] - n) * (A.deg[i] - n);
  for (int k = 0; k <= n; ++k) {
    if ((n - k) % 2) continue;  // only even real degrees occur here
    auto src = in_degree(n - k), dst = in_degree(n + k);
    Mat<Q> m = mat_zero<Q>(dst.size(), src.size());
    for (size_t c = 0; c < src.size(); ++c) {
      auto v = basis_vec<Q>(A, src[c]);
      for (int s = 0; s < k; ++s) v = mul(A, omega, v);
      for (size_t r = 0; r < dst.size(); ++r) m[r][c] = v[dst[r]];
    }
    int rk = src.empty() || dst.empty() ? 0 : int(rank_q(m));
    bool bij = src.size() == dst.size() && rk == int(src.size());
    rep.rows.push_back({k, int(src.size()), int(dst.size()), rk, bij});
    rep.holds = rep.holds && bij;
  }
  return rep;
}

// ---------------------------------------------------------------- Taylor data and jets

// Truncated power series in one variable x with coefficients in S.
template <class S>
using Taylor = std::vector<S>;

template <class S>
Taylor<S> tmul(const Taylor<S>& a, const Taylor<S>& b, size_t N) {
  Taylor<S> r(N, S(0));
  for (size_t i = 0; i < a.size() && i < N; ++i) {
    if (Field<S>::zero(a[i])) continue;
    for (size_t j = 0; j < b.size() && i + j < N; ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

// a / b, cancelling common leading zeros of b against a.
template <class S>
Taylor<S> tdiv(Taylor<S> a, Taylor<S> b, size_t N) {
  size_t v = 0;
  while (v < b.size() && Field<S>::zero(b[v])) {
    if (v < a.size() && !Field<S>::zero(a[v])) throw math_error("tdiv: pole in quotient");
    ++v;
  }
  if (v == b.size()) throw math_error("tdiv: zero divisor");
  a.erase(a.begin(), a.begin() + std::min(v, a.size()));
  b.erase(b.begin(), b.begin() + v);
  S b0inv = Field<S>::inv(b[0]);
  Taylor<S> r(N, S(0));
  for (size_t k = 0; k < N; ++k) {
    S acc = k < a.size() ? a[k] : S(0);
    for (size_t j = 1; j <= k && j < b.size(); ++j) acc -= b[j] * r[k - j];
    r[k] = acc * b0inv;
  }
  return r;
}

template <class S>
Taylor<S> texp(const Taylor<S>& a, size_t N) {
  // a[0] must be zero
  if (!a.empty() && !Field<S>::zero(a[0])) throw math_error("texp: nonzero constant term");
  Taylor<S> r(N, S(0));
  r[0] = S(1);
  // r' = a' r
  for (size_t k = 1; k < N; ++k) {
    S acc(0);
    for (size_t j = 1; j <= k && j < a.size(); ++j) acc += Field<S>::from(Q(long(j))) * a[j] * r[k - j];
    r[k] = acc * Field<S>::from(Q(1) / Q(long(k)));
  }
  return r;
}

template <class S>
Taylor<S> tscale_arg(const Taylor<S>& a, const S& c) {
  // f(x) -> f(c x)
  Taylor<S> r = a;
  S p(1);
  for (auto& x : r) {
    x = x * p;
    p = p * c;
  }
  return r;
}

// Applies a Taylor expansion to a nilpotent element x of a ring R (unit given).
template <class S, class R>
R jet_apply(const Taylor<S>& f, const R& x, const R& unit) {
  R result = unit * (f.empty() ? S(0) : f[0]);
  R pw = unit;
  for (size_t k = 1;; ++k) {
    pw = pw * x;
    if (pw.zero()) break;
    if (k >= f.size()) throw math_error("jet_apply: Taylor data shorter than nilpotency order");
    result = result + pw * f[k];
  }
  return result;
}

template <class S>
Taylor<S> exp_taylor(size_t N) {
  Taylor<S> r(N, S(0));
  Q f = 1;
  for (size_t k = 0; k < N; ++k) {
    if (k) f /= long(k);
    r[k] = Field<S>::from(f);
  }
  return r;
}

// sin(theta0 + x) where sin theta0 and cos theta0 are supplied.
template <class S>
Taylor<S> sin_taylor(const S& s0, const S& c0, size_t N) {
  Taylor<S> r(N, S(0));
  Q f = 1;
  for (size_t k = 0; k < N; ++k) {
    if (k) f /= long(k);
    S d = (k % 4 == 0) ? s0 : (k % 4 == 1) ? c0 : (k % 4 == 2) ? -s0 : -c0;
    r[k] = d * Field<S>::from(f);
  }
  return r;
}

// sin and cos of j*pi/m in Q(sqrt3) for m in {1,2,3,6}.
inline std::pair<K, K> sincos_rational_pi(Q angle_over_pi) {
  // reduce modulo 2
  Zint num = numerator(angle_over_pi), den = denominator(angle_over_pi);
  Zint twoden = 2 * den;
  Zint r = num % twoden;
  if (r < 0) r += twoden;
  Q a = Q(r) / Q(den);
  static const std::vector<std::tuple<Q, K, K>> table = {
      {qfrac(0), K(0), K(1)},
      {qfrac(1, 6), K(qfrac(1, 2)), K(0, qfrac(1, 2), 0, 0)},
      {qfrac(1, 3), K(0, qfrac(1, 2), 0, 0), K(qfrac(1, 2))},
      {qfrac(1, 2), K(1), K(0)},
      {qfrac(2, 3), K(0, qfrac(1, 2), 0, 0), K(qfrac(-1, 2))},
      {qfrac(5, 6), K(qfrac(1, 2)), K(0, qfrac(-1, 2), 0, 0)},
  };
  bool neg = false;
  if (a >= 1) {
    a -= 1;
    neg = true;
  }
  for (auto& [ang, s, c] : table)
    if (ang == a) return neg ? std::make_pair(-s, -c) : std::make_pair(s, c);
  throw math_error("sincos_rational_pi: unsupported angle " + qstr(angle_over_pi) + "*pi");
}


}  // namespace crc
