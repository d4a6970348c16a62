#pragma once
// Givental spaces at Q = 1: the symplectic form, the maps U-bar and U between the
// orbifold and resolution sides, and their checkable properties.

#include "barnes.hpp"

namespace crc {

enum class Pair { P1113_F3, P112_F2 };

inline std::string pair_name(Pair p) { return p == Pair::P1113_F3 ? "p1113-f3" : "p112-f2"; }
inline Pair parse_pair(const std::string& s) {
  if (s == "p1113-f3") return Pair::P1113_F3;
  if (s == "p112-f2") return Pair::P112_F2;
  throw std::invalid_argument("unknown pair '" + s + "' (expected p1113-f3 or p112-f2)");
}
inline ModelId orbifold_of(Pair p) { return p == Pair::P1113_F3 ? ModelId::P1113 : ModelId::P112; }
inline ModelId resolution_of(Pair p) { return p == Pair::P1113_F3 ? ModelId::F3 : ModelId::F2; }

using Laurent = std::map<int, Sym>;

inline void laurent_add(Laurent& a, int k, const Sym& v) {
  if (v.zero()) return;
  auto& x = a[k];
  x += v;
  if (x.zero()) a.erase(k);
}

inline std::string laurent_str(const Laurent& l) {
  if (l.empty()) return "0";
  std::string out;
  for (auto& [k, v] : l) {
    if (!out.empty()) out += " + ";
    out += "(" + v.str() + ")";
    if (k) out += "*z^" + std::to_string(k);
  }
  return out;
}

// <a, b> for Laurent-in-z algebra elements.
template <class S>
std::map<int, S> lz_pair(const GradedAlgebra& A, const Lz<S>& a, const Lz<S>& b) {
  std::map<int, S> out;
  for (auto& [i, x] : a.c)
    for (auto& [j, y] : b.c) {
      S acc(0);
      for (size_t r = 0; r < A.size(); ++r) {
        if (Field<S>::zero(x[r])) continue;
        for (size_t c = 0; c < A.size(); ++c)
          if (A.gram[r][c] != 0 && !Field<S>::zero(y[c])) acc += x[r] * y[c] * Field<S>::from(A.gram[r][c]);
      }
      if (!Field<S>::zero(acc)) out[i + j] += acc;
    }
  for (auto it = out.begin(); it != out.end();) it = Field<S>::zero(it->second) ? out.erase(it) : std::next(it);
  return out;
}

// Omega(f, g) = Res_{z=0} <f(-z), g(z)> dz
template <class S>
S omega(const GradedAlgebra& A, const Lz<S>& f, const Lz<S>& g) {
  auto l = lz_pair(A, f.flip(), g);
  auto it = l.find(-1);
  return it == l.end() ? S(0) : it->second;
}

// A C[z, 1/z]-linear map given by the images of the source basis. `flipped` marks the
// version with z -> -z applied (U as opposed to U-bar).
struct SympMap {
  const GradedAlgebra* src = nullptr;
  const GradedAlgebra* dst = nullptr;
  std::vector<Lz<Sym>> cols;
  bool flipped = true;
  std::string label;

  Laurent entry(size_t row, size_t col) const {
    Laurent l;
    for (auto& [k, e] : cols[col].c) laurent_add(l, k, e[row]);
    return l;
  }
  SympMap flip() const {
    SympMap r = *this;
    for (auto& c : r.cols) c = c.flip();
    r.flipped = !flipped;
    return r;
  }
  // Applies the map to a Laurent-in-z element of the source algebra.
  template <class S>
  Lz<S> apply(const Lz<S>& x) const;
};

template <>
inline Lz<Sym> SympMap::apply(const Lz<Sym>& x) const {
  Lz<Sym> out(dst);
  for (auto& [k, e] : x.c)
    for (size_t i = 0; i < e.size(); ++i)
      if (!e[i].zero()) out += cols[i].shift(k) * e[i];
  return out;
}

inline SympMap identity_map(const GradedAlgebra* A) {
  SympMap m;
  m.src = m.dst = A;
  m.label = "identity";
  for (size_t i = 0; i < A->size(); ++i) m.cols.push_back(Lz<Sym>::elem(A, basis_vec<Sym>(*A, i)));
  return m;
}

// ---------------------------------------------------------------- closed-form matrices

inline SympMap u_matrix_closed_form(Pair pair) {
  auto src = build_model_algebra(orbifold_of(pair));
  auto dst = build_model_algebra(resolution_of(pair));
  SympMap U;
  U.src = src.get();
  U.dst = dst.get();
  U.flipped = true;
  U.label = "closed-form";
  U.cols.assign(src->size(), Lz<Sym>(dst.get()));
  auto set = [&](size_t row, size_t col, int zpow, const Sym& v) {
    Elem<Sym> e(dst->size(), Sym());
    e[row] = v;
    U.cols[col] += Lz<Sym>::elem(dst.get(), e, zpow);
  };
  Sym pi = Sym::pi(), s3 = Sym::sqrt3(), I = Sym::imag();
  if (pair == Pair::P1113_F3) {
    Sym g3inv = Sym::atom(G3, -1), g23inv = Sym::gamma23_cubed().inv();
    set(0, 0, 0, Sym(1));
    set(4, 0, -2, Sym::pi(2) * qfrac(-1, 3));
    set(5, 0, -3, Sym::atom(ZETA3) * Q(8));
    set(1, 1, 0, Sym(1));
    set(2, 2, 0, Sym(1));
    set(5, 3, 0, Sym(1));
    set(3, 4, 1, s3 * pi * g3inv * qfrac(2, 3));
    set(4, 4, 0, Sym::pi(2) * g3inv * qfrac(2, 3));
    set(5, 4, -1, s3 * Sym::pi(3) * g3inv * qfrac(2, 9));
    set(3, 5, 0, s3 * pi * g23inv * qfrac(2, 3));
    set(4, 5, -1, Sym::pi(2) * g23inv * qfrac(-2, 3));
    set(5, 5, -2, s3 * Sym::pi(3) * g23inv * qfrac(2, 9));
  } else {
    set(0, 0, 0, Sym(1));
    set(1, 0, -1, pi * I);
    set(2, 0, -1, pi * I * qfrac(-1, 2));
    set(3, 0, -2, Sym::pi(2) * qfrac(1, 4));
    set(2, 1, 0, Sym(qfrac(1, 2)));
    set(3, 2, 0, Sym(qfrac(1, 2)));
    set(1, 3, 0, I);
    set(2, 3, 0, I * qfrac(-1, 2));
    set(3, 3, -1, pi * qfrac(1, 2));
  }
  return U;
}

// ---------------------------------------------------------------- derivation from the continued series

struct DerivedU {
  SympMap ubar;                 // U-bar (no sign flip)
  std::vector<Lz<Sym>> c;       // fy1^0 fy2^l coefficients of the continued series
  std::vector<Lz<Sym>> a;       // t^l coefficients of the orbifold I-function
};

// U-bar(1_{l/r}) = c_l / alpha_l where a_l = alpha_l 1_{l/r}, and U-bar(p^k) = (p2/r)^k c_0.
inline DerivedU derive_u(Pair pair, int order) {
  const auto& F = toric_model(resolution_of(pair));
  const auto& P = toric_model(orbifold_of(pair));
  int r = chart_index(F.id);
  if (order < r - 1) throw std::invalid_argument("derive_u: order too small");
  auto C = continued_series<Sym>(F, order);
  auto I = i_function<Sym>(P, Q(order) / Q(r) + 0);
  DerivedU d;
  for (int l = 0; l <= order; ++l) {
    d.c.push_back(C.coeff({0, l}));
    d.a.push_back(I.coeff({l}));
  }
  const GradedAlgebra* src = P.alg.get();
  const GradedAlgebra* dst = F.alg.get();
  SympMap U;
  U.src = src;
  U.dst = dst;
  U.flipped = false;
  U.label = "derived";
  U.cols.assign(src->size(), Lz<Sym>(dst));
  auto p2r = lz_var<Sym>(dst, scale(dst->elem("p2"), qfrac(1, r)), 0);
  auto p = lift<Sym>(src->elem("p"));
  Elem<Sym> pk = lift<Sym>(src->elem("1"));
  Lz<Sym> img = d.c[0];
  for (int k = 0; k <= src->dim_c; ++k) {
    // untwisted basis elements are the powers of p
    for (size_t i = 0; i < src->size(); ++i)
      if (basis_vec<Sym>(*src, i) == pk) U.cols[i] = img;
    pk = mul(*src, pk, p);
    img = p2r * img;
  }
  for (int l = 1; l < r; ++l) {
    auto& al = d.a[l];
    if (al.c.size() != 1) throw math_error("derive_u: twisted coefficient is not a single z power");
    auto [zp, e] = *al.c.begin();
    size_t idx = src->index("1_" + qstr(Q(l) / Q(r)));
    for (size_t i = 0; i < e.size(); ++i)
      if (i != idx && !e[i].zero()) throw math_error("derive_u: twisted coefficient leaves its sector");
    U.cols[idx] = d.c[l].shift(-zp) * e[idx].inv();
  }
  d.ubar = U;
  return d;
}

inline SympMap u_matrix_derived(Pair pair) { return derive_u(pair, chart_index(resolution_of(pair)) - 1).ubar.flip(); }

// ---------------------------------------------------------------- checks

struct EntryDiff {
  size_t row, col;
  Laurent diff;
};

inline std::vector<EntryDiff> compare_maps(const SympMap& a, const SympMap& b) {
  std::vector<EntryDiff> out;
  for (size_t i = 0; i < a.cols.size(); ++i)
    for (size_t j = 0; j < a.dst->size(); ++j) {
      Laurent d = a.entry(j, i);
      for (auto& [k, v] : b.entry(j, i)) laurent_add(d, k, -v);
      if (!d.empty()) out.push_back({j, i, d});
    }
  return out;
}

// <U e_i (-z), U e_j (z)>_Y - <e_i, e_j>_X as Laurent polynomials; all zero when U is symplectic.
inline std::vector<EntryDiff> check_symplectic(const SympMap& U) {
  std::vector<EntryDiff> out;
  size_t n = U.src->size();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      auto l = lz_pair(*U.dst, U.cols[i].flip(), U.cols[j]);
      Laurent d(l.begin(), l.end());
      laurent_add(d, 0, -Sym(U.src->gram[i][j]));
      if (!d.empty()) out.push_back({i, j, d});
    }
  return out;
}

struct GradingReport {
  std::vector<std::string> inhomogeneous;  // entries breaking deg(entry) + deg(target) = deg(source)
  std::vector<EntryDiff> c1_residual;      // U (c1_X .) - (c1_Y .) U
  bool ok() const { return inhomogeneous.empty() && c1_residual.empty(); }
};

inline Lz<Sym> cup(const GradedAlgebra* A, const std::vector<Q>& cls, const Lz<Sym>& x) {
  return lz_var<Sym>(A, cls, 0) * x;
}

// Grading operator 2 z d/dz + Gr_0 - 2 c1 / z: the Gr_0 part is entry homogeneity, the c1 part is
// equivariance of cup product with the first Chern classes.
inline GradingReport check_grading(const SympMap& U) {
  GradingReport rep;
  for (size_t i = 0; i < U.cols.size(); ++i)
    for (auto& [k, e] : U.cols[i].c)
      for (size_t j = 0; j < e.size(); ++j)
        if (!e[j].zero() && U.dst->deg[j] + 2 * k != U.src->deg[i])
          rep.inhomogeneous.push_back("(" + std::to_string(j + 1) + "," + std::to_string(i + 1) + ") z^" +
                                      std::to_string(k));
  for (size_t i = 0; i < U.cols.size(); ++i) {
    auto lhs = U.apply(cup(U.src, U.src->c1, Lz<Sym>::elem(U.src, basis_vec<Sym>(*U.src, i))));
    auto d = lhs - cup(U.dst, U.dst->c1, U.cols[i]);
    for (size_t j = 0; j < U.dst->size(); ++j) {
      Laurent l;
      for (auto& [k, e] : d.c) laurent_add(l, k, e[j]);
      if (!l.empty()) rep.c1_residual.push_back({j, i, l});
    }
  }
  return rep;
}

struct OppositeReport {
  bool preserved = true;
  std::vector<std::pair<std::string, std::string>> witnesses;  // entry position, value
};

inline OppositeReport check_opposite(const SympMap& U) {
  OppositeReport rep;
  for (size_t i = 0; i < U.cols.size(); ++i)
    for (auto& [k, e] : U.cols[i].c) {
      if (k <= 0) continue;
      for (size_t j = 0; j < e.size(); ++j)
        if (!e[j].zero()) {
          rep.preserved = false;
          rep.witnesses.push_back({"(" + std::to_string(j + 1) + "," + std::to_string(i + 1) + ")",
                                   "(" + e[j].str() + ")*z^" + std::to_string(k)});
        }
    }
  return rep;
}

// U (r p .) - (p2 .) U, with r = 3 or 2.
inline std::vector<EntryDiff> check_monodromy_equivariance(const SympMap& U) {
  std::vector<EntryDiff> out;
  int r = U.dst->dim_c == 3 ? 3 : 2;
  auto rp = scale(U.src->gens[0], Q(r));
  auto p2 = U.dst->elem("p2");
  for (size_t i = 0; i < U.cols.size(); ++i) {
    auto d = U.apply(cup(U.src, rp, Lz<Sym>::elem(U.src, basis_vec<Sym>(*U.src, i)))) - cup(U.dst, p2, U.cols[i]);
    for (size_t j = 0; j < U.dst->size(); ++j) {
      Laurent l;
      for (auto& [k, e] : d.c) laurent_add(l, k, e[j]);
      if (!l.empty()) out.push_back({j, i, l});
    }
  }
  return out;
}

struct ContinuationReport {
  int order = 0;
  std::vector<int> exact_mismatch;  // fy2 powers where U-bar(a_l) != c_l symbolically
  Real numeric_norm = 0;            // max |U-bar(a_l) - c_l| after numeric evaluation
  Real float_norm = 0;              // same, with both series built in floating point from the start
};

inline Lz<Cplx> lz_eval(const Lz<Sym>& x, const AtomValues& av) {
  Lz<Cplx> r(x.A);
  for (auto& [k, e] : x.c) {
    Elem<Cplx> v;
    for (auto& s : e) v.push_back(eval(s, av));
    r.c[k] = v;
  }
  r.clean();
  return r;
}

// U-bar applied to the t^l coefficients of z^{-1} I_X equals the fy1 = 0 part of the continued
// series, for l = 0..order. U-bar is built from the closed-form U by undoing the sign flip.
inline ContinuationReport check_continuation_identity(Pair pair, int order, const SympMap& U) {
  ContinuationReport rep;
  rep.order = order;
  auto d = derive_u(pair, order);
  SympMap ubar = U.flipped ? U.flip() : U;
  AtomValues av(Real(1));
  for (int l = 0; l <= order; ++l) {
    auto lhs = ubar.apply(d.a[l]);
    auto diff = lhs - d.c[l];
    if (!diff.zero()) rep.exact_mismatch.push_back(l);
    for (auto& [k, e] : diff.c)
      for (auto& x : e) rep.numeric_norm = std::max(rep.numeric_norm, cabs(eval(x, av)));
  }
  const auto& F = toric_model(resolution_of(pair));
  const auto& P = toric_model(orbifold_of(pair));
  int r = chart_index(F.id);
  auto Cn = continued_series<Cplx>(F, order);
  auto In = i_function<Cplx>(P, Q(order) / Q(r));
  std::vector<Lz<Cplx>> cols;
  for (auto& c : ubar.cols) cols.push_back(lz_eval(c, av));
  for (int l = 0; l <= order; ++l) {
    Lz<Cplx> lhs(ubar.dst);
    for (auto& [k, e] : In.coeff({l}).c)
      for (size_t i = 0; i < e.size(); ++i)
        if (!Field<Cplx>::zero(e[i])) lhs += cols[i].shift(k) * e[i];
    auto diff = lhs - Cn.coeff({0, l});
    for (auto& [k, e] : diff.c)
      for (auto& x : e) rep.float_norm = std::max(rep.float_norm, cabs(x));
  }
  return rep;
}

}  // namespace crc
