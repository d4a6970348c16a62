#pragma once
// Laurent-in-z algebra-valued coefficients and truncated series in fractional
// powers of base coordinates (t_i^{r_i} = y_i), with an optional y^{P/z} prefactor.

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "coh.hpp"

namespace crc {

// Laurent polynomial in z with coefficients in a graded algebra.
template <class S>
struct Lz {
  const GradedAlgebra* A = nullptr;
  std::map<int, Elem<S>> c;

  Lz() = default;
  explicit Lz(const GradedAlgebra* a) : A(a) {}

  static Lz elem(const GradedAlgebra* a, const Elem<S>& e, int zpow = 0) {
    Lz r(a);
    if (!is_zero(e)) r.c[zpow] = e;
    return r;
  }
  static Lz scalar(const GradedAlgebra* a, const S& s, int zpow = 0) {
    return elem(a, scale(lift<S>(a->elem("1")), s), zpow);
  }
  static Lz one(const GradedAlgebra* a) { return scalar(a, S(1)); }

  bool zero() const { return c.empty(); }
  void clean() {
    for (auto it = c.begin(); it != c.end();) it = is_zero(it->second) ? c.erase(it) : std::next(it);
  }
  Elem<S> at(int k) const {
    auto it = c.find(k);
    return it == c.end() ? Elem<S>(A->size(), S(0)) : it->second;
  }
  int min_pow() const { return c.empty() ? 0 : c.begin()->first; }
  int max_pow() const { return c.empty() ? 0 : c.rbegin()->first; }

  Lz& operator+=(const Lz& o) {
    if (!A) A = o.A;
    for (auto& [k, e] : o.c) {
      auto it = c.find(k);
      if (it == c.end()) c.emplace(k, e);
      else it->second = add(it->second, e);
    }
    clean();
    return *this;
  }
  Lz operator+(const Lz& o) const {
    Lz r = *this;
    return r += o;
  }
  Lz operator-() const {
    Lz r = *this;
    for (auto& [k, e] : r.c) e = scale(e, S(-1));
    return r;
  }
  Lz operator-(const Lz& o) const { return *this + (-o); }
  Lz& operator-=(const Lz& o) { return *this += -o; }
  Lz operator*(const Lz& o) const {
    Lz r(A ? A : o.A);
    for (auto& [i, a] : c)
      for (auto& [j, b] : o.c) {
        auto p = mul(*r.A, a, b);
        auto it = r.c.find(i + j);
        if (it == r.c.end()) r.c.emplace(i + j, p);
        else it->second = add(it->second, p);
      }
    r.clean();
    return r;
  }
  Lz operator*(const S& s) const {
    Lz r(A);
    if (Field<S>::zero(s)) return r;
    for (auto& [k, e] : c) r.c[k] = scale(e, s);
    r.clean();
    return r;
  }
  Lz shift(int k) const {
    Lz r(A);
    for (auto& [j, e] : c) r.c[j + k] = e;
    return r;
  }
  // z -> -z
  Lz flip() const {
    Lz r = *this;
    for (auto& [k, e] : r.c)
      if (k % 2) e = scale(e, S(-1));
    return r;
  }
  bool operator==(const Lz& o) const { return c == o.c; }
  std::string str() const {
    if (c.empty()) return "0";
    std::string out;
    for (auto& [k, e] : c) {
      if (!out.empty()) out += " + ";
      out += "z^" + std::to_string(k) + "*[" + elem_str(*A, e) + "]";
    }
    return out;
  }
};

template <class S>
Lz<S> lz_var(const GradedAlgebra* A, const std::vector<Q>& e, int zpow) {
  return Lz<S>::elem(A, lift<S>(e), zpow);
}

// 1 / (D + m z) for nilpotent D and m != 0, exact.
template <class S>
Lz<S> inv_linear(const GradedAlgebra* A, const std::vector<Q>& D, const Q& m) {
  if (m == 0) throw math_error("inv_linear: zero shift");
  Lz<S> x = lz_var<S>(A, D, -1) * Field<S>::from(-1 / m);  // -D/(m z)
  Lz<S> sum = Lz<S>::one(A), pw = Lz<S>::one(A);
  while (true) {
    pw = pw * x;
    if (pw.zero()) break;
    sum += pw;
  }
  return sum.shift(-1) * Field<S>::from(1 / m);
}

template <class S>
Lz<S> linear(const GradedAlgebra* A, const std::vector<Q>& D, const Q& m) {
  return lz_var<S>(A, D, 0) + Lz<S>::scalar(A, Field<S>::from(m), 1);
}

// ---------------------------------------------------------------- Taylor extras

template <class S>
Taylor<S> tadd(const Taylor<S>& a, const Taylor<S>& b) {
  Taylor<S> r(std::max(a.size(), b.size()), S(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

template <class S>
Taylor<S> tscale(Taylor<S> a, const S& c) {
  for (auto& x : a) x = x * c;
  return a;
}

// f(g(x)) with g(0) = 0
template <class S>
Taylor<S> tcompose(const Taylor<S>& f, const Taylor<S>& g, size_t N) {
  if (!g.empty() && !Field<S>::zero(g[0])) throw math_error("tcompose: inner series has a constant term");
  Taylor<S> r(N, S(0)), pw(N, S(0));
  pw[0] = S(1);
  for (size_t k = 0; k < f.size() && k < N; ++k) {
    if (k) pw = tmul(pw, g, N);
    for (size_t i = 0; i < N; ++i) r[i] += f[k] * pw[i];
  }
  return r;
}

// log f with f(0) = 1
template <class S>
Taylor<S> tlog(const Taylor<S>& f, size_t N) {
  if (f.empty() || f[0] != S(1)) throw math_error("tlog: constant term must be 1");
  Taylor<S> df(N, S(0));
  for (size_t k = 1; k < f.size() && k <= N; ++k) df[k - 1] = f[k] * Field<S>::from(Q(long(k)));
  auto q = tdiv(df, f, N);
  Taylor<S> r(N, S(0));
  for (size_t k = 1; k < N; ++k) r[k] = q[k - 1] * Field<S>::from(Q(1) / Q(long(k)));
  return r;
}

// Compositional inverse of f = x + O(x^2).
template <class S>
Taylor<S> trevert(const Taylor<S>& f, size_t N) {
  if (f.size() < 2 || !Field<S>::zero(f[0])) throw math_error("trevert: series must vanish at 0");
  if (f[1] != S(1)) throw math_error("trevert: leading coefficient must be 1");
  // Newton-free fixed point: g = x - (f(g) - g)
  Taylor<S> g(N, S(0));
  if (N > 1) g[1] = S(1);
  for (size_t it = 2; it < N; ++it) {
    auto fg = tcompose(f, g, N);
    // fg = x + e_it x^it + ...; correct coefficient it
    g[it] -= fg[it];
  }
  return g;
}

// ---------------------------------------------------------------- CohSeries

template <class S>
struct CohSeries {
  const GradedAlgebra* A = nullptr;
  std::vector<std::string> vars;
  std::vector<int> ram;                  // t_i^{ram_i} = y_i
  std::vector<std::vector<Q>> pref;      // class P_i of y_i^{P_i/z}; empty when no prefactor
  Q order = 10;                          // keep sum_i k_i / ram_i <= order
  std::map<std::vector<int>, Lz<S>> terms;

  CohSeries() = default;
  CohSeries(const GradedAlgebra* a, std::vector<std::string> v, std::vector<int> r, Q ord)
      : A(a), vars(std::move(v)), ram(std::move(r)), order(std::move(ord)) {}

  size_t nvars() const { return vars.size(); }
  bool has_prefactor() const { return !pref.empty(); }
  Q degree(const std::vector<int>& k) const {
    Q d = 0;
    for (size_t i = 0; i < k.size(); ++i) d += Q(k[i]) / Q(ram[i]);
    return d;
  }
  bool in_range(const std::vector<int>& k) const {
    for (int x : k)
      if (x < 0) return false;
    return degree(k) <= order;
  }
  void add_term(const std::vector<int>& k, const Lz<S>& v) {
    if (!in_range(k) || v.zero()) return;
    auto it = terms.find(k);
    if (it == terms.end()) terms.emplace(k, v);
    else {
      it->second += v;
      if (it->second.zero()) terms.erase(it);
    }
  }
  Lz<S> coeff(const std::vector<int>& k) const {
    auto it = terms.find(k);
    return it == terms.end() ? Lz<S>(A) : it->second;
  }
  bool zero() const { return terms.empty(); }
  CohSeries empty_like() const {
    CohSeries r(A, vars, ram, order);
    r.pref = pref;
    return r;
  }
  CohSeries operator+(const CohSeries& o) const {
    check_compatible(o);
    CohSeries r = *this;
    for (auto& [k, v] : o.terms) r.add_term(k, v);
    return r;
  }
  CohSeries operator-(const CohSeries& o) const {
    check_compatible(o);
    CohSeries r = *this;
    for (auto& [k, v] : o.terms) r.add_term(k, -v);
    return r;
  }
  void check_compatible(const CohSeries& o) const {
    if (A != o.A || vars != o.vars || ram != o.ram) throw std::invalid_argument("series: incompatible variables");
  }
};

template <class S>
CohSeries<S> series_mul(const CohSeries<S>& a, const CohSeries<S>& b) {
  a.check_compatible(b);
  if (a.has_prefactor() && b.has_prefactor()) throw std::invalid_argument("series_mul: both factors carry a prefactor");
  CohSeries<S> r(a.A, a.vars, a.ram, std::min(a.order, b.order));
  r.pref = a.has_prefactor() ? a.pref : b.pref;
  for (auto& [ka, va] : a.terms)
    for (auto& [kb, vb] : b.terms) {
      std::vector<int> k(ka.size());
      for (size_t i = 0; i < k.size(); ++i) k[i] = ka[i] + kb[i];
      if (!r.in_range(k)) continue;
      r.add_term(k, va * vb);
    }
  return r;
}

// D_i = z y_i d/dy_i, including the prefactor rule D_i y^{P/z} = y^{P/z} (P_i + D_i).
template <class S>
CohSeries<S> d_log(const CohSeries<S>& s, size_t i) {
  if (i >= s.nvars()) throw std::invalid_argument("d_log: bad variable index");
  CohSeries<S> r = s.empty_like();
  for (auto& [k, v] : s.terms) {
    Lz<S> out = v.shift(1) * Field<S>::from(Q(k[i]) / Q(s.ram[i]));
    if (s.has_prefactor() && !s.pref[i].empty()) out += lz_var<S>(s.A, s.pref[i], 0) * v;
    r.add_term(k, out);
  }
  return r;
}

template <class S>
Lz<S> residue_coeff(const Lz<S>& v, int k = -1) {
  return Lz<S>::elem(v.A, v.at(k), 0);
}

// Coefficient of z^{-1}.
template <class S>
Elem<S> residue_z(const Lz<S>& v) {
  return v.at(-1);
}

template <class S>
std::string series_str(const CohSeries<S>& s) {
  std::string out;
  for (auto& [k, v] : s.terms) {
    out += "[";
    for (size_t i = 0; i < k.size(); ++i) out += (i ? "," : "") + qstr(Q(k[i]) / Q(s.ram[i]));
    out += "] " + v.str() + "\n";
  }
  return out;
}

// ---------------------------------------------------------------- JSON (exact rationals)

inline nlohmann::json series_to_json(const CohSeries<Q>& s) {
  using nlohmann::json;
  json j;
  j["algebra"] = s.A->name;
  j["vars"] = json::array();
  for (size_t i = 0; i < s.nvars(); ++i) j["vars"].push_back({{"name", s.vars[i]}, {"ram", s.ram[i]}});
  j["prefactor"] = s.has_prefactor();
  if (s.has_prefactor()) {
    json p = json::array();
    for (auto& e : s.pref) {
      json row = json::array();
      for (auto& x : e) row.push_back(qstr(x));
      p.push_back(row);
    }
    j["prefactor_classes"] = p;
  }
  j["order"] = qstr(s.order);
  j["terms"] = json::array();
  for (auto& [k, v] : s.terms) {
    json t;
    t["exp"] = json::array();
    for (size_t i = 0; i < k.size(); ++i) t["exp"].push_back(qstr(Q(k[i]) / Q(s.ram[i])));
    t["z"] = json::array();
    for (auto& [zp, e] : v.c) {
      json cls = json::array();
      for (size_t b = 0; b < e.size(); ++b)
        if (e[b] != 0) cls.push_back({{"class", s.A->labels[b]}, {"val", qstr(e[b])}});
      t["z"].push_back({zp, cls});
    }
    j["terms"].push_back(t);
  }
  return j;
}

inline CohSeries<Q> series_from_json(const nlohmann::json& j, const GradedAlgebra* A) {
  if (j.at("algebra").get<std::string>() != A->name) throw std::invalid_argument("series_from_json: algebra mismatch");
  CohSeries<Q> s;
  s.A = A;
  for (auto& v : j.at("vars")) {
    s.vars.push_back(v.at("name").get<std::string>());
    s.ram.push_back(v.at("ram").get<int>());
  }
  s.order = parse_q(j.at("order").get<std::string>());
  if (j.at("prefactor").get<bool>())
    for (auto& row : j.at("prefactor_classes")) {
      std::vector<Q> e;
      for (auto& x : row) e.push_back(parse_q(x.get<std::string>()));
      s.pref.push_back(e);
    }
  for (auto& t : j.at("terms")) {
    std::vector<int> k;
    size_t i = 0;
    for (auto& e : t.at("exp")) {
      Q v = parse_q(e.get<std::string>()) * s.ram[i++];
      if (denominator(v) != 1) throw std::invalid_argument("series_from_json: exponent not on the ramified lattice");
      k.push_back(static_cast<int>(numerator(v)));
    }
    Lz<Q> v(A);
    for (auto& zt : t.at("z")) {
      Elem<Q> e(A->size(), Q(0));
      for (auto& c : zt.at(1)) e[A->index(c.at("class").get<std::string>())] = parse_q(c.at("val").get<std::string>());
      v.c[zt.at(0).get<int>()] = e;
    }
    s.terms[k] = v;
  }
  return s;
}

}  // namespace crc
