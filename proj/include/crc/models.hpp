#pragma once
// Toric descriptions of the four models, their I-functions and Picard-Fuchs systems.

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "series.hpp"

namespace crc {

struct ToricModel {
  ModelId id;
  AlgebraPtr alg;
  std::vector<std::string> vars;            // base variables
  std::vector<int> ram;                     // d_a in (1/ram_a) Z
  std::vector<std::vector<long>> charges;   // rows: base variables, columns: torus coordinates
  std::vector<std::vector<Q>> divisors;     // D_j = sum_a charges[a][j] * gens[a]
  std::map<Q, std::string> sectors;         // fractional part -> named twisted class
  std::vector<std::vector<long>> pf_charges;  // charge vectors l of the box operators

  size_t nvars() const { return vars.size(); }
  size_t ncoords() const { return charges.empty() ? 0 : charges[0].size(); }
};

inline void finish_divisors(ToricModel& m) {
  const auto& A = *m.alg;
  if (A.gens.size() != m.nvars()) throw std::invalid_argument("model: generator count does not match variables");
  m.divisors.assign(m.ncoords(), std::vector<Q>(A.size(), Q(0)));
  for (size_t j = 0; j < m.ncoords(); ++j)
    for (size_t a = 0; a < m.nvars(); ++a)
      for (size_t b = 0; b < A.size(); ++b) m.divisors[j][b] += Q(m.charges[a][j]) * A.gens[a][b];
}

inline ToricModel model_from_json(const nlohmann::json& j) {
  ToricModel m;
  m.id = parse_model(j.at("algebra").get<std::string>());
  m.alg = build_model_algebra(m.id);
  m.vars = j.at("vars").get<std::vector<std::string>>();
  m.ram = j.at("ram").get<std::vector<int>>();
  m.charges = j.at("charges").get<std::vector<std::vector<long>>>();
  m.pf_charges = j.at("pf_charges").get<std::vector<std::vector<long>>>();
  if (j.contains("sectors"))
    for (auto& [k, v] : j.at("sectors").items()) {
      m.sectors[parse_q(k)] = v.get<std::string>();
      m.alg->elem(v.get<std::string>());
    }
  for (auto& row : m.charges)
    if (row.size() != m.charges[0].size()) throw std::invalid_argument("model: ragged charge matrix");
  if (m.ram.size() != m.vars.size() || m.charges.size() != m.vars.size())
    throw std::invalid_argument("model: variable data inconsistent");
  finish_divisors(m);
  return m;
}

inline const ToricModel& toric_model(ModelId id) {
  static std::map<ModelId, ToricModel> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(id);
  if (it != cache.end()) return it->second;
  nlohmann::json j;
  switch (id) {
    case ModelId::F3:
      j = {{"algebra", "F3"}, {"vars", {"y1", "y2"}}, {"ram", {1, 1}},
           {"charges", {{1, 1, 1, -3, 0}, {0, 0, 0, 1, 1}}},
           {"pf_charges", {{0, 1}, {1, 3}, {1, 2}, {1, 1}, {1, 0}}}};
      break;
    case ModelId::F2:
      j = {{"algebra", "F2"}, {"vars", {"y1", "y2"}}, {"ram", {1, 1}},
           {"charges", {{1, 1, -2, 0}, {0, 0, 1, 1}}},
           {"pf_charges", {{0, 1}, {1, 2}, {1, 1}, {1, 0}}}};
      break;
    case ModelId::P1113:
      j = {{"algebra", "P1113"}, {"vars", {"y"}}, {"ram", {3}}, {"charges", {{1, 1, 1, 3}}},
           {"pf_charges", {{1}}}, {"sectors", {{"1/3", "1_1/3"}, {"2/3", "1_2/3"}}}};
      break;
    case ModelId::P112:
      j = {{"algebra", "P112"}, {"vars", {"y"}}, {"ram", {2}}, {"charges", {{1, 1, 2}}},
           {"pf_charges", {{1}}}, {"sectors", {{"1/2", "1_1/2"}}}};
      break;
  }
  return cache[id] = model_from_json(j);
}

inline Q frac_part(const Q& x) {
  Zint n = numerator(x), d = denominator(x);
  Zint r = n % d;
  if (r < 0) r += d;
  return Q(r) / Q(d);
}

// Coefficient of y^d in z^{-1} I (without the y^{p/z} prefactor).
template <class S>
Lz<S> i_coefficient(const ToricModel& m, const std::vector<Q>& d) {
  const GradedAlgebra* A = m.alg.get();
  Lz<S> acc = Lz<S>::one(A);
  Q sector = -1;
  for (size_t j = 0; j < m.ncoords(); ++j) {
    Q n = 0;
    for (size_t a = 0; a < m.nvars(); ++a) n += Q(m.charges[a][j]) * d[a];
    Q f = frac_part(n);
    if (f != 0) {
      if (sector >= 0 && sector != f) throw math_error("i_coefficient: inconsistent sector data");
      sector = f;
    }
    const auto& D = m.divisors[j];
    if (n >= 0) {
      for (Q b = f == 0 ? Q(1) : f; b <= n; b += 1) acc = acc * inv_linear<S>(A, D, b);
    } else {
      for (Q b = n + 1; b <= 0; b += 1) acc = acc * linear<S>(A, D, b);
    }
  }
  if (sector > 0) {
    // In the weighted models every coordinate with fractional n lives on the same twisted sector.
    Q dfrac = 0;
    for (size_t a = 0; a < m.nvars(); ++a) dfrac += d[a];
    auto it = m.sectors.find(frac_part(dfrac));
    if (it == m.sectors.end()) throw math_error("i_coefficient: no sector class for fractional degree");
    acc = acc * lz_var<S>(A, A->elem(it->second), 0);
  }
  return acc;
}

// z^{-1} I as a series in t_a = y_a^{1/ram_a} under the y^{p/z} prefactor.
template <class S>
CohSeries<S> i_function(const ToricModel& m, const Q& order) {
  if (order > 40) throw std::invalid_argument("i_function: order exceeds configured maximum 40");
  CohSeries<S> s(m.alg.get(), m.vars, m.ram, order);
  s.pref = m.alg->gens;
  std::vector<int> k(m.nvars(), 0);
  std::function<void(size_t)> rec = [&](size_t a) {
    if (a == m.nvars()) {
      if (!s.in_range(k)) return;
      std::vector<Q> d(m.nvars());
      for (size_t i = 0; i < d.size(); ++i) d[i] = Q(k[i]) / Q(m.ram[i]);
      s.add_term(k, i_coefficient<S>(m, d));
      return;
    }
    for (k[a] = 0; s.in_range(k); ++k[a]) rec(a + 1);
    k[a] = 0;
  };
  rec(0);
  return s;
}

// ---------------------------------------------------------------- Picard-Fuchs operators

struct PFFactor {
  std::vector<Q> dcoef;  // coefficient of D_i
  Q zcoef;
};

struct PFTerm {
  Q coef = 1;
  std::vector<long> yexp;  // monomial y^l on the left
  std::vector<PFFactor> factors;
};

struct PFOperator {
  std::vector<PFTerm> terms;
  std::string str(const std::vector<std::string>& vars) const;
  // Canonical form: y-exponent -> polynomial in (D_1..D_n, z) as exponent vector -> coefficient.
  std::map<std::vector<long>, std::map<std::vector<int>, Q>> normal_form() const;
};

inline std::map<std::vector<long>, std::map<std::vector<int>, Q>> PFOperator::normal_form() const {
  std::map<std::vector<long>, std::map<std::vector<int>, Q>> out;
  for (auto& t : terms) {
    size_t n = t.yexp.size();
    std::map<std::vector<int>, Q> poly{{std::vector<int>(n + 1, 0), t.coef}};
    for (auto& f : t.factors) {
      std::map<std::vector<int>, Q> next;
      for (auto& [e, c] : poly) {
        for (size_t i = 0; i <= n; ++i) {
          Q fc = i < n ? f.dcoef[i] : f.zcoef;
          if (fc == 0) continue;
          auto e2 = e;
          ++e2[i];
          next[e2] += c * fc;
        }
      }
      poly.clear();
      for (auto& [e, c] : next)
        if (c != 0) poly[e] = c;
    }
    auto& dst = out[t.yexp];
    for (auto& [e, c] : poly) {
      dst[e] += c;
      if (dst[e] == 0) dst.erase(e);
    }
    if (dst.empty()) out.erase(t.yexp);
  }
  return out;
}

inline std::string PFOperator::str(const std::vector<std::string>& vars) const {
  std::string out;
  for (auto& t : terms) {
    std::string s = t.coef == 1 ? "" : t.coef == -1 ? "-" : qstr(t.coef) + "*";
    for (size_t i = 0; i < t.yexp.size(); ++i)
      if (t.yexp[i]) s += vars[i] + (t.yexp[i] == 1 ? "" : "^" + std::to_string(t.yexp[i])) + "*";
    for (auto& f : t.factors) {
      std::string g;
      for (size_t i = 0; i < f.dcoef.size(); ++i) {
        if (f.dcoef[i] == 0) continue;
        std::string c = f.dcoef[i] == 1 ? "" : f.dcoef[i] == -1 ? "-" : qstr(f.dcoef[i]);
        g += (g.empty() || c.rfind("-", 0) == 0 ? "" : "+") + c + "D" + std::to_string(i + 1);
      }
      if (f.zcoef != 0) g += (f.zcoef > 0 ? "+" : "") + qstr(f.zcoef) + "z";
      s += "(" + g + ")";
    }
    if (t.factors.empty() && (s.empty() || s.back() == '*')) {
      if (!s.empty()) s.pop_back();
      if (s.empty() || s == "-") s += "1";
    }
    out += (out.empty() ? "" : (s[0] == '-' ? " " : " + ")) + s;
  }
  return out;
}

// Box operator of the GKZ system for the charge vector l.
inline PFOperator box_operator(const ToricModel& m, const std::vector<long>& l) {
  size_t n = m.nvars();
  if (l.size() != n) throw std::invalid_argument("box_operator: wrong charge vector length");
  PFTerm pos, neg;
  pos.yexp.assign(n, 0);
  neg.yexp = l;
  neg.coef = -1;
  for (long x : l)
    if (x < 0) throw std::invalid_argument("box_operator: only effective charge vectors are supported");
  for (size_t j = 0; j < m.ncoords(); ++j) {
    long nj = 0;
    for (size_t a = 0; a < n; ++a) nj += m.charges[a][j] * l[a];
    std::vector<Q> dj(n);
    for (size_t a = 0; a < n; ++a) dj[a] = Q(m.charges[a][j]);
    auto& target = nj > 0 ? pos : neg;
    for (long k = 0; k < std::labs(nj); ++k) target.factors.push_back({dj, Q(-k)});
  }
  return PFOperator{{pos, neg}};
}

inline std::vector<PFOperator> pf_operators(const ToricModel& m) {
  std::vector<PFOperator> out;
  for (auto& l : m.pf_charges) out.push_back(box_operator(m, l));
  return out;
}

// The operator lists written out by hand, used to cross-check the box builder.
inline std::vector<PFOperator> pf_operators_reference(ModelId id) {
  auto F = [](std::vector<long> d, long zc) {
    std::vector<Q> dq(d.begin(), d.end());
    return PFFactor{dq, Q(zc)};
  };
  auto T = [](long c, std::vector<long> y, std::vector<PFFactor> f) { return PFTerm{Q(c), std::move(y), std::move(f)}; };
  std::vector<PFOperator> ops;
  switch (id) {
    case ModelId::F3: {
      auto D1 = F({1, 0}, 0), D2 = F({0, 1}, 0);
      auto P = [&](long k) { return F({-3, 1}, -k); };  // D2 - 3D1 - kz
      auto D2k = [&](long k) { return F({0, 1}, -k); };
      ops.push_back({{T(1, {0, 0}, {D2, P(0)}), T(-1, {0, 1}, {})}});
      ops.push_back({{T(1, {0, 0}, {D1, D1, D1, D2, D2k(1), D2k(2)}), T(-1, {1, 3}, {})}});
      ops.push_back({{T(1, {0, 0}, {D1, D1, D1, D2, D2k(1)}), T(-1, {1, 2}, {P(0)})}});
      ops.push_back({{T(1, {0, 0}, {D1, D1, D1, D2}), T(-1, {1, 1}, {P(0), P(1)})}});
      ops.push_back({{T(1, {0, 0}, {D1, D1, D1}), T(-1, {1, 0}, {P(0), P(1), P(2)})}});
      break;
    }
    case ModelId::F2: {
      auto D1 = F({1, 0}, 0), D2 = F({0, 1}, 0);
      auto P = [&](long k) { return F({-2, 1}, -k); };
      ops.push_back({{T(1, {0, 0}, {D2, P(0)}), T(-1, {0, 1}, {})}});
      ops.push_back({{T(1, {0, 0}, {D1, D1, D2, F({0, 1}, -1)}), T(-1, {1, 2}, {})}});
      ops.push_back({{T(1, {0, 0}, {D1, D1, D2}), T(-1, {1, 1}, {P(0)})}});
      ops.push_back({{T(1, {0, 0}, {D1, D1}), T(-1, {1, 0}, {P(0), P(1)})}});
      break;
    }
    case ModelId::P1113: {
      auto D = F({1}, 0);
      ops.push_back({{T(1, {0}, {D, D, D, F({3}, 0), F({3}, -1), F({3}, -2)}), T(-1, {1}, {})}});
      break;
    }
    case ModelId::P112: {
      auto D = F({1}, 0);
      ops.push_back({{T(1, {0}, {D, D, F({2}, 0), F({2}, -1)}), T(-1, {1}, {})}});
      break;
    }
  }
  return ops;
}

template <class S>
CohSeries<S> apply_operator(const PFOperator& op, const CohSeries<S>& f) {
  CohSeries<S> total = f.empty_like();
  for (auto& t : op.terms) {
    CohSeries<S> cur = f;
    // rightmost factor acts first; D's commute so the order is immaterial
    for (auto it = t.factors.rbegin(); it != t.factors.rend(); ++it) {
      CohSeries<S> next = cur.empty_like();
      for (size_t i = 0; i < it->dcoef.size(); ++i) {
        if (it->dcoef[i] == 0) continue;
        auto di = d_log(cur, i);
        for (auto& [k, v] : di.terms) next.add_term(k, v * Field<S>::from(it->dcoef[i]));
      }
      if (it->zcoef != 0)
        for (auto& [k, v] : cur.terms) next.add_term(k, v.shift(1) * Field<S>::from(it->zcoef));
      cur = next;
    }
    for (auto& [k, v] : cur.terms) {
      std::vector<int> k2 = k;
      for (size_t i = 0; i < k2.size(); ++i) k2[i] += static_cast<int>(t.yexp[i] * f.ram[i]);
      total.add_term(k2, v * Field<S>::from(t.coef));
    }
  }
  return total;
}

// Residuals of each operator applied to the series; all zero for the I-function.
template <class S>
std::vector<CohSeries<S>> pf_check(const std::vector<PFOperator>& ops, const CohSeries<S>& f) {
  std::vector<CohSeries<S>> out;
  for (auto& op : ops) out.push_back(apply_operator(op, f));
  return out;
}

// One-point descendant table for the weighted models, where the mirror map is the identity:
// entry d holds the coefficient of q^d in z^{-1} J.
inline std::map<Q, Lz<Q>> gw_extract_weighted(const ToricModel& m, const Q& order) {
  if (m.nvars() != 1) throw std::invalid_argument("gw_extract_weighted: one-parameter models only");
  auto I = i_function<Q>(m, order);
  std::map<Q, Lz<Q>> out;
  for (auto& [k, v] : I.terms) out[Q(k[0]) / Q(m.ram[0])] = v;
  return out;
}

}  // namespace crc
