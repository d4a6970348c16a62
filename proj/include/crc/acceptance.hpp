#pragma once
// The eleven end-to-end checks, each returning a verdict plus a JSON record of what was measured.

#include <chrono>
#include <cstdio>
#include <functional>

#include "compare.hpp"

namespace crc {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  nlohmann::json data;
  double seconds = 0;
};

inline std::string sci(const Real& x, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", digits, static_cast<double>(x));
  return buf;
}

namespace detail {

template <class F>
CriterionResult timed(int id, std::string title, F&& body, double limit_s = 0) {
  CriterionResult r;
  r.id = id;
  r.title = std::move(title);
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && r.seconds > limit_s) {
    r.pass = false;
    r.detail += " (over the " + std::to_string(int(limit_s)) + " s budget)";
  }
  return r;
}

inline nlohmann::json qvec_json(const Taylor<Q>& t, size_t from, size_t to) {
  auto j = nlohmann::json::array();
  for (size_t k = from; k <= to && k < t.size(); ++k) j.push_back(qstr(t[k]));
  return j;
}

}  // namespace detail

inline CriterionResult criterion_pf(int order = 10) {
  return detail::timed(1, "Picard-Fuchs annihilation", [&](CriterionResult& r) {
    bool ok = true;
    for (auto id : {ModelId::F2, ModelId::F3, ModelId::P112, ModelId::P1113}) {
      auto& m = toric_model(id);
      auto I = i_function<Q>(m, Q(order));
      auto ops = pf_operators(m), ref = pf_operators_reference(id);
      bool same = ops.size() == ref.size();
      for (size_t i = 0; same && i < ops.size(); ++i) same = ops[i].normal_form() == ref[i].normal_form();
      size_t nz = 0;
      for (auto& s : pf_check(ops, I)) nz += s.terms.size();
      r.data[model_name(id)] = {{"residual_terms", nz}, {"generic_equals_reference", same}};
      ok = ok && nz == 0 && same;
    }
    r.pass = ok;
    r.detail = ok ? "all four residuals identically zero at order " + std::to_string(order) : "nonzero residual";
  }, 60);
}

inline CriterionResult criterion_mirror() {
  return detail::timed(2, "mirror maps", [&](CriterionResult& r) {
    auto inv = inverse_mirror_map(mirror_map(toric_model(ModelId::F3), 10));
    std::vector<Q> y1 = {1, 6, 9, 56, -300}, u = {-2, 5, -32, 286, -3038};
    bool ok3 = true;
    for (size_t k = 0; k < 5; ++k) ok3 = ok3 && inv.y1[k + 1] == y1[k] && inv.u[k + 1] == u[k];
    auto f2 = f2_closed_form_check(mirror_map(toric_model(ModelId::F2), 10));
    bool ok2 = f2.q1_match && f2.q2_match && f2.identity_match;
    r.data = {{"F3_y1", detail::qvec_json(inv.y1, 1, 5)}, {"F3_u", detail::qvec_json(inv.u, 1, 5)},
              {"F2_closed_form", ok2}};
    r.pass = ok3 && ok2;
    r.detail = std::string("F3 series ") + (ok3 ? "exact" : "MISMATCH") + ", F2 closed form " + (ok2 ? "exact" : "MISMATCH");
  });
}

inline CriterionResult criterion_u_matrices() {
  return detail::timed(3, "U matrices from Gamma jets", [&](CriterionResult& r) {
    bool ok = true;
    for (auto pr : {Pair::P1113_F3, Pair::P112_F2}) {
      auto d = compare_maps(u_matrix_closed_form(pr), u_matrix_derived(pr));
      r.data[pair_name(pr)] = {{"differing_entries", d.size()}};
      ok = ok && d.empty();
    }
    r.pass = ok;
    r.detail = ok ? "derived matrices equal the closed forms entrywise" : "entries differ";
  });
}

inline CriterionResult criterion_u_properties() {
  return detail::timed(4, "symplectic, grading, monodromy, opposite", [&](CriterionResult& r) {
    bool ok = true;
    for (auto pr : {Pair::P1113_F3, Pair::P112_F2}) {
      auto U = u_matrix_closed_form(pr);
      size_t s = check_symplectic(U).size(), m = check_monodromy_equivariance(U).size();
      bool g = check_grading(U).ok();
      bool opp = check_opposite(U).preserved;
      bool want_opp = pr == Pair::P112_F2;
      r.data[pair_name(pr)] = {{"symplectic_defects", s}, {"grading_ok", g}, {"monodromy_defects", m},
                               {"opposite_preserved", opp}};
      ok = ok && s == 0 && m == 0 && g && opp == want_opp;
    }
    r.pass = ok;
    r.detail = ok ? "exact zeros; opposite subspace not preserved for P1113, preserved for P112" : "defect found";
  });
}

inline CriterionResult criterion_continuation(int order = 6) {
  return detail::timed(5, "continuation identity", [&](CriterionResult& r) {
    auto cr = check_continuation_identity(Pair::P1113_F3, order, u_matrix_closed_form(Pair::P1113_F3));
    r.data = {{"exact_mismatches", cr.exact_mismatch.size()}, {"numeric_norm", sci(cr.numeric_norm)},
              {"float_norm", sci(cr.float_norm)}};
    r.pass = cr.exact_mismatch.empty() && cr.numeric_norm <= Real(1e-20);
    r.detail = "difference norm " + sci(cr.numeric_norm) + " through fy2^" + std::to_string(order);
  }, 120);
}

inline CriterionResult criterion_barnes(const BarnesOptions& opt = {}) {
  return detail::timed(6, "Barnes quadrature", [&](CriterionResult& r) {
    const GradedAlgebra* A = toric_model(ModelId::F3).alg.get();
    Real worst = 0;
    for (int m = 0; m < 3; ++m) {
      auto d = barnes_prepare(A, m, opt);
      Real a = rel_diff(barnes_integral(A, d, Cplx(Real("0.02"))), barnes_direct_sum(A, m, Cplx(Real("0.02")), opt));
      Real b = rel_diff(barnes_integral(A, d, Cplx(Real("0.05"))), barnes_left_sum(A, m, Cplx(Real("0.05")), opt));
      r.data["m" + std::to_string(m)] = {{"direct_0.02", sci(a)}, {"continued_0.05", sci(b)}};
      worst = std::max({worst, a, b});
    }
    bool vanish = true;
    for (auto& e : extra_residues(A, 0, 3, Cplx(Real("0.05")))) vanish = vanish && e.zero();
    r.data["extra_residues_vanish"] = vanish;
    r.pass = worst <= Real(1e-10) && vanish;
    r.detail = "max relative error " + sci(worst) + (vanish ? ", s=-1-n residues zero" : ", s=-1-n residue NONZERO");
  });
}

inline CriterionResult criterion_lg(int precision = 40) {
  return detail::timed(7, "Landau-Ginzburg", [&](CriterionResult& r) {
    bool ok = true;
    Real gram_worst = 0, ring_worst = 0;
    struct Setup {
      ModelId id;
      std::vector<Cplx> base, q;
      int order;
    };
    std::vector<Setup> setups = {{ModelId::F2, {Cplx(0.001), Cplx(0.002)}, {Cplx(0.01), Cplx(0.02)}, 12},
                                 {ModelId::F3, {Cplx(0.001), Cplx(0.002)}, {Cplx(0.01), Cplx(0.02)}, 12},
                                 {ModelId::P112, {Cplx(0.01)}, {Cplx(0.01)}, 10},
                                 {ModelId::P1113, {Cplx(0.01)}, {Cplx(0.01)}, 10}};
    for (auto& s : setups) {
      auto mf = mirror_frame(s.id, s.base, s.order, precision);
      size_t want = toric_model(s.id).alg->size();
      auto qr = quantum_ring(s.id, s.q, 40, precision);
      nlohmann::json rel = nlohmann::json::object();
      for (auto& x : qr.relations) {
        rel[x.name] = {{"residual", sci(x.residual)}, {"checked", !x.informational}};
        if (!x.informational) ring_worst = std::max(ring_worst, x.residual);
      }
      r.data[model_name(s.id)] = {{"critical_points", mf.pts.size()},
                                  {"gram_residual", sci(mf.gram_residual)},
                                  {"relations", rel}};
      ok = ok && mf.pts.size() == want && qr.semisimple;
      gram_worst = std::max(gram_worst, mf.gram_residual);
    }
    auto C = connection_matrix_p1113();
    auto C6 = mat_mul(mat_mul(mat_mul(C, C), mat_mul(C, C)), mat_mul(C, C));
    Sym want = Sym::atom(QR, 3) * Q(1, 27);
    bool sixth = true;
    for (size_t i = 0; i < C6.size(); ++i)
      for (size_t j = 0; j < C6.size(); ++j) sixth = sixth && (C6[i][j] - (i == j ? want : Sym(Q(0)))).zero();
    r.data["connection_sixth_power_exact"] = sixth;
    r.pass = ok && sixth && gram_worst <= Real(1e-8) && ring_worst <= Real(1e-8);
    r.detail = "counts 4/6/4/6, Gram residual " + sci(gram_worst) + ", ring relations " + sci(ring_worst) +
               (sixth ? ", A^6 = (y/27) Id exactly" : ", A^6 MISMATCH");
  });
}

inline CriterionResult criterion_flat() {
  return detail::timed(8, "flat-coordinate series", [&](CriterionResult& r) {
    auto fc = flat_compare_p1113(12);
    std::vector<std::pair<size_t, Q>> want = {{2, Q(1, 2)},
                                              {5, Q(-1, 9 * 120)},
                                              {8, Q(1, 3 * 40320)},
                                              {11, Q(-1093) / (Q(243) * Q(39916800))}};
    bool ok = fc.support_ok;
    for (auto& [k, v] : want) ok = ok && fc.dF_of_t1[k] == v;
    r.data = {{"coefficients", detail::qvec_json(fc.dF_of_t1, 0, 12)}, {"support_ok", fc.support_ok}};
    r.pass = ok;
    r.detail = ok ? "t1^2, t1^5, t1^8, t1^11 coefficients exact" : "coefficient mismatch";
  });
}

inline CriterionResult criterion_f2_jacobian(int precision = 40) {
  return detail::timed(9, "F2 flat structure and specialization", [&](CriterionResult& r) {
    auto ab = f2_jacobian_pipeline(precision);
    bool grams = ab.exact_grams.size() >= 5;
    Mat<Q> want = {{Q(0), Q(1)}, {Q(1), Q(2)}};
    for (auto& g : ab.exact_grams) grams = grams && g == want;
    auto sp = verify_specialization_p112(Cplx(0.04), precision);
    r.data = {{"exact_points", ab.exact_grams.size()}, {"gram_numeric", sci(ab.gram_numeric)},
              {"commutator_zero", ab.commutator_zero}, {"coordinates_exact", ab.coordinates_exact},
              {"limit_ok", ab.limit_ok}, {"correspondence", sci(ab.correspondence)},
              {"theta_correspondence", ab.theta_correspondence}, {"specialization_residual", sci(sp.residual)},
              {"unit_shift", cstr(sp.unit_shift, 12)}};
    r.pass = grams && ab.ok(Real(1e-8)) && sp.residual <= Real(1e-8);
    r.detail = "Gram exact at " + std::to_string(ab.exact_grams.size()) + " points, numeric " +
               sci(ab.gram_numeric) + ", specialization residual " + sci(sp.residual);
  });
}

inline CriterionResult criterion_theta(int order = 24) {
  return detail::timed(10, "Theta for P1113", [&](CriterionResult& r) {
    Real worst = 0;
    for (double q : {1e-2, 1e-1}) {
      auto t = verify_theta_conjugation_p1113(Cplx(q), order);
      r.data["q=" + sci(q, 0)] = {{"residual", sci(t.residual)}, {"theta_match", sci(t.theta_match)}};
      worst = std::max(worst, t.residual);
    }
    auto th = theta_p1113();
    size_t pd = theta_pairing_defect(th).size();
    Real dq = theta_q_derivative(th, Cplx(0.01));
    r.data["pairing_defects"] = pd;
    r.data["q_derivative"] = sci(dq);
    r.pass = worst <= Real(1e-8) && pd == 0 && dq > Real(1e-6);
    r.detail = "conjugation residual " + sci(worst) + ", pairing congruence " + (pd ? "BROKEN" : "exact") +
               ", |dTheta/dq| " + sci(dq);
  });
}

inline CriterionResult criterion_lefschetz() {
  return detail::timed(11, "hard Lefschetz classifier", [&](CriterionResult& r) {
    std::map<ModelId, LefschetzReport> rep;
    for (auto id : {ModelId::F2, ModelId::F3, ModelId::P112, ModelId::P1113}) {
      auto A = build_model_algebra(id);
      std::vector<Q> omega(A->size(), Q(0));
      for (auto& g : A->gens) omega = add(omega, g);
      rep[id] = hard_lefschetz_check(*A, omega);
      r.data[model_name(id)] = {{"holds", rep[id].holds}, {"variance", qstr(rep[id].variance)}};
    }
    bool cls = rep[ModelId::P112].holds && rep[ModelId::F2].holds && !rep[ModelId::P1113].holds;
    bool var = rep[ModelId::P112].variance == rep[ModelId::F2].variance &&
               rep[ModelId::P1113].variance == rep[ModelId::F3].variance;
    r.pass = cls && var;
    r.detail = std::string("P112 ") + (rep[ModelId::P112].holds ? "holds" : "fails") + ", F2 " +
               (rep[ModelId::F2].holds ? "holds" : "fails") + ", P1113 " +
               (rep[ModelId::P1113].holds ? "holds" : "fails") + "; variances " +
               qstr(rep[ModelId::P112].variance) + "/" + qstr(rep[ModelId::F2].variance) + " and " +
               qstr(rep[ModelId::P1113].variance) + "/" + qstr(rep[ModelId::F3].variance);
  });
}

inline std::vector<std::function<CriterionResult()>> all_criteria() {
  return {[] { return criterion_pf(); },         [] { return criterion_mirror(); },
          [] { return criterion_u_matrices(); }, [] { return criterion_u_properties(); },
          [] { return criterion_continuation(); }, [] { return criterion_barnes(); },
          [] { return criterion_lg(); },          [] { return criterion_flat(); },
          [] { return criterion_f2_jacobian(); },  [] { return criterion_theta(); },
          [] { return criterion_lefschetz(); }};
}

inline std::string criterion_line(const CriterionResult& r) {
  return std::string(r.pass ? "PASS" : "FAIL") + " criterion " + std::to_string(r.id) + ": " + r.title + " -- " +
         r.detail;
}

}  // namespace crc
