// crc: command-line front end for the crepant-resolution computations.
//
// Exit codes: 0 success, 1 a check failed, 2 bad usage or configuration, 3 internal error.

#include <future>
#include <iostream>

#include <CLI11.hpp>

#include <crc/acceptance.hpp>

#include "cli_support.hpp"

using namespace crc;
using crc::cli::Settings;
using crc::cli::usage_error;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

struct Run {
  Settings s;
  std::string out_path;
  bool failed = false;

  int digits() const { return std::min(s.precision, 45); }
  std::string num(const Cplx& c) const { return cstr(c, digits()); }

  void emit(const json& j) const {
    std::string text = j.dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream f(out_path, std::ios::trunc);
    if (!f) throw usage_error("cannot write " + out_path);
    f << text;
  }
};

json lz_json(const Lz<Cplx>& v, const Run& run) {
  json out = json::array();
  for (auto& [k, e] : v.c)
    for (size_t b = 0; b < e.size(); ++b)
      if (!Field<Cplx>::zero(e[b])) out.push_back({{"z", k}, {"class", v.A->labels[b]}, {"value", run.num(e[b])}});
  return out;
}

json cmat_json(const Mat<Cplx>& m, const Run& run) {
  json out = json::array();
  for (auto& row : m) {
    json r = json::array();
    for (auto& x : row) r.push_back(run.num(x));
    out.push_back(r);
  }
  return out;
}

json qmat_json(const Mat<Q>& m) {
  json out = json::array();
  for (auto& row : m) {
    json r = json::array();
    for (auto& x : row) r.push_back(qstr(x));
    out.push_back(r);
  }
  return out;
}

json taylor_json(const Taylor<Q>& t) {
  json out = json::array();
  for (auto& x : t) out.push_back(qstr(x));
  return out;
}

void require_range(int v, int lo, int hi, const char* what) {
  if (v < lo || v > hi)
    throw usage_error(std::string(what) + " must be in " + std::to_string(lo) + ".." + std::to_string(hi));
}

// ---------------------------------------------------------------- models

json model_json(const ToricModel& m) {
  const GradedAlgebra& A = *m.alg;
  json basis = json::array();
  for (size_t i = 0; i < A.size(); ++i) basis.push_back({{"label", A.labels[i]}, {"degree", qstr(A.deg[i])}});
  json sectors = json::object();
  for (auto& [k, v] : m.sectors) sectors[qstr(k)] = v;
  return {{"name", model_name(m.id)}, {"vars", m.vars},       {"ram", m.ram},
          {"charges", m.charges},     {"sectors", sectors},   {"basis", basis},
          {"dim", A.dim_c}};
}

int cmd_models(Run& run, const std::string& file) {
  json out = json::array();
  if (!file.empty()) {
    out.push_back(model_json(model_from_json(cli::read_structured(file))));
  } else {
    for (auto id : {ModelId::F2, ModelId::F3, ModelId::P112, ModelId::P1113}) out.push_back(model_json(toric_model(id)));
  }
  run.emit(out);
  return 0;
}

// ---------------------------------------------------------------- ifun / pf-check

json ifun_cached(const Run& run, ModelId id, int order) {
  cli::Cache cache(run.s.cache_dir);
  json key = {{"kind", "i_function"}, {"model", model_name(id)}, {"order", order}, {"field", "exact"},
              {"version", kVersion}};
  if (auto hit = cache.get(key)) return *hit;
  auto j = series_to_json(i_function<Q>(toric_model(id), Q(order)));
  cache.put(key, j);
  return j;
}

int cmd_ifun(Run& run, const std::string& model, const std::string& field) {
  if (field != "exact") throw usage_error("ifun: only --field exact is serializable");
  require_range(run.s.order, 0, 40, "order");
  run.emit(ifun_cached(run, parse_model(model), run.s.order));
  return 0;
}

int cmd_pf_check(Run& run, const std::string& model) {
  require_range(run.s.order, 0, 40, "order");
  ModelId id = parse_model(model);
  auto& m = toric_model(id);
  auto I = series_from_json(ifun_cached(run, id, run.s.order), m.alg.get());
  auto ops = pf_operators(m);
  json res = json::array();
  size_t total = 0;
  for (auto& op : ops) {
    auto r = apply_operator(op, I);
    total += r.terms.size();
    res.push_back({{"operator", op.str(m.vars)}, {"residual_terms", r.terms.size()}});
  }
  run.failed = total != 0;
  run.emit({{"model", model_name(id)}, {"order", run.s.order}, {"operators", res}, {"residual", total},
            {"pass", total == 0}});
  return 0;
}

// ---------------------------------------------------------------- mirror-map

int cmd_mirror_map(Run& run, const std::string& model, const std::string& format) {
  require_range(run.s.order, 1, 40, "order");
  ModelId id = parse_model(model);
  auto mm = mirror_map(toric_model(id), run.s.order);
  auto inv = inverse_mirror_map(mm);
  if (format == "csv") {
    std::ostringstream os;
    os << "k";
    for (size_t i = 0; i < mm.f.size(); ++i) os << ",f" << i + 1;
    os << ",y1_of_q1,u_of_q1\n";
    for (int k = 0; k <= run.s.order; ++k) {
      os << k;
      for (auto& f : mm.f) os << "," << qstr(f[k]);
      os << "," << qstr(inv.y1[k]) << "," << qstr(inv.u[k]) << "\n";
    }
    if (run.out_path.empty()) std::cout << os.str();
    else std::ofstream(run.out_path, std::ios::trunc) << os.str();
    return 0;
  }
  if (format != "json") throw usage_error("mirror-map: --format is json or csv");
  json f = json::array();
  for (auto& x : mm.f) f.push_back(taylor_json(x));
  json out = {{"model", model_name(id)}, {"order", run.s.order}, {"log_q_minus_log_y", f},
              {"inverse", {{"y1", taylor_json(inv.y1)}, {"u", taylor_json(inv.u)}}}};
  if (id == ModelId::F2) {
    auto c = f2_closed_form_check(mm);
    bool ok = c.q1_match && c.q2_match && c.identity_match;
    out["closed_form"] = {{"q1", c.q1_match}, {"q2", c.q2_match}, {"identity", c.identity_match}, {"pass", ok}};
    run.failed = !ok;
  }
  run.emit(out);
  return 0;
}

// ---------------------------------------------------------------- continue

int cmd_continue(Run& run, int m, const std::string& y_str) {
  require_range(m, 0, 2, "m");
  Cplx y1 = cli::parse_cplx(y_str);
  BarnesOptions opt;
  opt.gl_points = run.s.gl_points;
  opt.t_max = run.s.t_max;
  const GradedAlgebra* A = toric_model(ModelId::F3).alg.get();
  auto d = barnes_prepare(A, m, opt);
  auto integral = barnes_integral(A, d, y1);
  // the y1-series converges for |y1| < 1/27; beyond that only the continued sum does
  bool inside = cabs(y1) < Real(1) / 27;
  auto sum = inside ? barnes_direct_sum(A, m, y1, opt) : barnes_left_sum(A, m, y1, opt);
  Real rd = rel_diff(integral, sum);
  run.failed = rd > Real(1e-10);
  run.emit({{"model", "F3"},
            {"m", m},
            {"y1", run.num(y1)},
            {"abscissa", cstr(Cplx(d.c), 6)},
            {"barnes_integral", lz_json(integral, run)},
            {"residue_sum", {{"kind", inside ? "direct" : "continued"}, {"value", lz_json(sum, run)}}},
            {"relative_difference", sci(rd)},
            {"pass", !run.failed}});
  return 0;
}

// ---------------------------------------------------------------- umatrix

json umatrix_report(Pair pr, const std::string& source, const std::vector<std::string>& checks, bool& failed) {
  if (source != "closed-form" && source != "derived") throw usage_error("umatrix: --source is closed-form or derived");
  auto U = source == "closed-form" ? u_matrix_closed_form(pr) : u_matrix_derived(pr);
  if (!U.flipped) U = U.flip();
  json entries = json::object();
  for (size_t j = 0; j < U.src->size(); ++j) {
    json col = json::object();
    for (size_t i = 0; i < U.dst->size(); ++i) {
      auto e = U.entry(i, j);
      if (!e.empty()) col[U.dst->labels[i]] = laurent_str(e);
    }
    entries[U.src->labels[j]] = col;
  }
  json verdicts = json::object();
  for (auto& c : checks) {
    if (c == "symplectic") {
      auto d = check_symplectic(U);
      verdicts[c] = {{"defects", d.size()}, {"pass", d.empty()}};
      failed |= !d.empty();
    } else if (c == "grading") {
      auto g = check_grading(U);
      verdicts[c] = {{"inhomogeneous", g.inhomogeneous}, {"c1_defects", g.c1_residual.size()}, {"pass", g.ok()}};
      failed |= !g.ok();
    } else if (c == "monodromy") {
      auto d = check_monodromy_equivariance(U);
      verdicts[c] = {{"defects", d.size()}, {"pass", d.empty()}};
      failed |= !d.empty();
    } else if (c == "opposite") {
      auto o = check_opposite(U);
      bool expect = pr == Pair::P112_F2;
      json w = json::array();
      for (auto& [pos, val] : o.witnesses) w.push_back({pos, val});
      verdicts[c] = {{"verdict", o.preserved ? "preserved" : "not_preserved"},
                     {"expected", expect ? "preserved" : "not_preserved"},
                     {"witnesses", w},
                     {"pass", o.preserved == expect}};
      failed |= o.preserved != expect;
    } else if (c == "continuation") {
      auto cr = check_continuation_identity(pr, 6, U);
      bool ok = cr.exact_mismatch.empty() && cr.numeric_norm <= Real(1e-20);
      verdicts[c] = {{"order", 6},
                     {"exact_mismatch", cr.exact_mismatch},
                     {"numeric_norm", sci(cr.numeric_norm)},
                     {"float_norm", sci(cr.float_norm)},
                     {"pass", ok}};
      failed |= !ok;
    } else {
      throw usage_error("umatrix: unknown check '" + c + "'");
    }
  }
  json out = {{"pair", pair_name(pr)}, {"source", source}, {"entries", entries}, {"checks", verdicts}};
  if (source == "derived") {
    auto d = compare_maps(u_matrix_closed_form(pr), u_matrix_derived(pr));
    out["matches_closed_form"] = d.empty();
    failed |= !d.empty();
  }
  return out;
}

// ---------------------------------------------------------------- lg crit

int cmd_lg_crit(Run& run, const std::string& model, const std::string& y1s, const std::string& y2s, int chart,
                int frame_order) {
  require_range(run.s.precision, 10, 45, "precision");
  ModelId id = parse_model(model);
  std::vector<Cplx> base = {cli::parse_cplx(y1s)};
  if (!weighted_model(id)) {
    if (y2s.empty()) throw usage_error("lg crit: --y2 is required for " + model_name(id));
    base.push_back(cli::parse_cplx(y2s));
  }
  auto lg = lg_model(id, chart, base);
  auto pts = critical_points(lg, run.s.precision);
  json jp = json::array();
  for (auto& p : pts) {
    json w = json::array();
    for (auto& x : p.w) w.push_back(run.num(x));
    jp.push_back({{"w", w}, {"value", run.num(p.value)}, {"hessian", run.num(p.hess)}});
  }
  json out = {{"model", model_name(id)}, {"chart", chart}, {"points", jp}};
  json b = json::array();
  for (auto& x : base) b.push_back(run.num(x));
  out["base"] = b;
  out["expected_points"] = lg.expected_points();
  run.failed = pts.size() != lg.expected_points();
  if (chart == 1) {
    auto mf = mirror_frame(id, base, frame_order, run.s.precision);
    out["frame_order"] = frame_order;
    out["residue_gram"] = cmat_json(mf.gram, run);
    out["poincare_gram"] = qmat_json(toric_model(id).alg->gram);
    out["gram_residual"] = sci(mf.gram_residual);
    out["gram_pass"] = mf.gram_residual <= Real(1e-8);
    run.failed |= mf.gram_residual > Real(1e-8);
  }
  run.emit(out);
  return 0;
}

// ---------------------------------------------------------------- theta

int cmd_theta(Run& run, const std::string& pair, const std::string& q_str, bool verify, int order) {
  Pair pr = parse_pair(pair);
  Cplx q = cli::parse_cplx(q_str);
  auto th = pr == Pair::P1113_F3 ? theta_p1113() : theta_p112();
  json mats = json::object();
  for (auto& [k, m] : th.z) mats["z^" + std::to_string(k)] = cmat_json(th.numeric(q, k), run);
  auto pd = theta_pairing_defect(th);
  auto gd = theta_grading_defects(th);
  json out = {{"pair", pair_name(pr)},
              {"q", run.num(q)},
              {"theta", mats},
              {"pairing_congruence_exact", pd.empty()},
              {"grading_defects", gd}};
  bool ok = pd.empty() && gd.empty();
  if (verify) {
    if (pr == Pair::P1113_F3) {
      auto r = verify_theta_conjugation_p1113(q, order);
      Real dq = theta_q_derivative(th, q);
      out["verification"] = {{"order", order},
                             {"residual", sci(r.residual)},
                             {"theta_match", sci(r.theta_match)},
                             {"z_dependence", sci(r.z_dependence)},
                             {"frobenius", sci(r.frobenius)},
                             {"unit", sci(r.unit)},
                             {"q_derivative", sci(dq)}};
      ok = ok && r.residual <= Real(1e-8) && dq > Real(1e-6);
    } else {
      auto sp = verify_specialization_p112(q, std::min(run.s.precision, 45));
      out["verification"] = {{"residual", sci(sp.residual)},
                             {"pairing", sci(sp.pairing)},
                             {"unit_shift", run.num(sp.unit_shift)},
                             {"matches_u_at_infinity", theta_vs_u_infinity().empty()}};
      ok = ok && sp.residual <= Real(1e-8) && theta_vs_u_infinity().empty();
    }
  }
  out["pass"] = ok;
  run.failed = !ok;
  run.emit(out);
  return 0;
}

// ---------------------------------------------------------------- report

void warm_caches() {
  for (auto id : {ModelId::F2, ModelId::F3, ModelId::P112, ModelId::P1113}) toric_model(id);
  AtomValues warm(Real(1));
  (void)warm;
}

int cmd_report(Run& run, int jobs) {
  require_range(run.s.order, 2, 40, "order");
  require_range(run.s.precision, 10, 45, "precision");
  warm_caches();
  int prec = run.s.precision;
  BarnesOptions opt;
  opt.gl_points = run.s.gl_points;
  opt.t_max = run.s.t_max;
  std::vector<std::function<CriterionResult()>> tasks = {
      [] { return criterion_pf(); },
      [] { return criterion_mirror(); },
      [] { return criterion_u_matrices(); },
      [] { return criterion_u_properties(); },
      [] { return criterion_continuation(); },
      [opt] { return criterion_barnes(opt); },
      [prec] { return criterion_lg(prec); },
      [] { return criterion_flat(); },
      [prec] { return criterion_f2_jacobian(prec); },
      [] { return criterion_theta(); },
      [] { return criterion_lefschetz(); }};
  std::vector<CriterionResult> results(tasks.size());
  if (jobs <= 1) {
    for (size_t i = 0; i < tasks.size(); ++i) results[i] = tasks[i]();
  } else {
    // fixed slots keep the output order independent of completion order
    std::vector<std::future<CriterionResult>> fut;
    size_t next = 0;
    while (next < tasks.size() || !fut.empty()) {
      while (next < tasks.size() && fut.size() < size_t(jobs)) fut.push_back(std::async(std::launch::async, tasks[next++]));
      auto r = fut.front().get();
      results[r.id - 1] = std::move(r);
      fut.erase(fut.begin());
    }
  }
  json crit = json::array();
  for (auto& r : results) {
    std::cerr << criterion_line(r) << "\n";
    crit.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail}, {"data", r.data}});
    run.failed |= !r.pass;
  }
  json tables = json::object();
  for (auto id : {ModelId::F3, ModelId::F2}) {
    auto mm = mirror_map(toric_model(id), run.s.order);
    auto inv = inverse_mirror_map(mm);
    json f = json::array();
    for (auto& x : mm.f) f.push_back(taylor_json(x));
    tables["mirror_map_" + model_name(id)] = {{"log_q_minus_log_y", f}, {"y1", taylor_json(inv.y1)}, {"u", taylor_json(inv.u)}};
  }
  tables["flat_series_P1113"] = taylor_json(flat_compare_p1113(std::max(run.s.order, 11)).dF_of_t1);
  bool dummy = false;
  for (auto pr : {Pair::P1113_F3, Pair::P112_F2})
    tables["U_" + pair_name(pr)] = umatrix_report(pr, "closed-form", {"symplectic", "grading", "monodromy", "opposite"}, dummy);
  auto ab = f2_jacobian_pipeline(prec);
  json grams = json::array();
  for (size_t i = 0; i < ab.exact_grams.size(); ++i)
    grams.push_back({{"q1", qstr(ab.exact_points[i].first)}, {"q2", qstr(ab.exact_points[i].second)},
                     {"gram", qmat_json(ab.exact_grams[i])}});
  tables["f2_jacobian_gram"] = grams;
  json out = {{"version", kVersion},
              {"config", {{"order", run.s.order}, {"precision", run.s.precision}}},
              {"criteria", crit},
              {"tables", tables},
              {"pass", !run.failed}};
  run.emit(out);
  return 0;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crepant resolution computations for P(1,1,2)/F2 and P(1,1,1,3)/F3"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path, cache_flag, out_path;
  std::optional<int> order_flag, precision_flag;
  app.add_option("--config", config_path, "TOML or JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--cache-dir", cache_flag, "result cache directory (overrides CRC_CACHE_DIR and the config)");
  app.add_option("--out", out_path, "write the result here instead of stdout");

  auto add_common = [&](CLI::App* sc) {
    sc->add_option("--order", order_flag, "truncation order");
    sc->add_option("--precision", precision_flag, "working precision in digits");
  };

  auto* models = app.add_subcommand("models", "list the built-in toric models");
  std::string models_mode = "list", model_file;
  models->add_option("mode", models_mode)->check(CLI::IsMember({"list"}));
  models->add_option("--file", model_file, "load and echo a model descriptor (JSON or TOML)")->check(CLI::ExistingFile);

  std::string model, field = "exact", format = "json";
  auto* ifun = app.add_subcommand("ifun", "I-function coefficients as JSON");
  ifun->add_option("--model", model)->required();
  ifun->add_option("--field", field, "exact");
  add_common(ifun);

  auto* pf = app.add_subcommand("pf-check", "apply the Picard-Fuchs operators to the I-function");
  pf->add_option("--model", model)->required();
  add_common(pf);

  auto* mm = app.add_subcommand("mirror-map", "mirror map and its inverse");
  mm->add_option("--model", model)->required()->check(CLI::IsMember({"f2", "f3", "F2", "F3"}));
  mm->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  add_common(mm);

  int barnes_m = 0;
  std::string y1s = "0.05", y2s;
  auto* cont = app.add_subcommand("continue", "Mellin-Barnes integral against the residue sum (F3)");
  cont->add_option("--m", barnes_m, "residue class of the y2 exponent");
  cont->add_option("--y1", y1s, "point of evaluation");
  add_common(cont);

  std::string pair = "p1113-f3", source = "closed-form", checks = "symplectic,grading,opposite,monodromy,continuation";
  auto* um = app.add_subcommand("umatrix", "symplectic transformation and its checks");
  um->add_option("--pair", pair)->check(CLI::IsMember({"p1113-f3", "p112-f2"}));
  um->add_option("--source", source)->check(CLI::IsMember({"closed-form", "derived"}));
  um->add_option("--check", checks, "comma-separated checks");
  add_common(um);

  auto* lg = app.add_subcommand("lg", "Landau-Ginzburg computations");
  lg->require_subcommand(1);
  auto* crit = lg->add_subcommand("crit", "critical points, values, Hessians and Gram matrices");
  int chart = 1, frame_order = 12;
  crit->add_option("--model", model)->required();
  crit->add_option("--y1", y1s, "first base coordinate (y for weighted models)")->required();
  crit->add_option("--y2", y2s, "second base coordinate");
  crit->add_option("--chart", chart)->check(CLI::Range(1, 2));
  crit->add_option("--frame-order", frame_order, "series order for the mirror frame");
  add_common(crit);

  std::string q_str = "0.01";
  bool verify = false;
  int theta_order = 24;
  auto* theta = app.add_subcommand("theta", "the isomorphism Theta(q)");
  theta->add_option("--pair", pair)->check(CLI::IsMember({"p1113-f3", "p112-f2"}));
  theta->add_option("--q", q_str);
  theta->add_flag("--verify", verify);
  theta->add_option("--series-order", theta_order);
  add_common(theta);

  bool all = false;
  int jobs = 1;
  auto* report = app.add_subcommand("report", "run every check and print one JSON report");
  report->add_flag("--all", all, "include every section (the default)");
  report->add_option("--jobs", jobs, "parallel checks")->check(CLI::Range(1, 64));
  add_common(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  Run run;
  run.out_path = out_path;
  try {
    if (!config_path.empty()) cli::apply_config(run.s, cli::read_structured(config_path));
    if (const char* env = std::getenv("CRC_CACHE_DIR")) run.s.cache_dir = env;
    if (!cache_flag.empty()) run.s.cache_dir = cache_flag;
    if (order_flag) run.s.order = *order_flag;
    if (precision_flag) run.s.precision = *precision_flag;
    cli::Cache check_dir(run.s.cache_dir);
    (void)check_dir;

    if (*models) cmd_models(run, model_file);
    else if (*ifun) cmd_ifun(run, model, field);
    else if (*pf) cmd_pf_check(run, model);
    else if (*mm) cmd_mirror_map(run, model, format);
    else if (*cont) cmd_continue(run, barnes_m, y1s);
    else if (*um) {
      bool failed = false;
      run.emit(umatrix_report(parse_pair(pair), source, split_csv(checks), failed));
      run.failed = failed;
    } else if (*crit) cmd_lg_crit(run, model, y1s, y2s, chart, frame_order);
    else if (*theta) cmd_theta(run, pair, q_str, verify, theta_order);
    else if (*report) cmd_report(run, jobs);
  } catch (const usage_error& e) {
    std::cerr << "crc: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "crc: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "crc: " << e.what() << "\n";
    return 3;
  }
  return run.failed ? 1 : 0;
}
