#pragma once
// Landau-Ginzburg mirrors on (C*)^r, their critical points and residue pairing, mirror
// frames obtained by Birkhoff factorization of frame-operator matrices, and the
// P(1,1,1,3) connection matrix.

#include <complex>

#include <Eigen/Eigenvalues>

#include "barnes.hpp"
#include "mirror.hpp"

namespace crc {

// ---------------------------------------------------------------- superpotentials
//
// Every model is a member of one family in fiber coordinates w_1..w_{r-1}, w:
//   W = w_1 + ... + w_{r-1} + A / (w_1 ... w_{r-1} w^r) + B / w + w
// with (A, B) = (y1 y2^r, y2) in the y-chart, (fy2^r, fy1 fy2) in the orbifold chart,
// and (y, 0) for the weighted projective spaces.

struct LGMonomial {
  std::vector<int> e;  // exponents of the fiber coordinates
  Cplx c;
  std::string tag;     // "w", "A", "B"
};

struct LGModel {
  ModelId id = ModelId::F3;
  int chart = 1;
  int r = 0;
  std::vector<Cplx> base;
  Cplx A, B;
  std::vector<LGMonomial> W;

  size_t dim() const { return size_t(r); }
  size_t expected_points() const { return 2 * size_t(r); }
};

struct CriticalPoint {
  std::vector<Cplx> w;
  Cplx value;
  Cplx hess;  // determinant of the Hessian in log w
  Real grad_norm = 0;
};

inline int lg_rank(ModelId id) {
  switch (id) {
    case ModelId::F3:
    case ModelId::P1113: return 3;
    case ModelId::F2:
    case ModelId::P112: return 2;
  }
  return 0;
}

inline bool weighted_model(ModelId id) { return id == ModelId::P1113 || id == ModelId::P112; }

inline Cplx cpow_int(const Cplx& x, int e) {
  Cplx r(1), b = e < 0 ? Cplx(1) / x : x;
  for (int i = 0; i < std::abs(e); ++i) r *= b;
  return r;
}

// Principal branch of x^{1/n}.
inline Cplx croot(const Cplx& x, int n) {
  if (x == Cplx(0)) return x;
  return exp(log(x) / Cplx(n));
}

inline LGModel lg_model(ModelId id, int chart, const std::vector<Cplx>& base) {
  LGModel m;
  m.id = id;
  m.chart = chart;
  m.r = lg_rank(id);
  m.base = base;
  if (weighted_model(id)) {
    if (base.size() != 1 || chart != 1) throw std::invalid_argument("lg_model: weighted models take one base coordinate y");
    m.A = base[0];
    m.B = 0;
  } else {
    if (base.size() != 2) throw std::invalid_argument("lg_model: scroll models take two base coordinates");
    if (chart == 1) {
      m.A = base[0] * cpow_int(base[1], m.r);
      m.B = base[1];
    } else if (chart == 2) {
      m.A = cpow_int(base[1], m.r);
      m.B = base[0] * base[1];
    } else {
      throw std::invalid_argument("lg_model: chart must be 1 or 2");
    }
  }
  if (m.A == Cplx(0)) throw math_error("lg_model: base point on the boundary (A = 0)");
  int r = m.r;
  for (int i = 0; i + 1 < r; ++i) {
    std::vector<int> e(r, 0);
    e[i] = 1;
    m.W.push_back({e, Cplx(1), "w"});
  }
  std::vector<int> ea(r, -1);
  ea[r - 1] = -r;
  m.W.push_back({ea, m.A, "A"});
  if (m.B != Cplx(0)) {
    std::vector<int> eb(r, 0);
    eb[r - 1] = -1;
    m.W.push_back({eb, m.B, "B"});
  }
  std::vector<int> ew(r, 0);
  ew[r - 1] = 1;
  m.W.push_back({ew, Cplx(1), "w"});
  return m;
}

// (y1, y2) -> (fy1, fy2) = (y1^{-1/r}, y1^{1/r} y2), principal branch.
inline std::vector<Cplx> to_orbifold_chart(ModelId id, const std::vector<Cplx>& y) {
  int r = chart_index(id);
  Cplx s = croot(y[0], r);
  return {Cplx(1) / s, s * y[1]};
}

inline Cplx monomial_value(const LGMonomial& m, const std::vector<Cplx>& w) {
  Cplx v = m.c;
  for (size_t i = 0; i < w.size(); ++i) v *= cpow_int(w[i], m.e[i]);
  return v;
}

inline Cplx tagged_value(const LGModel& m, const std::vector<Cplx>& w, const std::string& tag) {
  Cplx v(0);
  for (auto& mono : m.W)
    if (mono.tag == tag) v += monomial_value(mono, w);
  return v;
}

inline Cplx lg_value(const LGModel& m, const std::vector<Cplx>& w) {
  Cplx v(0);
  for (auto& mono : m.W) v += monomial_value(mono, w);
  return v;
}

inline std::vector<Cplx> lg_log_gradient(const LGModel& m, const std::vector<Cplx>& w) {
  std::vector<Cplx> g(m.dim(), Cplx(0));
  for (auto& mono : m.W) {
    Cplx v = monomial_value(mono, w);
    for (size_t i = 0; i < g.size(); ++i)
      if (mono.e[i]) g[i] += Cplx(mono.e[i]) * v;
  }
  return g;
}

inline Mat<Cplx> lg_log_hessian(const LGModel& m, const std::vector<Cplx>& w) {
  auto H = mat_zero<Cplx>(m.dim(), m.dim());
  for (auto& mono : m.W) {
    Cplx v = monomial_value(mono, w);
    for (size_t i = 0; i < m.dim(); ++i)
      for (size_t j = 0; j < m.dim(); ++j) H[i][j] += Cplx(mono.e[i] * mono.e[j]) * v;
  }
  return H;
}

inline Cplx det_c(Mat<Cplx> a) {
  size_t n = a.size();
  Cplx d(1);
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    for (size_t r = c + 1; r < n; ++r)
      if (cabs(a[r][c]) > cabs(a[p][c])) p = r;
    if (a[p][c] == Cplx(0)) return Cplx(0);
    if (p != c) {
      std::swap(a[p], a[c]);
      d = -d;
    }
    d *= a[c][c];
    for (size_t r = c + 1; r < n; ++r) {
      Cplx f = a[r][c] / a[c][c];
      for (size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return d;
}

inline Real vec_norm(const std::vector<Cplx>& v) {
  Real s = 0;
  for (auto& x : v) s = std::max(s, cabs(x));
  return s;
}

// Roots of sum_k c_k x^k (c_n != 0) as companion-matrix eigenvalues in double precision.
inline std::vector<std::complex<double>> companion_roots(const std::vector<Cplx>& c) {
  int n = int(c.size()) - 1;
  if (n < 1) return {};
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
  std::complex<double> lead(double(c[n].real()), double(c[n].imag()));
  for (int i = 1; i < n; ++i) M(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) M(i, n - 1) = -std::complex<double>(double(c[i].real()), double(c[i].imag())) / lead;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
  std::vector<std::complex<double>> out;
  for (int i = 0; i < n; ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

// Eliminating w_1 = ... = w_{r-1} = (w^2 - B)/(r w) leaves (w^2 - B)^r = r^r A.
inline std::vector<CriticalPoint> critical_points(const LGModel& m, int precision = 40) {
  if (precision < 10 || precision > 45) throw std::invalid_argument("critical_points: precision must be in 10..45");
  int r = m.r;
  std::vector<Cplx> poly(2 * r + 1, Cplx(0));
  Zint binom = 1;
  for (int k = 0; k <= r; ++k) {
    // C(r,k) w^{2k} (-B)^{r-k}
    poly[2 * k] += Cplx(Real(binom)) * cpow_int(-m.B, r - k);
    binom = binom * (r - k) / (k + 1);
  }
  Cplx rr = cpow_int(Cplx(r), r);
  poly[0] -= rr * m.A;
  auto roots = companion_roots(poly);
  Real tol = boost::multiprecision::pow(Real(10), -(precision - 5));
  Real scale = 1;
  for (auto& mono : m.W) scale = std::max(scale, cabs(mono.c));
  std::vector<CriticalPoint> out;
  for (auto& z0 : roots) {
    Cplx w(z0.real(), z0.imag());
    if (w == Cplx(0)) throw math_error("critical_points: root at w = 0 (degenerate base point)");
    // polish the univariate root first, then the full system
    for (int it = 0; it < 8; ++it) {
      Cplx f(0), df(0), x(1);
      for (size_t k = 0; k < poly.size(); ++k) {
        if (k) df += Cplx(long(k)) * poly[k] * cpow_int(w, int(k) - 1);
        f += poly[k] * x;
        x *= w;
      }
      if (df == Cplx(0)) break;
      w -= f / df;
    }
    Cplx X = (w * w - m.B) / (Cplx(r) * w);
    std::vector<Cplx> pt(r, X);
    pt[r - 1] = w;
    Real gn = 0;
    for (int it = 0; it < 80; ++it) {
      auto g = lg_log_gradient(m, pt);
      gn = vec_norm(g);
      if (gn < tol * scale * Real(1e-3)) break;
      auto Hi = mat_inv(lg_log_hessian(m, pt));
      auto d = mat_vec(Hi, g);
      for (int i = 0; i < r; ++i) pt[i] *= exp(-d[i]);
    }
    gn = vec_norm(lg_log_gradient(m, pt));
    if (gn > tol * scale) throw math_error("critical_points: Newton polish did not converge");
    CriticalPoint cp;
    cp.w = pt;
    cp.value = lg_value(m, pt);
    cp.hess = det_c(lg_log_hessian(m, pt));
    cp.grad_norm = gn;
    if (cabs(cp.hess) < tol) throw math_error("critical_points: degenerate critical point");
    bool dup = false;
    for (auto& q : out) {
      Real d = 0;
      for (int i = 0; i < r; ++i) d = std::max(d, cabs(q.w[i] - pt[i]) / (cabs(pt[i]) + 1));
      if (d < boost::multiprecision::pow(Real(10), -precision / 2)) dup = true;
    }
    if (!dup) out.push_back(cp);
  }
  if (out.size() != m.expected_points())
    throw math_error("critical_points: found " + std::to_string(out.size()) + " points, expected " +
                     std::to_string(m.expected_points()));
  std::sort(out.begin(), out.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  return out;
}

inline Cplx residue_pairing(const std::vector<Cplx>& f, const std::vector<Cplx>& g, const std::vector<CriticalPoint>& pts) {
  if (f.size() != pts.size() || g.size() != pts.size()) throw std::invalid_argument("residue_pairing: size mismatch");
  Cplx s(0);
  for (size_t k = 0; k < pts.size(); ++k) {
    if (pts[k].hess == Cplx(0)) throw math_error("residue_pairing: singular Hessian");
    s += f[k] * g[k] / pts[k].hess;
  }
  return s;
}

// y_a dW/dy_a at a point of the fiber, one entry per base coordinate of the chart.
inline std::vector<Cplx> base_log_derivatives(const LGModel& m, const std::vector<Cplx>& w) {
  Cplx u = tagged_value(m, w, "A"), b = tagged_value(m, w, "B");
  if (weighted_model(m.id)) return {u};
  if (m.chart == 1) return {u, Cplx(m.r) * u + b};
  return {b, Cplx(m.r) * u + b};
}

// ---------------------------------------------------------------- Laurent-in-z matrices

struct ZMat {
  size_t n = 0;
  std::map<int, Mat<Cplx>> c;

  ZMat() = default;
  explicit ZMat(size_t dim) : n(dim) {}
  static ZMat constant(const Mat<Cplx>& m) {
    ZMat r(m.size());
    r.c[0] = m;
    return r;
  }
  static ZMat identity(size_t dim) { return constant(mat_id<Cplx>(dim)); }

  Mat<Cplx>& at(int k) {
    auto it = c.find(k);
    if (it == c.end()) it = c.emplace(k, mat_zero<Cplx>(n, n)).first;
    return it->second;
  }
  Mat<Cplx> get(int k) const {
    auto it = c.find(k);
    return it == c.end() ? mat_zero<Cplx>(n, n) : it->second;
  }
  int lo() const { return c.empty() ? 0 : c.begin()->first; }
  int hi() const { return c.empty() ? 0 : c.rbegin()->first; }

  ZMat operator+(const ZMat& o) const {
    ZMat r = *this;
    if (!r.n) r.n = o.n;
    for (auto& [k, m] : o.c) {
      auto& t = r.at(k);
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) t[i][j] += m[i][j];
    }
    return r;
  }
  ZMat operator-(const ZMat& o) const { return *this + o * Cplx(-1); }
  ZMat operator*(const Cplx& s) const {
    ZMat r = *this;
    for (auto& [k, m] : r.c)
      for (auto& row : m)
        for (auto& x : row) x *= s;
    return r;
  }
  ZMat operator*(const ZMat& o) const {
    ZMat r(n ? n : o.n);
    for (auto& [i, a] : c)
      for (auto& [j, b] : o.c) {
        auto p = mat_mul(a, b);
        auto& t = r.at(i + j);
        for (size_t x = 0; x < r.n; ++x)
          for (size_t y = 0; y < r.n; ++y) t[x][y] += p[x][y];
      }
    return r;
  }
  // Powers >= 0 (nonneg = true) or < 0.
  ZMat part(bool nonneg) const {
    ZMat r(n);
    for (auto& [k, m] : c)
      if ((k >= 0) == nonneg) r.c[k] = m;
    return r;
  }
  Mat<Cplx> eval(const Cplx& z) const {
    auto r = mat_zero<Cplx>(n, n);
    for (auto& [k, m] : c) {
      Cplx zk = cpow_int(z, k);
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) r[i][j] += zk * m[i][j];
    }
    return r;
  }
  Real norm() const {
    Real s = 0;
    for (auto& [k, m] : c) s = std::max(s, max_abs(m));
    return s;
  }
  Real norm_except(int k0) const {
    Real s = 0;
    for (auto& [k, m] : c)
      if (k != k0) s = std::max(s, max_abs(m));
    return s;
  }
};

// Inverse of a matrix polynomial in z whose inverse is again a polynomial.
inline ZMat zmat_poly_inverse(const ZMat& V, int max_deg = 24) {
  if (V.lo() < 0) throw math_error("zmat_poly_inverse: negative z powers");
  size_t n = V.n;
  auto a0i = mat_inv(V.get(0));
  ZMat X(n);
  X.c[0] = a0i;
  int d = V.hi();
  for (int k = 1; k <= max_deg; ++k) {
    auto acc = mat_zero<Cplx>(n, n);
    for (int j = 1; j <= std::min(k, d); ++j) {
      auto it = X.c.find(k - j);
      if (it == X.c.end()) continue;
      auto p = mat_mul(V.get(j), it->second);
      for (size_t x = 0; x < n; ++x)
        for (size_t y = 0; y < n; ++y) acc[x][y] -= p[x][y];
    }
    X.c[k] = mat_mul(a0i, acc);
  }
  // drop the tail once it is numerically zero
  Real scale = V.norm() * X.norm();
  for (auto it = X.c.begin(); it != X.c.end();)
    it = (it->first > 0 && max_abs(it->second) < scale * Real(1e-40)) ? X.c.erase(it) : std::next(it);
  auto chk = (V * X) - ZMat::identity(n);
  if (chk.norm() > Real(1e-25) * (1 + scale)) throw math_error("zmat_poly_inverse: inverse is not polynomial");
  return X;
}

// ---------------------------------------------------------------- frame operators

struct FrameFactor {
  std::vector<Q> w;  // z-derivative sum_a w_a z y_a d/dy_a
  Q zc = 0;          // plus zc * z
};

struct FrameWord {
  Q coef = 1;
  std::vector<int> shift;  // multiply by prod t_a^{shift_a}
  std::vector<FrameFactor> f;  // applied right to left
};

using FrameOp = std::vector<FrameWord>;

inline FrameWord monomial_word(size_t nvars, const std::vector<int>& pw) {
  FrameWord w;
  w.shift.assign(nvars, 0);
  for (size_t a = 0; a < nvars; ++a)
    for (int k = 0; k < pw[a]; ++k) {
      std::vector<Q> v(nvars, Q(0));
      v[a] = 1;
      w.f.push_back({v, 0});
    }
  return w;
}

// Orbifold frame 1, D, D^2, ..., then the twisted classes, with D = y d/dy written in a
// chosen variable (weight `dw` on variable `var` of an nvars-variable series).
inline std::vector<FrameOp> orbifold_frame(ModelId id, size_t nvars = 1, size_t var = 0, Q dw = 1) {
  std::vector<FrameOp> out;
  auto D = [&](Q zc = 0) {
    std::vector<Q> v(nvars, Q(0));
    v[var] = dw;
    return FrameFactor{v, zc};
  };
  auto word = [&](Q coef, int sh, std::vector<FrameFactor> f) {
    FrameWord w;
    w.coef = coef;
    w.shift.assign(nvars, 0);
    w.shift[var] = sh;
    w.f = std::move(f);
    return FrameOp{w};
  };
  if (id == ModelId::P1113) {
    for (int i = 0; i <= 3; ++i) out.push_back(word(1, 0, std::vector<FrameFactor>(i, D())));
    out.push_back(word(3, -1, std::vector<FrameFactor>(4, D())));
    std::vector<FrameFactor> f5(4, D());
    f5.insert(f5.begin(), D(qfrac(-1, 3)));
    out.push_back(word(9, -2, f5));
  } else if (id == ModelId::P112) {
    for (int i = 0; i <= 2; ++i) out.push_back(word(1, 0, std::vector<FrameFactor>(i, D())));
    out.push_back(word(2, -1, std::vector<FrameFactor>(3, D())));
  } else {
    throw std::invalid_argument("orbifold_frame: weighted models only");
  }
  return out;
}

inline std::vector<FrameOp> frame_operators(ModelId id) {
  if (weighted_model(id)) return orbifold_frame(id);
  std::vector<std::vector<int>> mons;
  if (id == ModelId::F3) mons = {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {2, 1}};
  else mons = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  std::vector<FrameOp> out;
  for (auto& m : mons) out.push_back({monomial_word(2, m)});
  return out;
}

// Frame matrices M_k: column a is P_a applied to the series, with the y^{P/z} prefactor
// stripped; keys are exponents in units of 1/ram.
struct FrameSeries {
  std::vector<int> ram;
  Q valid = 0;  // keys of degree <= valid are complete
  std::map<std::vector<int>, ZMat> M;
};

inline CohSeries<Cplx> series_scale(const CohSeries<Cplx>& s, const Cplx& c) {
  auto r = s.empty_like();
  for (auto& [k, v] : s.terms) r.add_term(k, v * c);
  return r;
}

inline FrameSeries frame_series(const CohSeries<Cplx>& f, const std::vector<FrameOp>& ops) {
  const GradedAlgebra* A = f.A;
  size_t n = A->size();
  if (ops.size() != n) throw std::invalid_argument("frame_series: need one operator per basis element");
  FrameSeries out;
  out.ram = f.ram;
  Q lost = 0;
  for (auto& op : ops)
    for (auto& w : op)
      for (size_t a = 0; a < w.shift.size(); ++a)
        if (w.shift[a] < 0) lost = std::max(lost, Q(-w.shift[a]) / Q(f.ram[a]));
  out.valid = f.order - lost;
  Real scale = 0;
  for (auto& [k, v] : f.terms)
    for (auto& [j, e] : v.c)
      for (auto& x : e) scale = std::max(scale, cabs(x));
  for (size_t col = 0; col < n; ++col) {
    for (auto& word : ops[col]) {
      CohSeries<Cplx> g = f;
      for (auto it = word.f.rbegin(); it != word.f.rend(); ++it) {
        auto next = g.empty_like();
        for (size_t a = 0; a < it->w.size(); ++a)
          if (it->w[a] != 0) next = next + series_scale(d_log(g, a), Cplx(to_real(it->w[a])));
        if (it->zc != 0) {
          auto zs = g.empty_like();
          for (auto& [k, v] : g.terms) zs.add_term(k, v.shift(1) * Cplx(to_real(it->zc)));
          next = next + zs;
        }
        g = next;
      }
      Cplx cf(to_real(word.coef));
      for (auto& [k, v] : g.terms) {
        std::vector<int> key = k;
        bool neg = false;
        for (size_t a = 0; a < key.size(); ++a) {
          key[a] += word.shift[a];
          if (key[a] < 0) neg = true;
        }
        if (neg) {
          Real mx = 0;
          for (auto& [j, e] : v.c)
            for (auto& x : e) mx = std::max(mx, cabs(x));
          if (mx > Real(1e-30) * (1 + scale)) throw math_error("frame_series: operator produces a negative power");
          continue;
        }
        Q deg = 0;
        for (size_t a = 0; a < key.size(); ++a) deg += Q(key[a]) / Q(f.ram[a]);
        if (deg > out.valid) continue;
        auto it = out.M.find(key);
        if (it == out.M.end()) it = out.M.emplace(key, ZMat(n)).first;
        for (auto& [j, e] : v.c) {
          auto& m = it->second.at(j);
          for (size_t row = 0; row < n; ++row) m[row][col] += cf * e[row];
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- Birkhoff factorization
//
// M = L V with L = L(t, z) in 1 + O(1/z) at t = 0 up to the constant L_0, and V polynomial in z.

struct Birkhoff {
  std::vector<int> ram;
  Q valid = 0;
  ZMat L0, L0inv, V0inv;
  std::map<std::vector<int>, ZMat> L, V;
  Real order0_residual = 0;  // how well M_0 = L_0 V_0 was solved
};

inline Q key_degree(const std::vector<int>& k, const std::vector<int>& ram) {
  Q d = 0;
  for (size_t a = 0; a < k.size(); ++a) d += Q(k[a]) / Q(ram[a]);
  return d;
}

// M_0 = L_0 V_0 with L_0^{-1} = 1 + W_1/z + ... + W_K/z^K, solved as a linear least-squares
// problem in 50-digit arithmetic.
inline void birkhoff_order0(const ZMat& G, Birkhoff& b, int K = 8) {
  size_t n = G.n;
  ZMat W = ZMat::identity(n);
  if (G.lo() < 0) {
    int E = K - G.lo();
    size_t rows = n * K, cols = n * E;
    auto big = mat_zero<Cplx>(rows, cols);
    auto rhs = mat_zero<Cplx>(n, cols);
    for (int e = 0; e < E; ++e) {
      int m = -1 - e;
      auto gm = G.get(m);
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) rhs[i][e * n + j] = -gm[i][j];
      for (int k = 1; k <= K; ++k) {
        auto g = G.get(m + k);
        for (size_t i = 0; i < n; ++i)
          for (size_t j = 0; j < n; ++j) big[(k - 1) * n + i][e * n + j] = g[i][j];
      }
    }
    auto bh = mat_zero<Cplx>(cols, rows);
    for (size_t i = 0; i < rows; ++i)
      for (size_t j = 0; j < cols; ++j) bh[j][i] = boost::multiprecision::conj(big[i][j]);
    auto sol = mat_mul(mat_mul(rhs, bh), mat_inv(mat_mul(big, bh)));
    for (int k = 1; k <= K; ++k) {
      auto& wk = W.at(-k);
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) wk[i][j] = sol[i][(k - 1) * n + j];
    }
  }
  ZMat WG = W * G;
  ZMat V0 = WG.part(true);
  b.order0_residual = WG.part(false).norm() / (1 + G.norm());
  b.V0inv = zmat_poly_inverse(V0);
  b.L0 = G * b.V0inv;
  b.L0inv = W;
  auto lpos = b.L0.part(true) - ZMat::identity(n);
  b.order0_residual = std::max(b.order0_residual, lpos.norm() / (1 + G.norm()));
  b.L[std::vector<int>(b.ram.size(), 0)] = b.L0;
  b.V[std::vector<int>(b.ram.size(), 0)] = V0;
}

inline Birkhoff birkhoff(const FrameSeries& fs) {
  Birkhoff b;
  b.ram = fs.ram;
  b.valid = fs.valid;
  std::vector<int> zero(fs.ram.size(), 0);
  auto it0 = fs.M.find(zero);
  if (it0 == fs.M.end()) throw math_error("birkhoff: missing constant term");
  size_t n = it0->second.n;
  birkhoff_order0(it0->second, b);
  // all keys up to the valid degree, in degree order
  std::vector<std::vector<int>> keys;
  std::vector<int> k(fs.ram.size(), 0);
  std::function<void(size_t)> rec = [&](size_t a) {
    if (a == k.size()) {
      if (key_degree(k, fs.ram) <= fs.valid && k != zero) keys.push_back(k);
      return;
    }
    for (k[a] = 0; key_degree(k, fs.ram) <= fs.valid; ++k[a]) rec(a + 1);
    k[a] = 0;
  };
  rec(0);
  std::stable_sort(keys.begin(), keys.end(),
                   [&](auto& x, auto& y) { return key_degree(x, fs.ram) < key_degree(y, fs.ram); });
  for (auto& kap : keys) {
    auto mit = fs.M.find(kap);
    ZMat R = mit == fs.M.end() ? ZMat(n) : mit->second;
    for (auto& [i, Li] : b.L) {
      if (i == zero) continue;
      std::vector<int> j(kap.size());
      bool ok = true;
      for (size_t a = 0; a < j.size(); ++a) {
        j[a] = kap[a] - i[a];
        if (j[a] < 0) ok = false;
      }
      if (!ok || j == zero) continue;
      auto vj = b.V.find(j);
      if (vj == b.V.end()) continue;
      R = R - Li * vj->second;
    }
    ZMat X = b.L0inv * R * b.V0inv;
    b.V[kap] = X.part(true) * b.V.at(zero);
    b.L[kap] = b.L0 * X.part(false);
  }
  return b;
}

inline ZMat eval_series(const std::map<std::vector<int>, ZMat>& s, const std::vector<Cplx>& t, size_t n) {
  ZMat r(n);
  for (auto& [k, m] : s) {
    Cplx w(1);
    for (size_t a = 0; a < k.size(); ++a) w *= cpow_int(t[a], k[a]);
    r = r + m * w;
  }
  return r;
}

// ---------------------------------------------------------------- mirror frames

// z -> 0 symbol of a frame operator at a critical point: D_a -> y_a dW/dy_a.
inline Cplx frame_symbol(const FrameOp& op, const std::vector<Cplx>& t, const std::vector<Cplx>& dW) {
  Cplx s(0);
  for (auto& w : op) {
    Cplx v(to_real(w.coef));
    for (size_t a = 0; a < w.shift.size(); ++a) v *= cpow_int(t[a], w.shift[a]);
    for (auto& f : w.f) {
      Cplx d(0);
      for (size_t a = 0; a < f.w.size(); ++a) d += Cplx(to_real(f.w[a])) * dW[a];
      v *= d;
    }
    s += v;
  }
  return s;
}

struct MirrorFrame {
  ModelId id;
  std::vector<Cplx> base;
  std::vector<CriticalPoint> pts;
  std::vector<std::vector<Cplx>> J;  // J[beta][k]: image of phi_beta at point k
  Mat<Cplx> gram;
  Real gram_residual = 0;  // against the Poincare pairing
  Cplx one_one;            // <1, 1>
  Real order0_residual = 0;
  int order = 0;
};

// Mirror images of the basis, read off from the flat frame M = L V at the base point
// (y-chart for F2/F3, y for the weighted models).
inline MirrorFrame mirror_frame(ModelId id, const std::vector<Cplx>& base, int order, int precision = 40) {
  const ToricModel& tm = toric_model(id);
  const GradedAlgebra* A = tm.alg.get();
  size_t n = A->size();
  auto I = i_function<Cplx>(tm, Q(order));
  auto ops = frame_operators(id);
  auto fs = frame_series(I, ops);
  auto b = birkhoff(fs);
  std::vector<Cplx> t;
  for (size_t a = 0; a < base.size(); ++a) t.push_back(croot(base[a], tm.ram[a]));
  ZMat V = eval_series(b.V, t, n);
  auto Vinv0 = mat_inv(V.eval(Cplx(0)));
  // z = 0 value of V^{-1} is the inverse of V at z = 0
  MirrorFrame mf;
  mf.id = id;
  mf.base = base;
  mf.order = order;
  mf.order0_residual = b.order0_residual;
  LGModel lg = lg_model(id, 1, base);
  mf.pts = critical_points(lg, precision);
  std::vector<std::vector<Cplx>> sym(n);
  for (auto& p : mf.pts) {
    auto dW = base_log_derivatives(lg, p.w);
    for (size_t a = 0; a < n; ++a) sym[a].push_back(frame_symbol(ops[a], t, dW));
  }
  mf.J.assign(n, std::vector<Cplx>(mf.pts.size(), Cplx(0)));
  for (size_t beta = 0; beta < n; ++beta)
    for (size_t a = 0; a < n; ++a)
      for (size_t k = 0; k < mf.pts.size(); ++k) mf.J[beta][k] += Vinv0[a][beta] * sym[a][k];
  mf.gram = mat_zero<Cplx>(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      mf.gram[i][j] = residue_pairing(mf.J[i], mf.J[j], mf.pts);
      mf.gram_residual = std::max(mf.gram_residual, cabs(mf.gram[i][j] - Cplx(to_real(A->gram[i][j]))));
    }
  std::vector<Cplx> ones(mf.pts.size(), Cplx(1));
  mf.one_one = residue_pairing(ones, ones, mf.pts);
  return mf;
}

// ---------------------------------------------------------------- quantum ring

struct RingRelation {
  std::string name;
  Real residual = 0;  // max over critical points, relative to the size of the right side
  bool informational = false;  // reported, not a pass/fail check
};

struct QuantumRing {
  ModelId id;
  std::vector<Cplx> q;
  std::vector<CriticalPoint> pts;
  std::vector<std::vector<Cplx>> gens;  // images of the degree-2 generators at each point
  std::vector<RingRelation> relations;
  bool semisimple = false;
  Real unit_residual = 0;
};

inline Cplx taylor_eval(const Taylor<Q>& f, const Cplx& x) {
  Cplx s(0);
  for (size_t k = f.size(); k-- > 0;) s = s * x + Cplx(to_real(f[k]));
  return s;
}

inline Taylor<Q> taylor_xderiv(const Taylor<Q>& f) {
  Taylor<Q> r(f.size(), Q(0));
  for (size_t k = 0; k < f.size(); ++k) r[k] = f[k] * Q(long(k));
  return r;
}

// Small quantum ring at flat coordinates q, through the mirror map and the Jacobi ring:
// KS(p_i) = sum_a (d log y_a / d log q_i) y_a dW/dy_a.
inline QuantumRing quantum_ring(ModelId id, const std::vector<Cplx>& q, int order = 40, int precision = 40) {
  QuantumRing qr;
  qr.id = id;
  qr.q = q;
  const ToricModel& tm = toric_model(id);
  std::vector<Cplx> y;
  Mat<Cplx> jac;  // jac[a][i] = d log y_a / d log q_i
  if (weighted_model(id)) {
    y = {q.at(0)};
    jac = {{Cplx(1)}};
  } else {
    auto inv = inverse_mirror_map(mirror_map(tm, order));
    Cplx y1 = taylor_eval(inv.y1, q.at(0)), u = taylor_eval(inv.u, q.at(0));
    y = {y1, q.at(1) * u};
    Cplx dy1 = taylor_eval(taylor_xderiv(inv.y1), q[0]), du = taylor_eval(taylor_xderiv(inv.u), q[0]);
    jac = {{dy1 / y1, Cplx(0)}, {du / u, Cplx(1)}};
  }
  LGModel lg = lg_model(id, 1, y);
  qr.pts = critical_points(lg, precision);
  qr.gens.assign(jac[0].size(), {});
  for (auto& p : qr.pts) {
    auto dW = base_log_derivatives(lg, p.w);
    for (size_t i = 0; i < jac[0].size(); ++i) {
      Cplx v(0);
      for (size_t a = 0; a < dW.size(); ++a) v += jac[a][i] * dW[a];
      qr.gens[i].push_back(v);
    }
  }
  // distinct points and nonzero Hessians: the Jacobi ring is a product of fields
  qr.semisimple = qr.pts.size() == tm.alg->size();
  for (auto& p : qr.pts) qr.semisimple = qr.semisimple && p.hess != Cplx(0);
  auto rel = [&](const std::string& name, auto lhs, auto rhs, bool info = false) {
    RingRelation r{name, 0, info};
    for (size_t k = 0; k < qr.pts.size(); ++k) {
      Cplx L = lhs(k), R = rhs(k);
      r.residual = std::max(r.residual, cabs(L - R) / std::max(cabs(R), Real(1e-30)));
    }
    qr.relations.push_back(r);
  };
  auto& g = qr.gens;
  if (id == ModelId::P1113) {
    rel("p^6 = q/27", [&](size_t k) { return cpow_int(g[0][k], 6); }, [&](size_t) { return q[0] / Cplx(27); });
  } else if (id == ModelId::P112) {
    rel("p^4 = q/4", [&](size_t k) { return cpow_int(g[0][k], 4); }, [&](size_t) { return q[0] / Cplx(4); });
  } else {
    int r = lg_rank(id);
    std::string rs = std::to_string(r);
    // Batyrev form in the complex coordinates: the generators are y_a dW/dy_a
    std::vector<std::vector<Cplx>> d(2);
    for (auto& p : qr.pts) {
      auto dW = base_log_derivatives(lg, p.w);
      d[0].push_back(dW[0]);
      d[1].push_back(dW[1]);
    }
    auto dd = [&](size_t k) { return d[1][k] - Cplx(r) * d[0][k]; };
    rel("D2W(D2W-" + rs + "D1W) = y2", [&](size_t k) { return d[1][k] * dd(k); }, [&](size_t) { return y[1]; });
    rel("D1W^" + rs + " = y1 (D2W-" + rs + "D1W)^" + rs, [&](size_t k) { return cpow_int(d[0][k], r); },
        [&](size_t k) { return y[0] * cpow_int(dd(k), r); });
    // the same shapes read naively in flat coordinates pick up instanton corrections
    auto pp = [&](size_t k) { return g[1][k] - Cplx(r) * g[0][k]; };
    rel("p2(p2-" + rs + "p1) = q2", [&](size_t k) { return g[1][k] * pp(k); }, [&](size_t) { return q[1]; }, true);
    rel("p1^" + rs + " = q1 (p2-" + rs + "p1)^" + rs, [&](size_t k) { return cpow_int(g[0][k], r); },
        [&](size_t k) { return q[0] * cpow_int(pp(k), r); }, true);
    if (id == ModelId::F2)
      rel("p2(p2-2p1) = q2(1-q1)", [&](size_t k) { return g[1][k] * pp(k); },
          [&](size_t) { return q[1] * (Cplx(1) - q[0]); });
  }
  return qr;
}

// ---------------------------------------------------------------- P(1,1,1,3) connection matrix

// Matrix of p o in the basis 1, p, p^2, p^3, 1_1/3, 1_2/3 (column j is the image of the
// j-th basis vector); the atom QR stands for y^{1/3}.
inline Mat<Sym> connection_matrix_p1113() {
  auto m = mat_zero<Sym>(6, 6);
  m[1][0] = m[2][1] = m[3][2] = Sym(1);
  Sym c = Sym::atom(QR) * qfrac(1, 3);
  m[4][3] = m[5][4] = m[0][5] = c;
  return m;
}

inline Mat<Cplx> eval_mat(const Mat<Sym>& m, const AtomValues& av) {
  Mat<Cplx> r(m.size());
  for (size_t i = 0; i < m.size(); ++i)
    for (auto& x : m[i]) r[i].push_back(eval(x, av));
  return r;
}

inline std::vector<Cplx> eigenvalues_c(const Mat<Cplx>& m) {
  size_t n = m.size();
  Eigen::MatrixXcd M(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) M(i, j) = {double(m[i][j].real()), double(m[i][j].imag())};
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
  std::vector<Cplx> out;
  for (size_t i = 0; i < n; ++i) out.emplace_back(es.eigenvalues()(i).real(), es.eigenvalues()(i).imag());
  return out;
}

// Largest distance from each element of a to its nearest element of b (and back).
inline Real multiset_distance(const std::vector<Cplx>& a, const std::vector<Cplx>& b) {
  Real d = 0;
  auto one_way = [&](const std::vector<Cplx>& x, const std::vector<Cplx>& y) {
    for (auto& u : x) {
      Real best = -1;
      for (auto& v : y) {
        Real e = cabs(u - v);
        if (best < 0 || e < best) best = e;
      }
      d = std::max(d, best);
    }
  };
  one_way(a, b);
  one_way(b, a);
  return a.size() == b.size() ? d : Real(1e30);
}

}  // namespace crc
