#pragma once
// Scalar fields: exact rationals, the constant field K = Q(i, sqrt3) extended by
// Laurent monomials in transcendental atoms, and 50-digit complex numbers.

#include <array>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/polygamma.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <boost/multiprecision/gmp.hpp>

namespace crc {

using Q = boost::multiprecision::mpq_rational;
using Zint = boost::multiprecision::mpz_int;
using Real = boost::multiprecision::cpp_bin_float_50;
using Cplx = boost::multiprecision::cpp_complex_50;

struct math_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Q qfrac(long n, long d = 1) { return Q(n) / Q(d); }

inline Q parse_q(const std::string& s) {
  auto k = s.find('/');
  if (k == std::string::npos) return Q(Zint(s));
  return Q(Zint(s.substr(0, k))) / Q(Zint(s.substr(k + 1)));
}

inline std::string qstr(const Q& q) {
  std::ostringstream o;
  o << numerator(q);
  if (denominator(q) != 1) o << "/" << denominator(q);
  return o.str();
}

inline Real to_real(const Q& q) {
  return Real(numerator(q).str()) / Real(denominator(q).str());
}

inline std::string cstr(const Cplx& c, int digits = 20) {
  std::ostringstream o;
  o.precision(digits);
  o << std::scientific << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i";
  return o.str();
}

// ---------------------------------------------------------------- Q(i, sqrt3)

struct K {
  Q r0, r1, i0, i1;  // (r0 + r1 s) + i (i0 + i1 s), s^2 = 3

  K() = default;
  K(long v) : r0(v) {}
  K(const Q& v) : r0(v) {}
  K(Q a, Q b, Q c, Q d) : r0(std::move(a)), r1(std::move(b)), i0(std::move(c)), i1(std::move(d)) {}

  static K sqrt3() { return K(0, 1, 0, 0); }
  static K imag() { return K(0, 0, 1, 0); }

  bool zero() const { return r0 == 0 && r1 == 0 && i0 == 0 && i1 == 0; }
  bool operator==(const K& o) const { return r0 == o.r0 && r1 == o.r1 && i0 == o.i0 && i1 == o.i1; }
  bool operator!=(const K& o) const { return !(*this == o); }

  K operator+(const K& o) const { return K(r0 + o.r0, r1 + o.r1, i0 + o.i0, i1 + o.i1); }
  K operator-(const K& o) const { return K(r0 - o.r0, r1 - o.r1, i0 - o.i0, i1 - o.i1); }
  K operator-() const { return K(-r0, -r1, -i0, -i1); }
  K operator*(const K& o) const {
    // (a + b s)(c + d s) = ac + 3bd + (ad + bc)s
    auto m = [](const Q& a, const Q& b, const Q& c, const Q& d, Q& x, Q& y) {
      x = a * c + 3 * b * d;
      y = a * d + b * c;
    };
    Q rr0, rr1, ii0, ii1, ri0, ri1, ir0, ir1;
    m(r0, r1, o.r0, o.r1, rr0, rr1);
    m(i0, i1, o.i0, o.i1, ii0, ii1);
    m(r0, r1, o.i0, o.i1, ri0, ri1);
    m(i0, i1, o.r0, o.r1, ir0, ir1);
    return K(rr0 - ii0, rr1 - ii1, ri0 + ir0, ri1 + ir1);
  }
  K operator*(const Q& q) const { return K(r0 * q, r1 * q, i0 * q, i1 * q); }
  K& operator+=(const K& o) { return *this = *this + o; }
  K& operator-=(const K& o) { return *this = *this - o; }
  K& operator*=(const K& o) { return *this = *this * o; }

  K conj() const { return K(r0, r1, -i0, -i1); }
  K inv() const {
    if (zero()) throw math_error("division by zero in Q(i,sqrt3)");
    // |x|^2 = u + v s in Q(sqrt3)
    K n = (*this) * conj();
    Q u = n.r0, v = n.r1;
    Q den = u * u - 3 * v * v;
    K ninv(u / den, -v / den, 0, 0);
    return conj() * ninv;
  }
  K operator/(const K& o) const { return *this * o.inv(); }

  Cplx eval() const {
    Real s = boost::multiprecision::sqrt(Real(3));
    return Cplx(to_real(r0) + to_real(r1) * s, to_real(i0) + to_real(i1) * s);
  }

  std::string str() const {
    std::vector<std::string> parts;
    auto add = [&](const Q& c, const char* unit) {
      if (c == 0) return;
      std::string t = qstr(c);
      if (*unit) t = (c == 1 ? std::string() : c == -1 ? std::string("-") : t + "*") + unit;
      parts.push_back(t);
    };
    add(r0, "");
    add(r1, "sqrt3");
    add(i0, "i");
    add(i1, "i*sqrt3");
    if (parts.empty()) return "0";
    std::string out = parts[0];
    for (size_t k = 1; k < parts.size(); ++k) out += (parts[k][0] == '-' ? "" : "+") + parts[k];
    return out;
  }
};

// ---------------------------------------------------------------- Sym

// Transcendental atoms. G3 is Gamma(1/3)^3; psi atoms are polygammas at 1/3 and 2/3;
// QR is a root of the quantum parameter (q^(1/3) or q^(1/2) depending on context).
enum Atom : int { PI, G3, ZETA3, EGAMMA, LN2, PSI0A, PSI1A, PSI2A, PSI0B, PSI1B, PSI2B, QR, NATOM };

inline const char* atom_name(int a) {
  static const char* names[NATOM] = {"pi", "G", "zeta3", "gammaE", "ln2", "psi(1/3)", "psi1(1/3)",
                                     "psi2(1/3)", "psi(2/3)", "psi1(2/3)", "psi2(2/3)", "qr"};
  return names[a];
}

using Mono = std::array<std::int8_t, NATOM>;

class Sym {
 public:
  std::map<Mono, K> t;

  Sym() = default;
  Sym(long v) { if (v) t[Mono{}] = K(v); }
  Sym(const Q& v) { if (v != 0) t[Mono{}] = K(v); }
  Sym(const K& v) { if (!v.zero()) t[Mono{}] = v; }

  static Sym atom(int a, int e = 1) {
    Sym s;
    Mono m{};
    m[a] = static_cast<std::int8_t>(e);
    s.t[m] = K(1);
    return s;
  }
  static Sym pi(int e = 1) { return atom(PI, e); }
  static Sym sqrt3() { return Sym(K::sqrt3()); }
  static Sym imag() { return Sym(K::imag()); }
  // Gamma(2/3)^3 = 8 pi^3 / (3 sqrt3 G3)
  static Sym gamma23_cubed() {
    Sym s;
    Mono m{};
    m[PI] = 3;
    m[G3] = -1;
    s.t[m] = K(8) / (K(3) * K::sqrt3());
    return s;
  }

  bool zero() const { return t.empty(); }
  bool operator==(const Sym& o) const { return t == o.t; }
  bool operator!=(const Sym& o) const { return !(*this == o); }

  Sym operator+(const Sym& o) const {
    Sym r = *this;
    r += o;
    return r;
  }
  Sym& operator+=(const Sym& o) {
    for (auto& [m, c] : o.t) {
      auto it = t.find(m);
      if (it == t.end()) t.emplace(m, c);
      else {
        it->second += c;
        if (it->second.zero()) t.erase(it);
      }
    }
    return *this;
  }
  Sym operator-() const {
    Sym r = *this;
    for (auto& [m, c] : r.t) c = -c;
    return r;
  }
  Sym operator-(const Sym& o) const { return *this + (-o); }
  Sym& operator-=(const Sym& o) { return *this += -o; }
  Sym operator*(const Sym& o) const {
    Sym r;
    for (auto& [m1, c1] : t)
      for (auto& [m2, c2] : o.t) {
        Mono m;
        for (int a = 0; a < NATOM; ++a) m[a] = static_cast<std::int8_t>(m1[a] + m2[a]);
        Sym term;
        term.t[m] = c1 * c2;
        r += term;
      }
    return r;
  }
  Sym& operator*=(const Sym& o) { return *this = *this * o; }
  Sym operator*(const Q& q) const {
    if (q == 0) return Sym();
    Sym r = *this;
    for (auto& [m, c] : r.t) c = c * q;
    return r;
  }

  // Only single-term elements are invertible in this ring.
  Sym inv() const {
    if (t.size() != 1) throw math_error("Sym::inv: element is not a monomial: " + str());
    auto& [m, c] = *t.begin();
    Mono mi;
    for (int a = 0; a < NATOM; ++a) mi[a] = static_cast<std::int8_t>(-m[a]);
    Sym r;
    r.t[mi] = c.inv();
    return r;
  }
  Sym operator/(const Sym& o) const { return *this * o.inv(); }

  // Part free of the given atom.
  K scalar() const {
    auto it = t.find(Mono{});
    return it == t.end() ? K() : it->second;
  }
  bool is_constant() const { return t.empty() || (t.size() == 1 && t.begin()->first == Mono{}); }

  std::string str() const {
    if (t.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto& [m, c] : t) {
      std::string cs = c.str();
      bool compound = cs.find_first_of("+-", 1) != std::string::npos;
      std::string ms;
      for (int a = 0; a < NATOM; ++a)
        if (m[a]) {
          if (!ms.empty()) ms += "*";
          ms += atom_name(a);
          if (m[a] != 1) ms += "^" + std::to_string(int(m[a]));
        }
      std::string term;
      if (ms.empty()) term = cs;
      else if (cs == "1") term = ms;
      else if (cs == "-1") term = "-" + ms;
      else term = (compound ? "(" + cs + ")" : cs) + "*" + ms;
      if (!first && term[0] != '-') out += "+";
      out += term;
      first = false;
    }
    return out;
  }
};

inline Sym operator*(const Q& q, const Sym& s) { return s * q; }

// Numeric values of the atoms; QR is supplied by the caller.
struct AtomValues {
  std::array<Cplx, NATOM> v;
  explicit AtomValues(Cplx qroot = Cplx(0)) {
    using boost::math::polygamma;
    Real third = Real(1) / 3, two3 = Real(2) / 3;
    v[PI] = Cplx(boost::math::constants::pi<Real>());
    Real g = boost::math::tgamma(third);
    v[G3] = Cplx(g * g * g);
    v[ZETA3] = Cplx(boost::math::zeta(Real(3)));
    v[EGAMMA] = Cplx(boost::math::constants::euler<Real>());
    v[LN2] = Cplx(boost::multiprecision::log(Real(2)));
    v[PSI0A] = Cplx(boost::math::digamma(third));
    v[PSI1A] = Cplx(polygamma(1, third));
    v[PSI2A] = Cplx(polygamma(2, third));
    v[PSI0B] = Cplx(boost::math::digamma(two3));
    v[PSI1B] = Cplx(polygamma(1, two3));
    v[PSI2B] = Cplx(polygamma(2, two3));
    v[QR] = qroot;
  }
};

inline Cplx eval(const Sym& s, const AtomValues& av) {
  Cplx r(0);
  for (auto& [m, c] : s.t) {
    Cplx term = c.eval();
    for (int a = 0; a < NATOM; ++a) {
      if (!m[a]) continue;
      Cplx base = av.v[a];
      int e = m[a];
      if (e < 0) {
        base = Cplx(1) / base;
        e = -e;
      }
      for (int k = 0; k < e; ++k) term *= base;
    }
    r += term;
  }
  return r;
}

// ---------------------------------------------------------------- field traits

template <class S>
struct Field;

template <>
struct Field<Q> {
  static Q from(const Q& q) { return q; }
  static bool zero(const Q& x) { return x == 0; }
  static Q inv(const Q& x) {
    if (x == 0) throw math_error("division by zero");
    return 1 / x;
  }
  static std::string str(const Q& x) { return qstr(x); }
};

template <>
struct Field<Sym> {
  static Sym from(const Q& q) { return Sym(q); }
  static bool zero(const Sym& x) { return x.zero(); }
  static Sym inv(const Sym& x) { return x.inv(); }
  static std::string str(const Sym& x) { return x.str(); }
};

template <>
struct Field<Cplx> {
  static Cplx from(const Q& q) { return Cplx(to_real(q)); }
  static bool zero(const Cplx& x) { return x.real() == 0 && x.imag() == 0; }
  static Cplx inv(const Cplx& x) {
    if (zero(x)) throw math_error("division by zero");
    return Cplx(1) / x;
  }
  static std::string str(const Cplx& x) { return cstr(x); }
};

inline Real cabs(const Cplx& c) { return boost::multiprecision::abs(c); }

}  // namespace crc
