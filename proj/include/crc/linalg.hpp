#pragma once
// Small dense matrices over any of the scalar fields.

#include <vector>

#include "scalar.hpp"

namespace crc {

template <class S>
using Mat = std::vector<std::vector<S>>;

template <class S>
Mat<S> mat_zero(size_t r, size_t c) {
  return Mat<S>(r, std::vector<S>(c, S(0)));
}

template <class S>
Mat<S> mat_id(size_t n) {
  auto m = mat_zero<S>(n, n);
  for (size_t i = 0; i < n; ++i) m[i][i] = S(1);
  return m;
}

template <class S>
Mat<S> mat_mul(const Mat<S>& a, const Mat<S>& b) {
  size_t r = a.size(), k = b.size(), c = k ? b[0].size() : 0;
  auto m = mat_zero<S>(r, c);
  for (size_t i = 0; i < r; ++i)
    for (size_t l = 0; l < k; ++l) {
      if (Field<S>::zero(a[i][l])) continue;
      for (size_t j = 0; j < c; ++j) m[i][j] += a[i][l] * b[l][j];
    }
  return m;
}

template <class S>
Mat<S> mat_sub(const Mat<S>& a, const Mat<S>& b) {
  auto m = a;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) m[i][j] -= b[i][j];
  return m;
}

template <class S>
Mat<S> transpose(const Mat<S>& a) {
  if (a.empty()) return a;
  auto m = mat_zero<S>(a[0].size(), a.size());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) m[j][i] = a[i][j];
  return m;
}

namespace detail {
inline bool better_pivot(const Q& cand, const Q& best) { return best == 0 && cand != 0; }
inline bool better_pivot(const Cplx& cand, const Cplx& best) { return cabs(cand) > cabs(best); }
}  // namespace detail

// Gauss-Jordan inverse; throws on singular input.
template <class S>
Mat<S> mat_inv(Mat<S> a) {
  size_t n = a.size();
  auto inv = mat_id<S>(n);
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    for (size_t r = col + 1; r < n; ++r)
      if (detail::better_pivot(a[r][col], a[piv][col])) piv = r;
    if (Field<S>::zero(a[piv][col])) throw math_error("singular matrix");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    S f = Field<S>::inv(a[col][col]);
    for (size_t j = 0; j < n; ++j) {
      a[col][j] *= f;
      inv[col][j] *= f;
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == col || Field<S>::zero(a[r][col])) continue;
      S g = a[r][col];
      for (size_t j = 0; j < n; ++j) {
        a[r][j] -= g * a[col][j];
        inv[r][j] -= g * inv[col][j];
      }
    }
  }
  return inv;
}

inline size_t rank_q(Mat<Q> a) {
  size_t rows = a.size(), cols = rows ? a[0].size() : 0, rk = 0;
  for (size_t c = 0; c < cols && rk < rows; ++c) {
    size_t piv = rk;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rk]);
    for (size_t r = 0; r < rows; ++r) {
      if (r == rk || a[r][c] == 0) continue;
      Q f = a[r][c] / a[rk][c];
      for (size_t j = c; j < cols; ++j) a[r][j] -= f * a[rk][j];
    }
    ++rk;
  }
  return rk;
}

template <class S>
std::vector<S> mat_vec(const Mat<S>& a, const std::vector<S>& v) {
  std::vector<S> r(a.size(), S(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) r[i] += a[i][j] * v[j];
  return r;
}

inline Real max_abs(const Mat<Cplx>& m) {
  Real r = 0;
  for (auto& row : m)
    for (auto& x : row) r = std::max(r, cabs(x));
  return r;
}

template <class S, class T>
Mat<T> mat_cast(const Mat<S>& m, T (*f)(const S&)) {
  Mat<T> r(m.size());
  for (size_t i = 0; i < m.size(); ++i)
    for (auto& x : m[i]) r[i].push_back(f(x));
  return r;
}

}  // namespace crc
