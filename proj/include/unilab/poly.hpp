#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "errors.hpp"

namespace unilab {

using cplx = std::complex<double>;

// Dense polynomial, coefficients ascending: p[k] multiplies z^k.
using poly = std::vector<cplx>;

inline cplx poly_eval(const poly& p, cplx z) {
  cplx acc{0.0, 0.0};
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
  return acc;
}

inline poly poly_derivative(const poly& p) {
  if (p.size() <= 1) return {};
  poly d(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = double(k) * p[k];
  return d;
}

inline poly poly_trim(poly p, double eps = 0.0) {
  while (!p.empty() && std::abs(p.back()) <= eps) p.pop_back();
  return p;
}

inline int poly_degree(const poly& p, double eps = 0.0) {
  for (std::size_t k = p.size(); k-- > 0;)
    if (std::abs(p[k]) > eps) return int(k);
  return -1; // zero polynomial
}

inline poly poly_add(const poly& a, const poly& b) {
  poly r(std::max(a.size(), b.size()), cplx{0.0, 0.0});
  for (std::size_t k = 0; k < a.size(); ++k) r[k] += a[k];
  for (std::size_t k = 0; k < b.size(); ++k) r[k] += b[k];
  return r;
}

inline poly poly_scale(poly p, cplx c) {
  for (auto& x : p) x *= c;
  return p;
}

inline poly poly_mul(const poly& a, const poly& b) {
  if (a.empty() || b.empty()) return {};
  poly r(a.size() + b.size() - 1, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

// Coefficients of p(c + h) in powers of h (Taylor shift, Ruffini-Horner).
inline poly poly_shift(poly p, cplx c) {
  if (p.empty()) return p;
  const std::size_t n = p.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j-- > i;) p[j] += c * p[j + 1];
  return p;
}

// First `order` coefficients of 1/q as a power series; q[0] must be nonzero.
inline poly series_inverse(const poly& q, int order) {
  if (q.empty() || q[0] == cplx{0.0, 0.0})
    throw precondition_error("series_inverse: constant term vanishes");
  poly r(order, cplx{0.0, 0.0});
  r[0] = 1.0 / q[0];
  for (int k = 1; k < order; ++k) {
    cplx s{0.0, 0.0};
    for (int j = 1; j <= k && j < int(q.size()); ++j) s += q[j] * r[k - j];
    r[k] = -s / q[0];
  }
  return r;
}

inline poly series_mul(const poly& a, const poly& b, int order) {
  poly r(order, cplx{0.0, 0.0});
  for (int i = 0; i < order && i < int(a.size()); ++i)
    for (int j = 0; i + j < order && j < int(b.size()); ++j) r[i + j] += a[i] * b[j];
  return r;
}

} // namespace unilab
