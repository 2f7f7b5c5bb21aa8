#pragma once

#include <string>
#include <utility>
#include <vector>

#include "flexlab/poly/mvpoly.hpp"

namespace flexlab::poly {

using PolyMatrix = std::vector<std::vector<Poly>>;

// Fraction-free Gaussian elimination (Bareiss); every division is exact.
inline Poly bareiss_determinant(PolyMatrix a, const RingPtr& ring) {
  const std::size_t n = a.size();
  if (n == 0) return Poly(ring, 1);
  for (auto& row : a)
    if (row.size() != n) throw UsageError("determinant of a non-square matrix");
  Poly prev(ring, 1);
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k].is_zero()) {
      // Prefer the sparsest available pivot; smaller pivots keep intermediate growth down.
      std::size_t best = n;
      for (std::size_t i = k + 1; i < n; ++i)
        if (!a[i][k].is_zero() && (best == n || a[i][k].size() < a[best][k].size())) best = i;
      if (best == n) return Poly(ring);
      std::swap(a[k], a[best]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Poly num = a[k][k] * a[i][j] - a[i][k] * a[k][j];
        a[i][j] = exact_quotient(num, prev, "Bareiss step");
      }
      a[i][k] = Poly(ring);
    }
    prev = a[k][k];
  }
  Poly det = a[n - 1][n - 1];
  return negate ? -det : det;
}

// Sylvester matrix at the declared (formal) degrees; vanishing leading coefficients allowed.
inline PolyMatrix sylvester_matrix(const Poly& p, const Poly& q, std::size_t var, unsigned dp, unsigned dq) {
  if (p.degree(var) > dp || q.degree(var) > dq) throw UsageError("actual degree exceeds formal degree");
  auto pc = p.coefficients(var);
  auto qc = q.coefficients(var);
  const RingPtr& ring = p.ring() ? p.ring() : q.ring();
  pc.resize(dp + 1, Poly(ring));
  qc.resize(dq + 1, Poly(ring));
  const std::size_t n = dp + dq;
  PolyMatrix m(n, std::vector<Poly>(n, Poly(ring)));
  for (std::size_t r = 0; r < dq; ++r)
    for (std::size_t k = 0; k <= dp; ++k) m[r][r + k] = pc[dp - k];
  for (std::size_t r = 0; r < dp; ++r)
    for (std::size_t k = 0; k <= dq; ++k) m[dq + r][r + k] = qc[dq - k];
  return m;
}

// The 4x4 Sylvester determinant of two quadratics, expanded by hand.
inline Poly resultant22(const std::vector<Poly>& a, const std::vector<Poly>& b) {
  Poly x = a[2] * b[0] - a[0] * b[2];
  return x * x - (a[2] * b[1] - a[1] * b[2]) * (a[1] * b[0] - a[0] * b[1]);
}

inline Poly sylvester_resultant(const Poly& p, const Poly& q, std::size_t var, unsigned dp, unsigned dq) {
  const RingPtr& ring = p.ring() ? p.ring() : q.ring();
  if (dp == 0 && dq == 0) return Poly(ring, 1);
  if (dp == 2 && dq == 2) {
    if (p.degree(var) > 2 || q.degree(var) > 2) throw UsageError("actual degree exceeds formal degree");
    auto a = p.coefficients(var), b = q.coefficients(var);
    a.resize(3, Poly(ring));
    b.resize(3, Poly(ring));
    return resultant22(a, b);
  }
  return bareiss_determinant(sylvester_matrix(p, q, var, dp, dq), ring);
}

inline Poly sylvester_resultant(const Poly& p, const Poly& q, std::string_view var, unsigned dp, unsigned dq) {
  const RingPtr& ring = p.ring() ? p.ring() : q.ring();
  return sylvester_resultant(p, q, ring->index(var), dp, dq);
}

// Res_{(2,dg)}(c, g) for a quadratic c, through the remainder alpha x + beta of
// c2^(dg-1) g modulo c. Returns (N, D) with Res = N / D and D = c2^(dg-1); no division is done.
inline std::pair<Poly, Poly> quadratic_resultant(const Poly& c, const Poly& g, std::size_t var, unsigned dg) {
  if (c.degree(var) > 2 || g.degree(var) > dg) throw UsageError("actual degree exceeds formal degree");
  if (dg < 1) throw UsageError("quadratic_resultant needs dg >= 1");
  const RingPtr& ring = c.ring();
  auto cc = c.coefficients(var);
  cc.resize(3, Poly(ring));
  if (cc[2].is_zero()) throw UsageError("quadratic_resultant needs a nonzero leading coefficient");
  auto gc = g.coefficients(var);
  gc.resize(dg + 1, Poly(ring));
  for (unsigned k = dg; k >= 2; --k) {
    Poly lead = gc[k];
    for (auto& x : gc) x *= cc[2];
    gc[k] = Poly(ring);
    gc[k - 1] -= lead * cc[1];
    gc[k - 2] -= lead * cc[0];
  }
  const Poly& beta = gc[0];
  const Poly& alpha = gc[1];
  Poly n = alpha * alpha * cc[0] - alpha * beta * cc[1] + beta * beta * cc[2];
  return {n, cc[2].pow(dg - 1)};
}

// Formal discriminant at degree d, computed once for generic coefficients
// a_0..a_d and then specialised, so vanishing leading coefficients are fine.
inline Poly formal_discriminant(const Poly& p, std::size_t var, unsigned d) {
  if (d < 1) throw UsageError("discriminant needs formal degree >= 1");
  if (p.degree(var) > d) throw UsageError("actual degree exceeds formal degree");
  const RingPtr& ring = p.ring();
  if (d == 1) return Poly(ring, 1);
  std::vector<std::string> names;
  for (unsigned k = 0; k <= d; ++k) names.push_back("a" + std::to_string(k));
  names.push_back("x");
  auto g = Ring::make(names);
  Poly x = Poly::var(g, d + 1);
  Poly generic(g);
  for (unsigned k = 0; k <= d; ++k) generic += Poly::var(g, k) * x.pow(k);
  Poly res = sylvester_resultant(generic, generic.derivative(d + 1), d + 1, d, d - 1);
  Poly disc = exact_quotient(res, Poly::var(g, d), "discriminant normalisation");
  if ((d * (d - 1) / 2) % 2) disc = -disc;
  auto cs = p.coefficients(var);
  cs.resize(d + 1, Poly(ring));
  std::vector<Poly> images(cs.begin(), cs.end());
  images.push_back(Poly(ring));
  return disc.compose(ring, images);
}

inline Poly formal_discriminant(const Poly& p, std::string_view var, unsigned d) {
  return formal_discriminant(p, p.ring()->index(var), d);
}

}  // namespace flexlab::poly
