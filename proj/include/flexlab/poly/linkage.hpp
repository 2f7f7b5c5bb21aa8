#pragma once

#include <string>
#include <vector>

#include "flexlab/geometry.hpp"
#include "flexlab/poly/algebra.hpp"
#include "flexlab/poly/resultant.hpp"

namespace flexlab::poly {

// Variables shared by every linkage polynomial of one geometry.
// E2 uses squared lengths r2_ij = r_ij^2; H2/S2 use u_ij = cosh r_ij or cos r_ij.
// Short names: r = r_00, R_i = r_i0, r_j = r_0j (and u, U_i, u_j likewise).
inline RingPtr linkage_ring(GeometryKind kind) {
  static const RingPtr euclid = Ring::make({"T1", "T2", "t1", "t2", "lambda", "r2_00", "r2_01", "r2_02", "r2_10",
                                            "r2_11", "r2_12", "r2_20", "r2_21", "r2_22"});
  static const RingPtr curved =
      Ring::make({"T1", "T2", "t1", "t2", "lambda", "u00", "u01", "u02", "u10", "u11", "u12", "u20", "u21", "u22"});
  return kind == GeometryKind::Euclidean ? euclid : curved;
}

inline std::string length_symbol(GeometryKind kind, int i, int j) {
  return (kind == GeometryKind::Euclidean ? "r2_" : "u") + std::to_string(i) + std::to_string(j);
}

inline Poly length_var(GeometryKind kind, int i, int j) {
  return Poly::var(linkage_ring(kind), length_symbol(kind, i, j));
}

namespace detail {

inline Poly halve_exponent(const Poly& p, std::size_t var) {
  std::vector<Poly::Term> out;
  for (auto t : p.terms()) {
    if (t.first.e[var] % 2) throw IdentityViolation("odd power of l survived in the distance expression");
    t.first.e[var] /= 2;
    out.push_back(t);
  }
  return Poly::from_terms(p.ring(), std::move(out));
}

// f for one rod in the local ring {T, t, ...}; returned in the linkage ring.
inline Poly build_f_euclidean(int i, int j) {
  auto R = Ring::make({"T", "t", "rr", "RR", "rj", "rij"});
  auto v = [&](const char* n) { return Poly::var(R, n); };
  Poly T = v("T"), t = v("t"), rr = v("rr"), RR = v("RR"), rj = v("rj"), rij = v("rij");
  Poly one(R, 1);
  // r(1 + T - t) is the rod vector; its conjugate uses conj(T) = R_i^2/(r^2 T), conj(t) = r_j^2/(r^2 t).
  RationalFunction z(one + T - t);
  RationalFunction zbar = RationalFunction(one) + RationalFunction(RR, rr * T) - RationalFunction(rj, rr * t);
  RationalFunction defect = RationalFunction(rr) * z * zbar - RationalFunction(rij);
  if (!(defect.den == T * t)) throw IdentityViolation("unexpected denominator in the Euclidean rod expression");
  auto L = linkage_ring(GeometryKind::Euclidean);
  std::vector<Poly> images = {
      Poly::var(L, "T" + std::to_string(i)), Poly::var(L, "t" + std::to_string(j)),
      length_var(GeometryKind::Euclidean, 0, 0), length_var(GeometryKind::Euclidean, i, 0),
      length_var(GeometryKind::Euclidean, 0, j), length_var(GeometryKind::Euclidean, i, j)};
  return defect.num.compose(L, images);
}

inline Poly build_f_curved(GeometryKind kind, int i, int j) {
  const bool hyp = kind == GeometryKind::Hyperbolic;
  auto R = Ring::make({"T", "t", "l", "L2", "lj2", "u", "U", "uj", "uij"});
  auto v = [&](const char* n) { return Poly::var(R, n); };
  Poly T = v("T"), t = v("t"), l = v("l"), L2 = v("L2"), lj2 = v("lj2");
  Poly one(R, 1);
  using RF = RationalFunction;
  // Model coordinates: p_i = l T, q_j = M(l t) where M is the isometry taking 0 to p_0 = l.
  // H2: M(z) = (z + l)/(1 + l z); S2 (stereographic): M(z) = (z + l)/(1 - l z).
  Poly l2 = l * l;
  auto qhat = [&](const RF& z) {  // q/l as a function of the parameter
    RF lz = RF(hyp ? l2 : -l2) * z;
    return (RF(one) + z) / (RF(one) + lz);
  };
  RF Tr(T), tr(t);
  RF tbar(lj2, l2 * t);
  RF p = RF(l) * Tr;
  RF pbar(L2, l * T);
  RF q = RF(l) * qhat(tr);
  RF qbar = RF(l) * qhat(tbar);
  RF diff = (p - q) * (pbar - qbar);
  RF pp = p * pbar, qq = q * qbar;
  RF cosd = hyp ? RF(one) + RF(Poly(R, 2)) * diff / ((RF(one) - pp) * (RF(one) - qq))
                : RF(one) - RF(Poly(R, 2)) * diff / ((RF(one) + pp) * (RF(one) + qq));
  RF defect = cosd - RF(v("uij"));
  const std::size_t il = R->index("l");
  RF even(halve_exponent(defect.num, il), halve_exponent(defect.den, il));
  // l^2 = rho(u)^2 etc.
  Poly u = v("u"), U = v("U"), uj = v("uj");
  auto rho2 = [&](const RF& f, std::size_t var, const Poly& w) {
    return hyp ? f.substitute(var, w - one, w + one) : f.substitute(var, one - w, one + w);
  };
  even = rho2(even, il, u);
  even = rho2(even, R->index("L2"), U);
  even = rho2(even, R->index("lj2"), uj);
  // The reduced denominator is a unit multiple of (u+1) T t; f is normalised as 4 (u+1) T t times the defect.
  Poly f = exact_quotient(even.num * (Poly(R, 4) * (u + one) * T * t), even.den, "rod polynomial normalisation");
  auto L = linkage_ring(kind);
  std::vector<Poly> images = {Poly::var(L, "T" + std::to_string(i)),
                              Poly::var(L, "t" + std::to_string(j)),
                              Poly(L),
                              Poly(L),
                              Poly(L),
                              length_var(kind, 0, 0),
                              length_var(kind, i, 0),
                              length_var(kind, 0, j),
                              length_var(kind, i, j)};
  if (f.degree(il) || f.degree(R->index("L2")) || f.degree(R->index("lj2")))
    throw IdentityViolation("model radii survived the substitution");
  return f.compose(L, images);
}

}  // namespace detail

// f_ij(T_i, t_j): the rod p_i q_j has its prescribed length iff f_ij = 0.
inline Poly build_f(GeometryKind kind, int i, int j) {
  if (i < 1 || i > 2 || j < 1 || j > 2) throw UsageError("build_f indices are 1 or 2");
  return kind == GeometryKind::Euclidean ? detail::build_f_euclidean(i, j) : detail::build_f_curved(kind, i, j);
}

inline Poly F_normalizer(GeometryKind kind, int i) {
  auto L = linkage_ring(kind);
  if (kind == GeometryKind::Euclidean) return length_var(kind, i, 0);
  Poly one(L, 1);
  Poly u = length_var(kind, 0, 0), U = length_var(kind, i, 0);
  return Poly(L, 16) * (one + u).pow(4) * (one - U * U);
}

inline Poly raw_F(GeometryKind kind, int i) {
  return sylvester_resultant(build_f(kind, i, 1), build_f(kind, i, 2), "T" + std::to_string(i), 2, 2);
}

// F_i(t_1, t_2) = Res_{T_i}(f_i1, f_i2) divided by its normaliser.
inline Poly build_F(GeometryKind kind, int i) {
  if (i < 1 || i > 2) throw UsageError("build_F index is 1 or 2");
  return exact_quotient(raw_F(kind, i), F_normalizer(kind, i), "F normalisation");
}

}  // namespace flexlab::poly
