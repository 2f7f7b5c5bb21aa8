#pragma once

#include <future>
#include <map>
#include <mutex>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "flexlab/poly/algebra.hpp"
#include "flexlab/poly/linkage.hpp"
#include "flexlab/poly/resultant.hpp"

namespace flexlab::poly {

enum class IdentityStatus { Ok, Fail, Inconclusive };

inline std::string to_string(IdentityStatus s) {
  switch (s) {
    case IdentityStatus::Ok: return "ok";
    case IdentityStatus::Fail: return "fail";
    case IdentityStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct IdentityResult {
  std::string suite;
  std::string identity;
  IdentityStatus status = IdentityStatus::Fail;
  std::optional<UnitCertificate> certificate;
  std::size_t difference_terms = 0;
  std::string detail;
};

inline nlohmann::json certificate_json(const UnitCertificate& c) {
  nlohmann::json j;
  j["status"] = c.status == UnitCertificate::Status::Equivalent      ? "equivalent"
                : c.status == UnitCertificate::Status::Inconclusive ? "inconclusive"
                                                                    : "not_equivalent";
  j["n"] = c.n.get_str();
  nlohmann::json mu_n = nlohmann::json::object(), mu_d = nlohmann::json::object();
  for (std::size_t k = 0; k < c.exponent.size(); ++k) {
    if (c.exponent[k] > 0) mu_n[c.factors[k]] = c.exponent[k];
    if (c.exponent[k] < 0) mu_d[c.factors[k]] = -c.exponent[k];
  }
  j["mu_n"] = mu_n;
  j["mu_d"] = mu_d;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

struct VerifyReport {
  std::vector<IdentityResult> items;

  bool passed() const {
    for (auto& r : items)
      if (r.status != IdentityStatus::Ok) return false;
    return !items.empty();
  }
  std::size_t count(IdentityStatus s) const {
    std::size_t n = 0;
    for (auto& r : items) n += r.status == s;
    return n;
  }
  void append(const VerifyReport& o) { items.insert(items.end(), o.items.begin(), o.items.end()); }

  std::string text() const {
    std::ostringstream os;
    for (auto& r : items) {
      os << to_string(r.status) << "  [" << r.suite << "] " << r.identity;
      if (r.certificate && r.certificate->status == UnitCertificate::Status::Equivalent) {
        os << "  (n = " << r.certificate->n.get_str();
        for (std::size_t k = 0; k < r.certificate->exponent.size(); ++k)
          if (int e = r.certificate->exponent[k]) os << ", (" << r.certificate->factors[k] << ")^" << e;
        os << ")";
      }
      if (!r.detail.empty()) os << "  -- " << r.detail;
      if (r.status == IdentityStatus::Fail && r.difference_terms) os << "  [difference: " << r.difference_terms << " terms]";
      os << "\n";
    }
    os << count(IdentityStatus::Ok) << " ok, " << count(IdentityStatus::Fail) << " failed, "
       << count(IdentityStatus::Inconclusive) << " inconclusive\n";
    return os.str();
  }

  nlohmann::json json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (auto& r : items) {
      nlohmann::json j;
      j["suite"] = r.suite;
      j["identity"] = r.identity;
      j["status"] = to_string(r.status);
      j["unit_certificate"] = r.certificate ? certificate_json(*r.certificate) : nlohmann::json(nullptr);
      j["difference_terms"] = r.difference_terms;
      if (!r.detail.empty()) j["detail"] = r.detail;
      arr.push_back(std::move(j));
    }
    return arr;
  }
};

namespace detail {

inline IdentityResult exact_identity(std::string suite, std::string name, const Poly& lhs, const Poly& rhs) {
  IdentityResult r;
  r.suite = std::move(suite);
  r.identity = std::move(name);
  Poly diff = lhs - rhs;
  r.difference_terms = diff.size();
  r.status = diff.is_zero() ? IdentityStatus::Ok : IdentityStatus::Fail;
  return r;
}

inline IdentityResult unit_identity(std::string suite, std::string name, const Poly& lhs, const Poly& rhs,
                                    const UnitSet& units) {
  IdentityResult r;
  r.suite = std::move(suite);
  r.identity = std::move(name);
  auto cert = unit_equivalent(lhs, rhs, units);
  switch (cert.status) {
    case UnitCertificate::Status::Equivalent: r.status = IdentityStatus::Ok; break;
    case UnitCertificate::Status::Inconclusive: r.status = IdentityStatus::Inconclusive; break;
    case UnitCertificate::Status::NotEquivalent: {
      r.status = IdentityStatus::Fail;
      Rational n = lhs.is_zero() || rhs.is_zero() ? Rational(1) : lhs.leading().second / rhs.leading().second;
      r.difference_terms = (lhs - rhs * n).size();
      break;
    }
  }
  r.certificate = std::move(cert);
  return r;
}

inline IdentityResult bool_identity(std::string suite, std::string name, bool ok, std::string detail = {}) {
  IdentityResult r;
  r.suite = std::move(suite);
  r.identity = std::move(name);
  r.status = ok ? IdentityStatus::Ok : IdentityStatus::Fail;
  r.detail = std::move(detail);
  return r;
}

inline Poly substitute_named(const Poly& p, std::string_view var, const Poly& num, const Poly& den, unsigned deg) {
  return p.substitute_with_degree(p.ring()->index(var), num, den, deg);
}

}  // namespace detail

// F_i is the expensive object of every suite; it is built once per geometry.
inline const Poly& cached_F(GeometryKind kind, int i) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, Poly> cache;
  {
    std::lock_guard lock(mu);
    auto it = cache.find({static_cast<int>(kind), i});
    if (it != cache.end()) return it->second;
  }
  Poly F;
  // Same f_ij give the same resultant; S2 reuses the H2 build when the f_ij agree.
  if (kind == GeometryKind::Spherical && build_f(kind, i, 1) == build_f(GeometryKind::Hyperbolic, i, 1) &&
      build_f(kind, i, 2) == build_f(GeometryKind::Hyperbolic, i, 2))
    F = cached_F(GeometryKind::Hyperbolic, i);
  else
    F = build_F(kind, i);
  std::lock_guard lock(mu);
  return cache.emplace(std::pair{static_cast<int>(kind), i}, std::move(F)).first->second;
}

inline UnitSet u_units(const RingPtr& ring, const std::vector<std::string>& vars) {
  return UnitSet::u_pm_one(ring, vars);
}

inline std::vector<std::string> all_u_names(GeometryKind kind) {
  std::vector<std::string> v;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) v.push_back(length_symbol(kind, i, j));
  return v;
}

// ---- structure --------------------------------------------------------------

inline VerifyReport verify_structure(GeometryKind kind) {
  VerifyReport rep;
  const std::string suite = to_string(kind);
  auto L = linkage_ring(kind);
  auto V = [&](int i, int j) { return length_var(kind, i, j); };
  const bool euclid = kind == GeometryKind::Euclidean;
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j) {
      std::string tag = "f_" + std::to_string(i) + std::to_string(j);
      Poly f = build_f(kind, i, j);
      if (euclid) {
        Poly T = Poly::var(L, "T" + std::to_string(i)), t = Poly::var(L, "t" + std::to_string(j));
        Poly one(L, 1);
        Poly shown = (one + T - t) * (V(0, 0) * T * t + V(i, 0) * t - V(0, j) * T) - V(i, j) * T * t;
        rep.items.push_back(detail::exact_identity(suite, tag + " equals the displayed bidegree (2,2) form", f, shown));
      } else {
        rep.items.push_back(detail::bool_identity(suite, tag + " has 72 monomials", f.size() == 72,
                                                  "observed " + std::to_string(f.size())));
        if (kind == GeometryKind::Spherical)
          rep.items.push_back(detail::exact_identity(suite, tag + " coincides with the hyperbolic expression", f,
                                                     build_f(GeometryKind::Hyperbolic, i, j)));
      }
      // T_i <-> -t_j together with the swap of the two circle radii through p_0 and q_0.
      std::vector<Poly> img;
      for (std::size_t v = 0; v < L->size(); ++v) img.push_back(Poly::var(L, v));
      img[L->index("T" + std::to_string(i))] = -Poly::var(L, "t" + std::to_string(j));
      img[L->index("t" + std::to_string(j))] = -Poly::var(L, "T" + std::to_string(i));
      img[L->index(length_symbol(kind, i, 0))] = V(0, j);
      img[L->index(length_symbol(kind, 0, j))] = V(i, 0);
      rep.items.push_back(detail::exact_identity(
          suite, tag + " invariant under T_i <-> -t_j with " + length_symbol(kind, i, 0) + " <-> " + length_symbol(kind, 0, j),
          f.compose(L, img), f));
    }
  for (int i = 1; i <= 2; ++i) {
    std::string tag = "F_" + std::to_string(i);
    try {
      const Poly& F = cached_F(kind, i);
      std::size_t want = euclid ? 126 : 445;
      rep.items.push_back(detail::bool_identity(suite, tag + " has " + std::to_string(want) + " monomials",
                                                F.size() == want, "observed " + std::to_string(F.size())));
      unsigned d1 = F.degree("t1"), d2 = F.degree("t2");
      rep.items.push_back(detail::bool_identity(suite, tag + " has degree 4 in t1 and in t2", d1 == 4 && d2 == 4,
                                                "observed (" + std::to_string(d1) + ", " + std::to_string(d2) + ")"));
      rep.items.push_back(detail::bool_identity(suite, tag + " normaliser " + F_normalizer(kind, i).to_string() +
                                                           " divides Res_T" + std::to_string(i) + " exactly",
                                                true));
    } catch (const IdentityViolation& e) {
      rep.items.push_back(detail::bool_identity(suite, tag + " normaliser divides the resultant exactly", false, e.what()));
    }
  }
  return rep;
}

// ---- discriminants ----------------------------------------------------------

namespace detail {

struct DiscSetup {
  RingPtr ring;
  std::optional<SqrtExtension> ext;
  int sigma = 1;  // sign of the sinh/sin product in cosh/cos(A +- B)
};

inline DiscSetup disc_setup(GeometryKind kind) {
  DiscSetup s;
  if (kind == GeometryKind::Euclidean) {
    s.ring = Ring::make({"T", "t", "r", "R", "r1", "r2", "a1", "a2"});
    return s;
  }
  s.ring = Ring::make({"T", "t", "u", "U", "u1", "u2", "a1", "a2", "s", "S", "s1", "s2", "sa1", "sa2"});
  s.ext.emplace(s.ring);
  const bool hyp = kind == GeometryKind::Hyperbolic;
  s.sigma = hyp ? 1 : -1;
  // sinh^2 = cosh^2 - 1, sin^2 = 1 - cos^2.
  for (auto [root, c] : {std::pair{"s", "u"}, {"S", "U"}, {"s1", "u1"}, {"s2", "u2"}, {"sa1", "a1"}, {"sa2", "a2"}}) {
    Poly x = Poly::var(s.ring, c);
    Poly sq = x * x - Rational(1);
    s.ext->adjoin(root, hyp ? sq : -sq);
  }
  return s;
}

// f_1j in the discriminant ring.
inline Poly disc_f(GeometryKind kind, const DiscSetup& s, int j) {
  auto L = linkage_ring(kind);
  const bool euclid = kind == GeometryKind::Euclidean;
  std::vector<Poly> img(L->size(), Poly(s.ring));
  auto v = [&](const std::string& n) { return Poly::var(s.ring, n); };
  auto len = [&](const std::string& n) { return euclid ? v(n) * v(n) : v(n); };
  img[L->index("T1")] = v("T");
  img[L->index("t" + std::to_string(j))] = v("t");
  img[L->index(length_symbol(kind, 0, 0))] = len(euclid ? "r" : "u");
  img[L->index(length_symbol(kind, 1, 0))] = len(euclid ? "R" : "U");
  img[L->index(length_symbol(kind, 0, j))] = len((euclid ? "r" : "u") + std::to_string(j));
  img[L->index(length_symbol(kind, 1, j))] = len("a" + std::to_string(j));
  return build_f(kind, 1, j).compose(s.ring, img);
}

}  // namespace detail

inline VerifyReport verify_discriminant_identities(GeometryKind kind) {
  VerifyReport rep;
  const std::string suite = to_string(kind);
  auto s = detail::disc_setup(kind);
  const RingPtr& R = s.ring;
  auto v = [&](const std::string& n) { return Poly::var(R, n); };
  Poly T = v("T"), one(R, 1);
  const bool euclid = kind == GeometryKind::Euclidean;

  if (euclid) {
    Poly r = v("r"), Rr = v("R");
    Poly A0p = Rr + r, A0m = Rr - r;
    auto A = [&](int j, int sg) { return v("a" + std::to_string(j)) + Rational(sg) * v("r" + std::to_string(j)); };
    auto d = [&](int j, int sg) { return r * r * T * T + (Rr * Rr + r * r - A(j, sg) * A(j, sg)) * T + Rr * Rr; };
    for (int j = 1; j <= 2; ++j) {
      std::string J = std::to_string(j);
      Poly D = formal_discriminant(detail::disc_f(kind, s, j), "t", 2);
      rep.items.push_back(detail::exact_identity(suite, "Discr_t" + J + "(f_1" + J + ") = d_" + J + "^+ d_" + J + "^-", D,
                                                 d(j, 1) * d(j, -1)));
      for (int sg : {1, -1}) {
        std::string pm = sg > 0 ? "+" : "-";
        Poly Aj = A(j, sg);
        rep.items.push_back(detail::exact_identity(
            suite, "Discr_T(d_" + J + "^" + pm + ") = (A+A0+)(A-A0+)(A+A0-)(A-A0-) with A = A_" + J + "^" + pm,
            formal_discriminant(d(j, sg), "T", 2), (Aj + A0p) * (Aj - A0p) * (Aj + A0m) * (Aj - A0m)));
      }
      rep.items.push_back(detail::exact_identity(suite, "d_" + J + "^- - d_" + J + "^+ = 4 a_" + J + " r_" + J + " T",
                                                 d(j, -1) - d(j, 1), Rational(4) * v("a" + J) * v("r" + J) * T));
    }
    for (int s1 : {1, -1})
      for (int s2 : {1, -1}) {
        std::string name = std::string("d_2^") + (s2 > 0 ? "+" : "-") + " - d_1^" + (s1 > 0 ? "+" : "-") +
                           " = -(A_2 + A_1)(A_2 - A_1) T";
        rep.items.push_back(detail::exact_identity(suite, name, d(2, s2) - d(1, s1),
                                                   -((A(2, s2) + A(1, s1)) * (A(2, s2) - A(1, s1)) * T)));
      }
    return rep;
  }

  const SqrtExtension& ext = *s.ext;
  const Rational sigma = s.sigma;
  Poly u = v("u"), U = v("U");
  auto units = u_units(R, {"u", "U", "u1", "u2", "a1", "a2"});
  // C(x) = cosh x or cos x of the combined lengths.
  auto CA = [&](int j, int sg) {
    std::string J = std::to_string(j);
    return v("a" + J) * v("u" + J) + sigma * Rational(sg) * v("sa" + J) * v("s" + J);
  };
  auto CA0 = [&](int sg) { return U * u + sigma * Rational(sg) * v("S") * v("s"); };
  auto d = [&](int j, int sg) {
    return (u - Rational(1)) * (U + Rational(1)) * T * T + Rational(2) * (CA(j, sg) - u * U) * T +
           (u + Rational(1)) * (U - Rational(1));
  };
  // s(P+Q) s(P-Q) = (C(P) - C(Q))/2 with s(x) = sinh(x/2), resp. sqrt(-1) sin(x/2).
  auto pair = [&](const Poly& cp, const Poly& cq) { return (cp - cq) * Rational(1, 2); };
  for (int j = 1; j <= 2; ++j) {
    std::string J = std::to_string(j);
    Poly D = formal_discriminant(detail::disc_f(kind, s, j), "t", 2);
    rep.items.push_back(detail::unit_identity(suite, "Discr_t" + J + "(f_1" + J + ") =. d_" + J + "^+ d_" + J + "^-", D,
                                              ext.mul(d(j, 1), d(j, -1)), units));
    for (int sg : {1, -1}) {
      std::string pm = sg > 0 ? "+" : "-";
      Poly lhs = ext.reduce(formal_discriminant(d(j, sg), "T", 2));
      Poly rhs = ext.mul(pair(CA(j, sg), CA0(1)), pair(CA(j, sg), CA0(-1)));
      rep.items.push_back(detail::unit_identity(
          suite, "Discr_T(d_" + J + "^" + pm + ") =. s(A+A0+)s(A-A0+)s(A+A0-)s(A-A0-) with A = A_" + J + "^" + pm, lhs,
          rhs, units));
    }
  }
  for (int s1 : {1, -1})
    for (int s2 : {1, -1}) {
      std::string name = std::string("d_2^") + (s2 > 0 ? "+" : "-") + " - d_1^" + (s1 > 0 ? "+" : "-") +
                         " =. s(A_2 + A_1) s(A_2 - A_1) T";
      rep.items.push_back(
          detail::unit_identity(suite, name, d(2, s2) - d(1, s1), pair(CA(2, s2), CA(1, s1)) * T, units));
    }
  return rep;
}

// ---- coefficients of F_1 - lambda F_2 ---------------------------------------

inline Poly coefficient_c(const Poly& F, unsigned k, unsigned l) {
  auto ring = F.ring();
  auto t1 = ring->index("t1"), t2 = ring->index("t2");
  Monomial m;
  m.e[t1] = static_cast<std::uint16_t>(k);
  m.e[t2] = static_cast<std::uint16_t>(l);
  return F.coefficient_of(m, {t1, t2});
}

// c_{4-k,4-l} = rho_1^(k-2) rho_2^(l-2) c_kl with rho_j = num_j/den_j.
struct SymmetryRule {
  Poly num1, den1, num2, den2;
  std::string text;
};

inline SymmetryRule symmetry_rule(GeometryKind kind) {
  auto V = [&](int i, int j) { return length_var(kind, i, j); };
  if (kind == GeometryKind::Euclidean)
    return {V(0, 1), V(0, 0), V(0, 2), V(0, 0), "rho_j = r_j^2 / r^2"};
  Poly one(linkage_ring(kind), 1);
  auto num = [&](int j) { return (V(0, j) - one) * (V(0, 0) + one); };
  auto den = [&](int j) { return (V(0, j) + one) * (V(0, 0) - one); };
  return {num(1), den(1), num(2), den(2), "rho_j = (u_j - 1)(u + 1) / ((u_j + 1)(u - 1))"};
}

inline bool symmetry_holds(const Poly& F, const SymmetryRule& rule, unsigned k, unsigned l) {
  auto ring = F.ring();
  Poly left(ring, 1), right(ring, 1);
  auto apply = [&](const Poly& num, const Poly& den, int e) {
    if (e > 0) {
      right *= num.pow(e);
      left *= den.pow(e);
    } else if (e < 0) {
      right *= den.pow(-e);
      left *= num.pow(-e);
    }
  };
  apply(rule.num1, rule.den1, static_cast<int>(k) - 2);
  apply(rule.num2, rule.den2, static_cast<int>(l) - 2);
  return coefficient_c(F, 4 - k, 4 - l) * left == coefficient_c(F, k, l) * right;
}

inline VerifyReport verify_coefficient_identities(GeometryKind kind) {
  VerifyReport rep;
  const std::string suite = to_string(kind);
  auto L = linkage_ring(kind);
  Poly lam = Poly::var(L, "lambda");
  Poly F = cached_F(kind, 1) - lam * cached_F(kind, 2);
  for (auto [k, l] : {std::pair{0u, 0u}, {0u, 1u}, {4u, 3u}, {4u, 4u}}) {
    std::string name = "c_" + std::to_string(k) + std::to_string(l) + " = 0";
    rep.items.push_back(detail::exact_identity(suite, name, coefficient_c(F, k, l), Poly(L)));
  }
  bool affine = true;
  for (unsigned k = 0; k <= 4; ++k)
    for (unsigned l = 0; l <= 4; ++l) affine = affine && coefficient_c(F, k, l).degree("lambda") <= 1;
  rep.items.push_back(detail::bool_identity(suite, "every c_kl is affine in lambda", affine));

  auto rule = symmetry_rule(kind);
  int bad = 0;
  for (unsigned k = 0; k <= 4; ++k)
    for (unsigned l = 0; l <= 4; ++l) bad += !symmetry_holds(F, rule, k, l);
  rep.items.push_back(detail::bool_identity(suite, "c_{4-k,4-l} = rho_1^(k-2) rho_2^(l-2) c_kl, " + rule.text, bad == 0,
                                            std::to_string(25 - bad) + "/25 index pairs"));

  auto V = [&](int i, int j) { return length_var(kind, i, j); };
  Poly one(L, 1);
  if (kind == GeometryKind::Euclidean) {
    Poly c04 = V(0, 1) * V(0, 1) * (V(1, 0) - V(0, 0) - lam * V(2, 0) + lam * V(0, 0));
    Poly c20 = V(0, 2) * V(0, 2) * (V(0, 1) * (lam - one) - lam * V(2, 1) + V(1, 1));
    Poly c02 = V(0, 1) * V(0, 1) * (V(0, 2) * (lam - one) - lam * V(2, 2) + V(1, 2));
    rep.items.push_back(detail::exact_identity(suite, "c_04 = r_1^4 (R_1^2 - r^2 - lambda R_2^2 + lambda r^2)",
                                               coefficient_c(F, 0, 4), c04));
    rep.items.push_back(detail::exact_identity(suite, "c_20 = r_2^4 (r_1^2 (lambda - 1) - lambda r_21^2 + r_11^2)",
                                               coefficient_c(F, 2, 0), c20));
    rep.items.push_back(detail::exact_identity(suite, "c_02 = r_1^4 (r_2^2 (lambda - 1) - lambda r_22^2 + r_12^2)",
                                               coefficient_c(F, 0, 2), c02));
    return rep;
  }
  auto sq = [](const Poly& x) { return x * x; };
  Poly c04 = sq(V(1, 0)) - sq(V(0, 0)) - lam * sq(V(2, 0)) + lam * sq(V(0, 0));
  Poly c20 = sq(V(0, 1)) * (lam - one) - lam * sq(V(2, 1)) + sq(V(1, 1));
  Poly c02 = sq(V(0, 2)) * (lam - one) - lam * sq(V(2, 2)) + sq(V(1, 2));
  auto units = u_units(L, all_u_names(kind));
  rep.items.push_back(detail::unit_identity(suite, "c_04 =. U_1^2 - u^2 - lambda U_2^2 + lambda u^2",
                                            coefficient_c(F, 0, 4), c04, units));
  rep.items.push_back(detail::unit_identity(suite, "c_20 =. u_1^2 (lambda - 1) - lambda u_21^2 + u_11^2",
                                            coefficient_c(F, 2, 0), c20, units));
  rep.items.push_back(detail::unit_identity(suite, "c_02 =. u_2^2 (lambda - 1) - lambda u_22^2 + u_12^2",
                                            coefficient_c(F, 0, 2), c02, units));
  return rep;
}

// ---- grand resultants -------------------------------------------------------

// constant * prod factor^exponent, factors in grand_ring(kind).
struct ExpectedProduct {
  Rational constant = 1;
  std::vector<std::pair<Poly, int>> factors;
};

inline RingPtr grand_ring(GeometryKind kind) {
  static const RingPtr euclid = Ring::make({"t1", "t2", "a", "b", "c", "d"});
  static const RingPtr curved = Ring::make({"t1", "t2", "l", "m", "u", "u1", "u2", "u12"});
  return kind == GeometryKind::Euclidean ? euclid : curved;
}

inline int grand_epsilon(GeometryKind kind) { return kind == GeometryKind::Spherical ? -1 : 1; }

// The displayed product. In the curved case m stands for l_2 and sign for the choice of +-.
inline ExpectedProduct expected_grand_resultant(GeometryKind kind, int sign = 1) {
  auto R = grand_ring(kind);
  auto v = [&](const char* n) { return Poly::var(R, n); };
  ExpectedProduct e;
  if (kind == GeometryKind::Euclidean) {
    Poly a = v("a"), b = v("b"), c = v("c"), d = v("d");
    Poly a2 = a * a, b2 = b * b, c2 = c * c, d2 = d * d;
    e.constant = 16;
    e.factors = {{b, 8}, {c, 16}, {a + c, 8}, {a2 + b2 - c2 - d2, 4}, {a2 + d2 - b2 - c2, 4}, {a2 + c2 - b2 - d2, 4}};
    return e;
  }
  const Rational sg = sign, eps = grand_epsilon(kind);
  Poly l = v("l"), m = v("m"), u = v("u"), u1 = v("u1"), u2 = v("u2"), u12 = v("u12"), one(R, 1);
  e.factors = {{l + sg * m, 8},          {l * m + sg * eps * one, 8}, {u + one, 16},
               {u1 * u1 - one, 4},       {u2 - one, 8},                {u + u1 + u2 + u12, 4},
               {u + u1 - u2 - u12, 4},   {u + u2 - u1 - u12, 4},       {u + u12 - u1 - u2, 4}};
  return e;
}

namespace detail {

// G_i = clearing * F_i restricted to the Dixon-2 length pattern and t2 fixed.
struct GrandSetup {
  Poly G1, G2;
  // Res(G1, G2) = prod scale[k].first^scale[k].second * expected (after the u substitution).
  std::vector<std::pair<Poly, int>> scale;
  unsigned du = 0, du2 = 0;
};

inline GrandSetup grand_setup(GeometryKind kind, int sign) {
  auto L = linkage_ring(kind);
  auto R = grand_ring(kind);
  auto v = [&](const char* n) { return Poly::var(R, n); };
  std::vector<Poly> img(L->size(), Poly(R));
  img[L->index("t1")] = v("t1");
  img[L->index("t2")] = v("t2");
  auto set = [&](std::initializer_list<std::pair<int, int>> idx, const Poly& val) {
    for (auto [i, j] : idx) img[L->index(length_symbol(kind, i, j))] = val;
  };
  GrandSetup g;
  std::vector<Poly> G;
  if (kind == GeometryKind::Euclidean) {
    Poly a = v("a"), b = v("b"), c = v("c"), d = v("d");
    // r = r_11 = r_22 = a, R_1 = r_1 = b, R_2 = r_2 = c, r_12 = r_21 = d
    set({{0, 0}, {1, 1}, {2, 2}}, a * a);
    set({{1, 0}, {0, 1}}, b * b);
    set({{2, 0}, {0, 2}}, c * c);
    set({{1, 2}, {2, 1}}, d * d);
    for (int i = 1; i <= 2; ++i)
      G.push_back(substitute_named(cached_F(kind, i).compose(R, img), "t2", -c, a, 4));
    g.G1 = G[0];
    g.G2 = G[1];
    g.scale = {{a, 24}};
    return g;
  }
  const Rational sg = sign, eps = grand_epsilon(kind);
  Poly l = v("l"), m = v("m"), one(R, 1);
  set({{0, 0}, {1, 1}, {2, 2}}, v("u"));
  set({{1, 0}, {0, 1}}, v("u1"));
  set({{2, 0}, {0, 2}}, v("u2"));
  set({{1, 2}, {2, 1}}, v("u12"));
  for (int i = 1; i <= 2; ++i) G.push_back(substitute_named(cached_F(kind, i).compose(R, img), "t2", sg * m, l, 4));
  // u = (1 + eps l^2)/(1 - eps l^2) inverts l = rho(u); likewise u_2 and l_2 = m.
  g.du = std::max(G[0].degree("u"), G[1].degree("u"));
  g.du2 = std::max(G[0].degree("u2"), G[1].degree("u2"));
  Poly lden = one - eps * l * l, mden = one - eps * m * m;
  for (auto& x : G) {
    x = substitute_named(x, "u", one + eps * l * l, lden, g.du);
    x = substitute_named(x, "u2", one + eps * m * m, mden, g.du2);
  }
  g.G1 = G[0];
  g.G2 = G[1];
  // Each G_i carries lden^du mden^du2; the (4,4) resultant picks up the eighth power.
  g.scale = {{l, 24}, {lden, 8 * static_cast<int>(g.du)}, {mden, 8 * static_cast<int>(g.du2)}};
  return g;
}

// Irreducible t1-free factors; stripping them keeps every product small.
inline std::vector<Poly> grand_content_candidates(GeometryKind kind) {
  auto R = grand_ring(kind);
  auto v = [&](const char* n) { return Poly::var(R, n); };
  Poly one(R, 1);
  if (kind == GeometryKind::Euclidean) return {v("a"), v("b"), v("c"), v("d"), v("a") + v("c"), v("a") - v("c")};
  Poly l = v("l"), m = v("m"), u1 = v("u1"), u12 = v("u12");
  return {l,         m,         one + l,   one - l,   one + m,   one - m,       one + l * l,   one + m * m,
          l + m,     l - m,     l * m + one, l * m - one, u1 + one, u1 - one, u12 + one,     u12 - one};
}

// c * prod cands^e * rest, with rest free of the candidates.
struct Factored {
  std::vector<int> e;
  Poly rest;
};

inline void absorb(Factored& f, Poly p, int power, const std::vector<Poly>& cands) {
  if (power == 0) return;
  f.e.resize(cands.size(), 0);
  for (std::size_t k = 0; k < cands.size(); ++k)
    while (auto q = divide_exact(p, cands[k])) {
      p = std::move(*q);
      f.e[k] += power;
    }
  f.rest *= p.pow(power);
}

// Equality of two factored products, optionally up to sign.
inline std::pair<bool, std::size_t> factored_equal(Factored a, Factored b, const std::vector<Poly>& cands,
                                                   bool up_to_sign) {
  a.e.resize(cands.size(), 0);
  b.e.resize(cands.size(), 0);
  for (std::size_t k = 0; k < cands.size(); ++k) {
    int m = std::min(a.e[k], b.e[k]);
    a.rest *= cands[k].pow(a.e[k] - m);
    b.rest *= cands[k].pow(b.e[k] - m);
  }
  Poly diff = a.rest - b.rest;
  if (diff.is_zero()) return {true, 0};
  if (up_to_sign && (a.rest + b.rest).is_zero()) return {true, 0};
  return {false, diff.size()};
}

inline bool all_even(const ExpectedProduct& e) {
  if (e.constant <= 0) return false;
  mpz_class n = e.constant.get_num(), d = e.constant.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
  for (auto& [f, k] : e.factors)
    if (k % 2) return false;
  return true;
}

}  // namespace detail

inline IdentityResult check_grand_resultant(GeometryKind kind, int sign, const ExpectedProduct& expected) {
  const std::string suite = to_string(kind);
  std::string name = kind == GeometryKind::Euclidean
                         ? "Res_t1(a F_1(t1,-c/a), a F_2(t1,-c/a)) = 16 b^8 c^16 (a+c)^8 (a^2+b^2-c^2-d^2)^4 "
                           "(a^2+d^2-b^2-c^2)^4 (a^2+c^2-b^2-d^2)^4"
                         : std::string("Res_t1(l F_1(t1,") + (sign > 0 ? "+" : "-") + "l_2/l), l F_2) = product, eps = " +
                               std::to_string(grand_epsilon(kind)) + ", sign " + (sign > 0 ? "+" : "-");
  IdentityResult r;
  r.suite = suite;
  r.identity = name;
  auto g = detail::grand_setup(kind, sign);
  auto ring = grand_ring(kind);
  const std::size_t t1 = ring->index("t1");
  auto cands = detail::grand_content_candidates(kind);
  const Rational eps = grand_epsilon(kind);
  Poly one(ring, 1);

  // One G_k is +-S^2, so Res(G1, G2) = Res_{(4,2)}(P, S)^2 with P the other one.
  std::optional<Poly> root;
  const Poly* other = nullptr;
  for (int k = 0; k < 4 && !root; ++k) {
    const Poly& x = k < 2 ? g.G2 : g.G1;
    root = sqrt_exact(k % 2 ? -x : x);
    other = k < 2 ? &g.G1 : &g.G2;
  }
  // h = 1 compares Res^(1/2) with the square root of the expected side, h = 2 the full products.
  const bool half = root && detail::all_even(expected);
  const int h = half ? 1 : 2;
  detail::Factored lhs{{}, Poly(ring, 1)}, rhs{{}, Poly(ring, 1)};
  if (root) {
    Poly P = *other, S = *root;
    detail::Factored kp{{}, Poly(ring, 1)}, ks{{}, Poly(ring, 1)};
    // Res_{(4,2)}(P, S) = N / D, computed from the candidate-free parts.
    auto strip = [&](Poly p, detail::Factored& k) {
      k.e.assign(cands.size(), 0);
      for (std::size_t c = 0; c < cands.size(); ++c)
        while (auto q = divide_exact(p, cands[c])) {
          p = std::move(*q);
          ++k.e[c];
        }
      return p;
    };
    Poly Pc = strip(P, kp), C = strip(S, ks);
    auto [N, D] = quadratic_resultant(C, Pc, t1, 4);
    lhs.e.assign(cands.size(), 0);
    for (std::size_t c = 0; c < cands.size(); ++c) lhs.e[c] = (2 * kp.e[c] + 4 * ks.e[c]) * h;
    detail::absorb(lhs, N, h, cands);
    detail::absorb(rhs, D, h, cands);
    r.detail = std::string("one G_k is a perfect square; ") + (half ? "square roots compared" : "full products compared");
  } else {
    detail::absorb(lhs, sylvester_resultant(g.G1, g.G2, t1, 4, 4), 1, cands);
    r.detail = "8x8 Sylvester determinant";
  }
  // Expected side: scale * constant * prod factor^k, u and u_2 rational in l and l_2.
  Rational c = expected.constant;
  if (half) c = Rational(sqrt(mpz_class(c.get_num())), sqrt(mpz_class(c.get_den())));
  rhs.rest *= c;
  auto hp = [&](int k) { return half ? k / 2 : k; };
  for (auto& [base, k] : g.scale) detail::absorb(rhs, base, hp(k), cands);
  for (auto& [f, k] : expected.factors) {
    if (kind == GeometryKind::Euclidean) {
      detail::absorb(rhs, f, hp(k), cands);
      continue;
    }
    Poly l = Poly::var(ring, "l"), m = Poly::var(ring, "m");
    unsigned a = f.degree("u"), b = f.degree("u2");
    Poly x = detail::substitute_named(f, "u", one + eps * l * l, one - eps * l * l, a);
    x = detail::substitute_named(x, "u2", one + eps * m * m, one - eps * m * m, b);
    detail::absorb(rhs, x, hp(k), cands);
    detail::absorb(lhs, one - eps * l * l, static_cast<int>(a) * hp(k), cands);
    detail::absorb(lhs, one - eps * m * m, static_cast<int>(b) * hp(k), cands);
  }
  auto [ok, terms] = detail::factored_equal(lhs, rhs, cands, half);
  r.status = ok ? IdentityStatus::Ok : IdentityStatus::Fail;
  r.difference_terms = terms;
  return r;
}

inline VerifyReport verify_resultant_identities(GeometryKind kind) {
  VerifyReport rep;
  if (kind == GeometryKind::Euclidean) {
    rep.items.push_back(check_grand_resultant(kind, 1, expected_grand_resultant(kind)));
    return rep;
  }
  for (int sign : {1, -1}) rep.items.push_back(check_grand_resultant(kind, sign, expected_grand_resultant(kind, sign)));
  return rep;
}

inline VerifyReport verify_suite(GeometryKind kind) {
  VerifyReport rep = verify_structure(kind);
  rep.append(verify_discriminant_identities(kind));
  rep.append(verify_coefficient_identities(kind));
  rep.append(verify_resultant_identities(kind));
  return rep;
}

// Suites run concurrently when there is more than one hardware thread; the report keeps the E2, H2, S2 order.
inline VerifyReport verify_all() {
  const auto policy = std::thread::hardware_concurrency() > 1 ? std::launch::async : std::launch::deferred;
  std::vector<std::future<VerifyReport>> jobs;
  for (auto k : {GeometryKind::Euclidean, GeometryKind::Hyperbolic, GeometryKind::Spherical})
    jobs.push_back(std::async(policy, [k] { return verify_suite(k); }));
  VerifyReport rep;
  for (auto& j : jobs) rep.append(j.get());
  return rep;
}

}  // namespace flexlab::poly
