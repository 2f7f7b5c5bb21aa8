#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flexlab/poly/mvpoly.hpp"

namespace flexlab::poly {

// num/den without gcd computations; only monomial content is cancelled.
struct RationalFunction {
  Poly num;
  Poly den;

  RationalFunction() = default;
  RationalFunction(Poly n) : num(std::move(n)), den(num.ring(), 1) {}
  RationalFunction(Poly n, Poly d) : num(std::move(n)), den(std::move(d)) {
    if (den.is_zero()) throw DomainError("division by the zero polynomial");
    normalize();
  }

  void normalize() {
    if (num.is_zero()) {
      den = Poly(den.ring(), 1);
      return;
    }
    Monomial g = gcd(num.monomial_content(), den.monomial_content());
    if (!g.is_one()) {
      num = num.divide_monomial(g);
      den = den.divide_monomial(g);
    }
    Rational lc = den.leading().second;
    if (lc != 1) {
      Rational inv = 1 / lc;
      num *= inv;
      den *= inv;
    }
  }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.den == b.den) return {a.num + b.num, a.den};
    return {a.num * b.den + b.num * a.den, a.den * b.den};
  }
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    if (a.den == b.den) return {a.num - b.num, a.den};
    return {a.num * b.den - b.num * a.den, a.den * b.den};
  }
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return {a.num * b.num, a.den * b.den};
  }
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    return {a.num * b.den, a.den * b.num};
  }

  // Both parts substituted with numerator extraction at a common degree.
  RationalFunction substitute(std::size_t var, const Poly& n, const Poly& d) const {
    unsigned deg = std::max(num.degree(var), den.degree(var));
    return {num.substitute_with_degree(var, n, d, deg), den.substitute_with_degree(var, n, d, deg)};
  }
};

// Adjoined square roots s_k with s_k^2 -> value_k; elements are kept reduced.
class SqrtExtension {
 public:
  explicit SqrtExtension(RingPtr ring) : ring_(std::move(ring)) {}

  void adjoin(std::size_t var, Poly square) {
    if (square.degree(var) != 0) throw UsageError("square rule must not mention its own root");
    rules_.emplace_back(var, std::move(square));
  }
  void adjoin(std::string_view name, Poly square) { adjoin(ring_->index(name), std::move(square)); }

  const RingPtr& ring() const { return ring_; }

  Poly reduce(const Poly& p) const {
    Poly cur = p;
    for (;;) {
      bool changed = false;
      for (auto& [v, square] : rules_) {
        if (cur.degree(v) < 2) continue;
        auto cs = cur.coefficients(v);
        Poly out(ring_);
        Poly s = Poly::var(ring_, v);
        Poly sq_pow(ring_, 1);
        for (std::size_t k = 0; k < cs.size(); ++k) {
          if (k >= 2 && k % 2 == 0) sq_pow *= square;
          out += cs[k] * sq_pow * (k % 2 ? s : Poly(ring_, 1));
        }
        cur = out;
        changed = true;
      }
      if (!changed) return cur;
    }
  }

  Poly mul(const Poly& a, const Poly& b) const { return reduce(a * b); }

  bool is_reduced(const Poly& p) const {
    for (auto& [v, square] : rules_)
      if (p.degree(v) >= 2) return false;
    return true;
  }

 private:
  RingPtr ring_;
  std::vector<std::pair<std::size_t, Poly>> rules_;
};

struct UnitCertificate {
  enum class Status { Equivalent, NotEquivalent, Inconclusive };
  Status status = Status::NotEquivalent;
  Rational n;                         // p * mu_d = n * q * mu_n
  std::vector<std::string> factors;   // printed unit factors, aligned with the exponents
  std::vector<int> exponent;          // exponent of factor k in p/(n q); positive part is mu_n
  std::string note;
};

// Candidate unit factors w_k; the search strips each one at most `bound` times.
struct UnitSet {
  std::vector<Poly> factors;
  int bound = 8;

  static UnitSet u_pm_one(const RingPtr& ring, const std::vector<std::string>& vars, int bound = 8) {
    UnitSet u;
    u.bound = bound;
    for (auto& name : vars) {
      Poly x = Poly::var(ring, name);
      u.factors.push_back(x + Rational(1));
      u.factors.push_back(x - Rational(1));
    }
    return u;
  }
};

namespace detail {

// Strips every factor; returns nullopt if some factor still divides after `bound` strips.
inline std::optional<Poly> strip_units(Poly p, const UnitSet& units, std::vector<int>& exps) {
  exps.assign(units.factors.size(), 0);
  for (std::size_t k = 0; k < units.factors.size(); ++k) {
    for (;;) {
      auto q = divide_exact(p, units.factors[k]);
      if (!q) break;
      if (exps[k] == units.bound) return std::nullopt;
      p = std::move(*q);
      ++exps[k];
    }
  }
  return p;
}

}  // namespace detail

inline UnitCertificate unit_equivalent(const Poly& p, const Poly& q, const UnitSet& units) {
  UnitCertificate cert;
  for (auto& f : units.factors) cert.factors.push_back(f.to_string());
  if (p.is_zero() || q.is_zero()) {
    cert.status = (p.is_zero() && q.is_zero()) ? UnitCertificate::Status::Equivalent
                                               : UnitCertificate::Status::NotEquivalent;
    cert.n = p.is_zero() && q.is_zero() ? 1 : 0;
    cert.exponent.assign(units.factors.size(), 0);
    cert.note = "zero polynomial";
    return cert;
  }
  std::vector<int> ep, eq;
  auto sp = detail::strip_units(p, units, ep);
  auto sq = detail::strip_units(q, units, eq);
  if (!sp || !sq) {
    cert.status = UnitCertificate::Status::Inconclusive;
    cert.note = "unit exponent search bound exhausted";
    return cert;
  }
  cert.exponent.resize(units.factors.size());
  for (std::size_t k = 0; k < units.factors.size(); ++k) cert.exponent[k] = ep[k] - eq[k];
  Rational n = sp->leading().second / sq->leading().second;
  if (*sp == *sq * n) {
    cert.status = UnitCertificate::Status::Equivalent;
    cert.n = n;
  } else {
    cert.status = UnitCertificate::Status::NotEquivalent;
    cert.note = "unit-free parts are not proportional";
  }
  return cert;
}

}  // namespace flexlab::poly
