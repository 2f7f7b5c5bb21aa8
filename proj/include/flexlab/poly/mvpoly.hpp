#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <cstring>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "flexlab/errors.hpp"

namespace flexlab::poly {

using Rational = mpq_class;

inline constexpr std::size_t kMaxVars = 16;

struct Monomial {
  std::array<std::uint16_t, kMaxVars> e{};

  unsigned total() const {
    unsigned s = 0;
    for (auto x : e) s += x;
    return s;
  }
  bool is_one() const {
    for (auto x : e)
      if (x) return false;
    return true;
  }
  bool divides(const Monomial& o) const {
    for (std::size_t i = 0; i < kMaxVars; ++i)
      if (e[i] > o.e[i]) return false;
    return true;
  }
  friend Monomial operator*(Monomial a, const Monomial& b) {
    for (std::size_t i = 0; i < kMaxVars; ++i) a.e[i] = static_cast<std::uint16_t>(a.e[i] + b.e[i]);
    return a;
  }
  // Caller guarantees b divides a.
  friend Monomial operator/(Monomial a, const Monomial& b) {
    for (std::size_t i = 0; i < kMaxVars; ++i) a.e[i] = static_cast<std::uint16_t>(a.e[i] - b.e[i]);
    return a;
  }
  friend bool operator==(const Monomial&, const Monomial&) = default;
  // Lexicographic, variable 0 most significant.
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

inline Monomial gcd(const Monomial& a, const Monomial& b) {
  Monomial g;
  for (std::size_t i = 0; i < kMaxVars; ++i) g.e[i] = std::min(a.e[i], b.e[i]);
  return g;
}

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept {
    std::uint64_t w[kMaxVars / 4];
    std::memcpy(w, m.e.data(), sizeof(w));
    std::uint64_t h = 0x9E3779B97F4A7C15ull;
    for (auto x : w) {
      h ^= x + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
      h *= 0xBF58476D1CE4E5B9ull;
    }
    return static_cast<std::size_t>(h ^ (h >> 31));
  }
};

class Ring {
 public:
  static std::shared_ptr<const Ring> make(std::vector<std::string> names) {
    if (names.size() > kMaxVars) throw UsageError("ring has more than 16 variables");
    for (std::size_t i = 0; i < names.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (names[i] == names[j]) throw UsageError("duplicate variable name " + names[i]);
    return std::shared_ptr<const Ring>(new Ring(std::move(names)));
  }

  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }

  std::optional<std::size_t> find(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    return std::nullopt;
  }
  std::size_t index(std::string_view name) const {
    auto i = find(name);
    if (!i) throw UsageError("unknown variable " + std::string(name));
    return *i;
  }

 private:
  explicit Ring(std::vector<std::string> names) : names_(std::move(names)) {}
  std::vector<std::string> names_;
};

using RingPtr = std::shared_ptr<const Ring>;

inline bool same_ring(const RingPtr& a, const RingPtr& b) {
  return a == b || (a && b && a->names() == b->names());
}

template <class T>
T lift(const Rational& c) {
  return T(c);
}
template <>
inline double lift<double>(const Rational& c) {
  return c.get_d();
}

class Poly {
 public:
  using Term = std::pair<Monomial, Rational>;

  Poly() = default;
  explicit Poly(RingPtr ring) : ring_(std::move(ring)) {}
  // Coefficients are canonicalised on entry, since equality compares them field by field.
  Poly(RingPtr ring, const Rational& c) : ring_(std::move(ring)) {
    if (c != 0) terms_.emplace_back(Monomial{}, c).second.canonicalize();
  }
  Poly(RingPtr ring, long c) : Poly(std::move(ring), Rational(c)) {}

  static Poly var(const RingPtr& ring, std::size_t index, unsigned power = 1) {
    if (index >= ring->size()) throw UsageError("variable index out of range");
    Poly p(ring);
    Monomial m;
    m.e[index] = static_cast<std::uint16_t>(power);
    p.terms_.emplace_back(m, Rational(1));
    return p;
  }
  static Poly var(const RingPtr& ring, std::string_view name, unsigned power = 1) {
    return var(ring, ring->index(name), power);
  }
  static Poly monomial(const RingPtr& ring, const Monomial& m, const Rational& c) {
    Poly p(ring);
    if (c != 0) p.terms_.emplace_back(m, c).second.canonicalize();
    return p;
  }
  // Terms in any order, duplicates allowed; zero coefficients dropped.
  static Poly from_terms(const RingPtr& ring, std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.first > b.first; });
    Poly p(ring);
    for (auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().first == t.first)
        p.terms_.back().second += t.second;
      else {
        if (!p.terms_.empty() && p.terms_.back().second == 0) p.terms_.pop_back();
        p.terms_.push_back(std::move(t));
        p.terms_.back().second.canonicalize();
      }
    }
    if (!p.terms_.empty() && p.terms_.back().second == 0) p.terms_.pop_back();
    return p;
  }

  const RingPtr& ring() const { return ring_; }
  // Sorted with the leading (lex-largest) monomial first.
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  // Every coefficient an integer.
  bool integral() const {
    for (auto& t : terms_)
      if (mpz_cmp_ui(t.second.get_den_mpz_t(), 1) != 0) return false;
    return true;
  }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_one()); }
  Rational constant_term() const {
    if (!terms_.empty() && terms_.back().first.is_one()) return terms_.back().second;
    return 0;
  }
  const Term& leading() const {
    if (terms_.empty()) throw UsageError("leading term of zero polynomial");
    return terms_.front();
  }
  std::size_t var_index(std::string_view name) const { return ring_->index(name); }

  Poly operator-() const {
    Poly r = *this;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
  }

  Poly& operator+=(const Poly& o) { return *this = add(*this, o, false); }
  Poly& operator-=(const Poly& o) { return *this = add(*this, o, true); }
  Poly& operator*=(const Poly& o) { return *this = mul(*this, o); }
  Poly& operator*=(const Rational& c) {
    if (c == 0) terms_.clear();
    for (auto& t : terms_) t.second *= c;
    return *this;
  }

  friend Poly operator+(const Poly& a, const Poly& b) { return add(a, b, false); }
  friend Poly operator-(const Poly& a, const Poly& b) { return add(a, b, true); }
  friend Poly operator*(const Poly& a, const Poly& b) { return mul(a, b); }
  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
  friend Poly operator+(const Poly& a, const Rational& c) { return a + Poly(a.ring_, c); }
  friend Poly operator-(const Poly& a, const Rational& c) { return a - Poly(a.ring_, c); }
  friend Poly operator+(const Rational& c, const Poly& a) { return Poly(a.ring_, c) + a; }
  friend Poly operator-(const Rational& c, const Poly& a) { return Poly(a.ring_, c) - a; }
  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

  Poly pow(unsigned k) const {
    Poly result(ring_, 1);
    Poly base = *this;
    while (k) {
      if (k & 1u) result *= base;
      k >>= 1u;
      if (k) base *= base;
    }
    return result;
  }

  Poly shifted(const Monomial& m) const {
    Poly r = *this;
    for (auto& t : r.terms_) t.first = t.first * m;
    return r;
  }

  unsigned degree(std::size_t var) const {
    unsigned d = 0;
    for (auto& t : terms_) d = std::max<unsigned>(d, t.first.e[var]);
    return d;
  }
  unsigned degree(std::string_view name) const { return degree(var_index(name)); }
  unsigned total_degree() const {
    unsigned d = 0;
    for (auto& t : terms_) d = std::max(d, t.first.total());
    return d;
  }

  // Coefficient of var^k as a polynomial in the remaining variables.
  Poly coeff(std::size_t var, unsigned k) const {
    std::vector<Term> out;
    for (auto& t : terms_)
      if (t.first.e[var] == k) {
        Monomial m = t.first;
        m.e[var] = 0;
        out.emplace_back(m, t.second);
      }
    return from_sorted_subset(std::move(out));
  }
  Poly coeff(std::string_view name, unsigned k) const { return coeff(var_index(name), k); }

  std::vector<Poly> coefficients(std::size_t var) const {
    std::vector<std::vector<Term>> buckets(degree(var) + 1);
    for (auto& t : terms_) {
      Monomial m = t.first;
      unsigned k = m.e[var];
      m.e[var] = 0;
      buckets[k].emplace_back(m, t.second);
    }
    std::vector<Poly> out;
    out.reserve(buckets.size());
    for (auto& b : buckets) out.push_back(from_sorted_subset(std::move(b)));
    return out;
  }

  // Coefficient of the monomial `pattern` restricted to `vars`; the other variables stay.
  Poly coefficient_of(const Monomial& pattern, const std::vector<std::size_t>& vars) const {
    std::vector<Term> out;
    for (auto& t : terms_) {
      bool match = true;
      for (auto v : vars)
        if (t.first.e[v] != pattern.e[v]) {
          match = false;
          break;
        }
      if (!match) continue;
      Monomial m = t.first;
      for (auto v : vars) m.e[v] = 0;
      out.emplace_back(m, t.second);
    }
    return from_terms(ring_, std::move(out));
  }

  Poly derivative(std::size_t var) const {
    std::vector<Term> out;
    for (auto& t : terms_) {
      if (t.first.e[var] == 0) continue;
      Monomial m = t.first;
      Rational c = t.second * m.e[var];
      --m.e[var];
      out.emplace_back(m, c);
    }
    return from_sorted_subset(std::move(out));
  }

  Poly substitute(std::size_t var, const Poly& value) const {
    auto cs = coefficients(var);
    Poly r = cs.back();
    for (std::size_t k = cs.size() - 1; k-- > 0;) r = r * value + cs[k];
    return r;
  }

  // Numerator extraction: returns den^deg(var) * p(var = num/den).
  Poly substitute(std::size_t var, const Poly& num, const Poly& den) const {
    return substitute_with_degree(var, num, den, degree(var));
  }
  Poly substitute_with_degree(std::size_t var, const Poly& num, const Poly& den, unsigned d) const {
    if (den.is_zero()) throw DomainError("division by the zero polynomial");
    if (degree(var) > d) throw UsageError("substitution degree below actual degree");
    auto cs = coefficients(var);
    cs.resize(d + 1, Poly(ring_));
    // Horner in num/den with the denominator carried along.
    Poly r = cs[d];
    Poly denpow(ring_, 1);
    for (std::size_t k = d; k-- > 0;) {
      denpow *= den;
      r = r * num + cs[k] * denpow;
    }
    return r;
  }

  // Ring change: variable v maps to images[v], a polynomial of the target ring.
  Poly compose(const RingPtr& target, const std::vector<Poly>& images) const {
    if (images.size() != ring_->size()) throw UsageError("compose needs one image per variable");
    std::vector<std::vector<Poly>> powers(images.size());
    std::unordered_map<Monomial, Rational, MonomialHash> acc;
    for (auto& t : terms_) {
      Poly prod(target, t.second);
      for (std::size_t v = 0; v < images.size(); ++v) {
        unsigned e = t.first.e[v];
        if (!e) continue;
        auto& pw = powers[v];
        if (pw.empty()) pw.push_back(Poly(target, 1));
        while (pw.size() <= e) pw.push_back(pw.back() * images[v]);
        prod *= pw[e];
      }
      for (auto& pt : prod.terms_) acc[pt.first] += pt.second;
    }
    return from_map(target, acc);
  }

  // Rename into a ring that contains every variable of this one.
  Poly embed(const RingPtr& target) const {
    std::vector<std::size_t> map(ring_->size());
    for (std::size_t v = 0; v < ring_->size(); ++v) map[v] = target->index(ring_->names()[v]);
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
      Monomial m;
      for (std::size_t v = 0; v < ring_->size(); ++v) m.e[map[v]] = t.first.e[v];
      out.emplace_back(m, t.second);
    }
    return from_terms(target, std::move(out));
  }

  template <class T>
  T eval(const std::vector<T>& values) const {
    if (values.size() < ring_->size()) throw UsageError("eval needs a value for every variable");
    std::vector<std::vector<T>> powers(ring_->size());
    T acc = lift<T>(Rational(0));
    for (auto& t : terms_) {
      T term = lift<T>(t.second);
      for (std::size_t v = 0; v < ring_->size(); ++v) {
        unsigned e = t.first.e[v];
        if (!e) continue;
        auto& pw = powers[v];
        if (pw.empty()) pw.push_back(lift<T>(Rational(1)));
        while (pw.size() <= e) pw.push_back(pw.back() * values[v]);
        term = term * pw[e];
      }
      acc = acc + term;
    }
    return acc;
  }

  Monomial monomial_content() const {
    if (terms_.empty()) return {};
    Monomial g = terms_[0].first;
    for (auto& t : terms_) g = gcd(g, t.first);
    return g;
  }
  Poly divide_monomial(const Monomial& m) const {
    Poly r = *this;
    for (auto& t : r.terms_) {
      if (!m.divides(t.first)) throw UsageError("monomial does not divide");
      t.first = t.first / m;
    }
    return r;
  }
  // Scaled so the leading coefficient is 1.
  Poly monic() const {
    if (is_zero()) return *this;
    Rational inv = 1 / terms_[0].second;
    return *this * inv;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [m, c] : terms_) {
      Rational a = abs(c);
      if (first)
        os << (c < 0 ? "-" : "");
      else
        os << (c < 0 ? " - " : " + ");
      first = false;
      bool one = m.is_one();
      if (a != 1 || one) os << a.get_str() << (one ? "" : "*");
      bool firstvar = true;
      for (std::size_t v = 0; v < kMaxVars; ++v) {
        if (!m.e[v]) continue;
        if (!firstvar) os << "*";
        firstvar = false;
        os << ring_->names()[v];
        if (m.e[v] > 1) os << "^" << m.e[v];
      }
    }
    return os.str();
  }

  static Poly from_map(const RingPtr& ring, std::unordered_map<Monomial, Rational, MonomialHash>& acc) {
    Poly r(ring);
    r.terms_.reserve(acc.size());
    for (auto& [m, c] : acc)
      if (c != 0) r.terms_.emplace_back(m, std::move(c));
    std::sort(r.terms_.begin(), r.terms_.end(), [](const Term& a, const Term& b) { return a.first > b.first; });
    return r;
  }

 private:
  // Terms taken from a sorted polynomial with one variable zeroed keep a consistent order
  // only when that variable was constant across them, so re-sort in general.
  Poly from_sorted_subset(std::vector<Term> out) const { return from_terms(ring_, std::move(out)); }

  static const RingPtr& pick_ring(const Poly& a, const Poly& b) {
    if (a.ring_ && b.ring_ && !same_ring(a.ring_, b.ring_)) throw UsageError("polynomials from different rings");
    return a.ring_ ? a.ring_ : b.ring_;
  }

  static Poly add(const Poly& a, const Poly& b, bool negate) {
    Poly r(pick_ring(a, b));
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto i = a.terms_.begin(), ie = a.terms_.end();
    auto j = b.terms_.begin(), je = b.terms_.end();
    while (i != ie || j != je) {
      if (j == je || (i != ie && i->first > j->first)) {
        r.terms_.push_back(*i++);
      } else if (i == ie || j->first > i->first) {
        r.terms_.emplace_back(j->first, negate ? Rational(-j->second) : j->second);
        ++j;
      } else {
        Rational c = negate ? Rational(i->second - j->second) : Rational(i->second + j->second);
        if (c != 0) r.terms_.emplace_back(i->first, std::move(c));
        ++i;
        ++j;
      }
    }
    return r;
  }

  static Poly mul(const Poly& a, const Poly& b) {
    const RingPtr& ring = pick_ring(a, b);
    if (a.is_zero() || b.is_zero()) return Poly(ring);
    if (a.size() < b.size()) return mul(b, a);
    if (b.size() == 1) {
      // Multiplying by a monomial keeps the lex order.
      Poly r(ring);
      r.terms_.reserve(a.size());
      const auto& [bm, bc] = b.terms_[0];
      for (auto& [m, c] : a.terms_) r.terms_.emplace_back(m * bm, c * bc);
      return r;
    }
    if (a.integral() && b.integral()) return mul_integral(ring, a, b);
    std::unordered_map<Monomial, Rational, MonomialHash> acc;
    acc.reserve(a.size() * b.size());
    Rational tmp;
    for (auto& [mb, cb] : b.terms_)
      for (auto& [ma, ca] : a.terms_) {
        mpq_mul(tmp.get_mpq_t(), ca.get_mpq_t(), cb.get_mpq_t());
        auto& slot = acc[ma * mb];
        slot += tmp;
      }
    return from_map(ring, acc);
  }

  // Integer coefficients accumulate with mpz_addmul, skipping the rational normalisation.
  static Poly mul_integral(const RingPtr& ring, const Poly& a, const Poly& b) {
    std::unordered_map<Monomial, mpz_class, MonomialHash> acc;
    acc.reserve(a.size() * b.size());
    for (auto& [mb, cb] : b.terms_)
      for (auto& [ma, ca] : a.terms_)
        mpz_addmul(acc[ma * mb].get_mpz_t(), ca.get_num_mpz_t(), cb.get_num_mpz_t());
    Poly r(ring);
    r.terms_.reserve(acc.size());
    for (auto& [m, c] : acc)
      if (c != 0) r.terms_.emplace_back(m, Rational(c));
    std::sort(r.terms_.begin(), r.terms_.end(), [](const Term& x, const Term& y) { return x.first > y.first; });
    return r;
  }

  RingPtr ring_;
  std::vector<Term> terms_;
};

namespace detail {

// a / b over the integers when b's leading coefficient is +-1; same contract as divide_exact.
inline std::optional<Poly> divide_unit_lead(const Poly& a, const Poly& b) {
  std::map<Monomial, mpz_class, std::greater<>> rem;
  for (auto& [m, c] : a.terms()) rem.emplace_hint(rem.end(), m, c.get_num());
  const auto& [lm, lc] = b.leading();
  const bool neg = lc < 0;
  std::vector<Poly::Term> q;
  while (!rem.empty()) {
    auto it = rem.begin();
    if (!lm.divides(it->first)) return std::nullopt;
    Monomial qm = it->first / lm;
    mpz_class qc = std::move(it->second);
    if (neg) qc = -qc;
    rem.erase(it);
    for (std::size_t k = 1; k < b.size(); ++k) {
      const auto& [m, c] = b.terms()[k];
      auto [slot, inserted] = rem.try_emplace(m * qm);
      mpz_submul(slot->second.get_mpz_t(), qc.get_mpz_t(), c.get_num_mpz_t());
      if (!inserted && slot->second == 0) rem.erase(slot);
    }
    if (!rem.empty() && rem.begin()->first < lm) return std::nullopt;
    q.emplace_back(qm, Rational(qc));
  }
  return Poly::from_terms(b.ring(), std::move(q));
}

}  // namespace detail

// Exact quotient a/b, or nullopt when b does not divide a.
inline std::optional<Poly> divide_exact(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw DomainError("division by the zero polynomial");
  const RingPtr& ring = a.ring() ? a.ring() : b.ring();
  if (a.is_zero()) return Poly(ring);
  if (b.size() == 1) {
    const auto& [bm, bc] = b.leading();
    std::vector<Poly::Term> out;
    out.reserve(a.size());
    Rational inv = 1 / bc;
    for (auto& [m, c] : a.terms()) {
      if (!bm.divides(m)) return std::nullopt;
      out.emplace_back(m / bm, c * inv);
    }
    return Poly::from_terms(ring, std::move(out));
  }
  const auto& [lm, lc] = b.leading();
  if (abs(lc) == 1 && a.integral() && b.integral()) return detail::divide_unit_lead(a, b);
  std::map<Monomial, Rational, std::greater<>> rem;
  for (auto& [m, c] : a.terms()) rem.emplace_hint(rem.end(), m, c);
  Rational inv = 1 / lc;
  std::vector<Poly::Term> q;
  Rational tmp;
  while (!rem.empty()) {
    auto it = rem.begin();
    if (!lm.divides(it->first)) return std::nullopt;
    Monomial qm = it->first / lm;
    Rational qc = it->second * inv;
    rem.erase(it);
    bool first = true;
    for (auto& [m, c] : b.terms()) {
      if (first) {
        first = false;
        continue;
      }
      mpq_mul(tmp.get_mpq_t(), qc.get_mpq_t(), c.get_mpq_t());
      auto [slot, inserted] = rem.try_emplace(m * qm);
      if (inserted) {
        slot->second = -tmp;
      } else {
        slot->second -= tmp;
        if (slot->second == 0) rem.erase(slot);
      }
    }
    // Bail out early once the remainder can no longer be reduced by b.
    if (!rem.empty() && rem.begin()->first < lm) return std::nullopt;
    q.emplace_back(qm, std::move(qc));
  }
  return Poly::from_terms(ring, std::move(q));
}

inline Poly exact_quotient(const Poly& a, const Poly& b, std::string_view what = "exact division") {
  auto q = divide_exact(a, b);
  if (!q) throw IdentityViolation(std::string(what) + ": divisor leaves a remainder");
  return *q;
}

// Exact square root when p is a perfect square with a square leading coefficient.
inline std::optional<Poly> sqrt_exact(const Poly& p) {
  if (p.is_zero()) return p;
  const auto& [lm, lc] = p.leading();
  Monomial half;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    if (lm.e[i] % 2) return std::nullopt;
    half.e[i] = static_cast<std::uint16_t>(lm.e[i] / 2);
  }
  if (lc < 0) return std::nullopt;
  mpz_class n = lc.get_num(), d = lc.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
  Rational root(sqrt(n), sqrt(d));
  Poly s = Poly::monomial(p.ring(), half, root);
  Poly r = p - s * s;
  Poly twice_lead = Poly::monomial(p.ring(), half, 2 * root);
  while (!r.is_zero()) {
    const auto& [rm, rc] = r.leading();
    if (!half.divides(rm)) return std::nullopt;
    Poly t = Poly::monomial(p.ring(), rm / half, rc / (2 * root));
    if (!(t.leading().first < half)) return std::nullopt;
    r -= (2 * s + t) * t;
    s += t;
    if (!r.is_zero() && r.leading().first > rm) return std::nullopt;
  }
  return s;
}

}  // namespace flexlab::poly
