#pragma once

// Shared generators and property experiments for the unit suites and the acceptance driver.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "flexlab/flexlab.hpp"

namespace flexlab::testing {

inline constexpr GeometryKind kE = GeometryKind::Euclidean;
inline constexpr GeometryKind kH = GeometryKind::Hyperbolic;
inline constexpr GeometryKind kS = GeometryKind::Spherical;
inline constexpr std::array<GeometryKind, 3> kKinds{kE, kH, kS};

using Rng = std::mt19937_64;

inline double uni(Rng& r, double a, double b) { return std::uniform_real_distribution<double>(a, b)(r); }
inline int pick(Rng& r, int a, int b) { return std::uniform_int_distribution<int>(a, b)(r); }
inline double sign(Rng& r) { return pick(r, 0, 1) ? 1.0 : -1.0; }

struct Outcome {
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::string first;
  double worst = 0;

  bool ok() const { return samples > 0 && violations == 0; }
  void fail(const std::string& why) {
    if (!violations++) first = why;
  }
  void merge(const Outcome& o) {
    if (o.violations && !violations) first = o.first;
    samples += o.samples;
    violations += o.violations;
    worst = std::max(worst, o.worst);
  }
  std::string summary() const {
    std::ostringstream s;
    s << samples << " samples, " << violations << " violations";
    if (violations) s << " (first: " << first << ")";
    return s.str();
  }
};

inline double coord_gap(const Point& a, const Point& b) { return norm(a.c - b.c); }

inline Point random_point(GeometryKind k, Rng& r) {
  switch (k) {
    case kE: return Point::euclidean(uni(r, -3, 3), uni(r, -3, 3));
    case kH: {
      double rad = std::sqrt(uni(r, 0, 0.81)), a = uni(r, -std::numbers::pi, std::numbers::pi);
      return Point::poincare(rad * std::cos(a), rad * std::sin(a));
    }
    case kS: {
      std::normal_distribution<double> g;
      return Point::spherical(g(r), g(r), g(r));
    }
  }
  return {};
}

inline Framework random_framework(GeometryKind k, std::size_t m, std::size_t n, Rng& r) {
  Framework fw{k, {}, {}};
  for (std::size_t i = 0; i < m; ++i) fw.P.push_back(random_point(k, r));
  for (std::size_t j = 0; j < n; ++j) fw.Q.push_back(random_point(k, r));
  return fw;
}

// ---- metric properties ----------------------------------------------------

inline Outcome metric_axioms(GeometryKind k, int samples, std::uint64_t seed) {
  Rng r(seed);
  Outcome o;
  for (int s = 0; s < samples; ++s, ++o.samples) {
    Point p = random_point(k, r), q = random_point(k, r), w = random_point(k, r);
    double pq = distance(p, q), qp = distance(q, p), pw = distance(p, w), qw = distance(q, w);
    if (pq != qp) o.fail("asymmetric distance");
    if (pq < 0 || distance(p, p) > 1e-12) o.fail("d(p,p) or sign");
    if (pw > pq + qw + 1e-12) o.fail("triangle inequality");
    o.worst = std::max(o.worst, pw - pq - qw);
  }
  return o;
}

inline std::vector<Model> supported_models(GeometryKind k) {
  std::vector<Model> out;
  for (Model m : {Model::Cartesian, Model::Poincare, Model::Lobachevsky, Model::Ambient, Model::Geographic,
                  Model::Stereographic})
    if (model_supported(k, m)) out.push_back(m);
  return out;
}

inline Outcome model_agreement(GeometryKind k, int samples, std::uint64_t seed) {
  Rng r(seed);
  Outcome o;
  const auto models = supported_models(k);
  for (int s = 0; s < samples; ++s, ++o.samples) {
    Point p = random_point(k, r), q = random_point(k, r);
    std::vector<double> d;
    for (Model m : models) d.push_back(model_distance(k, m, convert_point(p, m), convert_point(q, m)));
    for (std::size_t a = 0; a < d.size(); ++a)
      for (std::size_t b = a + 1; b < d.size(); ++b) {
        double gap = std::abs(d[a] - d[b]);
        o.worst = std::max(o.worst, gap);
        if (gap >= 1e-10) o.fail(to_string(models[a]) + " vs " + to_string(models[b]));
      }
  }
  return o;
}

// ---- quadrilaterals with crossing diagonals ------------------------------
//
// Vertices A, B, C, D at distances x1, y1, x2, y2 from the crossing O along two geodesics
// meeting at angle phi. Diagonals AC and BD are orthogonal iff the side identity holds:
// E2: a^2 + c^2 = b^2 + d^2; H2: cosh a cosh c = cosh b cosh d; S2: cos a cos c = cos b cos d.

struct Quad {
  Point A, B, C, D;
};

inline Quad random_quad(GeometryKind k, double phi, Rng& r) {
  const double lo = 0.15, hi = k == kE ? 2.5 : k == kH ? 1.8 : 1.4;
  double x1 = uni(r, lo, hi), x2 = uni(r, lo, hi), y1 = uni(r, lo, hi), y2 = uni(r, lo, hi);
  double alpha = uni(r, -std::numbers::pi, std::numbers::pi);
  switch (k) {
    case kE: {
      double ox = uni(r, -2, 2), oy = uni(r, -2, 2);
      auto at = [&](double t, double dir) { return Point::euclidean(ox + t * std::cos(dir), oy + t * std::sin(dir)); };
      return {at(x1, alpha), at(y1, alpha + phi), at(-x2, alpha), at(-y2, alpha + phi)};
    }
    case kH: {
      std::complex<double> a = std::polar(std::sqrt(uni(r, 0, 0.25)), uni(r, -3.1, 3.1));
      auto at = [&](double t, double dir) {
        auto z = std::polar(std::tanh(t / 2), dir);
        auto w = (z + a) / (1.0 + std::conj(a) * z);
        return Point::poincare(w.real(), w.imag());
      };
      return {at(x1, alpha), at(y1, alpha + phi), at(-x2, alpha), at(-y2, alpha + phi)};
    }
    case kS: {
      Point O = random_point(kS, r);
      Vec3 helper = std::abs(O.c[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
      Vec3 e1 = cross(O.c, helper);
      e1 = (1 / norm(e1)) * e1;
      Vec3 e2 = cross(O.c, e1);
      auto at = [&](double t, double dir) {
        Vec3 u = std::cos(dir) * e1 + std::sin(dir) * e2;
        Vec3 v = std::cos(t) * O.c + std::sin(t) * u;
        return Point::spherical(v[0], v[1], v[2]);
      };
      return {at(x1, alpha), at(y1, alpha + phi), at(-x2, alpha), at(-y2, alpha + phi)};
    }
  }
  return {};
}

inline bool diagonals_orthogonal(GeometryKind k, const Quad& q, double tol) {
  switch (k) {
    case kE: {
      Vec3 u = q.C.c - q.A.c, v = q.D.c - q.B.c;
      return std::abs(dot(u, v)) / (norm(u) * norm(v)) < tol;
    }
    case kH: {
      // Unit normals of the two geodesics in Minkowski space; their product is the cosine of the angle.
      auto normal = [](const Point& a, const Point& b) {
        Vec3 X = to_hyperboloid(a), Y = to_hyperboloid(b);
        Vec3 w = cross(X, Y);
        Vec3 N{-w[0], w[1], w[2]};
        return (1 / std::sqrt(mdot(N, N))) * N;
      };
      return std::abs(mdot(normal(q.A, q.C), normal(q.B, q.D))) < tol;
    }
    case kS: {
      Vec3 n1 = cross(q.A.c, q.C.c), n2 = cross(q.B.c, q.D.c);
      return std::abs(dot(n1, n2)) / (norm(n1) * norm(n2)) < tol;
    }
  }
  return false;
}

inline bool side_identity(GeometryKind k, const Quad& q, double tol) {
  double a = distance(q.A, q.B), b = distance(q.B, q.C), c = distance(q.C, q.D), d = distance(q.D, q.A);
  switch (k) {
    case kE: return std::abs((a * a + c * c) - (b * b + d * d)) < tol;
    case kH: return std::abs(std::cosh(a) * std::cosh(c) - std::cosh(b) * std::cosh(d)) < tol;
    case kS: return std::abs(std::cos(a) * std::cos(c) - std::cos(b) * std::cos(d)) < tol;
  }
  return false;
}

inline Outcome quadrilateral_experiment(GeometryKind k, int samples, std::uint64_t seed, double tol = 1e-9) {
  Rng r(seed);
  Outcome o;
  for (int s = 0; s < samples; ++s, ++o.samples) {
    const bool built_orthogonal = s % 2 == 0;
    double phi = std::numbers::pi / 2;
    while (!built_orthogonal && std::abs(std::cos(phi)) < 0.05) phi = uni(r, 0.15, std::numbers::pi - 0.15);
    Quad q = random_quad(k, phi, r);
    bool ortho = diagonals_orthogonal(k, q, tol);
    if (ortho != built_orthogonal) o.fail("orthogonality test disagrees with the construction");
    if (ortho != side_identity(k, q, tol)) o.fail("side identity disagrees with diagonal orthogonality");
  }
  return o;
}

// ---- quotient and antipodal normalisation ---------------------------------

inline Framework with_duplicates(GeometryKind k, Rng& r) {
  Framework fw = random_framework(k, static_cast<std::size_t>(pick(r, 1, 4)), static_cast<std::size_t>(pick(r, 1, 4)), r);
  for (auto* part : {&fw.P, &fw.Q}) {
    int extra = pick(r, 0, 3);
    for (int e = 0; e < extra; ++e) {
      const Point src = (*part)[static_cast<std::size_t>(pick(r, 0, static_cast<int>(part->size()) - 1))];
      Point dup = src;
      if (k == kS && pick(r, 0, 2) == 0) dup = antipode(src);
      auto pos = part->begin() + pick(r, 0, static_cast<int>(part->size()));
      part->insert(pos, dup);
    }
  }
  return fw;
}

inline Outcome quotient_idempotence(int samples, std::uint64_t seed) {
  Rng r(seed);
  Outcome o;
  for (int s = 0; s < samples; ++s, ++o.samples) {
    GeometryKind k = kKinds[static_cast<std::size_t>(s % 3)];
    Framework fw = with_duplicates(k, r);
    Framework q1 = quotient(fw), q2 = quotient(q1);
    if (q1.P != q2.P || q1.Q != q2.Q) o.fail("quotient not idempotent");
    if (q1.m() > fw.m() || q1.n() > fw.n()) o.fail("quotient grew a part");
    if (overlap_status(q1).status == OverlapStatus::Overlapping) o.fail("quotient still overlapping");
  }
  return o;
}

inline Outcome antipodal_involution(int samples, std::uint64_t seed) {
  Rng r(seed);
  Outcome o;
  for (int s = 0; s < samples; ++s, ++o.samples) {
    Framework fw = random_framework(kS, static_cast<std::size_t>(pick(r, 2, 4)), static_cast<std::size_t>(pick(r, 2, 4)), r);
    auto N = normalize_antipodal(fw);
    Framework back = apply_flips(N.fw, N.flips);
    if (back.P != fw.P || back.Q != fw.Q) o.fail("flips do not undo the normalisation");
    Framework twice = apply_flips(apply_flips(fw, N.flips), N.flips);
    if (twice.P != fw.P || twice.Q != fw.Q) o.fail("flip record is not an involution");
    for (std::size_t j = 0; j < fw.n(); ++j)
      if (dot(N.fw.P[0].c, N.fw.Q[j].c) < 0) o.fail("rod at p_0 longer than pi/2 after normalisation");
    for (std::size_t i = 0; i < fw.m(); ++i)
      if (dot(N.fw.P[i].c, N.fw.Q[0].c) < 0) o.fail("rod at q_0 longer than pi/2 after normalisation");
  }
  return o;
}

// ---- generated mechanisms -------------------------------------------------

// count values with pairwise gaps >= gap, drawn by draw().
template <class Draw>
std::vector<double> spaced(Rng& r, std::size_t count, double gap, Draw draw) {
  for (;;) {
    std::vector<double> v;
    for (std::size_t k = 0; k < count; ++k) v.push_back(draw(r));
    bool ok = true;
    for (std::size_t a = 0; a < v.size(); ++a)
      for (std::size_t b = a + 1; b < v.size(); ++b) ok = ok && std::abs(std::abs(v[a]) - std::abs(v[b])) >= gap;
    if (ok) return v;
  }
}

inline std::vector<double> dixon1_values(GeometryKind k, std::size_t count, Rng& r) {
  switch (k) {
    case kE: return spaced(r, count, 0.1, [](Rng& g) { return sign(g) * uni(g, 0.3, 3); });
    case kH: return spaced(r, count, 0.1, [](Rng& g) { return sign(g) * uni(g, 0.1, 1.5); });
    case kS:
      return spaced(r, count, 0.1, [](Rng& g) {
        double v;
        do v = uni(g, 0.15, std::numbers::pi - 0.15);
        while (std::abs(v - std::numbers::pi / 2) < 0.15);
        return v;
      });
  }
  return {};
}

inline Framework random_dixon1(GeometryKind k, Rng& r) {
  auto m = static_cast<std::size_t>(pick(r, 3, 4)), n = static_cast<std::size_t>(pick(r, 3, 4));
  return generate_dixon1(k, dixon1_values(k, m, r), dixon1_values(k, n, r));
}

inline std::vector<int> random_selection(Rng& r) {
  std::vector<int> s{1, 2, 3, 4};
  std::shuffle(s.begin(), s.end(), r);
  s.resize(static_cast<std::size_t>(pick(r, 3, 4)));
  return s;
}

inline Point random_anchor(GeometryKind k, Rng& r) {
  for (;;) {
    Point p = random_point(k, r);
    if (k == kH && std::hypot(p.c[0], p.c[1]) > 0.8) continue;
    if (std::abs(p.c[0]) < 0.15 || std::abs(p.c[1]) < 0.15) continue;
    if (k == kS && std::abs(p.c[2]) < 0.15) continue;
    return p;
  }
}

inline Framework random_dixon2(GeometryKind k, Rng& r) {
  for (;;) {
    Point pa = random_anchor(k, r), qa = random_anchor(k, r);
    auto ps = random_selection(r), qs = random_selection(r);
    FlipRecord flips;
    if (k == kS) {
      for (std::size_t i = 0; i < ps.size(); ++i) flips.P.push_back(pick(r, 0, 1));
      for (std::size_t j = 0; j < qs.size(); ++j) flips.Q.push_back(pick(r, 0, 1));
    }
    // Keep the two orbits well apart so the instance is comfortably non-overlapping.
    double gap = 1e300;
    for (auto& a : axis_orbit(pa))
      for (auto& b : axis_orbit(qa)) {
        gap = std::min(gap, coord_gap(a, b));
        if (k == kS) gap = std::min(gap, coord_gap(a, antipode(b)));
      }
    if (gap < 0.05) continue;
    return generate_dixon2(k, pa, qa, ps, qs, flips);
  }
}

inline Framework random_cda(Rng& r) {
  for (;;) {
    double theta = pick(r, 0, 1) ? uni(r, 0.25, 1.3) : uni(r, 1.85, 2.9);
    double phi1 = uni(r, -3.0, 3.0);
    try {
      return generate_cda(theta, phi1, uni(r, 0, 1000)).fw;
    } catch (const GenerationError&) {
    }
  }
}

inline MechanismKind expected_dixon1(GeometryKind k) {
  return k == kS ? MechanismKind::SphericalD1 : MechanismKind::Dixon1;
}
inline MechanismKind expected_dixon2(GeometryKind k) {
  return k == kS ? MechanismKind::ProjectiveD2 : MechanismKind::Dixon2;
}

// Joints (1,0),(0,2),(4,0) and (1,2),(0,0),(4,2): every 4-cycle has the Dixon-2 length
// pattern, yet the framework is rigid; all six joints lie on y(y - 2) = 0.
inline Framework rigid_counterexample() {
  return Framework::make(kE, {Point::euclidean(1, 0), Point::euclidean(0, 2), Point::euclidean(4, 0)},
                         {Point::euclidean(1, 2), Point::euclidean(0, 0), Point::euclidean(4, 2)});
}

inline Point nudge(const Point& p, const Vec3& dir, double eps) {
  Vec3 v = p.c + eps * dir;
  return Point::make(p.kind, v);
}

inline Vec3 random_dir(GeometryKind k, Rng& r) {
  std::normal_distribution<double> g;
  Vec3 v{g(r), g(r), k == kS ? g(r) : 0.0};
  return (1 / norm(v)) * v;
}

// A flexible instance with one joint pushed off its mechanism by eps.
inline Framework perturbed_instance(Rng& r, double eps) {
  int gen = pick(r, 0, 6);
  GeometryKind k = gen == 6 ? kS : kKinds[static_cast<std::size_t>(gen % 3)];
  if (gen < 3) {
    // Off the geodesic: P lies on the first axis, Q on the second.
    Framework fw = random_dixon1(k, r);
    bool inP = pick(r, 0, 1);
    auto& part = inP ? fw.P : fw.Q;
    auto idx = static_cast<std::size_t>(pick(r, 0, static_cast<int>(part.size()) - 1));
    Vec3 dir = k == kS ? (inP ? Vec3{0, 0, 1} : Vec3{0, 1, 0}) : (inP ? Vec3{0, 1, 0} : Vec3{1, 0, 0});
    part[idx] = nudge(part[idx], dir, eps);
    return fw;
  }
  Framework fw = gen < 6 ? random_dixon2(k, r) : random_cda(r);
  bool inP = pick(r, 0, 1);
  auto& part = inP ? fw.P : fw.Q;
  auto idx = static_cast<std::size_t>(pick(r, 0, static_cast<int>(part.size()) - 1));
  part[idx] = nudge(part[idx], random_dir(k, r), eps);
  return fw;
}

inline Outcome classifier_corpus(int per_generator, std::uint64_t seed) {
  Rng r(seed);
  Outcome o;
  auto expect = [&](const Framework& fw, MechanismKind want, const std::string& label) {
    ++o.samples;
    auto c = classify(fw);
    if (c.kind != want || !c.flexible) o.fail(label + " classified " + to_string(c.kind));
  };
  for (GeometryKind k : kKinds) {
    for (int s = 0; s < per_generator; ++s) expect(random_dixon1(k, r), expected_dixon1(k), "dixon1/" + to_string(k));
    for (int s = 0; s < per_generator; ++s) expect(random_dixon2(k, r), expected_dixon2(k), "dixon2/" + to_string(k));
  }
  for (int s = 0; s < per_generator; ++s) expect(random_cda(r), MechanismKind::CDA, "cda");
  return o;
}

inline Outcome perturbed_rigid(int samples, std::uint64_t seed, double eps = 1e-6) {
  Rng r(seed);
  Outcome o;
  for (int s = 0; s < samples; ++s, ++o.samples) {
    auto c = classify(perturbed_instance(r, eps));
    if (c.kind != MechanismKind::Rigid || c.flexible) o.fail("perturbed instance classified " + to_string(c.kind));
  }
  return o;
}

// ---- Dixon-1 closed-form oracle -------------------------------------------
//
// Parts on two orthogonal axes through O: p_i at signed position a_i on the first, q_j at b_j
// on the second. The rod p_i q_j satisfies
//   E2: r^2 = a^2 + b^2,  H2: cosh r = cosh a cosh b,  S2: cos r = cos a cos b,
// so a^2 -> a^2 + s, b^2 -> b^2 - s (E2) and cosh a -> e^s cosh a, cosh b -> e^-s cosh b (H2;
// cos on S2) keep every rod. Positions follow generate_dixon1's axis conventions.

struct Dixon1Oracle {
  GeometryKind kind;
  std::vector<double> xs, ys;

  std::pair<double, double> interval() const {
    double lo = -1e300, hi = 1e300;
    for (double x : xs) switch (kind) {
        case kE: lo = std::max(lo, -x * x); break;
        case kH: lo = std::max(lo, -std::log(std::cosh(x))); break;
        case kS: hi = std::min(hi, -std::log(std::abs(std::cos(x)))); break;
      }
    for (double y : ys) switch (kind) {
        case kE: hi = std::min(hi, y * y); break;
        case kH: hi = std::min(hi, std::log(std::cosh(y))); break;
        case kS: lo = std::max(lo, std::log(std::abs(std::cos(y)))); break;
      }
    return {lo, hi};
  }

  double moved(double v, double s, bool first) const {
    double e = first ? s : -s;
    switch (kind) {
      case kE: return std::copysign(std::sqrt(v * v + e), v);
      case kH: return std::copysign(std::acosh(std::cosh(v) * std::exp(e)), v);
      case kS: return std::acos(std::cos(v) * std::exp(e));
    }
    return v;
  }

  Point on_axis(double v, bool first) const {
    switch (kind) {
      case kE: return first ? Point::euclidean(v, 0) : Point::euclidean(0, v);
      case kH: return first ? Point::poincare(std::tanh(v / 2), 0) : Point::poincare(0, std::tanh(v / 2));
      case kS:
        return first ? Point::spherical(std::cos(v), std::sin(v), 0) : Point::spherical(std::cos(v), 0, std::sin(v));
    }
    return {};
  }

  Framework at(double s) const {
    Framework fw{kind, {}, {}};
    for (double x : xs) fw.P.push_back(on_axis(moved(x, s, true), true));
    for (double y : ys) fw.Q.push_back(on_axis(moved(y, s, false), false));
    return fw;
  }
};

inline double wrap_angle(double a) { return std::remainder(a, 2 * std::numbers::pi); }

struct OracleRun {
  Outcome outcome;
  std::size_t frames = 0;
  double max_deviation = 0;
  double drift = 0;
  bool jammed = false;
};

// Trace a Dixon-1 instance inside the closed form's chamber and compare every frame with the
// closed-form configuration carried onto the trace's fixed pair and matched by driver angle.
inline OracleRun dixon1_oracle_run(const Dixon1Oracle& orc, int steps_per_side = 100) {
  OracleRun run;
  const Framework f0 = orc.at(0);
  auto [lo, hi] = orc.interval();
  const double slo = 0.9 * lo, shi = 0.9 * hi;

  // Probe trace to learn the fixed pair and driver the tracer settles on.
  TraceOptions probe;
  probe.steps = 1;
  probe.step = 1e-4;
  auto first = trace_flex(f0, probe);
  if (first.jammed) {
    run.jammed = true;
    run.outcome.fail("trace jammed");
    return run;
  }
  const std::size_t fp = first.path.fixed_p, fq = first.path.fixed_q, dq = first.path.driver_q;
  auto aligned = [&](double s) {
    Framework c = orc.at(s);
    PairIsometry iso(c.P[fp], c.Q[fq], f0.P[fp], f0.Q[fq]);
    for (auto& p : c.P) p = iso(p);
    for (auto& q : c.Q) q = iso(q);
    return c;
  };
  auto driver = [&](double s) { return wrap_angle(angle_about(f0.P[fp], f0.Q[dq], aligned(s).Q[dq])); };

  const int grid = 2000;
  std::vector<double> gs(grid + 1), gt(grid + 1);
  for (int k = 0; k <= grid; ++k) {
    gs[static_cast<std::size_t>(k)] = slo + (shi - slo) * k / grid;
    gt[static_cast<std::size_t>(k)] = driver(gs[static_cast<std::size_t>(k)]);
  }
  for (int k = 0; k < grid; ++k)
    if ((gt[static_cast<std::size_t>(k + 1)] - gt[static_cast<std::size_t>(k)]) * (gt[grid] - gt[0]) <= 0) {
      run.outcome.fail("driver angle is not monotone in s over the chamber");
      return run;
    }
  double reach = std::min(std::abs(gt.front()), std::abs(gt.back()));
  if (gt.front() * gt.back() >= 0) {
    run.outcome.fail("chamber does not straddle the start");
    return run;
  }

  TraceOptions opt;
  opt.steps = steps_per_side;
  opt.step = 0.999 * reach / steps_per_side;
  auto res = trace_flex(f0, opt);
  if (res.jammed) {
    run.jammed = true;
    run.outcome.fail("trace jammed");
    return run;
  }
  const auto& path = res.path;
  if (path.fixed_p != fp || path.fixed_q != fq || path.driver_q != dq) run.outcome.fail("tracer changed its driver");
  run.frames = path.frames.size();
  run.drift = path.max_length_drift;

  auto s_of = [&](double theta) {
    std::size_t k = 0;
    const bool up = gt.back() > gt.front();
    while (k + 1 < gt.size() && (up ? gt[k + 1] < theta : gt[k + 1] > theta)) ++k;
    double a = gs[k], b = gs[std::min(k + 1, gs.size() - 1)];
    double fa = driver(a) - theta;
    for (int it = 0; it < 200 && b - a > 1e-16; ++it) {
      double mid = 0.5 * (a + b), fm = driver(mid) - theta;
      if ((fm < 0) == (fa < 0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    return 0.5 * (a + b);
  };

  for (std::size_t k = 0; k < path.frames.size(); ++k, ++run.outcome.samples) {
    const Framework& f = path.frames[k];
    Framework c = aligned(s_of(path.theta[k]));
    double dev = 0;
    for (std::size_t i = 0; i < f.m(); ++i) dev = std::max(dev, coord_gap(f.P[i], c.P[i]));
    for (std::size_t j = 0; j < f.n(); ++j) dev = std::max(dev, coord_gap(f.Q[j], c.Q[j]));
    run.max_deviation = std::max(run.max_deviation, dev);
  }
  run.outcome.worst = run.max_deviation;
  if (run.frames < 200) run.outcome.fail("fewer than 200 frames");
  if (run.max_deviation >= 1e-7) run.outcome.fail("frame deviates from the closed form");
  if (run.drift >= 1e-9) run.outcome.fail("rod length drift");
  return run;
}

inline Dixon1Oracle standard_dixon1(GeometryKind k) {
  switch (k) {
    case kE: return {k, {1, 2, 3}, {1, 2, 3}};
    case kH: return {k, {0.8, 1.2, 1.6}, {0.7, 1.1, 1.5}};
    case kS: return {k, {0.9, 1.2, 2.0}, {0.7, 1.1, 2.3}};
  }
  return {k, {}, {}};
}

// Per-frame Dixon-2 length pattern along a traced path.
inline Outcome dixon2_trace_pattern(const Framework& fw, double tol = 1e-9) {
  Outcome o;
  auto res = trace_flex(fw);
  if (res.jammed) {
    o.fail("trace jammed");
    return o;
  }
  for (auto& f : res.path.frames) {
    ++o.samples;
    if (!check_d2_lengths33(rod_lengths(f), tol).ok) o.fail("frame lost the length pattern");
  }
  if (res.path.frames.size() < 2) o.fail("trace did not move");
  return o;
}

inline Outcome cda_trace_invariant(const Framework& fw, double tol = 1e-9) {
  Outcome o;
  auto res = trace_flex(fw);
  if (res.jammed) {
    o.fail("trace jammed");
    return o;
  }
  const auto& frames = res.path.frames;
  const double u0 = dot(frames.front().P[0].c, frames.front().Q[0].c);
  for (auto& f : frames) {
    ++o.samples;
    double gap = std::abs(dot(f.P[0].c, f.Q[0].c) - u0);
    o.worst = std::max(o.worst, gap);
    if (gap > tol) o.fail("<p_0, q_0> changed");
  }
  if (frames.size() < 2) o.fail("trace did not move");
  return o;
}

inline Framework dixon2_example(GeometryKind k) {
  if (k == kE) return generate_dixon2(k, Point::euclidean(1, 2), Point::euclidean(3, 4), {1, 3, 2}, {1, 3, 2});
  if (k == kH) return generate_dixon2(k, Point::poincare(0.3, 0.4), Point::poincare(0.5, 0.2), {1, 3, 2}, {1, 3, 2});
  return generate_dixon2(k, Point::spherical(0.3, 0.5, 0.8), Point::spherical(0.6, 0.2, 0.5), {1, 3, 2}, {1, 3, 2});
}

// ---- exact necessary condition ---------------------------------------------

using poly::Poly;
using poly::Rational;

// Exact joints: E2 (x, y, 0); H2 points of the hyperboloid (x0, x1, x2); S2 rational unit vectors.
using ExactPoint = std::array<Rational, 3>;

inline Rational exact_length(GeometryKind k, const ExactPoint& a, const ExactPoint& b) {
  switch (k) {
    case kE: {
      Rational dx = a[0] - b[0], dy = a[1] - b[1];
      return dx * dx + dy * dy;
    }
    case kH: return a[0] * b[0] - a[1] * b[1] - a[2] * b[2];
    case kS: return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  }
  return 0;
}

struct ExactInstance {
  std::string label;
  GeometryKind kind;
  std::vector<ExactPoint> P, Q;
  bool flexible;
};

inline std::vector<ExactInstance> exact_instances() {
  using R = Rational;
  return {
      {"dixon1/euclidean", kE, {{1, 0, 0}, {-2, 0, 0}, {3, 0, 0}}, {{0, 1, 0}, {0, 2, 0}, {0, -3, 0}}, true},
      {"dixon2/euclidean", kE, {{1, 2, 0}, {-1, -2, 0}, {1, -2, 0}}, {{3, 4, 0}, {-3, -4, 0}, {3, -4, 0}}, true},
      {"dixon1/hyperbolic", kH, {{R(5, 4), R(3, 4), 0}, {R(13, 12), R(-5, 12), 0}, {R(17, 8), R(15, 8), 0}},
       {{R(5, 3), 0, R(4, 3)}, {R(25, 24), 0, R(7, 24)}, {R(41, 40), 0, R(-9, 40)}}, true},
      {"dixon2/hyperbolic", kH, {{3, 2, 2}, {3, -2, -2}, {3, 2, -2}}, {{9, 4, 8}, {9, -4, -8}, {9, 4, -8}}, true},
      {"dixon1/spherical", kS, {{R(3, 5), R(4, 5), 0}, {R(5, 13), R(12, 13), 0}, {R(-8, 17), R(15, 17), 0}},
       {{R(4, 5), 0, R(3, 5)}, {R(20, 29), 0, R(21, 29)}, {R(12, 13), 0, R(5, 13)}}, true},
      {"dixon2/spherical", kS, {{R(2, 3), R(1, 3), R(2, 3)}, {R(-2, 3), R(-1, 3), R(2, 3)}, {R(2, 3), R(-1, 3), R(2, 3)}},
       {{R(2, 7), R(3, 7), R(6, 7)}, {R(-2, 7), R(-3, 7), R(6, 7)}, {R(2, 7), R(-3, 7), R(6, 7)}}, true},
      {"rigid/euclidean", kE, {{1, 2, 0}, {-1, -2, 0}, {1, -3, 0}}, {{3, 4, 0}, {-3, -4, 0}, {3, -4, 0}}, false},
      {"rigid/spherical", kS, {{R(2, 3), R(1, 3), R(2, 3)}, {R(-2, 3), R(-1, 3), R(2, 3)}, {R(2, 3), R(-1, 3), R(2, 3)}},
       {{R(2, 7), R(3, 7), R(6, 7)}, {R(-2, 7), R(-3, 7), R(6, 7)}, {R(3, 13), R(-4, 13), R(12, 13)}}, false},
  };
}

// F_1, F_2 with the instance's lengths substituted; polynomials in t_1, t_2 only.
inline std::pair<Poly, Poly> evaluated_F(const ExactInstance& inst) {
  auto L = poly::linkage_ring(inst.kind);
  auto sub = [&](Poly p) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        p = p.substitute(L->index(poly::length_symbol(inst.kind, i, j)),
                         Poly(L, exact_length(inst.kind, inst.P[static_cast<std::size_t>(i)],
                                              inst.Q[static_cast<std::size_t>(j)])));
    return p;
  };
  return {sub(poly::cached_F(inst.kind, 1)), sub(poly::cached_F(inst.kind, 2))};
}

struct ResultantPair {
  Poly by_t1, by_t2;
};

inline ResultantPair evaluated_resultants(const ExactInstance& inst) {
  auto [F1, F2] = evaluated_F(inst);
  return {poly::sylvester_resultant(F1, F2, "t1", 4, 4), poly::sylvester_resultant(F1, F2, "t2", 4, 4)};
}

// Generic Dixon-1 lengths r_ij^2 = x_i^2 + y_j^2: F_i / (R_i^2 - r^2) is the square of one
// polynomial shared by i = 1, 2.
struct SquareFactorCheck {
  bool divisible = false, square = false, same_root = false;
  std::string root;
};

inline SquareFactorCheck dixon1_square_factorisation() {
  auto L = poly::linkage_ring(kE);
  auto R = poly::Ring::make({"T1", "T2", "t1", "t2", "lambda", "x0", "x1", "x2", "y0", "y1", "y2"});
  auto x = [&](int i) { return Poly::var(R, "x" + std::to_string(i)); };
  auto y = [&](int j) { return Poly::var(R, "y" + std::to_string(j)); };
  std::vector<Poly> images;
  for (const char* v : {"T1", "T2", "t1", "t2", "lambda"}) images.push_back(Poly::var(R, v));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) images.push_back(x(i) * x(i) + y(j) * y(j));
  SquareFactorCheck out;
  std::optional<Poly> roots[2];
  out.divisible = out.square = true;
  for (int i = 1; i <= 2; ++i) {
    Poly F = poly::cached_F(kE, i).compose(R, images);
    auto q = poly::divide_exact(F, x(i) * x(i) - x(0) * x(0));
    if (!q) {
      out.divisible = out.square = false;
      return out;
    }
    roots[i - 1] = poly::sqrt_exact(*q);
    if (!roots[i - 1]) out.square = false;
  }
  if (out.square) {
    out.same_root = *roots[0] == *roots[1] || *roots[0] == -*roots[1];
    out.root = roots[0]->to_string();
  }
  return out;
}

}  // namespace flexlab::testing
