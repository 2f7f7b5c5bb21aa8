#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "flexlab/classifier.hpp"
#include "flexlab/framework.hpp"
#include "flexlab/kinematics/motion.hpp"

namespace flexlab {

namespace detail {

inline Framework checked(Framework fw, const char* who) {
  try {
    fw.validate();
  } catch (const InvalidFramework& e) {
    throw GenerationError(std::string(who) + ": invalid parameters, " + e.what());
  }
  if (overlap_status(fw).status == OverlapStatus::Overlapping)
    throw GenerationError(std::string(who) + ": invalid parameters, coincident joints");
  return fw;
}

// Point at signed distance d along the first (a = 0) or second (a = 1) axis through the origin.
inline Point on_axis(GeometryKind kind, int a, double d) {
  switch (kind) {
    case GeometryKind::Euclidean: return a ? Point::euclidean(0, d) : Point::euclidean(d, 0);
    case GeometryKind::Hyperbolic: {
      double t = std::tanh(d / 2);
      return a ? Point::poincare(0, t) : Point::poincare(t, 0);
    }
    case GeometryKind::Spherical:
      // Equator and the meridian through (1, 0, 0).
      return a ? Point::spherical(std::cos(d), 0, std::sin(d)) : Point::spherical(std::cos(d), std::sin(d), 0);
  }
  throw UsageError("bad geometry kind");
}

}  // namespace detail

// p_i on the first axis at xs[i], q_j on the orthogonal axis at ys[j].
inline Framework generate_dixon1(GeometryKind kind, const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.empty() || ys.empty()) throw GenerationError("generate_dixon1: empty part");
  Framework fw{kind, {}, {}};
  for (double x : xs) fw.P.push_back(detail::on_axis(kind, 0, x));
  for (double y : ys) fw.Q.push_back(detail::on_axis(kind, 1, y));
  return detail::checked(std::move(fw), "generate_dixon1");
}

// Orbit of an anchor under the reflections in the two coordinate axes (planes x = 0, y = 0 on S2),
// in the order z, s_x z, s_y z, s_x s_y z; selections are 1-based into that list.
inline std::array<Point, 4> axis_orbit(const Point& z) {
  auto mk = [&](double sx, double sy) { return Point::make(z.kind, {sx * z.c[0], sy * z.c[1], z.c[2]}); };
  return {mk(1, 1), mk(1, -1), mk(-1, 1), mk(-1, -1)};
}

inline Framework generate_dixon2(GeometryKind kind, const Point& p_anchor, const Point& q_anchor,
                                 const std::vector<int>& p_selection, const std::vector<int>& q_selection,
                                 const FlipRecord& flips = {}) {
  if (p_anchor.kind != kind || q_anchor.kind != kind) throw UsageError("anchor geometry mismatch");
  for (const Point* a : {&p_anchor, &q_anchor})
    if (std::abs(a->c[0]) < kModelTol || std::abs(a->c[1]) < kModelTol)
      throw GenerationError("generate_dixon2: degenerate anchor on a symmetry axis");
  auto part = [&](const Point& a, const std::vector<int>& sel) {
    if (sel.size() < 3 || sel.size() > 4) throw GenerationError("generate_dixon2: selections have 3 or 4 entries");
    auto orbit = axis_orbit(a);
    std::vector<Point> pts;
    for (int s : sel) {
      if (s < 1 || s > 4) throw GenerationError("generate_dixon2: selection entries are 1..4");
      pts.push_back(orbit[s - 1]);
    }
    return pts;
  };
  Framework fw{kind, part(p_anchor, p_selection), part(q_anchor, q_selection)};
  if (!flips.P.empty() || !flips.Q.empty()) {
    if (kind != GeometryKind::Spherical) throw UsageError("antipodal flips need spherical geometry");
    fw = apply_flips(fw, flips);
  }
  return detail::checked(std::move(fw), "generate_dixon2");
}

struct CdaSolution {
  Framework fw;
  double residual = 0;
  int iterations = 0;
};

// p_0 = (1,0,0), q_0 = (cos t, 0, sin t); p_k on the great circle orthogonal to q_0 at angle
// alpha_k, q_k on x = 0 at angle beta_k. alpha_1 = phi1 is given; damped Newton solves
// u_11 = u_21 = u_22 = -u_12 for (alpha_2, beta_1, beta_2), started from a seed-derived guess.
inline CdaSolution generate_cda(double theta, double phi1, double seed) {
  const double c = std::cos(theta), s = std::sin(theta);
  if (std::abs(c) < 1e-6) throw GenerationError("generate_cda: theta = pi/2 collapses the zero pattern");
  if (std::abs(s) < 1e-6) throw GenerationError("generate_cda: theta = 0 or pi puts q_0 on +-p_0");
  auto P = [&](double a) { return Vec3{-std::cos(a) * s, std::sin(a), std::cos(a) * c}; };
  auto Q = [&](double b) { return Vec3{0, std::cos(b), std::sin(b)}; };
  auto F = [&](const Eigen::Vector3d& x) {
    Vec3 p1 = P(phi1), p2 = P(x(0)), q1 = Q(x(1)), q2 = Q(x(2));
    double u11 = dot(p1, q1), u21 = dot(p2, q1), u22 = dot(p2, q2), u12 = dot(p1, q2);
    return Eigen::Vector3d(u11 - u21, u22 - u11, u12 + u11);
  };
  std::mt19937_64 rng(std::hash<double>{}(seed));
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
  // The all-zero pattern u_kl = 0 also solves the system; restart away from it.
  Eigen::Vector3d x, f;
  int it = 0;
  bool ok = false;
  for (int attempt = 0; attempt < 16 && !ok; ++attempt) {
    x = Eigen::Vector3d(ang(rng), ang(rng), ang(rng));
    f = F(x);
    for (it = 0; it < 100 && f.norm() > 1e-14; ++it) {
      Eigen::Matrix3d J;
      const double h = 1e-7;
      for (int k = 0; k < 3; ++k) {
        Eigen::Vector3d e = Eigen::Vector3d::Zero();
        e(k) = h;
        J.col(k) = (F(x + e) - F(x - e)) / (2 * h);
      }
      Eigen::Vector3d dx = J.completeOrthogonalDecomposition().solve(-f);
      double lam = 1;
      while (lam > 1e-6 && F(x + lam * dx).norm() >= f.norm()) lam /= 2;
      if (lam <= 1e-6) break;
      x += lam * dx;
      f = F(x);
    }
    ok = f.norm() < 1e-10 && std::abs(dot(P(phi1), Q(x(1)))) >= 1e-3;
  }
  if (!ok) throw GenerationError("generate_cda: Newton did not reach a nondegenerate solution; try another seed");
  Vec3 p1 = P(phi1), p2 = P(x(0)), q1 = Q(x(1)), q2 = Q(x(2));
  Framework fw{GeometryKind::Spherical,
               {Point::spherical(1, 0, 0), Point::spherical(p1[0], p1[1], p1[2]), Point::spherical(p2[0], p2[1], p2[2])},
               {Point::spherical(c, 0, s), Point::spherical(q1[0], q1[1], q1[2]), Point::spherical(q2[0], q2[1], q2[2])}};
  // Joints closer than this to each other (up to sign) make the instance numerically useless.
  for (const auto* part : {&fw.P, &fw.Q})
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j)
        if (std::abs(std::abs(dot((*part)[i].c, (*part)[j].c)) - 1) < 1e-6)
          throw GenerationError("generate_cda: P2-overlapping solution; try another seed");
  for (auto& p : fw.P)
    for (auto& q : fw.Q)
      if (std::abs(std::abs(dot(p.c, q.c)) - 1) < 1e-6)
        throw GenerationError("generate_cda: rod joins +-coincident joints; try another seed");
  return {detail::checked(std::move(fw), "generate_cda"), f.norm(), it};
}

// ---- closed-form Dixon-1 motion ------------------------------------------

namespace detail {

// Frame of a Dixon-1 framework: the crossing point O and unit tangents along the two geodesics.
struct AxisFrame {
  GeometryKind kind;
  Vec3 O, eP, eQ;

  double coord(const Point& p, bool alongP) const {
    const Vec3& e = alongP ? eP : eQ;
    switch (kind) {
      case GeometryKind::Euclidean: return dot(p.c - O, e);
      case GeometryKind::Hyperbolic: return std::asinh(mdot(to_hyperboloid(p), e));
      case GeometryKind::Spherical: return std::atan2(dot(p.c, e), dot(p.c, O));
    }
    return 0;
  }
  Point at(double a, bool alongP) const {
    const Vec3& e = alongP ? eP : eQ;
    switch (kind) {
      case GeometryKind::Euclidean: {
        Vec3 v = O + a * e;
        return Point::euclidean(v[0], v[1]);
      }
      case GeometryKind::Hyperbolic: return from_hyperboloid(std::cosh(a) * O + std::sinh(a) * e);
      case GeometryKind::Spherical: {
        Vec3 v = std::cos(a) * O + std::sin(a) * e;
        return Point::spherical(v[0], v[1], v[2]);
      }
    }
    throw UsageError("bad geometry kind");
  }
};

inline AxisFrame axis_frame(const Framework& fw, double tol) {
  auto gp = fit_geodesic(fw.P, tol), gq = fit_geodesic(fw.Q, tol);
  if (!gp || !gq || !geodesics_orthogonal(*gp, *gq, tol))
    throw PreconditionError("dixon1_closed_form needs a Dixon mechanism of the first kind");
  AxisFrame f{fw.kind, {}, gq->normal, gp->normal};
  const Vec3 &n1 = gp->normal, &n2 = gq->normal;
  switch (fw.kind) {
    case GeometryKind::Euclidean: {
      double det = n1[0] * n2[1] - n1[1] * n2[0];
      f.O = {(gp->offset * n2[1] - gq->offset * n1[1]) / det, (n1[0] * gq->offset - n2[0] * gp->offset) / det, 0};
      break;
    }
    case GeometryKind::Hyperbolic: {
      // Minkowski cross product: orthogonal to both normals in the form -x0 y0 + x1 y1 + x2 y2.
      Vec3 w = cross(n1, n2);
      Vec3 O{w[0], -w[1], -w[2]};
      double s = -mdot(O, O);
      O = (1 / std::sqrt(s)) * O;
      if (O[0] < 0) O = -O;
      f.O = O;
      break;
    }
    case GeometryKind::Spherical: f.O = normalized(cross(n1, n2)); break;
  }
  return f;
}

}  // namespace detail

namespace detail {

struct Dixon1Coords {
  AxisFrame frame;
  std::vector<double> a, b;
  double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
};

// Coordinates along both geodesics and the admissible s-interval.
inline Dixon1Coords dixon1_coords(const Framework& fw, double tol) {
  Dixon1Coords d{axis_frame(fw, tol), {}, {}};
  for (auto& p : fw.P) d.a.push_back(d.frame.coord(p, true));
  for (auto& q : fw.Q) d.b.push_back(d.frame.coord(q, false));
  for (double x : d.a) switch (fw.kind) {
      case GeometryKind::Euclidean: d.lo = std::max(d.lo, -x * x); break;
      case GeometryKind::Hyperbolic: d.lo = std::max(d.lo, -std::log(std::cosh(x))); break;
      case GeometryKind::Spherical:
        if (std::abs(std::cos(x)) > 0) d.hi = std::min(d.hi, -std::log(std::abs(std::cos(x))));
        break;
    }
  for (double y : d.b) switch (fw.kind) {
      case GeometryKind::Euclidean: d.hi = std::min(d.hi, y * y); break;
      case GeometryKind::Hyperbolic: d.hi = std::min(d.hi, std::log(std::cosh(y))); break;
      case GeometryKind::Spherical:
        if (std::abs(std::cos(y)) > 0) d.lo = std::max(d.lo, std::log(std::abs(std::cos(y))));
        break;
    }
  return d;
}

}  // namespace detail

inline std::pair<double, double> dixon1_interval(const Framework& fw, double tol = kDefaultTol) {
  auto d = detail::dixon1_coords(fw, tol);
  return {d.lo, d.hi};
}

// E2: a_i^2 + s, b_j^2 - s. H2: cosh a_i e^s, cosh b_j e^-s. S2: cos a_i e^s, cos b_j e^-s.
// Signs of the coordinates are kept; the geodesics stay put. Endpoints are excluded.
inline Framework dixon1_closed_form(const Framework& fw, double s, double tol = kDefaultTol) {
  auto d = detail::dixon1_coords(fw, tol);
  if (s != 0 && !(s > d.lo && s < d.hi)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "s outside the admissible interval (" << d.lo << ", " << d.hi << ")";
    throw DomainError(msg.str());
  }
  auto move = [&](double x, int sign) {
    double sg = x < 0 ? -1 : 1;
    switch (fw.kind) {
      case GeometryKind::Euclidean: return sg * std::sqrt(std::max(0.0, x * x + sign * s));
      case GeometryKind::Hyperbolic: return sg * std::acosh(std::max(1.0, std::cosh(x) * std::exp(sign * s)));
      case GeometryKind::Spherical: return sg * std::acos(std::clamp(std::cos(x) * std::exp(sign * s), -1.0, 1.0));
    }
    return x;
  };
  Framework out = fw;
  for (std::size_t i = 0; i < d.a.size(); ++i) out.P[i] = d.frame.at(move(d.a[i], +1), true);
  for (std::size_t j = 0; j < d.b.size(); ++j) out.Q[j] = d.frame.at(move(d.b[j], -1), false);
  return out;
}

}  // namespace flexlab
