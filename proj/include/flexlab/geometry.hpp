#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "flexlab/errors.hpp"

namespace flexlab {

enum class GeometryKind { Euclidean, Hyperbolic, Spherical };

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kModelTol = 1e-12;

inline std::string to_string(GeometryKind k) {
  switch (k) {
    case GeometryKind::Euclidean: return "euclidean";
    case GeometryKind::Hyperbolic: return "hyperbolic";
    case GeometryKind::Spherical: return "spherical";
  }
  return "?";
}

inline GeometryKind parse_geometry(std::string_view s) {
  if (s == "euclidean") return GeometryKind::Euclidean;
  if (s == "hyperbolic") return GeometryKind::Hyperbolic;
  if (s == "spherical") return GeometryKind::Spherical;
  throw ParseError("unknown geometry '" + std::string(s) + "'");
}

// |x - y| <= tol (1 + |x| + |y|)
inline bool near(double x, double y, double tol) { return std::abs(x - y) <= tol * (1 + std::abs(x) + std::abs(y)); }

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline Vec3 operator-(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
// Minkowski form of signature (-,+,+); the hyperboloid is <X,X> = -1, X0 > 0.
inline double mdot(const Vec3& a, const Vec3& b) { return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

struct Point {
  GeometryKind kind = GeometryKind::Euclidean;
  Vec3 c{};

  static Point euclidean(double x, double y) { return {GeometryKind::Euclidean, {x, y, 0}}; }
  static Point poincare(double x, double y) {
    if (!(x * x + y * y < 1)) throw DomainError("point on or outside the Poincare disk boundary");
    return {GeometryKind::Hyperbolic, {x, y, 0}};
  }
  static Point spherical(double x, double y, double z) {
    double n = std::sqrt(x * x + y * y + z * z);
    if (!(n > 0) || !std::isfinite(n)) throw DomainError("zero vector is not a point of the sphere");
    return {GeometryKind::Spherical, {x / n, y / n, z / n}};
  }
  static Point make(GeometryKind k, const Vec3& v) {
    switch (k) {
      case GeometryKind::Euclidean: return euclidean(v[0], v[1]);
      case GeometryKind::Hyperbolic: return poincare(v[0], v[1]);
      case GeometryKind::Spherical: return spherical(v[0], v[1], v[2]);
    }
    throw UsageError("bad geometry kind");
  }

  double x() const { return c[0]; }
  double y() const { return c[1]; }
  double z() const { return c[2]; }

  friend bool operator==(const Point&, const Point&) = default;
};

inline void require_same_kind(const Point& p, const Point& q) {
  if (p.kind != q.kind) throw UsageError("points from different geometries");
}

inline void check_model(const Point& p) {
  if (p.kind == GeometryKind::Hyperbolic && !(p.c[0] * p.c[0] + p.c[1] * p.c[1] < 1))
    throw DomainError("point on or outside the Poincare disk boundary");
  if (p.kind == GeometryKind::Spherical && std::abs(dot(p.c, p.c) - 1) > kModelTol)
    throw DomainError("spherical point is not a unit vector");
}

// Poincare disk <-> hyperboloid.
inline Vec3 to_hyperboloid(const Point& p) {
  double r2 = p.c[0] * p.c[0] + p.c[1] * p.c[1];
  double w = 1 - r2;
  if (!(w > 0)) throw DomainError("point on or outside the Poincare disk boundary");
  return {(1 + r2) / w, 2 * p.c[0] / w, 2 * p.c[1] / w};
}
inline Point from_hyperboloid(const Vec3& X) {
  // Re-project onto the sheet first; drift accumulates under repeated Lorentz maps.
  double s = std::sqrt(std::max(1.0, 1 + X[1] * X[1] + X[2] * X[2]));
  return Point::poincare(X[1] / (1 + s), X[2] / (1 + s));
}

inline double distance(const Point& p, const Point& q) {
  require_same_kind(p, q);
  switch (p.kind) {
    case GeometryKind::Euclidean: return std::hypot(p.c[0] - q.c[0], p.c[1] - q.c[1]);
    case GeometryKind::Hyperbolic: {
      check_model(p);
      check_model(q);
      // cosh d - 1 = 2 sinh^2(d/2); the sinh form keeps short distances accurate.
      double dx = p.c[0] - q.c[0], dy = p.c[1] - q.c[1];
      double w = (1 - p.c[0] * p.c[0] - p.c[1] * p.c[1]) * (1 - q.c[0] * q.c[0] - q.c[1] * q.c[1]);
      return 2 * std::asinh(std::sqrt((dx * dx + dy * dy) / w));
    }
    case GeometryKind::Spherical: return std::atan2(norm(cross(p.c, q.c)), dot(p.c, q.c));
  }
  return 0;
}

inline double distance(GeometryKind kind, const Point& p, const Point& q) {
  if (p.kind != kind || q.kind != kind) throw UsageError("point kind does not match the requested geometry");
  return distance(p, q);
}

// cosh r (H2), cos r (S2); the Euclidean view is r^2.
inline double length_to_u(GeometryKind kind, double r) {
  switch (kind) {
    case GeometryKind::Euclidean: return r * r;
    case GeometryKind::Hyperbolic: return std::cosh(r);
    case GeometryKind::Spherical: return std::cos(r);
  }
  return 0;
}

inline double rho(GeometryKind kind, double u) {
  switch (kind) {
    case GeometryKind::Hyperbolic:
      if (!(u >= 1)) throw DomainError("rho_H needs u >= 1");
      return std::sqrt((u - 1) / (u + 1));
    case GeometryKind::Spherical:
      if (u == -1) throw InfinityError("rho_S(-1) is infinite");
      if (!(u > -1 && u <= 1)) throw DomainError("rho_S needs -1 < u <= 1");
      return std::sqrt((1 - u) / (1 + u));
    case GeometryKind::Euclidean: break;
  }
  throw UsageError("rho is defined for hyperbolic and spherical geometry only");
}

inline Point antipode(const Point& p) {
  if (p.kind != GeometryKind::Spherical) throw UsageError("antipode needs a spherical point");
  return {GeometryKind::Spherical, -p.c};
}

// ---- models ---------------------------------------------------------------

enum class Model { Cartesian, Poincare, Lobachevsky, Ambient, Geographic, Stereographic };

inline std::string to_string(Model m) {
  switch (m) {
    case Model::Cartesian: return "cartesian";
    case Model::Poincare: return "poincare";
    case Model::Lobachevsky: return "lobachevsky";
    case Model::Ambient: return "ambient";
    case Model::Geographic: return "geographic";
    case Model::Stereographic: return "stereographic";
  }
  return "?";
}

inline Model parse_model(std::string_view s) {
  for (Model m : {Model::Cartesian, Model::Poincare, Model::Lobachevsky, Model::Ambient, Model::Geographic,
                  Model::Stereographic})
    if (to_string(m) == s) return m;
  throw ParseError("unknown model '" + std::string(s) + "'");
}

inline Model canonical_model(GeometryKind k) {
  switch (k) {
    case GeometryKind::Euclidean: return Model::Cartesian;
    case GeometryKind::Hyperbolic: return Model::Poincare;
    case GeometryKind::Spherical: return Model::Ambient;
  }
  return Model::Cartesian;
}

inline bool model_supported(GeometryKind k, Model m) {
  switch (k) {
    case GeometryKind::Euclidean: return m == Model::Cartesian;
    case GeometryKind::Hyperbolic: return m == Model::Poincare || m == Model::Lobachevsky;
    case GeometryKind::Spherical: return m == Model::Ambient || m == Model::Geographic || m == Model::Stereographic;
  }
  return false;
}

inline std::size_t model_dimension(Model m) { return m == Model::Ambient ? 3 : 2; }

inline void require_model(GeometryKind k, Model m) {
  if (!model_supported(k, m)) throw UsageError("model " + to_string(m) + " does not belong to " + to_string(k));
}

// Coordinates of p in the target model. Lobachevsky coordinates use the real diameter
// as axis: x is the signed foot position along it, y the signed offset from it.
inline std::vector<double> convert_point(const Point& p, Model target) {
  require_model(p.kind, target);
  switch (target) {
    case Model::Cartesian:
    case Model::Poincare: return {p.c[0], p.c[1]};
    case Model::Ambient: return {p.c[0], p.c[1], p.c[2]};
    case Model::Lobachevsky: {
      Vec3 X = to_hyperboloid(p);
      double y = std::asinh(X[2]);
      double x = std::asinh(X[1] / std::sqrt(1 + X[2] * X[2]));
      return {x, y};
    }
    case Model::Geographic: return {std::atan2(p.c[1], p.c[0]), std::atan2(p.c[2], std::hypot(p.c[0], p.c[1]))};
    case Model::Stereographic: {
      double w = 1 - p.c[2];
      if (w < kModelTol) throw InfinityError("the north pole has no stereographic image");
      return {p.c[0] / w, p.c[1] / w};
    }
  }
  return {};
}

inline Point from_model(GeometryKind kind, Model source, const std::vector<double>& v) {
  require_model(kind, source);
  if (v.size() != model_dimension(source))
    throw ParseError("model " + to_string(source) + " needs " + std::to_string(model_dimension(source)) +
                     " coordinates");
  switch (source) {
    case Model::Cartesian: return Point::euclidean(v[0], v[1]);
    case Model::Poincare: return Point::poincare(v[0], v[1]);
    case Model::Ambient: return Point::spherical(v[0], v[1], v[2]);
    case Model::Lobachevsky: {
      double cy = std::cosh(v[1]);
      return from_hyperboloid({cy * std::cosh(v[0]), cy * std::sinh(v[0]), std::sinh(v[1])});
    }
    case Model::Geographic: {
      double cl = std::cos(v[1]);
      return Point::spherical(std::cos(v[0]) * cl, std::sin(v[0]) * cl, std::sin(v[1]));
    }
    case Model::Stereographic: {
      double w2 = v[0] * v[0] + v[1] * v[1];
      return Point::spherical(2 * v[0], 2 * v[1], w2 - 1);
    }
  }
  throw UsageError("bad model");
}

// Distance evaluated with the model's own formula.
inline double model_distance(GeometryKind kind, Model m, const std::vector<double>& a, const std::vector<double>& b) {
  require_model(kind, m);
  auto sq = [](double x) { return x * x; };
  switch (m) {
    case Model::Cartesian: return std::hypot(a[0] - b[0], a[1] - b[1]);
    case Model::Poincare: {
      double num = 2 * (sq(a[0] - b[0]) + sq(a[1] - b[1]));
      double den = (1 - sq(a[0]) - sq(a[1])) * (1 - sq(b[0]) - sq(b[1]));
      return std::acosh(std::max(1.0, 1 + num / den));
    }
    case Model::Lobachevsky: {
      double c = std::cosh(a[1]) * std::cosh(b[1]) * std::cosh(b[0] - a[0]) - std::sinh(a[1]) * std::sinh(b[1]);
      return std::acosh(std::max(1.0, c));
    }
    case Model::Ambient: return std::acos(std::clamp(a[0] * b[0] + a[1] * b[1] + a[2] * b[2], -1.0, 1.0));
    case Model::Geographic: {
      double c = std::cos(a[1]) * std::cos(b[1]) * std::cos(b[0] - a[0]) + std::sin(a[1]) * std::sin(b[1]);
      return std::acos(std::clamp(c, -1.0, 1.0));
    }
    case Model::Stereographic: {
      double num = 2 * (sq(a[0] - b[0]) + sq(a[1] - b[1]));
      double den = (1 + sq(a[0]) + sq(a[1])) * (1 + sq(b[0]) + sq(b[1]));
      return std::acos(std::clamp(1 - num / den, -1.0, 1.0));
    }
  }
  return 0;
}

// ---- circles --------------------------------------------------------------

struct Circle {
  GeometryKind kind = GeometryKind::Euclidean;
  Point center;
  double radius = 1;

  static Circle make(const Point& center, double radius) {
    if (!(radius > 0) || !std::isfinite(radius)) throw DomainError("circle radius must be positive and finite");
    if (center.kind == GeometryKind::Spherical && !(radius < std::numbers::pi))
      throw DomainError("spherical circle radius must be below pi");
    return {center.kind, center, radius};
  }
};

namespace detail {

struct PlaneCircle {
  double cx, cy, r;
};

// Euclidean circle of the hyperbolic circle about c with radius r, in the disk.
inline PlaneCircle disk_circle(const Point& c, double r) {
  double rho0 = std::tanh(r / 2);
  double c2 = c.c[0] * c.c[0] + c.c[1] * c.c[1];
  double den = 1 - rho0 * rho0 * c2;
  double s = (1 - rho0 * rho0) / den;
  return {c.c[0] * s, c.c[1] * s, rho0 * (1 - c2) / den};
}

// `tangent` forces the one-point answer; the caller decided it intrinsically.
inline std::vector<std::array<double, 2>> plane_intersection(const PlaneCircle& a, const PlaneCircle& b, bool tangent) {
  double dx = b.cx - a.cx, dy = b.cy - a.cy;
  double d = std::hypot(dx, dy);
  if (d == 0) return {};
  double ux = dx / d, uy = dy / d;
  double along = (d * d + a.r * a.r - b.r * b.r) / (2 * d);
  if (tangent) {
    along = std::clamp(along, -a.r, a.r);
    return {{a.cx + along * ux, a.cy + along * uy}};
  }
  double h2 = a.r * a.r - along * along;
  if (h2 < 0) return {};
  double h = std::sqrt(h2);
  // Left of the center line first.
  return {{a.cx + along * ux - h * uy, a.cy + along * uy + h * ux},
          {a.cx + along * ux + h * uy, a.cy + along * uy - h * ux}};
}

inline bool radii_tangent(double d, double r1, double r2, double tol) {
  return std::abs(d - (r1 + r2)) <= tol || std::abs(d - std::abs(r1 - r2)) <= tol;
}

}  // namespace detail

inline std::vector<Point> circle_intersection(const Circle& c1, const Circle& c2, double tol = kDefaultTol) {
  if (c1.kind != c2.kind) throw UsageError("circles from different geometries");
  const GeometryKind kind = c1.kind;
  double d = distance(c1.center, c2.center);
  double r1 = c1.radius, r2 = c2.radius;
  if (kind == GeometryKind::Spherical) {
    const Vec3 &a = c1.center.c, &b = c2.center.c;
    double g = dot(a, b);
    Vec3 n = cross(a, b);
    double nn = norm(n);
    // Same or antipodal centres: the circles coincide or are disjoint.
    if (nn < kModelTol) {
      double r2eff = g > 0 ? r2 : std::numbers::pi - r2;
      if (std::abs(r1 - r2eff) <= tol) throw InfiniteIntersectionError("identical circles");
      return {};
    }
    double a1 = std::cos(r1), a2 = std::cos(r2);
    double det = 1 - g * g;
    double alpha = (a1 - a2 * g) / det, beta = (a2 - a1 * g) / det;
    Vec3 x0 = alpha * a + beta * b;
    double h2 = 1 - dot(x0, x0);
    bool tangent = detail::radii_tangent(d, r1, r2, tol) || std::abs(2 * std::numbers::pi - r1 - r2 - d) <= tol;
    if (tangent) return {Point::spherical(x0[0], x0[1], x0[2])};
    if (h2 < 0) return {};
    Vec3 e = (1 / nn) * n;
    double h = std::sqrt(h2);
    Vec3 p = x0 + h * e, q = x0 - h * e;
    return {Point::spherical(p[0], p[1], p[2]), Point::spherical(q[0], q[1], q[2])};
  }
  if (d <= tol && std::abs(r1 - r2) <= tol) throw InfiniteIntersectionError("identical circles");
  bool tangent = detail::radii_tangent(d, r1, r2, tol);
  if (!tangent && (d > r1 + r2 || d < std::abs(r1 - r2))) return {};
  detail::PlaneCircle a, b;
  if (kind == GeometryKind::Euclidean) {
    a = {c1.center.c[0], c1.center.c[1], r1};
    b = {c2.center.c[0], c2.center.c[1], r2};
  } else {
    a = detail::disk_circle(c1.center, r1);
    b = detail::disk_circle(c2.center, r2);
  }
  std::vector<Point> out;
  for (auto& xy : detail::plane_intersection(a, b, tangent)) {
    if (kind == GeometryKind::Euclidean) {
      out.push_back(Point::euclidean(xy[0], xy[1]));
    } else {
      // Rounding can push a point a hair outside the disk for huge circles.
      double r = std::hypot(xy[0], xy[1]);
      if (r >= 1) continue;
      out.push_back(Point::poincare(xy[0], xy[1]));
    }
  }
  return out;
}

// ---- geodesics ------------------------------------------------------------

// E2: line n.x = offset with unit n. H2: {X : <N,X>_Minkowski = 0} in hyperboloid
// coordinates, <N,N> = 1. S2: great circle n.x = 0 with unit n.
struct Geodesic {
  GeometryKind kind = GeometryKind::Euclidean;
  Vec3 normal{};
  double offset = 0;

  struct Diameter {
    double dx, dy;
  };
  struct OrthoCircle {
    double cx, cy, r;
  };

  // H2 representation in the disk: a diameter or a circle orthogonal to the boundary.
  std::variant<Diameter, OrthoCircle> disk_form() const {
    if (kind != GeometryKind::Hyperbolic) throw UsageError("disk form exists for hyperbolic geodesics only");
    const Vec3& N = normal;
    if (std::abs(N[0]) < 1e-14) {
      double h = std::hypot(N[1], N[2]);
      return Diameter{-N[2] / h, N[1] / h};
    }
    return OrthoCircle{N[1] / N[0], N[2] / N[0], 1 / std::abs(N[0])};
  }
};

inline double distance_to_geodesic(const Geodesic& g, const Point& p) {
  if (g.kind != p.kind) throw UsageError("geodesic and point from different geometries");
  switch (g.kind) {
    case GeometryKind::Euclidean: return std::abs(g.normal[0] * p.c[0] + g.normal[1] * p.c[1] - g.offset);
    case GeometryKind::Hyperbolic: return std::asinh(std::abs(mdot(g.normal, to_hyperboloid(p))));
    case GeometryKind::Spherical: return std::asin(std::min(1.0, std::abs(dot(g.normal, p.c))));
  }
  return 0;
}

// The geodesic through two distinct (non-antipodal) points.
inline Geodesic geodesic_through(const Point& a, const Point& b) {
  require_same_kind(a, b);
  switch (a.kind) {
    case GeometryKind::Euclidean: {
      double dx = b.c[0] - a.c[0], dy = b.c[1] - a.c[1];
      double h = std::hypot(dx, dy);
      if (h == 0) throw DomainError("coincident points span no geodesic");
      Vec3 n{-dy / h, dx / h, 0};
      return {a.kind, n, n[0] * a.c[0] + n[1] * a.c[1]};
    }
    case GeometryKind::Hyperbolic: {
      Vec3 w = cross(to_hyperboloid(a), to_hyperboloid(b));
      Vec3 N{-w[0], w[1], w[2]};
      double s = mdot(N, N);
      if (!(s > 0)) throw DomainError("coincident points span no geodesic");
      return {a.kind, (1 / std::sqrt(s)) * N, 0};
    }
    case GeometryKind::Spherical: {
      Vec3 n = cross(a.c, b.c);
      double h = norm(n);
      if (h < kModelTol) throw AmbiguityError("coincident or antipodal points span no unique geodesic");
      return {a.kind, (1 / h) * n, 0};
    }
  }
  throw UsageError("bad geometry kind");
}

inline std::optional<Geodesic> fit_geodesic(const std::vector<Point>& pts, double tol = kDefaultTol) {
  if (pts.size() < 2) throw UsageError("fit_geodesic needs at least two points");
  for (auto& p : pts) require_same_kind(pts[0], p);
  const GeometryKind kind = pts[0].kind;
  if (kind == GeometryKind::Spherical)
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        if (distance(pts[i], antipode(pts[j])) < tol) throw AmbiguityError("antipodal pair: geodesic not unique");
  // The farthest pair spans the candidate; everything else must lie within tol of it.
  double best = -1;
  std::size_t bi = 0, bj = 1;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double d = distance(pts[i], pts[j]);
      if (d > best) {
        best = d;
        bi = i;
        bj = j;
      }
    }
  if (best < tol) return std::nullopt;
  Geodesic g = geodesic_through(pts[bi], pts[bj]);
  for (auto& p : pts)
    if (distance_to_geodesic(g, p) > tol) return std::nullopt;
  return g;
}

inline bool geodesics_orthogonal(const Geodesic& g1, const Geodesic& g2, double tol = kDefaultTol) {
  if (g1.kind != g2.kind) throw UsageError("geodesics from different geometries");
  switch (g1.kind) {
    case GeometryKind::Euclidean: {
      double c = g1.normal[0] * g2.normal[1] - g1.normal[1] * g2.normal[0];
      if (std::abs(c) < 1e-14) throw NoIntersectionError("parallel lines do not meet");
      return std::abs(g1.normal[0] * g2.normal[0] + g1.normal[1] * g2.normal[1]) <= tol;
    }
    case GeometryKind::Hyperbolic: {
      double g = mdot(g1.normal, g2.normal);
      if (std::abs(g) >= 1 - 1e-14) throw NoIntersectionError("hyperbolic geodesics do not meet");
      return std::abs(g) <= tol;
    }
    case GeometryKind::Spherical: return std::abs(dot(g1.normal, g2.normal)) <= tol;
  }
  return false;
}

// Mirror image of p in g.
inline Point reflect(const Geodesic& g, const Point& p) {
  if (g.kind != p.kind) throw UsageError("geodesic and point from different geometries");
  switch (g.kind) {
    case GeometryKind::Euclidean: {
      double s = 2 * (g.normal[0] * p.c[0] + g.normal[1] * p.c[1] - g.offset);
      return Point::euclidean(p.c[0] - s * g.normal[0], p.c[1] - s * g.normal[1]);
    }
    case GeometryKind::Hyperbolic: {
      Vec3 X = to_hyperboloid(p);
      return from_hyperboloid(X - (2 * mdot(X, g.normal)) * g.normal);
    }
    case GeometryKind::Spherical: {
      Vec3 x = p.c - (2 * dot(p.c, g.normal)) * g.normal;
      return Point::spherical(x[0], x[1], x[2]);
    }
  }
  return p;
}

// Locus of points equidistant from a and b.
inline Geodesic perpendicular_bisector(const Point& a, const Point& b) {
  require_same_kind(a, b);
  switch (a.kind) {
    case GeometryKind::Euclidean: {
      double dx = a.c[0] - b.c[0], dy = a.c[1] - b.c[1];
      double h = std::hypot(dx, dy);
      if (h == 0) throw DomainError("coincident points have no bisector");
      Vec3 n{dx / h, dy / h, 0};
      return {a.kind, n, n[0] * (a.c[0] + b.c[0]) / 2 + n[1] * (a.c[1] + b.c[1]) / 2};
    }
    case GeometryKind::Hyperbolic: {
      Vec3 N = to_hyperboloid(a) - to_hyperboloid(b);
      double s = mdot(N, N);
      if (!(s > 0)) throw DomainError("coincident points have no bisector");
      return {a.kind, (1 / std::sqrt(s)) * N, 0};
    }
    case GeometryKind::Spherical: {
      Vec3 n = a.c - b.c;
      double h = norm(n);
      if (h == 0) throw DomainError("coincident points have no bisector");
      return {a.kind, (1 / h) * n, 0};
    }
  }
  throw UsageError("bad geometry kind");
}

}  // namespace flexlab
