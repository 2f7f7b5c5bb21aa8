#pragma once

#include <cmath>
#include <complex>

#include "flexlab/geometry.hpp"

// Isometries used to drive and compare motions.
namespace flexlab {

namespace detail {

using cplx = std::complex<double>;

inline cplx to_c(const Point& p) { return {p.c[0], p.c[1]}; }

// Disk automorphism taking a to 0, and its inverse.
inline cplx mobius_to0(cplx a, cplx z) { return (z - a) / (1.0 - std::conj(a) * z); }
inline cplx mobius_from0(cplx a, cplx w) { return (w + a) / (1.0 + std::conj(a) * w); }

inline Vec3 rodrigues(const Vec3& axis, const Vec3& v, double angle) {
  double c = std::cos(angle), s = std::sin(angle);
  return c * v + s * cross(axis, v) + ((1 - c) * dot(axis, v)) * axis;
}

inline Vec3 normalized(const Vec3& v) { return (1 / norm(v)) * v; }

}  // namespace detail

// Rotate p about center by angle (counterclockwise in E2/H2, right-handed about center on S2).
inline Point rotate_about(const Point& center, const Point& p, double angle) {
  require_same_kind(center, p);
  switch (p.kind) {
    case GeometryKind::Euclidean: {
      double dx = p.c[0] - center.c[0], dy = p.c[1] - center.c[1];
      double c = std::cos(angle), s = std::sin(angle);
      return Point::euclidean(center.c[0] + c * dx - s * dy, center.c[1] + s * dx + c * dy);
    }
    case GeometryKind::Hyperbolic: {
      auto a = detail::to_c(center);
      auto w = detail::mobius_to0(a, detail::to_c(p)) * std::polar(1.0, angle);
      auto z = detail::mobius_from0(a, w);
      return Point::poincare(z.real(), z.imag());
    }
    case GeometryKind::Spherical: {
      Vec3 v = detail::rodrigues(center.c, p.c, angle);
      return Point::spherical(v[0], v[1], v[2]);
    }
  }
  return p;
}

// Signed angle of p around center, measured from the direction of ref.
inline double angle_about(const Point& center, const Point& ref, const Point& p) {
  switch (p.kind) {
    case GeometryKind::Euclidean:
      return std::atan2(p.c[1] - center.c[1], p.c[0] - center.c[0]) -
             std::atan2(ref.c[1] - center.c[1], ref.c[0] - center.c[0]);
    case GeometryKind::Hyperbolic: {
      auto a = detail::to_c(center);
      return std::arg(detail::mobius_to0(a, detail::to_c(p))) - std::arg(detail::mobius_to0(a, detail::to_c(ref)));
    }
    case GeometryKind::Spherical: {
      Vec3 e1 = detail::normalized(ref.c - dot(ref.c, center.c) * center.c);
      Vec3 e2 = cross(center.c, e1);
      return std::atan2(dot(p.c, e2), dot(p.c, e1));
    }
  }
  return 0;
}

// The orientation-preserving isometry taking (a0, b0) to (a1, b1); |a0 b0| must equal |a1 b1|.
class PairIsometry {
 public:
  PairIsometry(const Point& a0, const Point& b0, const Point& a1, const Point& b1) : kind_(a0.kind) {
    switch (kind_) {
      case GeometryKind::Euclidean: {
        double t0 = std::atan2(b0.c[1] - a0.c[1], b0.c[0] - a0.c[0]);
        double t1 = std::atan2(b1.c[1] - a1.c[1], b1.c[0] - a1.c[0]);
        rot_ = std::polar(1.0, t1 - t0);
        from_ = detail::to_c(a0);
        to_ = detail::to_c(a1);
        break;
      }
      case GeometryKind::Hyperbolic: {
        from_ = detail::to_c(a0);
        to_ = detail::to_c(a1);
        auto w0 = detail::mobius_to0(from_, detail::to_c(b0));
        auto w1 = detail::mobius_to0(to_, detail::to_c(b1));
        rot_ = std::polar(1.0, std::arg(w1) - std::arg(w0));
        break;
      }
      case GeometryKind::Spherical: {
        // Orthonormal frames (a, e, a x e) at both ends.
        auto frame = [](const Point& a, const Point& b) {
          Vec3 e = detail::normalized(b.c - dot(b.c, a.c) * a.c);
          return std::array<Vec3, 3>{a.c, e, cross(a.c, e)};
        };
        f0_ = frame(a0, b0);
        f1_ = frame(a1, b1);
        break;
      }
    }
  }

  Point operator()(const Point& p) const {
    switch (kind_) {
      case GeometryKind::Euclidean: {
        auto z = to_ + rot_ * (detail::to_c(p) - from_);
        return Point::euclidean(z.real(), z.imag());
      }
      case GeometryKind::Hyperbolic: {
        auto z = detail::mobius_from0(to_, rot_ * detail::mobius_to0(from_, detail::to_c(p)));
        return Point::poincare(z.real(), z.imag());
      }
      case GeometryKind::Spherical: {
        Vec3 v = dot(p.c, f0_[0]) * f1_[0] + dot(p.c, f0_[1]) * f1_[1] + dot(p.c, f0_[2]) * f1_[2];
        return Point::spherical(v[0], v[1], v[2]);
      }
    }
    return p;
  }

 private:
  GeometryKind kind_;
  std::complex<double> from_, to_, rot_{1, 0};
  std::array<Vec3, 3> f0_{}, f1_{};
};

}  // namespace flexlab
