#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "flexlab/framework.hpp"
#include "flexlab/geometry.hpp"

namespace flexlab {

enum class MechanismKind { Rigid, Dixon1, Dixon2, SphericalD1, ProjectiveD2, CDA, SmallPartFree, TwoRowChain };

inline std::string to_string(MechanismKind k) {
  switch (k) {
    case MechanismKind::Rigid: return "Rigid";
    case MechanismKind::Dixon1: return "Dixon1";
    case MechanismKind::Dixon2: return "Dixon2";
    case MechanismKind::SphericalD1: return "SphericalD1";
    case MechanismKind::ProjectiveD2: return "ProjectiveD2";
    case MechanismKind::CDA: return "CDA";
    case MechanismKind::SmallPartFree: return "SmallPartFree";
    case MechanismKind::TwoRowChain: return "TwoRowChain";
  }
  return "?";
}

struct Classification {
  bool flexible = false;
  MechanismKind kind = MechanismKind::Rigid;
  int internal_dof_claim = 0;
  nlohmann::json witness = nlohmann::json::object();
  bool d1_lengths = false;
  bool d2_lengths = false;

  nlohmann::json to_json() const {
    return {{"flexible", flexible},
            {"kind", to_string(kind)},
            {"dof", internal_dof_claim},
            {"witness", witness},
            {"diagnostics", {{"d1_lengths", d1_lengths}, {"d2_lengths", d2_lengths}}}};
  }
};

struct Detection {
  bool found = false;
  nlohmann::json witness = nlohmann::json::object();
  explicit operator bool() const { return found; }
};

inline nlohmann::json to_json(const Geodesic& g) {
  return {{"normal", {g.normal[0], g.normal[1], g.normal[2]}}, {"offset", g.offset}};
}

namespace detail {

inline void require_clean(const Framework& fw, double tol, const char* who) {
  if (overlap_status(fw, tol).status == OverlapStatus::Overlapping)
    throw PreconditionError(std::string(who) + " needs a non-overlapping framework; apply quotient() first");
}

inline bool near_zero(double x, double tol) { return std::abs(x) <= tol; }

template <std::size_t N>
std::vector<std::array<int, N>> permutations() {
  std::array<int, N> a;
  for (std::size_t i = 0; i < N; ++i) a[i] = static_cast<int>(i);
  std::vector<std::array<int, N>> out;
  do out.push_back(a);
  while (std::next_permutation(a.begin(), a.end()));
  return out;
}

}  // namespace detail

inline Detection detect_dixon1(const Framework& fw, double tol = kDefaultTol) {
  detail::require_clean(fw, tol, "detect_dixon1");
  Detection d;
  if (fw.m() < 2 || fw.n() < 2) return d;
  auto gp = fit_geodesic(fw.P, tol);
  auto gq = fit_geodesic(fw.Q, tol);
  if (!gp || !gq) return d;
  try {
    if (!geodesics_orthogonal(*gp, *gq, tol)) return d;
  } catch (const NoIntersectionError&) {
    return d;
  }
  d.found = true;
  d.witness = {{"P_geodesic", to_json(*gp)}, {"Q_geodesic", to_json(*gq)}};
  return d;
}

namespace detail {

struct OrbitFit {
  bool ok = false;
  std::vector<bool> flips;
};

// Is every point of the part one of z, s1 z, s2 z, s1 s2 z (or an antipode when signed), z the first point?
inline OrbitFit orbit_fit(const Geodesic& a1, const Geodesic& a2, const std::vector<Point>& part, bool signed_,
                          double tol) {
  OrbitFit f;
  for (auto& p : part)
    if (distance_to_geodesic(a1, p) <= tol || distance_to_geodesic(a2, p) <= tol) return f;
  const Point& z = part[0];
  std::array<Point, 4> orbit{z, reflect(a1, z), reflect(a2, z), reflect(a1, reflect(a2, z))};
  for (auto& p : part) {
    bool hit = false;
    for (auto& o : orbit) {
      if (distance(p, o) <= tol) {
        hit = true;
        f.flips.push_back(false);
        break;
      }
      if (signed_ && distance(p, antipode(o)) <= tol) {
        hit = true;
        f.flips.push_back(true);
        break;
      }
    }
    if (!hit) return f;
  }
  f.ok = true;
  return f;
}

}  // namespace detail

// (D2) in E2/H2, (PD2) on S2. The axes are searched among perpendicular bisectors of same-part
// pairs; on S2 the bisector of (a, -b) is a candidate too, which covers every antipodal flip.
inline Detection detect_dixon2(const Framework& fw, double tol = kDefaultTol) {
  detail::require_clean(fw, tol, "detect_dixon2");
  Detection d;
  if (fw.m() > 4 || fw.n() > 4 || fw.m() < 2 || fw.n() < 2) return d;
  const bool sph = fw.kind == GeometryKind::Spherical;
  std::vector<Geodesic> cands;
  for (const auto* part : {&fw.P, &fw.Q})
    for (std::size_t i = 0; i < part->size(); ++i)
      for (std::size_t j = i + 1; j < part->size(); ++j) {
        cands.push_back(perpendicular_bisector((*part)[i], (*part)[j]));
        if (sph) cands.push_back(perpendicular_bisector((*part)[i], antipode((*part)[j])));
      }
  for (std::size_t a = 0; a < cands.size(); ++a)
    for (std::size_t b = a + 1; b < cands.size(); ++b) {
      bool orth = false;
      try {
        orth = geodesics_orthogonal(cands[a], cands[b], tol);
      } catch (const NoIntersectionError&) {
        continue;
      }
      if (!orth) continue;
      auto fp = detail::orbit_fit(cands[a], cands[b], fw.P, sph, tol);
      if (!fp.ok) continue;
      auto fq = detail::orbit_fit(cands[a], cands[b], fw.Q, sph, tol);
      if (!fq.ok) continue;
      d.found = true;
      d.witness = {{"axes", {to_json(cands[a]), to_json(cands[b])}},
                   {"anchors", {convert_point(fw.P[0], canonical_model(fw.kind)),
                                convert_point(fw.Q[0], canonical_model(fw.kind))}}};
      if (sph) d.witness["flips"] = {{"P", fp.flips}, {"Q", fq.flips}};
      return d;
    }
  return d;
}

// (DA): after renumbering and flips, u_11 = u_21 = u_22 = -u_12 and u_01 = u_02 = u_10 = u_20 = 0.
inline Detection detect_cda(const Framework& fw, double tol = kDefaultTol) {
  if (fw.kind != GeometryKind::Spherical) throw PreconditionError("detect_cda needs a spherical framework");
  if (fw.m() != 3 || fw.n() != 3) throw PreconditionError("detect_cda needs a (3,3) framework");
  detail::require_clean(fw, tol, "detect_cda");
  Detection d;
  static const auto perms = detail::permutations<3>();
  for (auto& sp : perms)
    for (auto& sq : perms) {
      double M[3][3];
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) M[i][j] = dot(fw.P[sp[i]].c, fw.Q[sq[j]].c);
      if (!detail::near_zero(M[0][1], tol) || !detail::near_zero(M[0][2], tol) || !detail::near_zero(M[1][0], tol) ||
          !detail::near_zero(M[2][0], tol))
        continue;
      for (int mask = 0; mask < 64; ++mask) {
        auto s = [&](int k) { return (mask >> k) & 1 ? -1.0 : 1.0; };
        auto v = [&](int i, int j) { return s(i) * s(3 + j) * M[i][j]; };
        double a = v(1, 1);
        if (std::abs(v(2, 1) - a) <= tol && std::abs(v(2, 2) - a) <= tol && std::abs(v(1, 2) + a) <= tol) {
          d.found = true;
          std::vector<bool> fp, fq;
          for (int k = 0; k < 3; ++k) {
            fp.push_back(s(k) < 0);
            fq.push_back(s(3 + k) < 0);
          }
          d.witness = {{"P_order", sp}, {"Q_order", sq}, {"flips", {{"P", fp}, {"Q", fq}}}, {"diagonal_u", a}};
          return d;
        }
      }
    }
  return d;
}

inline bool check_d1_lengths(const LengthMatrix& L, double tol = kDefaultTol) {
  if (L.m < 2 || L.n < 2) throw UsageError("check_d1_lengths needs m, n >= 2");
  const bool euclid = L.kind == GeometryKind::Euclidean;
  for (std::size_t i = 0; i < L.m; ++i)
    for (std::size_t k = i + 1; k < L.m; ++k)
      for (std::size_t j = 0; j < L.n; ++j)
        for (std::size_t l = j + 1; l < L.n; ++l) {
          double lhs = euclid ? L.u(i, j) + L.u(k, l) : L.u(i, j) * L.u(k, l);
          double rhs = euclid ? L.u(i, l) + L.u(k, j) : L.u(i, l) * L.u(k, j);
          if (!near(lhs, rhs, tol)) return false;
        }
  return true;
}

struct D2Labeling {
  bool ok = false;
  std::array<int, 3> P_order{}, Q_order{};
  std::array<bool, 3> P_flips{}, Q_flips{};
  // Squared lengths (E2) or u values (H2/S2) of the a, b, c, d rods.
  double a = 0, b = 0, c = 0, d = 0;
};

inline D2Labeling check_d2_lengths33(const LengthMatrix& L, double tol = kDefaultTol) {
  if (L.m != 3 || L.n != 3) throw UsageError("check_d2_lengths33 needs a 3x3 length matrix");
  static const auto perms = detail::permutations<3>();
  const int masks = L.kind == GeometryKind::Spherical ? 64 : 1;
  D2Labeling out;
  for (auto& sp : perms)
    for (auto& sq : perms)
      for (int mask = 0; mask < masks; ++mask) {
        auto s = [&](int k) { return (mask >> k) & 1 ? -1.0 : 1.0; };
        auto v = [&](int i, int j) { return s(i) * s(3 + j) * L.u(sp[i], sq[j]); };
        double a = v(0, 0), b = v(0, 1), c = v(0, 2), d = v(1, 2);
        bool pattern = near(v(1, 1), a, tol) && near(v(2, 2), a, tol) && near(v(1, 0), b, tol) &&
                       near(v(2, 0), c, tol) && near(v(2, 1), d, tol);
        if (!pattern) continue;
        // a^2 + c^2 = b^2 + d^2 in E2; u_00 + u_02 = u_01 + u_12 otherwise.
        if (!near(a + c, b + d, tol)) continue;
        out.ok = true;
        out.P_order = sp;
        out.Q_order = sq;
        for (int k = 0; k < 3; ++k) {
          out.P_flips[k] = s(k) < 0;
          out.Q_flips[k] = s(3 + k) < 0;
        }
        out.a = a;
        out.b = b;
        out.c = c;
        out.d = d;
        return out;
      }
  return out;
}

// min(m, n) <= 2: a single joint is free to rotate its rods; two rows flex unless a
// 4-cycle has one rod as long as the other three together.
inline Classification two_part_flexibility(const Framework& fw, double tol = kDefaultTol) {
  const std::size_t m = fw.m(), n = fw.n();
  if (std::min(m, n) > 2) throw PreconditionError("two_part_flexibility needs min(m, n) <= 2");
  Classification c;
  if (m == 1 || n == 1) {
    c.internal_dof_claim = static_cast<int>(m == 1 ? n - 1 : m - 1);
    c.flexible = c.internal_dof_claim > 0;
    c.kind = c.flexible ? MechanismKind::SmallPartFree : MechanismKind::Rigid;
    return c;
  }
  auto L = rod_lengths(fw);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = i + 1; k < m; ++k)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = j + 1; l < n; ++l) {
          std::array<double, 4> r{L(i, j), L(k, j), L(k, l), L(i, l)};
          double sum = r[0] + r[1] + r[2] + r[3];
          for (int e = 0; e < 4; ++e)
            if (near(2 * r[e], sum, tol)) {
              c.kind = MechanismKind::Rigid;
              c.witness = {{"jammed_cycle", {i, j, k, l}}, {"long_rod", e}};
              return c;
            }
        }
  c.flexible = true;
  c.kind = MechanismKind::TwoRowChain;
  c.internal_dof_claim = 1;
  return c;
}

inline Classification classify(const Framework& input, double tol = kDefaultTol) {
  Framework fw = quotient(input, tol);
  Classification c;
  nlohmann::json quotient_note = nullptr;
  if (fw.m() != input.m() || fw.n() != input.n()) quotient_note = {{"m", fw.m()}, {"n", fw.n()}};
  if (std::min(fw.m(), fw.n()) <= 2) {
    c = two_part_flexibility(fw, tol);
    if (fw.m() >= 2 && fw.n() >= 2) c.d1_lengths = check_d1_lengths(rod_lengths(fw), tol);
  } else {
    nlohmann::json flips = nullptr;
    if (fw.kind == GeometryKind::Spherical) {
      auto nrm = normalize_antipodal(fw);
      if (!nrm.flips.identity()) flips = {{"P", nrm.flips.P}, {"Q", nrm.flips.Q}};
      fw = nrm.fw;
    }
    auto L = rod_lengths(fw);
    c.d1_lengths = check_d1_lengths(L, tol);
    if (fw.m() == 3 && fw.n() == 3) c.d2_lengths = check_d2_lengths33(L, tol).ok;
    const bool sph = fw.kind == GeometryKind::Spherical;
    if (auto d = detect_dixon1(fw, tol)) {
      c.kind = sph ? MechanismKind::SphericalD1 : MechanismKind::Dixon1;
      c.witness = d.witness;
    } else if (auto d2 = detect_dixon2(fw, tol)) {
      c.kind = sph ? MechanismKind::ProjectiveD2 : MechanismKind::Dixon2;
      c.witness = d2.witness;
    } else if (sph && fw.m() == 3 && fw.n() == 3) {
      if (auto d3 = detect_cda(fw, tol)) {
        c.kind = MechanismKind::CDA;
        c.witness = d3.witness;
      }
    }
    c.flexible = c.kind != MechanismKind::Rigid;
    c.internal_dof_claim = c.flexible ? 1 : 0;
    if (!flips.is_null()) c.witness["normalization_flips"] = flips;
  }
  if (!quotient_note.is_null()) c.witness["quotient"] = quotient_note;
  return c;
}

}  // namespace flexlab
