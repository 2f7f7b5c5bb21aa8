#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "flexlab/errors.hpp"
#include "flexlab/geometry.hpp"

namespace flexlab {

// A complete bipartite framework. Index 0 of each part is the distinguished fixed pair.
struct Framework {
  GeometryKind kind = GeometryKind::Euclidean;
  std::vector<Point> P, Q;

  std::size_t m() const { return P.size(); }
  std::size_t n() const { return Q.size(); }

  // Throws InvalidFramework; a rod may not join coincident (or, on S2, antipodal) joints.
  void validate(double tol = kModelTol) const {
    if (P.empty() || Q.empty()) throw InvalidFramework("both parts need at least one joint");
    for (const auto* part : {&P, &Q})
      for (const auto& p : *part) {
        if (p.kind != kind) throw InvalidFramework("joint geometry does not match the framework");
        check_model(p);
      }
    for (std::size_t i = 0; i < m(); ++i)
      for (std::size_t j = 0; j < n(); ++j) {
        if (distance(P[i], Q[j]) <= tol)
          throw InvalidFramework("p" + std::to_string(i) + " coincides with q" + std::to_string(j));
        if (kind == GeometryKind::Spherical && distance(P[i], antipode(Q[j])) <= tol)
          throw InvalidFramework("p" + std::to_string(i) + " is antipodal to q" + std::to_string(j));
      }
  }

  static Framework make(GeometryKind kind, std::vector<Point> P, std::vector<Point> Q) {
    Framework fw{kind, std::move(P), std::move(Q)};
    fw.validate();
    return fw;
  }
};

struct LengthMatrix {
  GeometryKind kind = GeometryKind::Euclidean;
  std::size_t m = 0, n = 0;
  std::vector<double> r;  // row-major

  double operator()(std::size_t i, std::size_t j) const { return r[i * n + j]; }
  // cosh r (H2), cos r (S2), r^2 (E2).
  double u(std::size_t i, std::size_t j) const { return length_to_u(kind, (*this)(i, j)); }
};

inline LengthMatrix rod_lengths(const Framework& fw) {
  LengthMatrix L{fw.kind, fw.m(), fw.n(), {}};
  L.r.reserve(fw.m() * fw.n());
  for (auto& p : fw.P)
    for (auto& q : fw.Q) L.r.push_back(distance(fw.kind, p, q));
  return L;
}

enum class OverlapStatus { NonOverlapping, P2NonOverlapping, Overlapping };

inline std::string to_string(OverlapStatus s) {
  switch (s) {
    case OverlapStatus::NonOverlapping: return "nonOverlapping";
    case OverlapStatus::P2NonOverlapping: return "p2NonOverlapping";
    case OverlapStatus::Overlapping: return "overlapping";
  }
  return "?";
}

struct JointPair {
  char part;  // 'P' or 'Q'
  std::size_t i, j;
  friend bool operator==(const JointPair&, const JointPair&) = default;
};

struct OverlapReport {
  std::vector<JointPair> within_part_coincidences;
  std::vector<JointPair> s2_antipodal_within_part;
  OverlapStatus status = OverlapStatus::NonOverlapping;
};

inline OverlapReport overlap_status(const Framework& fw, double tol = kDefaultTol) {
  OverlapReport rep;
  auto scan = [&](const std::vector<Point>& part, char name) {
    for (std::size_t i = 0; i < part.size(); ++i)
      for (std::size_t j = i + 1; j < part.size(); ++j) {
        if (distance(part[i], part[j]) < tol) rep.within_part_coincidences.push_back({name, i, j});
        if (fw.kind == GeometryKind::Spherical && distance(part[i], antipode(part[j])) < tol)
          rep.s2_antipodal_within_part.push_back({name, i, j});
      }
  };
  scan(fw.P, 'P');
  scan(fw.Q, 'Q');
  bool clean = rep.within_part_coincidences.empty() && rep.s2_antipodal_within_part.empty();
  if (!clean)
    rep.status = OverlapStatus::Overlapping;
  else
    rep.status = fw.kind == GeometryKind::Spherical ? OverlapStatus::P2NonOverlapping : OverlapStatus::NonOverlapping;
  return rep;
}

namespace detail {

// Classes of the transitive closure of tol-closeness (up to sign on S2); each class keeps its first member.
inline std::vector<Point> collapse(const std::vector<Point>& part, double tol) {
  std::vector<std::size_t> parent(part.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < part.size(); ++i)
    for (std::size_t j = i + 1; j < part.size(); ++j) {
      bool same = distance(part[i], part[j]) < tol ||
                  (part[i].kind == GeometryKind::Spherical && distance(part[i], antipode(part[j])) < tol);
      if (same) parent[std::max(find(i), find(j))] = std::min(find(i), find(j));
    }
  std::vector<Point> out;
  for (std::size_t i = 0; i < part.size(); ++i)
    if (find(i) == i) out.push_back(part[i]);
  return out;
}

}  // namespace detail

// Identify overlapping joints of each part. On S2 antipodal joints of one part
// are identified too: they see every rod of the other part as r and pi - r.
inline Framework quotient(const Framework& fw, double tol = kDefaultTol) {
  Framework out{fw.kind, detail::collapse(fw.P, tol), detail::collapse(fw.Q, tol)};
  out.validate(tol);
  return out;
}

struct FlipRecord {
  std::vector<bool> P, Q;
  bool identity() const {
    return std::none_of(P.begin(), P.end(), [](bool b) { return b; }) &&
           std::none_of(Q.begin(), Q.end(), [](bool b) { return b; });
  }
};

inline Framework apply_flips(const Framework& fw, const FlipRecord& f) {
  if (fw.kind != GeometryKind::Spherical) throw UsageError("antipodal flips need a spherical framework");
  if (f.P.size() != fw.m() || f.Q.size() != fw.n()) throw UsageError("flip record does not match the framework");
  Framework out = fw;
  for (std::size_t i = 0; i < fw.m(); ++i)
    if (f.P[i]) out.P[i] = antipode(fw.P[i]);
  for (std::size_t j = 0; j < fw.n(); ++j)
    if (f.Q[j]) out.Q[j] = antipode(fw.Q[j]);
  return out;
}

struct AntipodalNormalization {
  Framework fw;
  FlipRecord flips;
  // Rods at p_0 or q_0 still longer than pi/2; empty unless some u vanishes to rounding.
  std::vector<std::pair<std::size_t, std::size_t>> residual;
};

// Make every rod at p_0 or q_0 at most pi/2 long: flip q_0 for r_00, then p_i for r_i0 and q_j for r_0j.
inline AntipodalNormalization normalize_antipodal(const Framework& fw) {
  if (fw.kind != GeometryKind::Spherical) throw UsageError("normalize_antipodal needs a spherical framework");
  AntipodalNormalization res{fw, {std::vector<bool>(fw.m()), std::vector<bool>(fw.n())}, {}};
  auto u = [](const Point& a, const Point& b) { return dot(a.c, b.c); };
  if (u(fw.P[0], fw.Q[0]) < 0) res.flips.Q[0] = true;
  Point q0 = res.flips.Q[0] ? antipode(fw.Q[0]) : fw.Q[0];
  for (std::size_t i = 1; i < fw.m(); ++i) res.flips.P[i] = u(fw.P[i], q0) < 0;
  for (std::size_t j = 1; j < fw.n(); ++j) res.flips.Q[j] = u(fw.P[0], fw.Q[j]) < 0;
  res.fw = apply_flips(fw, res.flips);
  for (std::size_t i = 0; i < fw.m(); ++i)
    for (std::size_t j = 0; j < fw.n(); ++j)
      if ((i == 0 || j == 0) && distance(res.fw.P[i], res.fw.Q[j]) > std::acos(0.0) + kModelTol)
        res.residual.emplace_back(i, j);
  return res;
}

// ---- JSON -----------------------------------------------------------------

inline nlohmann::json to_json(const Framework& fw) {
  auto part = [&](const std::vector<Point>& pts) {
    nlohmann::json a = nlohmann::json::array();
    for (auto& p : pts) a.push_back(convert_point(p, canonical_model(fw.kind)));
    return a;
  };
  return {{"geometry", to_string(fw.kind)}, {"model", to_string(canonical_model(fw.kind))},
          {"P", part(fw.P)}, {"Q", part(fw.Q)}};
}

inline Framework framework_from_json(const nlohmann::json& j) {
  auto field = [&](const char* name) -> const nlohmann::json& {
    if (!j.is_object() || !j.contains(name)) throw ParseError(std::string("missing field \"") + name + "\"");
    return j.at(name);
  };
  GeometryKind kind;
  try {
    kind = parse_geometry(field("geometry").get<std::string>());
  } catch (const nlohmann::json::exception&) {
    throw ParseError("field \"geometry\" must be a string");
  } catch (const std::exception& e) {
    throw ParseError(std::string("field \"geometry\": ") + e.what());
  }
  Model model = canonical_model(kind);
  if (j.contains("model")) {
    try {
      model = parse_model(j.at("model").get<std::string>());
    } catch (const std::exception& e) {
      throw ParseError(std::string("field \"model\": ") + e.what());
    }
    if (!model_supported(kind, model)) throw ParseError("field \"model\": not a model of " + to_string(kind));
  }
  auto part = [&](const char* name) {
    const auto& arr = field(name);
    if (!arr.is_array()) throw ParseError(std::string("field \"") + name + "\" must be an array");
    std::vector<Point> pts;
    for (std::size_t k = 0; k < arr.size(); ++k) {
      std::string where = std::string("field \"") + name + "\"[" + std::to_string(k) + "]";
      if (!arr[k].is_array() || arr[k].size() != model_dimension(model))
        throw ParseError(where + " needs " + std::to_string(model_dimension(model)) + " numbers");
      std::vector<double> v;
      for (auto& x : arr[k]) {
        if (!x.is_number()) throw ParseError(where + " holds a non-number");
        v.push_back(x.get<double>());
      }
      try {
        pts.push_back(from_model(kind, model, v));
      } catch (const Error& e) {
        throw ParseError(where + ": " + e.what());
      }
    }
    return pts;
  };
  Framework fw{kind, part("P"), part("Q")};
  try {
    fw.validate();
  } catch (const Error& e) {
    throw ParseError(std::string("invalid framework: ") + e.what());
  }
  return fw;
}

}  // namespace flexlab
