#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "flexlab/kinematics/trace.hpp"

namespace flexlab {

enum class MotionFormat { Json, Svg };

inline nlohmann::json motion_json(const FlexPath& path) {
  if (path.frames.empty()) throw UsageError("export_motion: empty path");
  nlohmann::json frames = nlohmann::json::array();
  for (std::size_t k = 0; k < path.frames.size(); ++k) {
    auto fw = to_json(path.frames[k]);
    frames.push_back({{"theta", path.theta[k]}, {"P", fw["P"]}, {"Q", fw["Q"]}, {"residual", path.residual[k]}});
  }
  const auto& f0 = path.frames.front();
  return {{"geometry", to_string(f0.kind)},
          {"model", to_string(canonical_model(f0.kind))},
          {"fixed", {path.fixed_p, path.fixed_q}},
          {"driver", path.driver_q},
          {"origin", path.origin},
          {"max_length_drift", path.max_length_drift},
          {"closure", to_string(path.closure)},
          {"frames", frames}};
}

// Frame k of a motion JSON document as a framework.
inline Framework frame_from_motion(const nlohmann::json& doc, std::size_t k) {
  nlohmann::json fw = {{"geometry", doc.at("geometry")}, {"model", doc.at("model")},
                       {"P", doc.at("frames").at(k).at("P")}, {"Q", doc.at("frames").at(k).at("Q")}};
  return framework_from_json(fw);
}

namespace detail {

struct SvgView {
  double scale, cx, cy;
  // Orthographic view of the sphere from +z; E2 fitted to the bounding box; H2 the unit disk.
  std::array<double, 2> map(const Point& p) const { return {cx + scale * p.c[0], cy - scale * p.c[1]}; }
};

inline SvgView svg_view(const FlexPath& path, double size) {
  const auto kind = path.frames.front().kind;
  if (kind != GeometryKind::Euclidean) return {0.45 * size, size / 2, size / 2};
  double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
  for (auto& f : path.frames)
    for (const auto* part : {&f.P, &f.Q})
      for (auto& p : *part) {
        lo_x = std::min(lo_x, p.c[0]);
        hi_x = std::max(hi_x, p.c[0]);
        lo_y = std::min(lo_y, p.c[1]);
        hi_y = std::max(hi_y, p.c[1]);
      }
  double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
  double scale = 0.85 * size / span;
  return {scale, size / 2 - scale * (lo_x + hi_x) / 2, size / 2 + scale * (lo_y + hi_y) / 2};
}

}  // namespace detail

// One <g> per joint and per rod, animated through the frames with discrete keyframes.
inline std::string motion_svg(const FlexPath& path, double size = 600) {
  if (path.frames.empty()) throw UsageError("export_motion: empty path");
  const Framework& f0 = path.frames.front();
  auto view = detail::svg_view(path, size);
  const std::size_t N = path.frames.size();
  const double dur = std::max(1.0, 0.04 * static_cast<double>(N));
  std::ostringstream o;
  o.precision(6);
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << size << "\" height=\"" << size
    << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
  if (f0.kind != GeometryKind::Euclidean)
    o << "  <circle class=\"boundary\" cx=\"" << size / 2 << "\" cy=\"" << size / 2 << "\" r=\"" << view.scale
      << "\" fill=\"none\" stroke=\"#888\"/>\n";
  auto values = [&](auto&& coord) {
    std::ostringstream v;
    v.precision(6);
    for (std::size_t k = 0; k < N; ++k) v << (k ? ";" : "") << coord(path.frames[k]);
    return v.str();
  };
  auto anim = [&](const char* attr, const std::string& vals) {
    if (N == 1) return std::string();
    return std::string("<animate attributeName=\"") + attr + "\" dur=\"" + std::to_string(dur) +
           "s\" repeatCount=\"indefinite\" calcMode=\"discrete\" values=\"" + vals + "\"/>";
  };
  auto joint = [&](const Framework& f, bool isP, std::size_t k) -> const Point& { return isP ? f.P[k] : f.Q[k]; };
  // Back hemisphere (z < 0) drawn dashed on S2.
  auto dash = [&](const Point& p) { return f0.kind == GeometryKind::Spherical && p.c[2] < 0; };
  for (std::size_t i = 0; i < f0.m(); ++i)
    for (std::size_t j = 0; j < f0.n(); ++j) {
      auto c = [&](bool isP, std::size_t k, int a) {
        return [=, &view](const Framework& f) { return view.map(isP ? f.P[k] : f.Q[k])[a]; };
      };
      auto p0 = view.map(f0.P[i]), q0 = view.map(f0.Q[j]);
      o << "  <g class=\"rod\"><line x1=\"" << p0[0] << "\" y1=\"" << p0[1] << "\" x2=\"" << q0[0] << "\" y2=\""
        << q0[1] << "\" stroke=\"#333\"" << (dash(f0.P[i]) || dash(f0.Q[j]) ? " stroke-dasharray=\"4 3\"" : "")
        << ">" << anim("x1", values(c(true, i, 0))) << anim("y1", values(c(true, i, 1)))
        << anim("x2", values(c(false, j, 0))) << anim("y2", values(c(false, j, 1))) << "</line></g>\n";
    }
  for (int part = 0; part < 2; ++part) {
    const bool isP = part == 0;
    const std::size_t cnt = isP ? f0.m() : f0.n();
    for (std::size_t k = 0; k < cnt; ++k) {
      auto xy = view.map(joint(f0, isP, k));
      auto cx = [&](const Framework& f) { return view.map(joint(f, isP, k))[0]; };
      auto cy = [&](const Framework& f) { return view.map(joint(f, isP, k))[1]; };
      o << "  <g class=\"joint\" id=\"" << (isP ? 'p' : 'q') << k << "\"><circle cx=\"" << xy[0] << "\" cy=\""
        << xy[1] << "\" r=\"5\" fill=\"" << (isP ? "#c33" : "#36c") << "\""
        << (dash(joint(f0, isP, k)) ? " fill-opacity=\"0.4\"" : "") << ">" << anim("cx", values(cx))
        << anim("cy", values(cy)) << "</circle></g>\n";
    }
  }
  o << "</svg>\n";
  return o.str();
}

inline std::string export_motion(const FlexPath& path, MotionFormat format) {
  if (path.frames.empty()) throw UsageError("export_motion: empty path");
  return format == MotionFormat::Json ? motion_json(path).dump(2) + "\n" : motion_svg(path);
}

}  // namespace flexlab
