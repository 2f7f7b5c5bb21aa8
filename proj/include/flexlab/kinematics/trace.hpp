#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "flexlab/framework.hpp"
#include "flexlab/kinematics/motion.hpp"

namespace flexlab {

enum class Closure { ClosedLoop, JammedForwardAndBackward, StepLimit };

inline std::string to_string(Closure c) {
  switch (c) {
    case Closure::ClosedLoop: return "closed_loop";
    case Closure::JammedForwardAndBackward: return "jammed_forward_and_backward";
    case Closure::StepLimit: return "step_limit";
  }
  return "?";
}

struct FlexPath {
  std::vector<double> theta;
  std::vector<Framework> frames;
  std::vector<double> residual;  // worst rod error per frame
  std::size_t fixed_p = 0, fixed_q = 0, driver_q = 1;
  double max_length_drift = 0;
  Closure closure = Closure::StepLimit;
  // Index of the starting configuration inside frames.
  std::size_t origin = 0;
};

struct TraceOptions {
  int steps = 400;      // accepted frames per direction
  double step = 0.01;   // nominal driver increment, radians
  double tol = kDefaultTol;
  int max_halvings = 12;
};

struct TraceResult {
  bool jammed = false;
  FlexPath path;  // the best attempt; a single frame when jammed
  std::string note;
};

namespace detail {

inline double max_rod_error(const Framework& fw, const std::vector<double>& r0) {
  double e = 0;
  for (std::size_t i = 0; i < fw.m(); ++i)
    for (std::size_t j = 0; j < fw.n(); ++j)
      e = std::max(e, std::abs(distance(fw.P[i], fw.Q[j]) - r0[i * fw.n() + j]));
  return e;
}

inline double max_joint_move(const Framework& a, const Framework& b) {
  double e = 0;
  for (std::size_t i = 0; i < a.m(); ++i) e = std::max(e, distance(a.P[i], b.P[i]));
  for (std::size_t j = 0; j < a.n(); ++j) e = std::max(e, distance(a.Q[j], b.Q[j]));
  return e;
}

// Linear extrapolation in the model, used as the branch reference.
inline Point extrapolate(const Point& prev, const Point& prev2, double ratio) {
  Vec3 v = prev.c + ratio * (prev.c - prev2.c);
  try {
    return Point::make(prev.kind, v);
  } catch (const DomainError&) {
    return prev;
  }
}

class Tracer {
 public:
  Tracer(const Framework& fw, std::size_t fp, std::size_t fq, std::size_t dq, const TraceOptions& opt)
      : fw0_(fw), fp_(fp), fq_(fq), dq_(dq), opt_(opt) {
    L_ = rod_lengths(fw).r;
    double longest = *std::max_element(L_.begin(), L_.end());
    jump_ = 0.1 * std::max(longest, 1.0);
    // Anchor rows: the fixed p, the p solved from the driver, then the rest.
    for (std::size_t i = 0; i < fw.m(); ++i)
      if (i != fp_) prow_.push_back(i);
    for (std::size_t j = 0; j < fw.n(); ++j)
      if (j != fq_ && j != dq_) qrow_.push_back(j);
  }

  double r(std::size_t i, std::size_t j) const { return L_[i * fw0_.n() + j]; }

  // Configuration with the driver at angle theta, nearest to `ref` (which predicts the next frame).
  std::optional<Framework> solve(double theta, const Framework& prev, const Framework& ref) const {
    Framework out = prev;
    out.Q[dq_] = rotate_about(fw0_.P[fp_], fw0_.Q[dq_], theta);
    const std::size_t p1 = prow_[0];
    auto cands_p1 = intersect(fw0_.Q[fq_], r(p1, fq_), out.Q[dq_], r(p1, dq_));
    struct Option {
      Framework fw;
      double score;
    };
    std::vector<Option> options;
    for (auto& a : cands_p1) {
      Framework f = out;
      f.P[p1] = a;
      // q's from the fixed p and p1; p's from the fixed q and the driver.
      std::vector<std::vector<Point>> qc, pc;
      for (auto j : qrow_) qc.push_back(intersect(f.P[fp_], r(fp_, j), f.P[p1], r(p1, j)));
      for (std::size_t k = 1; k < prow_.size(); ++k)
        pc.push_back(intersect(f.Q[fq_], r(prow_[k], fq_), f.Q[dq_], r(prow_[k], dq_)));
      enumerate(f, ref, qc, pc, 0, options);
    }
    std::sort(options.begin(), options.end(), [](const Option& a, const Option& b) { return a.score < b.score; });
    for (auto& o : options) {
      if (max_rod_error(o.fw, L_) > opt_.tol) continue;
      if (max_joint_move(o.fw, prev) > jump_) continue;
      return o.fw;
    }
    return std::nullopt;
  }

  // One direction; returns the frames after the origin, and whether the loop closed.
  std::pair<std::vector<std::pair<double, Framework>>, bool> run(int dir, bool& jammed) const {
    std::vector<std::pair<double, Framework>> out;
    double theta = 0, h = opt_.step;
    Framework prev = fw0_, prev2 = fw0_;
    double last_h = 0;
    jammed = false;
    const double full = 2 * std::numbers::pi;
    while (static_cast<int>(out.size()) < opt_.steps) {
      double step = std::min(h, full - std::abs(theta));
      int halvings = 0;
      std::optional<Framework> next;
      while (true) {
        Framework ref = prev;
        if (last_h > 0)
          for (std::size_t k = 0; k < ref.m(); ++k) ref.P[k] = extrapolate(prev.P[k], prev2.P[k], step / last_h);
        if (last_h > 0)
          for (std::size_t k = 0; k < ref.n(); ++k) ref.Q[k] = extrapolate(prev.Q[k], prev2.Q[k], step / last_h);
        next = solve(theta + dir * step, prev, ref);
        if (next || halvings == opt_.max_halvings) break;
        step /= 2;
        ++halvings;
      }
      if (!next) {
        jammed = true;
        break;
      }
      theta += dir * step;
      prev2 = prev;
      prev = *next;
      last_h = step;
      out.emplace_back(theta, prev);
      if (std::abs(theta) >= full - 1e-15 && out.size() >= 10) {
        if (max_joint_move(prev, fw0_) <= 1e3 * opt_.tol) return {out, true};
        break;
      }
    }
    return {out, false};
  }

 private:
  std::vector<Point> intersect(const Point& c1, double r1, const Point& c2, double r2) const {
    try {
      return circle_intersection(Circle::make(c1, r1), Circle::make(c2, r2), opt_.tol);
    } catch (const InfiniteIntersectionError&) {
      return {};
    }
  }

  template <class Option>
  void enumerate(Framework& f, const Framework& ref, const std::vector<std::vector<Point>>& qc,
                 const std::vector<std::vector<Point>>& pc, std::size_t k, std::vector<Option>& options) const {
    const std::size_t total = qc.size() + pc.size();
    if (k == total) {
      double score = max_joint_move(f, ref);
      options.push_back({f, score});
      return;
    }
    const auto& cands = k < qc.size() ? qc[k] : pc[k - qc.size()];
    for (auto& c : cands) {
      if (k < qc.size())
        f.Q[qrow_[k]] = c;
      else
        f.P[prow_[k - qc.size() + 1]] = c;
      enumerate(f, ref, qc, pc, k + 1, options);
    }
  }

  Framework fw0_;
  std::size_t fp_, fq_, dq_;
  TraceOptions opt_;
  std::vector<double> L_;
  double jump_;
  std::vector<std::size_t> prow_, qrow_;
};

inline FlexPath trace_with(const Framework& fw, std::size_t fp, std::size_t fq, std::size_t dq,
                           const TraceOptions& opt, bool& jammed_at_start) {
  Tracer t(fw, fp, fq, dq, opt);
  bool jf = false, jb = false;
  auto [fwd, closed] = t.run(+1, jf);
  std::vector<std::pair<double, Framework>> bwd;
  if (!closed) bwd = t.run(-1, jb).first;
  FlexPath path;
  path.fixed_p = fp;
  path.fixed_q = fq;
  path.driver_q = dq;
  for (auto it = bwd.rbegin(); it != bwd.rend(); ++it) {
    path.theta.push_back(it->first);
    path.frames.push_back(it->second);
  }
  path.origin = path.frames.size();
  path.theta.push_back(0);
  path.frames.push_back(fw);
  for (auto& [th, f] : fwd) {
    path.theta.push_back(th);
    path.frames.push_back(f);
  }
  auto L = rod_lengths(fw).r;
  for (auto& f : path.frames) {
    path.residual.push_back(max_rod_error(f, L));
    path.max_length_drift = std::max(path.max_length_drift, path.residual.back());
  }
  if (closed)
    path.closure = Closure::ClosedLoop;
  else if (jf && jb)
    path.closure = Closure::JammedForwardAndBackward;
  else
    path.closure = Closure::StepLimit;
  // Motionless: neither direction gets one nominal step away from the start.
  auto reach = [&](const std::vector<std::pair<double, Framework>>& v) { return v.empty() ? 0.0 : std::abs(v.back().first); };
  jammed_at_start = std::max(reach(fwd), reach(bwd)) < opt.step;
  return path;
}

}  // namespace detail

// Drive q_1 around p_0 and follow the nearest branch. For S2 the trace runs on the
// antipodally normalized framework and the flips are undone in the returned frames.
inline TraceResult trace_flex(const Framework& input, const TraceOptions& opt = {}) {
  if (overlap_status(input, opt.tol).status == OverlapStatus::Overlapping)
    throw PreconditionError("trace_flex needs a non-overlapping framework; apply quotient() first");
  if (input.m() < 2 || input.n() < 2) throw PreconditionError("trace_flex needs at least two joints per part");
  if (!(opt.step > 0 && opt.step < std::numbers::pi) || opt.steps < 1)
    throw UsageError("trace_flex needs steps >= 1 and 0 < step < pi");
  Framework fw = input;
  std::optional<FlipRecord> flips;
  if (fw.kind == GeometryKind::Spherical) {
    auto nrm = normalize_antipodal(fw);
    fw = nrm.fw;
    flips = nrm.flips;
  }
  TraceResult res;
  // The default fixed pair first, then every other pair (p_i, q_j).
  std::vector<std::pair<std::size_t, std::size_t>> pairs{{0, 0}};
  for (std::size_t i = 0; i < fw.m(); ++i)
    for (std::size_t j = 0; j < fw.n(); ++j)
      if (i || j) pairs.emplace_back(i, j);
  bool moved = false;
  for (auto [fp, fq] : pairs) {
    bool jammed = false;
    auto path = detail::trace_with(fw, fp, fq, fq == 0 ? 1 : 0, opt, jammed);
    if (!jammed) {
      res.path = std::move(path);
      if (fp || fq) res.note = "default fixed pair jammed; traced with another pair";
      moved = true;
      break;
    }
  }
  if (!moved) {
    res.jammed = true;
    res.path.frames.assign(1, fw);
    res.path.theta.assign(1, 0);
    res.path.residual.assign(1, 0);
    res.path.driver_q = 1;
    res.path.closure = Closure::JammedForwardAndBackward;
    res.note = "no fixed pair admits a motion";
  }
  if (flips)
    for (auto& f : res.path.frames) f = apply_flips(f, *flips);
  return res;
}

}  // namespace flexlab
