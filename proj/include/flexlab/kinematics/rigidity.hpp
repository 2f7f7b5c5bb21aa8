#pragma once

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "flexlab/framework.hpp"

namespace flexlab {

struct RigidityReport {
  std::size_t rows = 0, cols = 0;
  std::size_t rank = 0;
  // Smallest singular value counted as nonzero and largest counted as zero, relative to the top one.
  double smallest_kept = 0, largest_dropped = 0;
  int infinitesimal_dof = 0;
  bool infinitesimally_flexible = false;
  // Set when the gap between kept and dropped singular values is under three decades.
  bool ambiguous_gap = false;

  nlohmann::json to_json() const {
    return {{"jacobian", {rows, cols}},         {"rank", rank},
            {"smallest_kept", smallest_kept},   {"largest_dropped", largest_dropped},
            {"infinitesimal_dof", infinitesimal_dof}, {"infinitesimally_flexible", infinitesimally_flexible},
            {"ambiguous_gap", ambiguous_gap}};
  }
};

namespace detail {

// d X / d(x, y) for the hyperboloid lift of a Poincare point, as columns.
inline Eigen::Matrix<double, 3, 2> hyperboloid_jacobian(const Point& p) {
  double x = p.c[0], y = p.c[1], w = 1 - x * x - y * y, w2 = w * w;
  Eigen::Matrix<double, 3, 2> J;
  J << 4 * x / w2, 4 * y / w2, (2 * w + 4 * x * x) / w2, 4 * x * y / w2, 4 * x * y / w2, (2 * w + 4 * y * y) / w2;
  return J;
}

inline Eigen::MatrixXd rigidity_matrix(const Framework& fw) {
  const std::size_t m = fw.m(), n = fw.n(), N = m + n;
  auto joint = [&](std::size_t k) -> const Point& { return k < m ? fw.P[k] : fw.Q[k - m]; };
  if (fw.kind == GeometryKind::Spherical) {
    // <p_i, q_j> per rod and |x|^2 per joint, in ambient coordinates.
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m * n + N, 3 * N);
    std::size_t row = 0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j, ++row)
        for (int a = 0; a < 3; ++a) {
          J(row, 3 * i + a) = fw.Q[j].c[a];
          J(row, 3 * (m + j) + a) = fw.P[i].c[a];
        }
    for (std::size_t k = 0; k < N; ++k, ++row)
      for (int a = 0; a < 3; ++a) J(row, 3 * k + a) = 2 * joint(k).c[a];
    return J;
  }
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m * n, 2 * N);
  std::size_t row = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j, ++row) {
      const Point &p = fw.P[i], &q = fw.Q[j];
      if (fw.kind == GeometryKind::Euclidean) {
        // |p - q|^2
        for (int a = 0; a < 2; ++a) {
          J(row, 2 * i + a) = 2 * (p.c[a] - q.c[a]);
          J(row, 2 * (m + j) + a) = -2 * (p.c[a] - q.c[a]);
        }
      } else {
        // cosh d = -<X_p, X_q> in the Minkowski form.
        Vec3 Xp = to_hyperboloid(p), Xq = to_hyperboloid(q);
        Eigen::RowVector3d gp(Xq[0], -Xq[1], -Xq[2]), gq(Xp[0], -Xp[1], -Xp[2]);
        Eigen::RowVector2d dp = gp * hyperboloid_jacobian(p), dq = gq * hyperboloid_jacobian(q);
        J.block<1, 2>(row, 2 * i) = dp;
        J.block<1, 2>(row, 2 * (m + j)) = dq;
      }
    }
  return J;
}

}  // namespace detail

// Rank of the constraint Jacobian; the isometry group of each geometry is 3-dimensional.
inline RigidityReport rigidity_report(const Framework& fw, double tol = kDefaultTol) {
  Eigen::MatrixXd J = detail::rigidity_matrix(fw);
  RigidityReport r;
  r.rows = static_cast<std::size_t>(J.rows());
  r.cols = static_cast<std::size_t>(J.cols());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  const auto& s = svd.singularValues();
  const double top = s.size() ? s(0) : 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    double rel = top > 0 ? s(k) / top : 0;
    if (rel > tol) {
      ++r.rank;
      r.smallest_kept = rel;
    } else {
      r.largest_dropped = std::max(r.largest_dropped, rel);
    }
  }
  const std::size_t nullity = r.cols - r.rank;
  r.infinitesimal_dof = static_cast<int>(nullity) - 3;
  if (r.infinitesimal_dof < 0) r.infinitesimal_dof = 0;
  r.infinitesimally_flexible = r.infinitesimal_dof > 0;
  r.ambiguous_gap = r.rank > 0 && r.smallest_kept < 1e3 * tol;
  return r;
}

}  // namespace flexlab
