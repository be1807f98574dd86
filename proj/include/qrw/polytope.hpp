// SPDX-License-Identifier: Apache-2.0
#ifndef QRW_POLYTOPE_HPP
#define QRW_POLYTOPE_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "qrw/walk_spec.hpp"

namespace qrw {

using RealVec = std::vector<double>;

namespace detail {

// Least-squares barycentric fit of rho against a point subset; true if
// rho is (within tol) a convex combination of the subset.
inline bool convex_fit(const std::vector<RealVec>& pts,
                       const std::vector<int>& subset, const RealVec& rho,
                       double tol) {
  const int d = static_cast<int>(rho.size());
  const int k = static_cast<int>(subset.size());
  Eigen::MatrixXd a(d + 1, k);
  Eigen::VectorXd b(d + 1);
  for (int i = 0; i < k; ++i) {
    for (int r = 0; r < d; ++r) a(r, i) = pts[subset[i]][r];
    a(d, i) = 1.0;
  }
  for (int r = 0; r < d; ++r) b(r) = rho[r];
  b(d) = 1.0;
  Eigen::VectorXd lambda = a.fullPivHouseholderQr().solve(b);
  if ((a * lambda - b).cwiseAbs().maxCoeff() > tol) return false;
  return lambda.minCoeff() >= -tol;
}

inline void subsets_rec(int n, int k, int start, std::vector<int>& cur,
                        std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    subsets_rec(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

// Membership in conv(pts) via Caratheodory: some subset of at most
// d+1 points carries rho as a convex combination.
inline bool in_hull(const std::vector<RealVec>& pts, const RealVec& rho,
                    double tol) {
  const int n = static_cast<int>(pts.size());
  const int d = static_cast<int>(rho.size());
  const int kmax = std::min(n, d + 1);
  for (int k = 1; k <= kmax; ++k) {
    std::vector<std::vector<int>> subsets;
    std::vector<int> cur;
    subsets_rec(n, k, 0, cur, subsets);
    for (const auto& s : subsets)
      if (convex_fit(pts, s, rho, tol)) return true;
  }
  return false;
}

}  // namespace detail

/// Axis-aligned bounding box.
struct Box {
  RealVec lo, hi;
  int dim() const { return static_cast<int>(lo.size()); }
};

/// Convex hull of the jump vectors. Small by construction (a handful
/// of points in low dimension); membership goes through Caratheodory
/// subsets, exact up to the requested tolerance.
struct Polytope {
  int d = 0;
  std::vector<RealVec> points;    // all jump vectors, as reals
  std::vector<RealVec> vertices;  // extreme points among them

  bool contains(const RealVec& rho, double tol = 1e-9) const {
    return detail::in_hull(points, rho, tol);
  }

  Box bounding_box() const {
    Box box;
    box.lo.assign(d, 0.0);
    box.hi.assign(d, 0.0);
    for (int a = 0; a < d; ++a) {
      double lo = points[0][a], hi = points[0][a];
      for (const auto& p : points) {
        lo = std::min(lo, p[a]);
        hi = std::max(hi, p[a]);
      }
      box.lo[a] = lo;
      box.hi[a] = hi;
    }
    return box;
  }
};

inline Polytope jump_polytope(const std::vector<IntVec>& jumps) {
  Polytope p;
  p.d = static_cast<int>(jumps[0].size());
  for (const auto& j : jumps) {
    RealVec v(j.begin(), j.end());
    if (std::find(p.points.begin(), p.points.end(), v) == p.points.end())
      p.points.push_back(std::move(v));
  }
  for (std::size_t i = 0; i < p.points.size(); ++i) {
    std::vector<RealVec> others;
    for (std::size_t k = 0; k < p.points.size(); ++k)
      if (k != i) others.push_back(p.points[k]);
    if (others.empty() || !detail::in_hull(others, p.points[i], 1e-9))
      p.vertices.push_back(p.points[i]);
  }
  return p;
}

inline Polytope jump_polytope(const WalkSpec& spec) {
  return jump_polytope(spec.jumps);
}

}  // namespace qrw

#endif  // QRW_POLYTOPE_HPP
