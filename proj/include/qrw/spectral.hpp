// SPDX-License-Identifier: Apache-2.0
#ifndef QRW_SPECTRAL_HPP
#define QRW_SPECTRAL_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrw/fourier.hpp"
#include "qrw/histogram.hpp"
#include "qrw/polytope.hpp"
#include "qrw/walk_spec.hpp"

namespace qrw {

inline double wrap_phase(double zeta) {
  const double two_pi = 2.0 * std::numbers::pi;
  zeta = std::fmod(zeta, two_pi);
  if (zeta < 0.0) zeta += two_pi;
  return zeta;
}

/// Circular distance between two phases in [0, 2 pi).
inline double circular_distance(double a, double b) {
  const double two_pi = 2.0 * std::numbers::pi;
  double d = std::abs(a - b);
  return std::min(d, two_pi - d);
}

/// One eigenpair of M(xi): eigenphase, unit eigenvector, and the gap
/// to the nearest other eigenphase on the circle.
struct Branch {
  double zeta = 0.0;
  Vector v;
  double gap = 0.0;
};

/// One fiber of the spectral surface over xi: all c branches counted
/// with multiplicity. `degenerate` marks fibers with a phase gap
/// below the requested tolerance; their eigenvectors are unreliable
/// and callers skip them.
struct SpectralFiber {
  RealVec xi;
  std::vector<Branch> branches;
  bool degenerate = false;
};

/// Full eigendecomposition of the unitary symbol. The Schur form of a
/// unitary matrix is diagonal, so the Schur basis is an orthonormal
/// eigenbasis.
inline SpectralFiber fiber(const WalkSpec& spec, const RealVec& xi,
                           double gap_tol = 1e-8) {
  const Matrix m = transfer_matrix(spec, xi);
  Eigen::ComplexSchur<Matrix> schur(m, true);
  if (schur.info() != Eigen::Success)
    throw std::runtime_error("fiber: eigensolver failed");
  SpectralFiber f;
  f.xi = xi;
  const int c = spec.c;
  f.branches.resize(c);
  for (int i = 0; i < c; ++i) {
    f.branches[i].zeta = wrap_phase(std::arg(schur.matrixT()(i, i)));
    f.branches[i].v = schur.matrixU().col(i);
  }
  for (int i = 0; i < c; ++i) {
    double gap = 2.0 * std::numbers::pi;
    for (int k = 0; k < c; ++k)
      if (k != i)
        gap = std::min(gap,
                       circular_distance(f.branches[i].zeta, f.branches[k].zeta));
    f.branches[i].gap = c > 1 ? gap : 2.0 * std::numbers::pi;
    if (f.branches[i].gap < gap_tol) f.degenerate = true;
  }
  return f;
}

/// Gauss-map image of a branch eigenvector: the convex combination of
/// the jump vectors weighted by the squared eigenvector moduli. Always
/// lands inside the jump polytope.
inline RealVec gauss_image(const Vector& v, const WalkSpec& spec) {
  RealVec rho(spec.d, 0.0);
  for (int l = 0; l < spec.c; ++l) {
    const double w = std::norm(v(l));
    for (int a = 0; a < spec.d; ++a) rho[a] += w * spec.jumps[l][a];
  }
  return rho;
}

enum class WeightMode { State, TraceAveraged };

/// Weighted point cloud in velocity space: the weak-limit measure as a
/// pushforward of the spectral density under the Gauss map.
struct LimitMeasure {
  struct Point {
    RealVec rho;
    double weight = 0.0;
  };
  std::vector<Point> points;
  int grid_n = 0;
  WeightMode mode = WeightMode::TraceAveraged;
  long skipped = 0;  // degenerate fibers dropped
  long fibers = 0;

  double total_weight() const {
    double s = 0.0;
    for (const auto& p : points) s += p.weight;
    return s;
  }
};

/// Pushforward over a uniform grid_n^d torus grid, offset by half a
/// cell to dodge high-symmetry degenerate points. Weight per branch:
/// |<v,u>|^2 in State mode, 1/c in TraceAveraged mode (the rank-1
/// projector trace, normalized so total mass is 1). Degenerate fibers
/// are skipped and counted; weights are renormalized.
inline LimitMeasure limit_measure(const WalkSpec& spec, int grid_n,
                                  WeightMode mode,
                                  const std::optional<Vector>& u = std::nullopt,
                                  double gap_tol = 1e-8) {
  if (grid_n < 2) throw std::invalid_argument("limit_measure: grid_n >= 2");
  if (mode == WeightMode::State) {
    if (!u) throw std::invalid_argument("limit_measure: state mode needs u");
    check_unit(*u);
  }
  const int d = spec.d;
  const double two_pi = 2.0 * std::numbers::pi;
  std::size_t npts = 1;
  for (int a = 0; a < d; ++a) npts *= static_cast<std::size_t>(grid_n);

  LimitMeasure lm;
  lm.grid_n = grid_n;
  lm.mode = mode;
  lm.fibers = static_cast<long>(npts);
  lm.points.reserve(npts * spec.c);

  RealVec xi(d);
  for (std::size_t f = 0; f < npts; ++f) {
    std::size_t rem = f;
    for (int a = d - 1; a >= 0; --a) {
      xi[a] = two_pi * (static_cast<double>(rem % grid_n) + 0.5) / grid_n;
      rem /= grid_n;
    }
    SpectralFiber fib = fiber(spec, xi, gap_tol);
    if (fib.degenerate) {
      ++lm.skipped;
      continue;
    }
    for (const Branch& b : fib.branches) {
      double w = mode == WeightMode::TraceAveraged
                     ? 1.0 / spec.c
                     : std::norm(u->dot(b.v));
      lm.points.push_back({gauss_image(b.v, spec), w});
    }
  }
  if (lm.points.empty())
    throw std::runtime_error("limit_measure: all fibers degenerate");
  const double total = lm.total_weight();
  for (auto& p : lm.points) p.weight /= total;
  return lm;
}

/// Signed circular difference a - b folded into (-pi, pi].
inline double circular_diff(double a, double b) {
  const double two_pi = 2.0 * std::numbers::pi;
  double d = std::fmod(a - b, two_pi);
  if (d <= -std::numbers::pi) d += two_pi;
  if (d > std::numbers::pi) d -= two_pi;
  return d;
}

/// Central-difference check of the eigenphase gradient against the
/// Gauss map computed from eigenvectors. Returns the worst deviation
/// over all branches and axes, or nothing when the fiber (or a
/// neighbor) is too close to degeneracy for branch matching.
inline std::optional<double> gauss_map_fd_error(const WalkSpec& spec,
                                                const RealVec& xi,
                                                double h = 1e-4,
                                                double min_gap = 1e-3) {
  SpectralFiber f0 = fiber(spec, xi);
  for (const Branch& b : f0.branches)
    if (b.gap < min_gap) return std::nullopt;
  double worst = 0.0;
  for (int a = 0; a < spec.d; ++a) {
    RealVec xp = xi, xm = xi;
    xp[a] += h;
    xm[a] -= h;
    SpectralFiber fp = fiber(spec, xp);
    SpectralFiber fm = fiber(spec, xm);
    for (const Branch& b : f0.branches) {
      // Match by phase proximity; the shift over step h is far below
      // half the gap, so the nearest phase is the same branch.
      auto nearest = [&](const SpectralFiber& f) {
        double best = f.branches[0].zeta;
        for (const Branch& bb : f.branches)
          if (circular_distance(bb.zeta, b.zeta) <
              circular_distance(best, b.zeta))
            best = bb.zeta;
        return best;
      };
      const double fd = circular_diff(nearest(fp), nearest(fm)) / (2.0 * h);
      const RealVec g = gauss_image(b.v, spec);
      worst = std::max(worst, std::abs(fd - g[a]));
    }
  }
  return worst;
}

/// Mass-preserving binning of a limit measure over a bounding box
/// (normally the box of the jump polytope).
inline Histogram histogram(const LimitMeasure& lm, int bins, const Box& box) {
  Histogram h(box, bins);
  for (const auto& p : lm.points) h.deposit(p.rho, p.weight);
  return h;
}

}  // namespace qrw

#endif  // QRW_SPECTRAL_HPP
