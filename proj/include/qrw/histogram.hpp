// SPDX-License-Identifier: Apache-2.0
#ifndef QRW_HISTOGRAM_HPP
#define QRW_HISTOGRAM_HPP

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "qrw/polytope.hpp"

namespace qrw {

/// Uniform d-dimensional bin grid over a bounding box. Bins are
/// half-open, the last bin along each axis is closed; points outside
/// the box are clamped to the nearest edge bin. A degenerate axis
/// (lo == hi) collapses onto bin 0.
struct Histogram {
  Box box;
  int bins = 0;  // per axis
  std::vector<double> mass;

  Histogram() = default;
  Histogram(const Box& b, int n) : box(b), bins(n) {
    if (n < 1) throw std::invalid_argument("histogram: bins must be >= 1");
    std::size_t total = 1;
    for (int a = 0; a < box.dim(); ++a) total *= static_cast<std::size_t>(n);
    mass.assign(total, 0.0);
  }

  int dim() const { return box.dim(); }

  int axis_bin(double x, int a) const {
    const double w = box.hi[a] - box.lo[a];
    if (w <= 0.0) return 0;
    double t = (x - box.lo[a]) / w * bins;
    // Snap values within rounding noise of a bin edge onto the edge so
    // that masses at exact edges land in one bin deterministically.
    const double r = std::round(t);
    if (std::abs(t - r) < 1e-9) t = r;
    int i = static_cast<int>(std::floor(t));
    if (i < 0) i = 0;
    if (i >= bins) i = bins - 1;
    return i;
  }

  std::size_t flat_index(const std::vector<int>& idx) const {
    std::size_t f = 0;
    for (int a = 0; a < dim(); ++a) f = f * bins + idx[a];
    return f;
  }

  void deposit(const RealVec& rho, double w) {
    std::vector<int> idx(dim());
    for (int a = 0; a < dim(); ++a) idx[a] = axis_bin(rho[a], a);
    mass[flat_index(idx)] += w;
  }

  double total() const {
    return std::accumulate(mass.begin(), mass.end(), 0.0);
  }

  void normalize() {
    const double t = total();
    if (t <= 0.0) throw std::runtime_error("histogram: empty, cannot normalize");
    for (double& m : mass) m /= t;
  }

  /// Center of bin idx along axis a.
  double bin_center(int i, int a) const {
    const double w = box.hi[a] - box.lo[a];
    if (w <= 0.0) return box.lo[a];
    return box.lo[a] + (i + 0.5) * w / bins;
  }

  bool same_grid(const Histogram& o, double tol = 1e-12) const {
    if (bins != o.bins || dim() != o.dim()) return false;
    for (int a = 0; a < dim(); ++a)
      if (std::abs(box.lo[a] - o.box.lo[a]) > tol ||
          std::abs(box.hi[a] - o.box.hi[a]) > tol)
        return false;
    return true;
  }
};

/// Total-variation distance, (1/2) sum |a - b|, over identical grids.
inline double tv_distance(const Histogram& a, const Histogram& b) {
  if (!a.same_grid(b))
    throw std::invalid_argument("tv_distance: bin grids differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.mass.size(); ++i)
    s += std::abs(a.mass[i] - b.mass[i]);
  return 0.5 * s;
}

/// Equal-weight average of histograms sharing one grid.
inline Histogram average_histograms(const std::vector<Histogram>& hs) {
  if (hs.empty()) throw std::invalid_argument("average_histograms: empty");
  Histogram out = hs[0];
  for (std::size_t k = 1; k < hs.size(); ++k) {
    if (!out.same_grid(hs[k]))
      throw std::invalid_argument("average_histograms: bin grids differ");
    for (std::size_t i = 0; i < out.mass.size(); ++i)
      out.mass[i] += hs[k].mass[i];
  }
  for (double& m : out.mass) m /= static_cast<double>(hs.size());
  return out;
}

}  // namespace qrw

#endif  // QRW_HISTOGRAM_HPP
