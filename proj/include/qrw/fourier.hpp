// SPDX-License-Identifier: Apache-2.0
#ifndef QRW_FOURIER_HPP
#define QRW_FOURIER_HPP

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qrw/evolve.hpp"
#include "qrw/walk_spec.hpp"

namespace qrw {

/// Unitary symbol M(xi) = Delta(xi) U with Delta diagonal in the
/// per-chirality phases e^{i <xi, j(e_l)>}.
inline Matrix transfer_matrix(const WalkSpec& spec, const RealVec& xi) {
  Matrix m = spec.coin;
  for (int l = 0; l < spec.c; ++l) {
    double phase = 0.0;
    for (int a = 0; a < spec.d; ++a) phase += xi[a] * spec.jumps[l][a];
    m.row(l) *= std::polar(1.0, phase);
  }
  return m;
}

/// M^T by repeated squaring; unconditionally stable for unitary M.
inline Matrix matrix_power(Matrix m, long T) {
  Matrix r = Matrix::Identity(m.rows(), m.cols());
  while (T > 0) {
    if (T & 1) r = r * m;
    m = m * m;
    T >>= 1;
  }
  return r;
}

namespace detail {

inline std::int64_t support_lo(const WalkSpec& spec, int T, int a) {
  std::int64_t lo = spec.jumps[0][a];
  for (const auto& j : spec.jumps) lo = std::min(lo, j[a]);
  return static_cast<std::int64_t>(T) * lo;
}

inline std::int64_t support_hi(const WalkSpec& spec, int T, int a) {
  std::int64_t hi = spec.jumps[0][a];
  for (const auto& j : spec.jumps) hi = std::max(hi, j[a]);
  return static_cast<std::int64_t>(T) * hi;
}

}  // namespace detail

/// Smallest per-axis grid that avoids aliasing for a T-step walk:
/// one more than the support width along the widest axis.
inline int minimal_dft_grid(const WalkSpec& spec, int T) {
  std::int64_t w = 1;
  for (int a = 0; a < spec.d; ++a)
    w = std::max<std::int64_t>(
        w, detail::support_hi(spec, T, a) - detail::support_lo(spec, T, a) + 1);
  return static_cast<int>(w);
}

/// Amplitudes recovered from the symbol: evaluate M(2 pi n / N)^T on
/// the grid and invert the discrete Fourier transform per matrix
/// entry. Output indices are unwrapped into the known support
/// interval [T min_l j_la, T max_l j_la] per axis, which is exact as
/// long as the grid exceeds the support width (checked). Serves as
/// the independent oracle for evolve().
inline StateField amplitudes_via_dft(const WalkSpec& spec, const Vector& u,
                                     int T, int grid_n) {
  check_unit(u);
  if (T < 0) throw std::invalid_argument("amplitudes_via_dft: T >= 0 required");
  if (grid_n < minimal_dft_grid(spec, T))
    throw std::invalid_argument(
        "amplitudes_via_dft: grid too small, would alias (need >= " +
        std::to_string(minimal_dft_grid(spec, T)) + ")");

  const int d = spec.d;
  const int c = spec.c;
  const int N = grid_n;
  std::size_t npts = 1;
  for (int a = 0; a < d; ++a) npts *= static_cast<std::size_t>(N);

  // Per grid point: the vector M(xi)^T u (all chirality amplitudes of
  // the start state u at once).
  std::vector<Vector> grid(npts);
  std::vector<int> n(d, 0);
  RealVec xi(d);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t f = 0; f < npts; ++f) {
    std::size_t rem = f;
    for (int a = d - 1; a >= 0; --a) {
      n[a] = static_cast<int>(rem % N);
      rem /= N;
    }
    for (int a = 0; a < d; ++a) xi[a] = two_pi * n[a] / N;
    grid[f] = matrix_power(transfer_matrix(spec, xi), T) * u;
  }

  // Separable inverse transform, one axis at a time:
  // out[k] = sum_n in[n] e^{-2 pi i n k / N}.
  std::vector<Complex> twiddle(static_cast<std::size_t>(N) * N);
  for (int nn = 0; nn < N; ++nn)
    for (int k = 0; k < N; ++k)
      twiddle[static_cast<std::size_t>(nn) * N + k] =
          std::polar(1.0, -two_pi * nn * k / N);

  std::vector<Vector> scratch(npts);
  std::size_t stride = npts / N;  // stride of axis 0 in the flat layout
  for (int axis = 0; axis < d; ++axis) {
    // Lines along `axis`: iterate over all flat indices with the axis
    // coordinate zeroed, then sweep the axis.
    for (std::size_t base = 0; base < npts; ++base) {
      std::size_t coord = (base / stride) % N;
      if (coord != 0) continue;
      for (int k = 0; k < N; ++k) {
        Vector acc = Vector::Zero(c);
        for (int nn = 0; nn < N; ++nn)
          acc += twiddle[static_cast<std::size_t>(nn) * N + k] *
                 grid[base + nn * stride];
        scratch[base + k * stride] = std::move(acc);
      }
    }
    grid.swap(scratch);
    stride /= N;
  }

  StateField out;
  out.window = window_for(spec, T);
  out.c = c;
  out.time = T;
  out.amps.assign(static_cast<std::size_t>(out.window.size()) * c,
                  Complex(0.0, 0.0));

  const double scale = 1.0 / static_cast<double>(npts);
  IntVec k(d);
  std::vector<std::int64_t> lo(d), hi(d);
  for (int a = 0; a < d; ++a) {
    lo[a] = detail::support_lo(spec, T, a);
    hi[a] = detail::support_hi(spec, T, a);
  }
  std::vector<std::int64_t> kk(lo);
  bool done = false;
  while (!done) {
    std::size_t f = 0;
    for (int a = 0; a < d; ++a) {
      std::int64_t idx = ((kk[a] % N) + N) % N;
      f = f * N + static_cast<std::size_t>(idx);
    }
    const std::int64_t sidx = out.window.index(IntVec(kk.begin(), kk.end()));
    for (int v = 0; v < c; ++v) out.amps[sidx * c + v] = scale * grid[f](v);
    for (int a = d - 1; a >= 0; --a) {
      if (++kk[a] <= hi[a]) break;
      kk[a] = lo[a];
      if (a == 0) done = true;
    }
    if (d == 0) done = true;
  }
  return out;
}

/// Max absolute amplitude difference between the direct and the
/// Fourier-side evolution.
inline double equivalence_report(const WalkSpec& spec, const Vector& u, int T,
                                 int grid_n) {
  StateField direct = evolve(spec, u, T);
  StateField dft = amplitudes_via_dft(spec, u, T, grid_n);
  double worst = 0.0;
  const std::int64_t nsites = direct.window.size();
  for (std::int64_t s = 0; s < nsites; ++s)
    for (int v = 0; v < spec.c; ++v)
      worst = std::max(worst, std::abs(direct.amps[s * spec.c + v] -
                                       dft.amps[s * spec.c + v]));
  return worst;
}

inline double equivalence_report(const WalkSpec& spec, const Vector& u, int T) {
  return equivalence_report(spec, u, T, minimal_dft_grid(spec, T));
}

}  // namespace qrw

#endif  // QRW_FOURIER_HPP
