// SPDX-License-Identifier: Apache-2.0
//
// Test-only oracles, kept independent of the library's evolution and
// Fourier paths.
#ifndef QRW_TEST_SUPPORT_HPP
#define QRW_TEST_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "qrw/walk_spec.hpp"

namespace qrw_test {

using qrw::Complex;
using qrw::IntVec;
using qrw::Matrix;
using qrw::WalkSpec;

/// Matrix-valued Laurent polynomial, exponent -> coefficient matrix.
using LaurentMatrix = std::map<IntVec, Matrix>;

inline LaurentMatrix symbol_polynomial(const WalkSpec& spec) {
  LaurentMatrix m;
  for (int l = 0; l < spec.c; ++l) {
    auto& coeff = m.try_emplace(spec.jumps[l], Matrix::Zero(spec.c, spec.c))
                      .first->second;
    coeff.row(l) = spec.coin.row(l);
  }
  return m;
}

inline LaurentMatrix laurent_multiply(const LaurentMatrix& p,
                                      const LaurentMatrix& q, int c) {
  LaurentMatrix out;
  for (const auto& [ea, ma] : p)
    for (const auto& [eb, mb] : q) {
      IntVec e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      auto& coeff = out.try_emplace(e, Matrix::Zero(c, c)).first->second;
      coeff += ma * mb;
    }
  return out;
}

/// M(x)^T by direct convolution of Laurent coefficients: coefficient
/// extraction gives A_T(k) exactly (up to rounding), with no window or
/// transform machinery involved.
inline LaurentMatrix symbol_power(const WalkSpec& spec, int T) {
  LaurentMatrix acc;
  acc[IntVec(spec.d, 0)] = Matrix::Identity(spec.c, spec.c);
  const LaurentMatrix m = symbol_polynomial(spec);
  for (int t = 0; t < T; ++t) acc = laurent_multiply(acc, m, spec.c);
  return acc;
}

/// Brute-force hull membership for d <= 2: half-plane test against
/// every edge spanned by a pair of jump points (interval test in
/// d = 1). Exact up to tol, and fully independent of the library's
/// Caratheodory-based membership.
inline bool hull_member_brute(const std::vector<IntVec>& jumps,
                              const std::vector<double>& rho, double tol) {
  const int d = static_cast<int>(rho.size());
  if (d == 1) {
    double lo = static_cast<double>(jumps[0][0]), hi = lo;
    for (const auto& j : jumps) {
      lo = std::min(lo, static_cast<double>(j[0]));
      hi = std::max(hi, static_cast<double>(j[0]));
    }
    return rho[0] >= lo - tol && rho[0] <= hi + tol;
  }
  if (d != 2) throw std::invalid_argument("hull_member_brute: d <= 2 only");
  const int n = static_cast<int>(jumps.size());
  if (n == 1)
    return std::abs(rho[0] - jumps[0][0]) <= tol &&
           std::abs(rho[1] - jumps[0][1]) <= tol;
  bool any_edge = false;
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k) {
      const double ex = static_cast<double>(jumps[k][0] - jumps[i][0]);
      const double ey = static_cast<double>(jumps[k][1] - jumps[i][1]);
      if (ex == 0.0 && ey == 0.0) continue;
      const double len = std::hypot(ex, ey);
      // Signed distances of all points and of rho from the line i-k.
      auto side = [&](double px, double py) {
        return (ex * (py - jumps[i][1]) - ey * (px - jumps[i][0])) / len;
      };
      double smin = 0.0, smax = 0.0;
      for (const auto& j : jumps) {
        const double s = side(static_cast<double>(j[0]),
                              static_cast<double>(j[1]));
        smin = std::min(smin, s);
        smax = std::max(smax, s);
      }
      const double sr = side(rho[0], rho[1]);
      if (smin >= -tol) {  // all points on one side: i-k is an edge
        any_edge = true;
        if (sr < -tol) return false;
      }
      if (smax <= tol) {
        any_edge = true;
        if (sr > tol) return false;
      }
    }
  if (!any_edge) return false;  // all points coincide handled above
  return true;
}

/// One-sample Kolmogorov-Smirnov statistic against a CDF.
inline double ks_statistic(std::vector<double> samples,
                           const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    worst = std::max(worst, std::abs(f - (i + 1) / n));
    worst = std::max(worst, std::abs(f - i / n));
  }
  return worst;
}

/// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double worst = 0.0;
  std::size_t i = 0, k = 0;
  while (i < a.size() && k < b.size()) {
    if (a[i] <= b[k])
      ++i;
    else
      ++k;
    const double fa = static_cast<double>(i) / a.size();
    const double fb = static_cast<double>(k) / b.size();
    worst = std::max(worst, std::abs(fa - fb));
  }
  return worst;
}

}  // namespace qrw_test

#endif  // QRW_TEST_SUPPORT_HPP
