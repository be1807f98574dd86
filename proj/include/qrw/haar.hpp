// SPDX-License-Identifier: Apache-2.0
#ifndef QRW_HAAR_HPP
#define QRW_HAAR_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qrw/evolve.hpp"
#include "qrw/histogram.hpp"
#include "qrw/spectral.hpp"
#include "qrw/walk_spec.hpp"

namespace qrw {

/// Seed plus generator identifier; identical values give bit-identical
/// sample streams.
struct RngSeed {
  std::uint64_t seed = 0;
  std::string generator = "mt19937-64";
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Stream `index` derived from a seed; independent jobs (one per coin)
/// get disjoint streams, so parallel and serial runs agree.
inline std::mt19937_64 make_rng(const RngSeed& s, std::uint64_t stream = 0) {
  if (s.generator != "mt19937-64")
    throw std::invalid_argument("unknown rng generator '" + s.generator + "'");
  return std::mt19937_64(detail::splitmix64(s.seed ^ detail::splitmix64(stream)));
}

/// Haar-distributed unitary: i.i.d. complex Gaussians, QR, then each
/// column rephased so the corresponding diagonal of R is real
/// positive. With `special` the determinant is normalized away,
/// giving a Haar sample of the special unitary group.
inline Matrix sample_haar_unitary(int c, std::mt19937_64& rng,
                                  bool special = false) {
  if (c < 1) throw std::invalid_argument("sample_haar_unitary: c >= 1");
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    Matrix a(c, c);
    for (int i = 0; i < c; ++i)
      for (int k = 0; k < c; ++k) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        a(i, k) = Complex(re, im);
      }
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    bool ok = true;
    for (int i = 0; i < c; ++i) {
      const double mag = std::abs(r(i, i));
      if (mag < 1e-12) { ok = false; break; }
      q.col(i) *= r(i, i) / mag;
    }
    if (!ok) continue;  // rank-deficient draw, probability ~0
    if (special) {
      const Complex det = q.determinant();
      q *= std::polar(1.0, -std::arg(det) / c);
    }
    return q;
  }
}

/// Point on the standard simplex, uniformly distributed: normalized
/// i.i.d. standard exponentials.
inline std::vector<double> sample_uniform_simplex(int c, std::mt19937_64& rng) {
  if (c < 1) throw std::invalid_argument("sample_uniform_simplex: c >= 1");
  std::exponential_distribution<double> exp1(1.0);
  std::vector<double> w(c);
  double total = 0.0;
  for (int i = 0; i < c; ++i) {
    w[i] = exp1(rng);
    total += w[i];
  }
  for (double& x : w) x /= total;
  return w;
}

/// Monte-Carlo histogram of rho = sum_i w_i j(e_i) over uniform
/// simplex weights: the pushforward of the uniform simplex measure
/// under the jump map, computed directly.
inline Histogram simplex_pushforward_oracle(const std::vector<IntVec>& jumps,
                                            long n_samples, const RngSeed& seed,
                                            int bins) {
  if (n_samples < 1)
    throw std::invalid_argument("simplex_pushforward_oracle: n_samples >= 1");
  const int c = static_cast<int>(jumps.size());
  const int d = static_cast<int>(jumps[0].size());
  const Box box = jump_polytope(jumps).bounding_box();
  Histogram h(box, bins);
  std::mt19937_64 rng = make_rng(seed);
  RealVec rho(d);
  for (long s = 0; s < n_samples; ++s) {
    const std::vector<double> w = sample_uniform_simplex(c, rng);
    for (int a = 0; a < d; ++a) rho[a] = 0.0;
    for (int i = 0; i < c; ++i)
      for (int a = 0; a < d; ++a) rho[a] += w[i] * jumps[i][a];
    h.deposit(rho, 1.0);
  }
  h.normalize();
  return h;
}

/// Average over Haar coins of the trace-averaged weak-limit measures,
/// in histogram form. One derived RNG stream per coin.
inline Histogram averaged_limit_measure(const std::vector<IntVec>& jumps,
                                        int n_coins, int grid_n, int bins,
                                        const RngSeed& seed) {
  if (n_coins < 1)
    throw std::invalid_argument("averaged_limit_measure: n_coins >= 1");
  const int c = static_cast<int>(jumps.size());
  const int d = static_cast<int>(jumps[0].size());
  const Box box = jump_polytope(jumps).bounding_box();
  Histogram acc(box, bins);
  for (int k = 0; k < n_coins; ++k) {
    std::mt19937_64 rng = make_rng(seed, static_cast<std::uint64_t>(k));
    const Matrix coin = sample_haar_unitary(c, rng);
    const WalkSpec spec = make_walk_spec(d, c, coin, jumps);
    const LimitMeasure lm =
        limit_measure(spec, grid_n, WeightMode::TraceAveraged);
    const Histogram h = histogram(lm, bins, box);
    for (std::size_t i = 0; i < acc.mass.size(); ++i) acc.mass[i] += h.mass[i];
  }
  for (double& m : acc.mass) m /= n_coins;
  return acc;
}

/// The simulation pipeline: average over Haar coins of the T-step
/// evolved, basis-averaged, rescaled position histograms.
inline Histogram averaged_empirical_measure(const std::vector<IntVec>& jumps,
                                            int n_coins, int T,
                                            const RngSeed& seed, int bins) {
  if (T < 1)
    throw std::invalid_argument("averaged_empirical_measure: T >= 1");
  if (n_coins < 1)
    throw std::invalid_argument("averaged_empirical_measure: n_coins >= 1");
  const int c = static_cast<int>(jumps.size());
  const int d = static_cast<int>(jumps[0].size());
  const Box box = jump_polytope(jumps).bounding_box();
  Histogram acc(box, bins);
  for (int k = 0; k < n_coins; ++k) {
    std::mt19937_64 rng = make_rng(seed, static_cast<std::uint64_t>(k));
    const Matrix coin = sample_haar_unitary(c, rng);
    const WalkSpec spec = make_walk_spec(d, c, coin, jumps);
    const ProbField pf = basis_averaged_probabilities(spec, T);
    const Histogram h = rescaled_histogram(pf, T, bins, box);
    for (std::size_t i = 0; i < acc.mass.size(); ++i) acc.mass[i] += h.mass[i];
  }
  for (double& m : acc.mass) m /= n_coins;
  return acc;
}

}  // namespace qrw

#endif  // QRW_HAAR_HPP
