// SPDX-License-Identifier: Apache-2.0
#ifndef QRW_LOCALIZE_HPP
#define QRW_LOCALIZE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "qrw/evolve.hpp"
#include "qrw/haar.hpp"
#include "qrw/spectral.hpp"
#include "qrw/walk_spec.hpp"

namespace qrw {

/// One detected localization speed, optionally with its rational
/// certificate: s = -l/m with m at most the chirality dimension.
struct Atom {
  RealVec speed;
  double mass = 0.0;
  bool certified = false;
  IntVec l;
  int m = 0;
  double residual = 0.0;
};

struct AtomReport {
  std::vector<Atom> atoms;
};

/// Smallest denominator m <= c such that m * speed is within tol of an
/// integer vector; the certificate is l = -round(m * speed).
inline std::optional<std::pair<IntVec, int>> rational_speed(
    const RealVec& speed, int c, double tol = 1e-6) {
  const int d = static_cast<int>(speed.size());
  for (int m = 1; m <= c; ++m) {
    IntVec l(d);
    bool ok = true;
    for (int a = 0; a < d; ++a) {
      const double x = m * speed[a];
      const double r = std::round(x);
      if (std::abs(x - r) > tol) { ok = false; break; }
      l[a] = -static_cast<std::int64_t>(r);
    }
    if (ok) return std::make_pair(l, m);
  }
  return std::nullopt;
}

namespace detail {

// Spatial hash over cells of size `radius` so that greedy clustering
// only scans the 3^d neighborhood of each seed.
struct CellHash {
  double radius;
  std::map<IntVec, std::vector<std::size_t>> cells;

  IntVec key(const RealVec& rho) const {
    IntVec k(rho.size());
    for (std::size_t a = 0; a < rho.size(); ++a)
      k[a] = static_cast<std::int64_t>(std::floor(rho[a] / radius));
    return k;
  }
};

inline double dist(const RealVec& a, const RealVec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace detail

/// Greedy clustering of the limit-measure point cloud: repeatedly take
/// the heaviest unused point (ties broken lexicographically on rho),
/// absorb everything within `radius`, and keep clusters whose mass
/// reaches `mass_threshold` and whose dispersion stays within the
/// radius. Certificates are attached where rational_speed succeeds.
inline AtomReport detect_atoms(const LimitMeasure& lm, int c,
                               double radius = 1e-6,
                               double mass_threshold = 0.01,
                               double rational_tol = 1e-6) {
  if (radius <= 0.0) throw std::invalid_argument("detect_atoms: radius > 0");
  if (mass_threshold <= 0.0 || mass_threshold >= 1.0)
    throw std::invalid_argument("detect_atoms: mass_threshold in (0,1)");

  const std::size_t n = lm.points.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (lm.points[a].weight != lm.points[b].weight)
      return lm.points[a].weight > lm.points[b].weight;
    return lm.points[a].rho < lm.points[b].rho;
  });

  detail::CellHash hash{radius, {}};
  for (std::size_t i = 0; i < n; ++i)
    hash.cells[hash.key(lm.points[i].rho)].push_back(i);

  std::vector<bool> used(n, false);
  AtomReport report;

  const int d = n > 0 ? static_cast<int>(lm.points[0].rho.size()) : 0;
  for (std::size_t oi = 0; oi < n; ++oi) {
    const std::size_t seed = order[oi];
    if (used[seed]) continue;
    const RealVec& center = lm.points[seed].rho;

    // Gather members from the 3^d neighboring cells.
    std::vector<std::size_t> members;
    IntVec base = hash.key(center);
    IntVec off(d, -1);
    for (;;) {
      IntVec cell(d);
      for (int a = 0; a < d; ++a) cell[a] = base[a] + off[a];
      auto it = hash.cells.find(cell);
      if (it != hash.cells.end())
        for (std::size_t i : it->second)
          if (!used[i] && detail::dist(lm.points[i].rho, center) <= radius)
            members.push_back(i);
      int a = d - 1;
      for (; a >= 0; --a) {
        if (++off[a] <= 1) break;
        off[a] = -1;
      }
      if (a < 0) break;
    }

    double mass = 0.0;
    RealVec centroid(d, 0.0);
    for (std::size_t i : members) {
      used[i] = true;
      mass += lm.points[i].weight;
      for (int a = 0; a < d; ++a)
        centroid[a] += lm.points[i].weight * lm.points[i].rho[a];
    }
    if (mass < mass_threshold) continue;
    for (int a = 0; a < d; ++a) centroid[a] /= mass;

    double dispersion = 0.0;
    for (std::size_t i : members)
      dispersion = std::max(dispersion, detail::dist(lm.points[i].rho, centroid));
    if (dispersion > radius) continue;

    Atom atom;
    atom.speed = centroid;
    atom.mass = mass;
    if (auto cert = rational_speed(centroid, c, rational_tol)) {
      atom.certified = true;
      atom.l = cert->first;
      atom.m = cert->second;
      double res = 0.0;
      for (int a = 0; a < d; ++a)
        res = std::max(res, std::abs(atom.m * centroid[a] + atom.l[a]));
      atom.residual = res;
    }
    report.atoms.push_back(std::move(atom));
  }
  return report;
}

/// Fraction of random fibers on which some eigenvalue z of M(xi)
/// satisfies z^m e^{i <l, xi>} = 1 within tol: numeric check that the
/// monomial torus z^m xbar^l = 1 is a component of the spectral
/// surface (fraction 1.0 when it is).
inline double verify_monomial_torus(const WalkSpec& spec, const IntVec& l,
                                    int m, int n_samples,
                                    const RngSeed& seed = {12345u},
                                    double tol = 1e-8) {
  if (m < 1) throw std::invalid_argument("verify_monomial_torus: m >= 1");
  std::mt19937_64 rng = make_rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 2.0 * std::numbers::pi);
  RealVec xi(spec.d);
  int hits = 0;
  for (int s = 0; s < n_samples; ++s) {
    for (int a = 0; a < spec.d; ++a) xi[a] = unif(rng);
    const Matrix mm = transfer_matrix(spec, xi);
    Eigen::ComplexEigenSolver<Matrix> es(mm, false);
    double phase = 0.0;
    for (int a = 0; a < spec.d; ++a) phase += l[a] * xi[a];
    const Complex mono = std::polar(1.0, phase);
    for (int i = 0; i < spec.c; ++i) {
      Complex z = es.eigenvalues()(i);
      Complex zm(1.0, 0.0);
      for (int p = 0; p < m; ++p) zm *= z;
      if (std::abs(zm * mono - Complex(1.0, 0.0)) <= tol) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / n_samples;
}

/// One row of the moving-site probe: probabilities read at site T * s.
struct ProbeRow {
  int T = 0;
  double site_total = 0.0;   // sum over chirality
  double chirality_max = 0.0;
};

namespace detail {

inline bool integral_site(const RealVec& speed, int T, IntVec& site,
                          double tol = 1e-9) {
  site.assign(speed.size(), 0);
  for (std::size_t a = 0; a < speed.size(); ++a) {
    const double x = T * speed[a];
    const double r = std::round(x);
    if (std::abs(x - r) > tol) return false;
    site[a] = static_cast<std::int64_t>(r);
  }
  return true;
}

}  // namespace detail

/// Track the probability at the moving site T*s for the admissible T
/// in T_list (those with T*s integral). With no initial state given,
/// probabilities are averaged over the chirality basis.
inline std::vector<ProbeRow> strong_localization_probe(
    const WalkSpec& spec, const RealVec& speed, const std::vector<int>& T_list,
    const std::optional<Vector>& u = std::nullopt) {
  std::vector<int> admissible;
  IntVec site;
  for (int T : T_list)
    if (detail::integral_site(speed, T, site)) admissible.push_back(T);
  if (admissible.empty())
    throw std::invalid_argument(
        "strong_localization_probe: no admissible T in list");
  std::sort(admissible.begin(), admissible.end());
  const int Tmax = admissible.back();

  std::vector<Vector> initial_states;
  if (u) {
    check_unit(*u);
    initial_states.push_back(*u);
  } else {
    for (int i = 0; i < spec.c; ++i)
      initial_states.push_back(basis_state(spec.c, i));
  }

  std::map<int, ProbeRow> rows;
  for (int T : admissible) rows[T] = ProbeRow{T, 0.0, 0.0};

  for (const Vector& u0 : initial_states) {
    StateField s = initial_state(spec, u0, window_for(spec, Tmax));
    std::size_t next = 0;
    if (admissible[next] == 0) {
      // T = 0 only admissible for s with 0 * s = 0, i.e. always.
      detail::integral_site(speed, 0, site);
      double tot = 0.0, cmax = 0.0;
      for (int v = 0; v < spec.c; ++v) {
        const double p = std::norm(s.amp(site, v));
        tot += p;
        cmax = std::max(cmax, p);
      }
      rows[0].site_total += tot / initial_states.size();
      rows[0].chirality_max = std::max(rows[0].chirality_max, cmax);
      ++next;
    }
    for (int t = 1; t <= Tmax && next < admissible.size(); ++t) {
      s = step(s, spec);
      if (t != admissible[next]) continue;
      detail::integral_site(speed, t, site);
      double tot = 0.0, cmax = 0.0;
      for (int v = 0; v < spec.c; ++v) {
        const double p = std::norm(s.amp(site, v));
        tot += p;
        cmax = std::max(cmax, p);
      }
      rows[t].site_total += tot / initial_states.size();
      rows[t].chirality_max = std::max(rows[t].chirality_max, cmax);
      ++next;
    }
  }

  std::vector<ProbeRow> out;
  for (const auto& [T, row] : rows) out.push_back(row);
  return out;
}

}  // namespace qrw

#endif  // QRW_LOCALIZE_HPP
