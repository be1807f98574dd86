// SPDX-License-Identifier: Apache-2.0
#ifndef QRW_EVOLVE_HPP
#define QRW_EVOLVE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qrw/histogram.hpp"
#include "qrw/polytope.hpp"
#include "qrw/walk_spec.hpp"

namespace qrw {

/// Finite axis-aligned window of lattice sites, inclusive bounds.
struct LatticeWindow {
  IntVec lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }

  std::int64_t extent(int a) const { return hi[a] - lo[a] + 1; }

  std::int64_t size() const {
    std::int64_t n = 1;
    for (int a = 0; a < dim(); ++a) n *= extent(a);
    return n;
  }

  bool contains(const IntVec& k) const {
    for (int a = 0; a < dim(); ++a)
      if (k[a] < lo[a] || k[a] > hi[a]) return false;
    return true;
  }

  std::int64_t index(const IntVec& k) const {
    std::int64_t f = 0;
    for (int a = 0; a < dim(); ++a) f = f * extent(a) + (k[a] - lo[a]);
    return f;
  }

  IntVec site(std::int64_t flat) const {
    IntVec k(dim());
    for (int a = dim() - 1; a >= 0; --a) {
      const std::int64_t e = extent(a);
      k[a] = lo[a] + flat % e;
      flat /= e;
    }
    return k;
  }
};

/// Window holding the whole T-step reachable set with one cell of
/// slack per axis (so T P never touches the boundary from inside).
inline LatticeWindow window_for(const WalkSpec& spec, int T) {
  LatticeWindow w;
  w.lo.assign(spec.d, 0);
  w.hi.assign(spec.d, 0);
  for (int a = 0; a < spec.d; ++a) {
    std::int64_t lo = spec.jumps[0][a], hi = spec.jumps[0][a];
    for (const auto& j : spec.jumps) {
      lo = std::min(lo, j[a]);
      hi = std::max(hi, j[a]);
    }
    // The window covers the whole trajectory, so t P for 0 <= t <= T.
    w.lo[a] = std::min<std::int64_t>(0, T * lo) - 1;
    w.hi[a] = std::max<std::int64_t>(0, T * hi) + 1;
  }
  return w;
}

/// Complex amplitudes over (site in window) x (chirality index),
/// site-major with chirality innermost.
struct StateField {
  LatticeWindow window;
  int c = 0;
  int time = 0;
  std::vector<Complex> amps;

  Complex amp(const IntVec& k, int chi) const {
    if (!window.contains(k)) return Complex(0.0, 0.0);
    return amps[window.index(k) * c + chi];
  }

  double norm_squared() const {
    double s = 0.0;
    for (const Complex& a : amps) s += std::norm(a);
    return s;
  }
};

inline StateField initial_state(const WalkSpec& spec, const Vector& u,
                                const LatticeWindow& window) {
  check_unit(u);
  StateField s;
  s.window = window;
  s.c = spec.c;
  s.time = 0;
  s.amps.assign(static_cast<std::size_t>(window.size()) * spec.c,
                Complex(0.0, 0.0));
  IntVec origin(spec.d, 0);
  if (!window.contains(origin))
    throw std::invalid_argument("initial_state: window must contain origin");
  const std::int64_t base = window.index(origin) * spec.c;
  for (int i = 0; i < spec.c; ++i) s.amps[base + i] = u(i);
  return s;
}

/// One application of S = S2 S1: coin at every site, then shift layer
/// l by jump j(e_l). Sites that are exactly zero stay exactly zero.
inline StateField step(const StateField& state, const WalkSpec& spec) {
  const LatticeWindow& w = state.window;
  const int c = spec.c;
  StateField out;
  out.window = w;
  out.c = c;
  out.time = state.time + 1;
  out.amps.assign(state.amps.size(), Complex(0.0, 0.0));

  // Precompute flat-index offsets of the jumps (valid away from the
  // window faces; boundary sites are checked explicitly).
  std::vector<std::int64_t> offsets(c);
  for (int l = 0; l < c; ++l) {
    std::int64_t off = 0;
    for (int a = 0; a < spec.d; ++a)
      off = off * w.extent(a) + spec.jumps[l][a];
    offsets[l] = off * c;
  }

  const std::int64_t nsites = w.size();
  Vector v(c), av(c);
  for (std::int64_t s = 0; s < nsites; ++s) {
    const std::int64_t base = s * c;
    bool any = false;
    for (int i = 0; i < c; ++i) {
      v(i) = state.amps[base + i];
      if (v(i) != Complex(0.0, 0.0)) any = true;
    }
    if (!any) continue;
    av.noalias() = spec.coin * v;
    const IntVec site = w.site(s);
    for (int l = 0; l < c; ++l) {
      if (av(l) == Complex(0.0, 0.0)) continue;
      IntVec target = site;
      bool inside = true;
      for (int a = 0; a < spec.d; ++a) {
        target[a] += spec.jumps[l][a];
        if (target[a] < w.lo[a] || target[a] > w.hi[a]) inside = false;
      }
      if (!inside)
        throw std::runtime_error("step: reachable set would exit the window");
      out.amps[base + offsets[l] + l] += av(l);
    }
  }
  return out;
}

/// T steps from the point start delta_0 (x) u.
inline StateField evolve(const WalkSpec& spec, const Vector& u, int T) {
  if (T < 0) throw std::invalid_argument("evolve: T must be >= 0");
  StateField s = initial_state(spec, u, window_for(spec, T));
  for (int t = 0; t < T; ++t) s = step(s, spec);
  return s;
}

/// Probabilities |amplitude|^2; per-site totals always, per-chirality
/// layers on demand.
struct ProbField {
  LatticeWindow window;
  int c = 0;
  int time = 0;
  std::vector<double> site;       // per-site totals
  std::vector<double> chirality;  // optional, site-major x chirality

  double total() const {
    double s = 0.0;
    for (double p : site) s += p;
    return s;
  }
};

inline ProbField probabilities(const StateField& state,
                               bool per_chirality = false) {
  ProbField p;
  p.window = state.window;
  p.c = state.c;
  p.time = state.time;
  const std::int64_t nsites = state.window.size();
  p.site.assign(nsites, 0.0);
  if (per_chirality) p.chirality.assign(state.amps.size(), 0.0);
  for (std::int64_t s = 0; s < nsites; ++s) {
    double tot = 0.0;
    for (int i = 0; i < state.c; ++i) {
      const double q = std::norm(state.amps[s * state.c + i]);
      tot += q;
      if (per_chirality) p.chirality[s * state.c + i] = q;
    }
    p.site[s] = tot;
  }
  return p;
}

/// Probabilities averaged over the chirality basis of initial states
/// (the "all possible initial internal states" average).
inline ProbField basis_averaged_probabilities(const WalkSpec& spec, int T) {
  ProbField acc;
  for (int i = 0; i < spec.c; ++i) {
    ProbField p = probabilities(evolve(spec, basis_state(spec.c, i), T));
    if (i == 0) {
      acc = p;
    } else {
      for (std::size_t s = 0; s < acc.site.size(); ++s) acc.site[s] += p.site[s];
    }
  }
  for (double& v : acc.site) v /= spec.c;
  return acc;
}

/// A_T(k): column u holds the chirality amplitudes at site k after
/// evolving delta_0 (x) e_u for T steps.
inline Matrix amplitude_operator(const WalkSpec& spec, int T, const IntVec& k) {
  Matrix a = Matrix::Zero(spec.c, spec.c);
  for (int u = 0; u < spec.c; ++u) {
    StateField s = evolve(spec, basis_state(spec.c, u), T);
    for (int v = 0; v < spec.c; ++v) a(v, u) = s.amp(k, v);
  }
  return a;
}

/// Bin the per-site probabilities at rho = k/T over a bounding box
/// (normally the box of the jump polytope).
inline Histogram rescaled_histogram(const ProbField& pf, int T, int bins,
                                    const Box& box) {
  if (T < 1) throw std::invalid_argument("rescaled_histogram: T must be >= 1");
  Histogram h(box, bins);
  const std::int64_t nsites = pf.window.size();
  RealVec rho(pf.window.dim());
  for (std::int64_t s = 0; s < nsites; ++s) {
    if (pf.site[s] == 0.0) continue;
    const IntVec k = pf.window.site(s);
    for (int a = 0; a < pf.window.dim(); ++a)
      rho[a] = static_cast<double>(k[a]) / T;
    h.deposit(rho, pf.site[s]);
  }
  return h;
}

}  // namespace qrw

#endif  // QRW_EVOLVE_HPP
