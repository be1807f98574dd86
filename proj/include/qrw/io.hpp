// SPDX-License-Identifier: Apache-2.0
#ifndef QRW_IO_HPP
#define QRW_IO_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrw/evolve.hpp"
#include "qrw/histogram.hpp"
#include "qrw/localize.hpp"
#include "qrw/spectral.hpp"

namespace qrw {

namespace detail {

// Shortest round-trippable decimal form.
inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

/// CSV "k1,...,kd,p_total[,p_chi_1..p_chi_c]"; sites with p below the
/// export threshold are omitted.
inline std::string prob_field_csv(const ProbField& pf,
                                  const std::string& manifest = "",
                                  double threshold = 0.0) {
  std::ostringstream out;
  if (!manifest.empty()) out << "# " << manifest << "\n";
  const int d = pf.window.dim();
  for (int a = 0; a < d; ++a) out << "k" << (a + 1) << ",";
  out << "p_total";
  const bool chi = !pf.chirality.empty();
  if (chi)
    for (int i = 0; i < pf.c; ++i) out << ",p_chi_" << (i + 1);
  out << "\n";
  const std::int64_t nsites = pf.window.size();
  for (std::int64_t s = 0; s < nsites; ++s) {
    if (pf.site[s] < threshold || pf.site[s] == 0.0) continue;
    const IntVec k = pf.window.site(s);
    for (int a = 0; a < d; ++a) out << k[a] << ",";
    out << detail::fmt(pf.site[s]);
    if (chi)
      for (int i = 0; i < pf.c; ++i)
        out << "," << detail::fmt(pf.chirality[s * pf.c + i]);
    out << "\n";
  }
  return out.str();
}

/// CSV "rho_1,...,rho_d,weight" with a provenance comment line.
inline std::string limit_measure_csv(const LimitMeasure& lm) {
  std::ostringstream out;
  out << "# grid=" << lm.grid_n << " mode="
      << (lm.mode == WeightMode::TraceAveraged ? "trace-averaged" : "state")
      << " skipped=" << lm.skipped << "\n";
  const int d = lm.points.empty() ? 0 : static_cast<int>(lm.points[0].rho.size());
  for (int a = 0; a < d; ++a) out << "rho_" << (a + 1) << ",";
  out << "weight\n";
  for (const auto& p : lm.points) {
    for (int a = 0; a < d; ++a) out << detail::fmt(p.rho[a]) << ",";
    out << detail::fmt(p.weight) << "\n";
  }
  return out.str();
}

/// CSV "bin_1,...,bin_d,mass".
inline std::string histogram_csv(const Histogram& h,
                                 const std::string& manifest = "") {
  std::ostringstream out;
  if (!manifest.empty()) out << "# " << manifest << "\n";
  const int d = h.dim();
  out << "# box";
  for (int a = 0; a < d; ++a)
    out << " [" << detail::fmt(h.box.lo[a]) << "," << detail::fmt(h.box.hi[a])
        << "]";
  out << " bins=" << h.bins << "\n";
  for (int a = 0; a < d; ++a) out << "bin_" << (a + 1) << ",";
  out << "mass\n";
  std::vector<int> idx(d, 0);
  for (std::size_t f = 0; f < h.mass.size(); ++f) {
    std::size_t rem = f;
    for (int a = d - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rem % h.bins);
      rem /= h.bins;
    }
    for (int a = 0; a < d; ++a) out << idx[a] << ",";
    out << detail::fmt(h.mass[f]) << "\n";
  }
  return out.str();
}

/// CSV "s_1,...,s_d,mass,l_1,...,l_d,m,residual"; uncertified atoms
/// leave the certificate columns empty.
inline std::string atom_report_csv(const AtomReport& report, int d,
                                   const std::string& manifest = "") {
  std::ostringstream out;
  if (!manifest.empty()) out << "# " << manifest << "\n";
  for (int a = 0; a < d; ++a) out << "s_" << (a + 1) << ",";
  out << "mass,";
  for (int a = 0; a < d; ++a) out << "l_" << (a + 1) << ",";
  out << "m,residual\n";
  for (const auto& atom : report.atoms) {
    for (int a = 0; a < d; ++a) out << detail::fmt(atom.speed[a]) << ",";
    out << detail::fmt(atom.mass) << ",";
    if (atom.certified) {
      for (int a = 0; a < d; ++a) out << atom.l[a] << ",";
      out << atom.m << "," << detail::fmt(atom.residual);
    } else {
      for (int a = 0; a < d; ++a) out << ",";
      out << ",";
    }
    out << "\n";
  }
  return out.str();
}

struct RenderOptions {
  double gamma = 0.5;
  bool log_scale = false;
  double log_eps = 1e-12;
};

/// Plain PGM (P2), max gray 65535. Values map through (v/vmax)^gamma,
/// or log(1 + v/eps) / log(1 + vmax/eps) with the log-scale option.
/// Deterministic bytes for fixed input and options.
inline std::string render_pgm(const std::vector<double>& values, int width,
                              int height, const RenderOptions& opt = {}) {
  if (values.empty() || width < 1 || height < 1 ||
      static_cast<std::size_t>(width) * height != values.size())
    throw std::invalid_argument("render_pgm: empty or mismatched field");
  double vmax = 0.0;
  for (double v : values) {
    if (v < 0.0) throw std::invalid_argument("render_pgm: negative value");
    vmax = std::max(vmax, v);
  }
  std::ostringstream out;
  out << "P2\n" << width << " " << height << "\n65535\n";
  for (int r = 0; r < height; ++r) {
    for (int col = 0; col < width; ++col) {
      const double v = values[static_cast<std::size_t>(r) * width + col];
      double t = 0.0;
      if (vmax > 0.0) {
        if (opt.log_scale)
          t = std::log1p(v / opt.log_eps) / std::log1p(vmax / opt.log_eps);
        else
          t = std::pow(v / vmax, opt.gamma);
      }
      int gray = static_cast<int>(std::lround(t * 65535.0));
      if (gray < 0) gray = 0;
      if (gray > 65535) gray = 65535;
      out << gray << (col + 1 == width ? "" : " ");
    }
    out << "\n";
  }
  return out.str();
}

/// 2D histogram as an image, row 0 at the top = highest second axis.
inline std::string render_pgm(const Histogram& h, const RenderOptions& opt = {}) {
  if (h.dim() != 2)
    throw std::invalid_argument("render_pgm: need a 2-dimensional histogram");
  std::vector<double> values(static_cast<std::size_t>(h.bins) * h.bins);
  for (int row = 0; row < h.bins; ++row)
    for (int col = 0; col < h.bins; ++col)
      values[static_cast<std::size_t>(row) * h.bins + col] =
          h.mass[static_cast<std::size_t>(col) * h.bins +
                 (h.bins - 1 - row)];
  return render_pgm(values, h.bins, h.bins, opt);
}

/// 2D probability field as an image, one pixel per lattice site.
inline std::string render_pgm(const ProbField& pf, const RenderOptions& opt = {}) {
  if (pf.window.dim() != 2)
    throw std::invalid_argument("render_pgm: need a 2-dimensional field");
  const int w = static_cast<int>(pf.window.extent(0));
  const int hgt = static_cast<int>(pf.window.extent(1));
  std::vector<double> values(static_cast<std::size_t>(w) * hgt);
  for (int i = 0; i < w; ++i)
    for (int k = 0; k < hgt; ++k)
      values[static_cast<std::size_t>(hgt - 1 - k) * w + i] =
          pf.site[static_cast<std::size_t>(i) * hgt + k];
  return render_pgm(values, w, hgt, opt);
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

/// Read a histogram back from its CSV form (for the render command).
inline Histogram parse_histogram_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Box box;
  int bins = 0;
  std::vector<std::pair<std::vector<int>, double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# box", 0) == 0) {
        std::istringstream ls(line.substr(5));
        std::string tok;
        while (ls >> tok) {
          if (tok.rfind("bins=", 0) == 0) {
            bins = std::stoi(tok.substr(5));
          } else if (tok.front() == '[') {
            const auto comma = tok.find(',');
            box.lo.push_back(std::stod(tok.substr(1, comma - 1)));
            box.hi.push_back(
                std::stod(tok.substr(comma + 1, tok.size() - comma - 2)));
          }
        }
      }
      continue;
    }
    if (line.rfind("bin_", 0) == 0) continue;  // header
    std::vector<int> idx;
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() < 2)
      throw std::runtime_error("histogram csv: malformed row '" + line + "'");
    for (std::size_t i = 0; i + 1 < fields.size(); ++i)
      idx.push_back(std::stoi(fields[i]));
    rows.emplace_back(idx, std::stod(fields.back()));
  }
  if (bins == 0 || box.lo.empty())
    throw std::runtime_error("histogram csv: missing box comment line");
  Histogram h(box, bins);
  for (const auto& [idx, mass] : rows) {
    std::size_t f = 0;
    for (int i : idx) f = f * bins + i;
    h.mass.at(f) = mass;
  }
  return h;
}

}  // namespace qrw

#endif  // QRW_IO_HPP
