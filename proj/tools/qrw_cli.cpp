// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver: evolve | spectral | haar | localize | render.
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qrw/qrw.hpp"

namespace {

struct CommonOpts {
  std::string fixture;
  std::string spec_file;
  std::string state;
  std::string out = "out";
  int T = 400;
  int grid = 256;
  int bins = 40;
  int coins = 1000;
  std::uint64_t seed = 1;
  double tol = 1e-6;
  bool log_scale = false;
  double gamma = 0.5;
  bool pgm = false;
};

qrw::WalkSpec load_spec(const CommonOpts& opt) {
  const bool have_fixture = !opt.fixture.empty();
  const bool have_file = !opt.spec_file.empty();
  if (have_fixture == have_file)
    throw qrw::SpecError("give exactly one of --fixture and --spec");
  if (have_fixture) return qrw::fixture(opt.fixture);
  std::ifstream f(opt.spec_file);
  if (!f) throw qrw::SpecError("cannot read spec file '" + opt.spec_file + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return qrw::parse_walk_spec(ss.str());
}

std::optional<qrw::Vector> parse_state(const std::string& s, int c) {
  if (s.empty()) return std::nullopt;
  std::istringstream in(s);
  qrw::Vector u(c);
  for (int i = 0; i < c; ++i) {
    std::string pair;
    if (!(in >> pair)) throw qrw::SpecError("--state needs c 're,im' pairs");
    const auto comma = pair.find(',');
    if (comma == std::string::npos)
      throw qrw::SpecError("--state entries must be 're,im'");
    u(i) = qrw::Complex(std::stod(pair.substr(0, comma)),
                        std::stod(pair.substr(comma + 1)));
  }
  const double n = u.norm();
  if (n == 0.0) throw qrw::SpecError("--state must be nonzero");
  return u / n;
}

std::string manifest(const CommonOpts& opt, const std::string& cmd) {
  std::ostringstream m;
  m << "cmd=" << cmd;
  if (!opt.fixture.empty()) m << " fixture=" << opt.fixture;
  if (!opt.spec_file.empty()) m << " spec=" << opt.spec_file;
  m << " seed=" << opt.seed << " n_coins=" << opt.coins << " grid=" << opt.grid
    << " T=" << opt.T << " bins=" << opt.bins;
  return m.str();
}

void add_common(CLI::App* cmd, CommonOpts& opt, bool with_spec = true) {
  if (with_spec) {
    cmd->add_option("--fixture", opt.fixture, "named example walk");
    cmd->add_option("--spec", opt.spec_file, "walk spec JSON file");
  }
  cmd->add_option("--T", opt.T, "number of steps");
  cmd->add_option("--grid", opt.grid, "torus grid points per axis");
  cmd->add_option("--bins", opt.bins, "histogram bins per axis");
  cmd->add_option("--coins", opt.coins, "number of random coins");
  cmd->add_option("--seed", opt.seed, "rng seed");
  cmd->add_option("--state", opt.state, "initial chirality state, c 're,im' pairs");
  cmd->add_option("--out", opt.out, "output path prefix");
  cmd->add_option("--tol", opt.tol, "detection tolerance");
  cmd->add_flag("--log-scale", opt.log_scale, "logarithmic heatmap scale");
  cmd->add_option("--gamma", opt.gamma, "heatmap gamma");
  cmd->add_flag("--pgm", opt.pgm, "also write a PGM heatmap");
}

void check_positive(const CommonOpts& opt) {
  if (opt.T < 0 || opt.grid < 1 || opt.bins < 1 || opt.coins < 1 ||
      opt.gamma <= 0.0 || opt.tol <= 0.0)
    throw qrw::SpecError("numeric parameters must be positive");
}

qrw::RenderOptions render_opts(const CommonOpts& opt) {
  qrw::RenderOptions r;
  r.gamma = opt.gamma;
  r.log_scale = opt.log_scale;
  return r;
}

int cmd_evolve(const CommonOpts& opt) {
  check_positive(opt);
  const qrw::WalkSpec spec = load_spec(opt);
  auto u = parse_state(opt.state, spec.c);
  qrw::ProbField pf;
  if (u)
    pf = qrw::probabilities(qrw::evolve(spec, *u, opt.T), true);
  else
    pf = qrw::basis_averaged_probabilities(spec, opt.T);
  qrw::write_file(opt.out + ".csv",
                  qrw::prob_field_csv(pf, manifest(opt, "evolve")));
  if (opt.pgm && spec.d == 2)
    qrw::write_file(opt.out + ".pgm", qrw::render_pgm(pf, render_opts(opt)));
  std::cout << "evolve: T=" << opt.T << " total=" << pf.total() << "\n";
  return 0;
}

int cmd_spectral(const CommonOpts& opt) {
  check_positive(opt);
  const qrw::WalkSpec spec = load_spec(opt);
  auto u = parse_state(opt.state, spec.c);
  const qrw::LimitMeasure lm =
      u ? qrw::limit_measure(spec, opt.grid, qrw::WeightMode::State, *u)
        : qrw::limit_measure(spec, opt.grid, qrw::WeightMode::TraceAveraged);
  const qrw::Box box = qrw::jump_polytope(spec).bounding_box();
  const qrw::Histogram h = qrw::histogram(lm, opt.bins, box);
  qrw::write_file(opt.out + "_measure.csv", qrw::limit_measure_csv(lm));
  qrw::write_file(opt.out + "_hist.csv",
                  qrw::histogram_csv(h, manifest(opt, "spectral")));
  if (opt.pgm && spec.d == 2)
    qrw::write_file(opt.out + ".pgm", qrw::render_pgm(h, render_opts(opt)));
  std::cout << "spectral: grid=" << lm.grid_n << " skipped=" << lm.skipped
            << "/" << lm.fibers << "\n";
  return 0;
}

int cmd_haar(const CommonOpts& opt, bool empirical) {
  check_positive(opt);
  const qrw::WalkSpec spec = load_spec(opt);
  const qrw::RngSeed seed{opt.seed};
  const qrw::Histogram averaged =
      empirical ? qrw::averaged_empirical_measure(spec.jumps, opt.coins, opt.T,
                                                  seed, opt.bins)
                : qrw::averaged_limit_measure(spec.jumps, opt.coins, opt.grid,
                                              opt.bins, seed);
  const qrw::Histogram oracle = qrw::simplex_pushforward_oracle(
      spec.jumps, 1000000, qrw::RngSeed{opt.seed ^ 0x5eedULL}, opt.bins);
  const double tv = qrw::tv_distance(averaged, oracle);
  qrw::write_file(opt.out + "_avg.csv",
                  qrw::histogram_csv(averaged, manifest(opt, "haar")));
  qrw::write_file(opt.out + "_oracle.csv",
                  qrw::histogram_csv(oracle, manifest(opt, "haar-oracle")));
  if (opt.pgm && spec.d == 2)
    qrw::write_file(opt.out + ".pgm", qrw::render_pgm(averaged, render_opts(opt)));
  std::cout << "haar: TV(averaged, simplex oracle) = " << tv << "\n";
  return 0;
}

int cmd_localize(const CommonOpts& opt) {
  check_positive(opt);
  const qrw::WalkSpec spec = load_spec(opt);
  const qrw::LimitMeasure lm =
      qrw::limit_measure(spec, opt.grid, qrw::WeightMode::TraceAveraged);
  qrw::AtomReport report = qrw::detect_atoms(lm, spec.c, 1e-6, 0.01, opt.tol);
  std::cout << "localize: " << report.atoms.size() << " atom(s)\n";
  for (auto& atom : report.atoms) {
    std::cout << "  speed (";
    for (int a = 0; a < spec.d; ++a)
      std::cout << atom.speed[a] << (a + 1 < spec.d ? ", " : ")");
    std::cout << " mass " << atom.mass;
    if (atom.certified) {
      const double frac = qrw::verify_monomial_torus(
          spec, atom.l, atom.m, 1000, qrw::RngSeed{opt.seed});
      std::cout << "  certificate l=(";
      for (int a = 0; a < spec.d; ++a)
        std::cout << atom.l[a] << (a + 1 < spec.d ? "," : ")");
      std::cout << " m=" << atom.m << " torus-fraction=" << frac;
      if (frac > 0.01 && frac < 0.99) std::cout << " [inconclusive]";
    } else {
      std::cout << "  (no rational certificate with denominator <= " << spec.c
                << ")";
    }
    std::cout << "\n";
  }
  qrw::write_file(opt.out + "_atoms.csv",
                  qrw::atom_report_csv(report, spec.d, manifest(opt, "localize")));
  return 0;
}

int cmd_render(const std::string& in, const std::string& out,
               const CommonOpts& opt) {
  std::ifstream f(in);
  if (!f) throw qrw::SpecError("cannot read '" + in + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  const qrw::Histogram h = qrw::parse_histogram_csv(ss.str());
  qrw::write_file(out, qrw::render_pgm(h, render_opts(opt)));
  std::cout << "render: wrote " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"translation-invariant coined quantum walk laboratory"};
  app.require_subcommand(1);

  CommonOpts opt;
  bool empirical = false;
  std::string render_in, render_out;

  CLI::App* evolve = app.add_subcommand("evolve", "exact state evolution");
  add_common(evolve, opt);
  CLI::App* spectral =
      app.add_subcommand("spectral", "spectral surface and weak-limit measure");
  add_common(spectral, opt);
  CLI::App* haar = app.add_subcommand("haar", "Haar-averaged coin statistics");
  add_common(haar, opt);
  haar->add_flag("--empirical", empirical,
                 "average T-step simulations instead of limit measures");
  CLI::App* localize = app.add_subcommand("localize", "localization atoms");
  add_common(localize, opt);
  CLI::App* render = app.add_subcommand("render", "histogram CSV to PGM");
  render->add_option("--in", render_in, "histogram CSV path")->required();
  render->add_option("--out", render_out, "output PGM path")->required();
  render->add_flag("--log-scale", opt.log_scale, "logarithmic scale");
  render->add_option("--gamma", opt.gamma, "heatmap gamma");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    (void)app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (evolve->parsed()) return cmd_evolve(opt);
    if (spectral->parsed()) return cmd_spectral(opt);
    if (haar->parsed()) return cmd_haar(opt, empirical);
    if (localize->parsed()) return cmd_localize(opt);
    if (render->parsed()) return cmd_render(render_in, render_out, opt);
  } catch (const qrw::SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
