// SPDX-License-Identifier: Apache-2.0
#ifndef QRW_WALK_SPEC_HPP
#define QRW_WALK_SPEC_HPP

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace qrw {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using IntVec = std::vector<std::int64_t>;

struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// How far a matrix is from being unitary, in the max norm of U†U - I.
inline double unitarity_defect(const Matrix& u) {
  const Matrix g = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
  return g.cwiseAbs().maxCoeff();
}

/// Nearest unitary in Frobenius norm (polar factor, via SVD).
inline Matrix nearest_unitary(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

/// Grover-type coin I - (2/c) O, O the all-ones matrix. Real and unitary.
inline Matrix hadamard_coin(int c) {
  if (c < 1) throw SpecError("hadamard_coin: c must be >= 1");
  Matrix u = Matrix::Constant(c, c, Complex(-2.0 / c, 0.0));
  u.diagonal().array() += Complex(1.0, 0.0);
  return u;
}

namespace detail {

// Rank of an integer matrix by fraction-free Gaussian elimination.
inline int integer_rank(std::vector<IntVec> rows, int ncols) {
  int rank = 0;
  const int nrows = static_cast<int>(rows.size());
  int pr = 0;
  for (int pc = 0; pc < ncols && pr < nrows; ++pc) {
    int pivot = -1;
    for (int r = pr; r < nrows; ++r) {
      if (rows[r][pc] != 0) { pivot = r; break; }
    }
    if (pivot < 0) continue;
    std::swap(rows[pr], rows[pivot]);
    for (int r = pr + 1; r < nrows; ++r) {
      const std::int64_t f = rows[r][pc], p = rows[pr][pc];
      if (f == 0) continue;
      for (int j = 0; j < ncols; ++j)
        rows[r][j] = rows[r][j] * p - rows[pr][j] * f;
    }
    ++pr;
    ++rank;
  }
  return rank;
}

}  // namespace detail

/// One translation-invariant coined walk: lattice rank d, chirality
/// dimension c, a unitary coin, and one integer jump vector per
/// chirality basis element.
struct WalkSpec {
  int d = 0;
  int c = 0;
  Matrix coin;               // exactly unitary (projected if needed)
  Matrix coin_raw;           // as supplied, before projection
  std::vector<IntVec> jumps; // c vectors of length d

  double coin_defect_raw() const { return unitarity_defect(coin_raw); }
};

/// Validating constructor used by the parser and the fixtures.
/// Coins within loose_tol of unitary are projected to the nearest
/// unitary; anything worse is rejected. Jumps must affinely span R^d
/// (the single-jump case c = 1 is admitted as a trivial walk).
inline WalkSpec make_walk_spec(int d, int c, const Matrix& coin,
                               const std::vector<IntVec>& jumps,
                               double loose_tol = 1e-6) {
  if (d < 1) throw SpecError("walk spec: d must be >= 1");
  if (c < 1) throw SpecError("walk spec: c must be >= 1");
  if (coin.rows() != c || coin.cols() != c)
    throw SpecError("walk spec: coin must be c x c");
  if (static_cast<int>(jumps.size()) != c)
    throw SpecError("walk spec: need exactly c jump vectors");
  for (const auto& j : jumps)
    if (static_cast<int>(j.size()) != d)
      throw SpecError("walk spec: each jump needs d coordinates");

  const double defect = unitarity_defect(coin);
  if (defect > loose_tol)
    throw SpecError("walk spec: coin is not unitary (defect " +
                    std::to_string(defect) + ")");

  if (c >= 2) {
    std::vector<IntVec> diffs;
    for (int k = 1; k < c; ++k) {
      IntVec row(d);
      for (int a = 0; a < d; ++a) row[a] = jumps[k][a] - jumps[0][a];
      diffs.push_back(std::move(row));
    }
    if (detail::integer_rank(diffs, d) < d)
      throw SpecError("walk spec: jumps do not affinely span R^d");
  }

  WalkSpec spec;
  spec.d = d;
  spec.c = c;
  spec.coin_raw = coin;
  spec.coin = defect <= 1e-12 ? coin : nearest_unitary(coin);
  spec.jumps = jumps;
  return spec;
}

/// Normalized chirality vector; basis states via basis_state().
inline Vector basis_state(int c, int i) {
  Vector u = Vector::Zero(c);
  u(i) = Complex(1.0, 0.0);
  return u;
}

inline void check_unit(const Vector& u, double tol = 1e-12) {
  if (std::abs(u.norm() - 1.0) > tol)
    throw SpecError("chirality vector must have unit norm");
}

// ---------------------------------------------------------------------------
// JSON interface: {"d":int,"c":int,"coin_re":[[..]],"coin_im":[[..]],
//                  "jumps":[[..]]}. Unknown fields are rejected.

inline WalkSpec parse_walk_spec(const std::string& document) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(document);
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("walk spec: malformed JSON: ") + e.what());
  }
  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    if (key != "d" && key != "c" && key != "coin_re" && key != "coin_im" &&
        key != "jumps")
      throw SpecError("walk spec: unknown field '" + key + "'");
  }
  try {
    const int d = j.at("d").get<int>();
    const int c = j.at("c").get<int>();
    const auto re = j.at("coin_re").get<std::vector<std::vector<double>>>();
    const auto im = j.at("coin_im").get<std::vector<std::vector<double>>>();
    const auto jumps = j.at("jumps").get<std::vector<IntVec>>();
    if (static_cast<int>(re.size()) != c || static_cast<int>(im.size()) != c)
      throw SpecError("walk spec: coin dimensions do not match c");
    Matrix coin(c, c);
    for (int r = 0; r < c; ++r) {
      if (static_cast<int>(re[r].size()) != c ||
          static_cast<int>(im[r].size()) != c)
        throw SpecError("walk spec: coin dimensions do not match c");
      for (int cc = 0; cc < c; ++cc) coin(r, cc) = Complex(re[r][cc], im[r][cc]);
    }
    return make_walk_spec(d, c, coin, jumps);
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("walk spec: malformed document: ") + e.what());
  }
}

inline std::string render_walk_spec(const WalkSpec& spec) {
  nlohmann::json j;
  j["d"] = spec.d;
  j["c"] = spec.c;
  std::vector<std::vector<double>> re(spec.c), im(spec.c);
  for (int r = 0; r < spec.c; ++r) {
    re[r].resize(spec.c);
    im[r].resize(spec.c);
    for (int cc = 0; cc < spec.c; ++cc) {
      re[r][cc] = spec.coin_raw(r, cc).real();
      im[r][cc] = spec.coin_raw(r, cc).imag();
    }
  }
  j["coin_re"] = re;
  j["coin_im"] = im;
  j["jumps"] = spec.jumps;
  return j.dump();
}

// ---------------------------------------------------------------------------
// Fixtures

namespace detail {

inline std::vector<IntVec> jump_map(int which) {
  switch (which) {
    case 1: return {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    case 2: return {{0, 0}, {2, 1}, {1, 2}, {1, 1}};
    case 3: return {{0, 0}, {2, 1}, {1, 2}, {2, 2}};
    case 4: return {{0, 0}, {2, 0}, {2, 1}, {1, 0}};
    default: throw SpecError("unknown jump map index");
  }
}

// Randomly generated 4x4 unitary coin, printed to 6 decimal digits;
// make_walk_spec projects it back onto the unitary group.
inline Matrix ucoin_raw() {
  Matrix u(4, 4);
  u << Complex(-0.331759, 0.069082), Complex(0.471768, 0.231231),
      Complex(-0.278617, -0.583254), Complex(-0.425926, 0.099521),
      Complex(0.368644, -0.479381), Complex(-0.113567, 0.513171),
      Complex(-0.443628, 0.254345), Complex(-0.218580, 0.220861),
      Complex(0.169821, -0.199957), Complex(0.206809, -0.447012),
      Complex(0.177488, 0.271570), Complex(-0.723490, -0.244741),
      Complex(-0.654156, 0.150721), Complex(-0.444209, 0.088396),
      Complex(-0.315095, 0.340811), Complex(-0.234176, -0.271940);
  return u;
}

}  // namespace detail

inline const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = {
      "hadamard-j1", "hadamard-j2", "hadamard-j3", "hadamard-j4",
      "ucoin-j1",    "ucoin-j2",    "ucoin-j3",    "ucoin-j4"};
  return names;
}

inline WalkSpec fixture(const std::string& name) {
  for (int k = 1; k <= 4; ++k) {
    const std::string suffix = "-j" + std::to_string(k);
    if (name == "hadamard" + suffix)
      return make_walk_spec(2, 4, hadamard_coin(4), detail::jump_map(k));
    if (name == "ucoin" + suffix)
      return make_walk_spec(2, 4, detail::ucoin_raw(), detail::jump_map(k));
  }
  throw SpecError("unknown fixture '" + name + "'");
}

}  // namespace qrw

#endif  // QRW_WALK_SPEC_HPP
