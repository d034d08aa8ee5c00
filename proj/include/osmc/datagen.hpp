#pragma once

// Synthetic ground truth (X = UVᵀ and everything derived from it) and the
// plain-text matrix / observation file formats.

#include "osmc/masking.hpp"
#include "osmc/matcore.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace osmc {

/// X = UVᵀ with Θ* = (1/m)XᵀX and its top-r eigenpairs. X is never stored
/// for synthetic data (m can be millions); entries are evaluated from the
/// factors. Ground truth built from a dense file keeps the matrix itself.
struct GroundTruth {
  DenseMatrix u;  // m x r
  DenseMatrix v;  // d x r
  DenseMatrix theta_star;
  DenseMatrix q_true;
  Vector lambda_true;
  std::optional<DenseMatrix> dense;

  Eigen::Index rows() const { return dense ? dense->rows() : u.rows(); }
  Eigen::Index cols() const { return dense ? dense->cols() : v.rows(); }
  Eigen::Index rank() const { return q_true.cols(); }

  double operator()(Eigen::Index i, Eigen::Index j) const {
    return dense ? (*dense)(i, j) : u.row(i).dot(v.row(j));
  }

  DenseMatrix x() const { return dense ? *dense : DenseMatrix(u * v.transpose()); }

  /// α = max X_ij², computed by a full pass over X.
  double max_sq_entry() const {
    if (dense) return dense->cwiseAbs2().maxCoeff();
    double best = 0.0;
    for (Eigen::Index i = 0; i < u.rows(); ++i) best = std::max(best, (v * u.row(i).transpose()).cwiseAbs2().maxCoeff());
    return best;
  }
};

namespace detail {

inline void set_spectrum(GroundTruth& gt, Eigen::Index r) {
  const SvdResult svd = svd_truncated(gt.theta_star, r);
  gt.q_true = svd.v;
  gt.lambda_true = svd.s;
}

}  // namespace detail

/// Θ* = V S̄ Vᵀ with S̄ = (1/m)UᵀU, which equals (1/m)XᵀX without forming X.
inline GroundTruth ground_truth_from_factors(DenseMatrix u, DenseMatrix v, Eigen::Index r) {
  if (u.cols() != v.cols()) throw std::invalid_argument("ground_truth_from_factors: factor ranks differ");
  GroundTruth gt;
  const DenseMatrix s_bar = (u.transpose() * u) / static_cast<double>(u.rows());
  gt.theta_star = v * s_bar * v.transpose();
  gt.theta_star = 0.5 * (gt.theta_star + gt.theta_star.transpose()).eval();
  gt.u = std::move(u);
  gt.v = std::move(v);
  detail::set_spectrum(gt, r);
  return gt;
}

/// Ground truth for an observed matrix: Θ* = (1/m)XᵀX and its top-r eigenpairs.
inline GroundTruth ground_truth_from_matrix(DenseMatrix x, Eigen::Index r) {
  if (r < 1 || r > x.cols()) throw std::invalid_argument("ground_truth_from_matrix: bad rank");
  GroundTruth gt;
  gt.theta_star = (x.transpose() * x) / static_cast<double>(x.rows());
  gt.theta_star = 0.5 * (gt.theta_star + gt.theta_star.transpose()).eval();
  gt.dense = std::move(x);
  detail::set_spectrum(gt, r);
  return gt;
}

/// U, V with i.i.d. N(0, r^{-1/2}) entries, reading r^{-1/2} as the variance:
/// then Var(X_ij) = r · r^{-1/2} · r^{-1/2} = 1.
inline GroundTruth gen_gaussian(std::size_t m, std::size_t d, std::size_t r, Rng& rng) {
  if (r < 1 || r > std::min(m, d)) throw std::invalid_argument("gen_gaussian: need 1 <= r <= min(m, d)");
  const double stddev = std::pow(static_cast<double>(r), -0.25);
  const auto ri = static_cast<Eigen::Index>(r);
  DenseMatrix u = rng.gaussian_matrix(static_cast<Eigen::Index>(m), ri, stddev);
  DenseMatrix v = rng.gaussian_matrix(static_cast<Eigen::Index>(d), ri, stddev);
  return ground_truth_from_factors(std::move(u), std::move(v), ri);
}

/// s_i = c0 · i^{-a}, i = 1..r.
inline Vector power_law_spectrum(std::size_t r, double c0, double a) {
  Vector s(static_cast<Eigen::Index>(r));
  for (std::size_t i = 0; i < r; ++i) s(static_cast<Eigen::Index>(i)) = c0 * std::pow(static_cast<double>(i + 1), -a);
  return s;
}

/// X = Z1 C Z2ᵀ with standard Gaussian Z1 (m x r), Z2 (d x r) and
/// C = diag(spectrum^{1/2}), so spectrum holds the eigenvalues of C².
/// Θ*'s rank is the number of nonzero spectrum entries.
inline GroundTruth gen_correlated(std::size_t m, std::size_t d, const Vector& spectrum, Rng& rng) {
  const auto r = static_cast<std::size_t>(spectrum.size());
  if (r < 1 || r > std::min(m, d)) throw std::invalid_argument("gen_correlated: need 1 <= r <= min(m, d)");
  if ((spectrum.array() < 0.0).any()) throw std::invalid_argument("gen_correlated: spectrum must be nonnegative");
  const auto ri = static_cast<Eigen::Index>(r);
  DenseMatrix z1 = rng.gaussian_matrix(static_cast<Eigen::Index>(m), ri);
  DenseMatrix z2 = rng.gaussian_matrix(static_cast<Eigen::Index>(d), ri);
  DenseMatrix u = z1 * spectrum.cwiseSqrt().asDiagonal();
  const auto nonzero = static_cast<Eigen::Index>((spectrum.array() > 0.0).count());
  return ground_truth_from_factors(std::move(u), std::move(z2), std::max<Eigen::Index>(nonzero, 1));
}

enum class SpecialKind { all_ones, single_zero };

/// all_ones: X = 1 1ᵀ (rank 1). single_zero: all ones except X[0,0] = 0,
/// written as the rank-2 factorization [1, -e0][1, e0]ᵀ.
inline GroundTruth gen_special(SpecialKind kind, std::size_t m, std::size_t d) {
  if (m < 2 || d < 2) throw std::invalid_argument("gen_special: need m, d >= 2");
  const auto mi = static_cast<Eigen::Index>(m), di = static_cast<Eigen::Index>(d);
  if (kind == SpecialKind::all_ones)
    return ground_truth_from_factors(DenseMatrix::Ones(mi, 1), DenseMatrix::Ones(di, 1), 1);
  DenseMatrix u = DenseMatrix::Ones(mi, 2), v = DenseMatrix::Ones(di, 2);
  u.col(1).setZero();
  v.col(1).setZero();
  u(0, 1) = -1.0;
  v(0, 1) = 1.0;
  return ground_truth_from_factors(std::move(u), std::move(v), 2);
}

// ---------------------------------------------------------------------------
// Dense matrix text format: "rows cols" then one row per line, values with
// 17 significant digits.
// ---------------------------------------------------------------------------

inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_matrix(std::ostream& os, const DenseMatrix& a) {
  os << a.rows() << ' ' << a.cols() << '\n';
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) os << (j ? " " : "") << format_double(a(i, j));
    os << '\n';
  }
}

/// Reads one matrix block. `lineno` carries line numbers across blocks.
inline DenseMatrix read_matrix(std::istream& is, std::size_t& lineno) {
  std::string line;
  if (!detail::next_line(is, line, lineno)) throw ParseError(lineno + 1, "missing header 'rows cols'");
  const auto head = detail::split_ws(line);
  if (head.size() != 2) throw ParseError(lineno, "malformed header, expected 'rows cols'");
  const auto rows = detail::parse_token<std::size_t>(head[0], lineno);
  const auto cols = detail::parse_token<std::size_t>(head[1], lineno);
  DenseMatrix a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!detail::next_line(is, line, lineno)) throw ParseError(lineno + 1, "expected " + std::to_string(rows) + " rows");
    const auto toks = detail::split_ws(line);
    if (toks.size() != cols) throw ParseError(lineno, "expected " + std::to_string(cols) + " values");
    for (std::size_t j = 0; j < cols; ++j) {
      const double x = detail::parse_token<double>(toks[j], lineno);
      if (!std::isfinite(x)) throw ParseError(lineno, "non-finite value '" + toks[j] + "'");
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x;
    }
  }
  return a;
}

inline DenseMatrix read_matrix(std::istream& is) {
  std::size_t lineno = 0;
  DenseMatrix a = read_matrix(is, lineno);
  std::string line;
  if (detail::next_line(is, line, lineno)) throw ParseError(lineno, "trailing content after matrix");
  return a;
}

namespace detail {
inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return in;
}
inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}
template <typename F>
auto with_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw ParseError(path, e.line(), e.detail());
  }
}
}  // namespace detail

inline void save_matrix(const std::string& path, const DenseMatrix& a) {
  auto out = detail::open_out(path);
  write_matrix(out, a);
}

inline DenseMatrix load_matrix(const std::string& path) {
  auto in = detail::open_in(path);
  return detail::with_path(path, [&] { return read_matrix(in); });
}

// ---------------------------------------------------------------------------
// Observation triplet format: header "m d k", then "row col value" lines,
// exactly k per row, any order.
// ---------------------------------------------------------------------------

inline void write_observations(std::ostream& os, const ObservedEntries& x) {
  os << x.obs.m() << ' ' << x.obs.d() << ' ' << x.obs.k() << '\n';
  for (std::size_t i = 0; i < x.obs.m(); ++i) {
    const auto cols = x.obs.row(i);
    const auto vals = x.row(i);
    for (std::size_t t = 0; t < cols.size(); ++t) os << i << ' ' << cols[t] << ' ' << format_double(vals[t]) << '\n';
  }
}

inline ObservedEntries read_observations(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  if (!detail::next_line(is, line, lineno)) throw ParseError(lineno + 1, "missing header 'm d k'");
  const auto head = detail::split_ws(line);
  if (head.size() != 3) throw ParseError(lineno, "malformed header, expected 'm d k'");
  const auto m = detail::parse_token<std::size_t>(head[0], lineno);
  const auto d = detail::parse_token<std::size_t>(head[1], lineno);
  const auto k = detail::parse_token<std::size_t>(head[2], lineno);
  if (k < 1 || k > d) throw ParseError(lineno, "need 1 <= k <= d");

  std::vector<std::map<ColIndex, double>> rows(m);
  while (detail::next_line(is, line, lineno)) {
    const auto toks = detail::split_ws(line);
    if (toks.size() != 3) throw ParseError(lineno, "expected 'row col value'");
    const auto i = detail::parse_token<std::size_t>(toks[0], lineno);
    const auto j = detail::parse_token<std::size_t>(toks[1], lineno);
    const double x = detail::parse_token<double>(toks[2], lineno);
    if (i >= m) throw ParseError(lineno, "row index " + toks[0] + " out of range");
    if (j >= d) throw ParseError(lineno, "column index " + toks[1] + " out of range");
    if (!std::isfinite(x)) throw ParseError(lineno, "non-finite value '" + toks[2] + "'");
    if (!rows[i].emplace(static_cast<ColIndex>(j), x).second)
      throw ParseError(lineno, "duplicate entry (" + toks[0] + ", " + toks[1] + ")");
    if (rows[i].size() > k) throw ParseError(lineno, "row " + toks[0] + " has more than k entries");
  }
  std::vector<ColIndex> cols;
  std::vector<double> values;
  cols.reserve(m * k);
  values.reserve(m * k);
  for (std::size_t i = 0; i < m; ++i) {
    if (rows[i].size() != k)
      throw ParseError(lineno, "row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                                   " entries, expected " + std::to_string(k));
    for (const auto& [j, x] : rows[i]) {
      cols.push_back(j);
      values.push_back(x);
    }
  }
  return ObservedEntries{ObservationSet(m, d, k, std::move(cols)), std::move(values)};
}

inline void save_observations(const std::string& path, const ObservedEntries& x) {
  auto out = detail::open_out(path);
  write_observations(out, x);
}

inline ObservedEntries load_observations(const std::string& path) {
  auto in = detail::open_in(path);
  return detail::with_path(path, [&] { return read_observations(in); });
}

}  // namespace osmc
