#pragma once

// Estimates on disk, in the dense matrix text format. A factor file holds
// two blocks: q (d x r), then lambda as a 1 x r row.

#include "osmc/datagen.hpp"
#include "osmc/estimators.hpp"

#include <string>

namespace osmc {

inline void write_factors(std::ostream& os, const FactorEstimate& f) {
  write_matrix(os, f.q);
  write_matrix(os, DenseMatrix(f.lambda.transpose()));
}

inline FactorEstimate read_factors(std::istream& is) {
  std::size_t lineno = 0;
  FactorEstimate f;
  f.q = read_matrix(is, lineno);
  const DenseMatrix lambda = read_matrix(is, lineno);
  if (lambda.rows() != 1 || lambda.cols() != f.q.cols())
    throw ParseError(lineno, "lambda block must be 1 x " + std::to_string(f.q.cols()));
  f.lambda = lambda.row(0).transpose();
  return f;
}

inline void save_factors(const std::string& path, const FactorEstimate& f) {
  auto out = detail::open_out(path);
  write_factors(out, f);
}

inline FactorEstimate load_factors(const std::string& path) {
  auto in = detail::open_in(path);
  return detail::with_path(path, [&] { return read_factors(in); });
}

/// Θ̂ as a d x d matrix file; the factors go to a separate factor file.
inline void save_theta(const std::string& path, const ThetaEstimate& est) { save_matrix(path, est.theta_hat); }

}  // namespace osmc
