#pragma once

// Error functionals for estimates of Θ* and its factors, the incoherence
// constants of Θ*, and the theoretical error rate.

#include "osmc/matcore.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace osmc {

struct EvalReport {
  double theta_err = 0.0;                // (1/d²) |Θ̂ - Θ*|_F²
  double rowspace_err = 0.0;             // min_R |Q̂R - Q|_F²
  double rowspace_err_normalized = 0.0;  // rowspace_err / r
  double colfactor_err = 0.0;            // (1/d) min_R |Q̂Λ̂^½R - QΛ^½|_F²
  double mu1 = 0.0, mu2 = 0.0, mu3 = 0.0;
};

inline double eval_theta(const DenseMatrix& theta_hat, const DenseMatrix& theta_star) {
  if (theta_hat.rows() != theta_star.rows() || theta_hat.cols() != theta_star.cols() ||
      theta_hat.rows() != theta_hat.cols())
    throw std::invalid_argument("eval_theta: shapes must be equal and square");
  const auto d = static_cast<double>(theta_star.rows());
  return (theta_hat - theta_star).squaredNorm() / (d * d);
}

/// Procrustes distance between two orthonormal d x r frames.
inline double eval_rowspace(const DenseMatrix& q_hat, const DenseMatrix& q_true) {
  if (q_hat.rows() != q_true.rows() || q_hat.cols() != q_true.cols())
    throw std::invalid_argument("eval_rowspace: shape mismatch");
  if (orthonormality_defect(q_hat) > 1e-6 || orthonormality_defect(q_true) > 1e-6)
    throw std::invalid_argument("eval_rowspace: frames must have orthonormal columns");
  return procrustes_align(q_hat, q_true).residual;
}

inline double eval_colfactors(const DenseMatrix& q_hat, const Vector& lambda_hat, const DenseMatrix& q_true,
                              const Vector& lambda_true) {
  if (q_hat.rows() != q_true.rows() || q_hat.cols() != q_true.cols() || lambda_hat.size() != q_hat.cols() ||
      lambda_true.size() != q_true.cols())
    throw std::invalid_argument("eval_colfactors: shape mismatch");
  if ((lambda_hat.array() < 0.0).any() || (lambda_true.array() < 0.0).any())
    throw std::invalid_argument("eval_colfactors: eigenvalues must be nonnegative");
  const DenseMatrix a = q_hat * lambda_hat.cwiseSqrt().asDiagonal();
  const DenseMatrix b = q_true * lambda_true.cwiseSqrt().asDiagonal();
  return procrustes_align(a, b).residual / static_cast<double>(q_true.rows());
}

struct Incoherence {
  double mu1 = 0.0, mu2 = 0.0, mu3 = 0.0;
  double alpha = 0.0;
  bool alpha_exact = false;  // alpha came from max X_ij² rather than |Θ*|_max
};

/// μ1 = dα/|Θ*|_F, μ2 = dα/(σ_r √r), μ3 = dα√r/|Θ*|_nuc.
/// Without `alpha` (= max X_ij²) the proxy α = |Θ*|_max is used. σ_r = 0
/// (up to the numerical-rank cutoff) reports μ2 = +inf. Θ* is symmetric
/// PSD, so its nuclear norm is its trace.
inline Incoherence incoherence(const DenseMatrix& theta_star, std::size_t r, std::optional<double> alpha = {}) {
  if (theta_star.rows() != theta_star.cols()) throw std::invalid_argument("incoherence: theta_star must be square");
  if (r < 1 || r > static_cast<std::size_t>(theta_star.rows())) throw std::invalid_argument("incoherence: bad rank");
  const double asym = (theta_star - theta_star.transpose()).cwiseAbs().maxCoeff();
  const double scale = std::max(theta_star.cwiseAbs().maxCoeff(), 1.0);
  if (asym > 1e-9 * scale) throw std::invalid_argument("incoherence: theta_star is not symmetric");
  const SymmetricEigen eig = symmetric_eigen(theta_star);
  if (eig.values(eig.values.size() - 1) < -1e-8 * scale)
    throw std::invalid_argument("incoherence: theta_star is not positive semidefinite");

  Incoherence out;
  out.alpha_exact = alpha.has_value();
  out.alpha = alpha.value_or(theta_star.cwiseAbs().maxCoeff());
  const double d = static_cast<double>(theta_star.rows());
  const double sr = std::sqrt(static_cast<double>(r));
  const auto ri = static_cast<Eigen::Index>(r);
  // Eigenvalues below the numerical-rank cutoff count as zero. When the
  // spectrum past r is all below it, σ_r is recovered from the exact trace.
  const double cutoff = static_cast<double>(theta_star.rows()) * std::numeric_limits<double>::epsilon() *
                        std::max(eig.values(0), 0.0);
  double sigma_r = eig.values(ri - 1) > cutoff ? eig.values(ri - 1) : 0.0;
  if (sigma_r > 0.0 && (ri == eig.values.size() || eig.values(ri) <= cutoff)) {
    const double rest = theta_star.trace() - eig.values.head(ri - 1).sum();
    if (std::abs(rest - sigma_r) <= cutoff * static_cast<double>(theta_star.rows())) sigma_r = rest;
  }
  out.mu1 = d * out.alpha / theta_star.norm();
  out.mu2 = sigma_r > 0.0 ? d * out.alpha / (sigma_r * sr) : std::numeric_limits<double>::infinity();
  out.mu3 = d * out.alpha * sr / theta_star.trace();
  return out;
}

/// α² r d (log d + δ) / m, the error rate without its universal constant.
inline double theory_rate(double alpha, std::size_t r, std::size_t d, std::size_t m, double delta) {
  if (!(alpha > 0.0) || r == 0 || d == 0 || m == 0 || delta < 0.0)
    throw std::invalid_argument("theory_rate: arguments must be positive");
  return alpha * alpha * static_cast<double>(r) * static_cast<double>(d) *
         (std::log(static_cast<double>(d)) + delta) / static_cast<double>(m);
}

}  // namespace osmc
