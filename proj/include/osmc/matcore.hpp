#pragma once

// Dense linear algebra substrate: matrix aliases, a seedable generator,
// truncated SVD, norms and the orthogonal Procrustes solver.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace osmc {

using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Raised when an iterative routine does not reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when NaN/Inf appears, either in a solver (usually a learning rate
/// that is too high) or in a matrix handed to a decomposition.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool all_finite(const DenseMatrix& a) { return a.allFinite(); }

inline void require_finite(const DenseMatrix& a, const char* who) {
  if (!a.allFinite()) throw NumericalError(std::string(who) + ": matrix has non-finite entries");
}

// ---------------------------------------------------------------------------
// Random numbers
// ---------------------------------------------------------------------------

/// SplitMix64 finalizer. Used to expand seeds and to derive child seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Hash a base seed together with a list of indices into a child seed.
/// Distinct index tuples give (with overwhelming probability) distinct seeds.
template <typename... Ix>
constexpr std::uint64_t derive_seed(std::uint64_t base, Ix... ix) {
  std::uint64_t h = splitmix64(base);
  ((h = splitmix64(h ^ (static_cast<std::uint64_t>(ix) + 0x632be59bd9b4e019ULL))), ...);
  return h;
}

/// xoshiro256** generator. Identical seeds give identical streams on every
/// platform: the integer, uniform and normal draws below avoid the
/// implementation-defined std distributions.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) { reseed(seed); }

  void reseed(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& s : state_) {
      s = splitmix64(x);
      x += 0x9e3779b97f4a7c15ULL;
    }
    has_spare_ = false;
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Unbiased uniform integer in [0, n) (Lemire's multiply-and-reject).
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::uniform_index: empty range");
    __uint128_t prod = static_cast<__uint128_t>((*this)()) * n;
    auto low = static_cast<std::uint64_t>(prod);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        prod = static_cast<__uint128_t>((*this)()) * n;
        low = static_cast<std::uint64_t>(prod);
      }
    }
    return static_cast<std::uint64_t>(prod >> 64);
  }

  /// Standard normal draw (Marsaglia polar method).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  DenseMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, double stddev = 1.0) {
    DenseMatrix out(rows, cols);
    for (Eigen::Index i = 0; i < out.size(); ++i) out.data()[i] = stddev * normal();
    return out;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4]{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// ---------------------------------------------------------------------------
// Orthonormalization helpers
// ---------------------------------------------------------------------------

/// Thin orthonormal basis for the column space of a (Householder QR).
inline DenseMatrix orthonormalize(const DenseMatrix& a) {
  Eigen::HouseholderQR<DenseMatrix> qr(a);
  DenseMatrix q = qr.householderQ() * DenseMatrix::Identity(a.rows(), a.cols());
  return q;
}

/// max |aᵀa − I|, used to validate orthonormal frames.
inline double orthonormality_defect(const DenseMatrix& a) {
  const DenseMatrix g = a.transpose() * a;
  return (g - DenseMatrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Truncated SVD
// ---------------------------------------------------------------------------

struct SvdResult {
  DenseMatrix u;  // n x r, orthonormal columns
  Vector s;       // length r, nonincreasing, nonnegative
  DenseMatrix v;  // d x r, orthonormal columns
};

struct SvdOptions {
  /// Inputs whose smaller dimension is at most this use a dense Jacobi SVD;
  /// larger ones use randomized subspace iteration.
  Eigen::Index jacobi_max_dim = 64;
  Eigen::Index oversampling = 8;
  int min_power_iterations = 4;
  int max_iterations = 1000;
  double tolerance = 1e-10;
  std::uint64_t seed = 0x5eed5eedULL;
};

namespace detail {

/// Flip signs so that the first non-negligible entry of every column of v is
/// nonnegative; the matching column of u is flipped with it.
inline void canonicalize_signs(SvdResult& res) {
  for (Eigen::Index c = 0; c < res.v.cols(); ++c) {
    const double scale = res.v.col(c).cwiseAbs().maxCoeff();
    if (scale == 0.0) continue;
    for (Eigen::Index i = 0; i < res.v.rows(); ++i) {
      const double x = res.v(i, c);
      if (std::abs(x) > 1e-8 * scale) {
        if (x < 0.0) {
          res.v.col(c) *= -1.0;
          res.u.col(c) *= -1.0;
        }
        break;
      }
    }
  }
}

inline SvdResult jacobi_svd(const DenseMatrix& a, Eigen::Index r) {
  Eigen::JacobiSVD<DenseMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdResult res{svd.matrixU().leftCols(r), svd.singularValues().head(r), svd.matrixV().leftCols(r)};
  return res;
}

/// Randomized subspace iteration. Iterates until the top-r left Ritz
/// subspace moves less than `tolerance` (projection residual, Frobenius)
/// after at least `min_power_iterations` power steps.
inline SvdResult randomized_svd(const DenseMatrix& a, Eigen::Index r, const SvdOptions& opt) {
  const Eigen::Index l = std::min<Eigen::Index>(r + opt.oversampling, std::min(a.rows(), a.cols()));
  Rng rng(opt.seed);
  DenseMatrix q = orthonormalize(a * rng.gaussian_matrix(a.cols(), l));
  DenseMatrix prev_u;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    const DenseMatrix z = orthonormalize(a.transpose() * q);
    q = orthonormalize(a * z);

    const DenseMatrix b = q.transpose() * a;  // l x cols
    Eigen::JacobiSVD<DenseMatrix> small(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
    DenseMatrix u = q * small.matrixU().leftCols(r);
    if (it >= opt.min_power_iterations && prev_u.size() > 0) {
      const double change = (prev_u - u * (u.transpose() * prev_u)).norm();
      if (change < opt.tolerance) {
        return SvdResult{std::move(u), small.singularValues().head(r), small.matrixV().leftCols(r)};
      }
    }
    prev_u = std::move(u);
  }
  throw ConvergenceError("svd_truncated: subspace iteration did not converge in " +
                         std::to_string(opt.max_iterations) + " iterations");
}

}  // namespace detail

/// Top-r singular triplets of a.
inline SvdResult svd_truncated(const DenseMatrix& a, Eigen::Index r, const SvdOptions& opt = {}) {
  if (r < 0 || r > std::min(a.rows(), a.cols()))
    throw std::invalid_argument("svd_truncated: rank " + std::to_string(r) + " exceeds matrix dimensions");
  require_finite(a, "svd_truncated");
  SvdResult res;
  if (r == 0) {
    res = SvdResult{DenseMatrix(a.rows(), 0), Vector(0), DenseMatrix(a.cols(), 0)};
  } else if (std::min(a.rows(), a.cols()) <= opt.jacobi_max_dim || a.norm() == 0.0) {
    res = detail::jacobi_svd(a, r);
  } else {
    res = detail::randomized_svd(a, r, opt);
  }
  detail::canonicalize_signs(res);
  return res;
}

/// Eigenpairs of a symmetric matrix ordered by decreasing eigenvalue.
struct SymmetricEigen {
  Vector values;
  DenseMatrix vectors;
};

inline SymmetricEigen symmetric_eigen(const DenseMatrix& a) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (a + a.transpose()));
  if (es.info() != Eigen::Success) throw ConvergenceError("symmetric_eigen: solver failed");
  const Eigen::Index n = a.rows();
  SymmetricEigen out{Vector(n), DenseMatrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = es.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

struct Norms {
  double frobenius = 0.0;
  double max_abs = 0.0;
  double nuclear = 0.0;
  double op = 0.0;
};

inline Vector singular_values(const DenseMatrix& a) {
  if (a.size() == 0) return Vector(0);
  Eigen::BDCSVD<DenseMatrix> svd(a);
  return svd.singularValues();
}

inline Norms norms(const DenseMatrix& a) {
  require_finite(a, "norms");
  Norms n;
  if (a.size() == 0) return n;
  const Vector s = singular_values(a);
  n.frobenius = a.norm();
  n.max_abs = a.cwiseAbs().maxCoeff();
  n.nuclear = s.sum();
  n.op = s.size() > 0 ? s(0) : 0.0;
  return n;
}

// ---------------------------------------------------------------------------
// Orthogonal Procrustes
// ---------------------------------------------------------------------------

struct ProcrustesResult {
  DenseMatrix rotation;  // r x r orthogonal
  double residual = 0.0;  // ||a R - b||_F^2
};

/// argmin over orthogonal R of ||a R - b||_F^2, from the SVD of aᵀb.
/// Directions where aᵀb vanishes leave R undetermined; there R is the
/// orthogonal map closest to the identity, so aᵀb = 0 gives R = I.
inline ProcrustesResult procrustes_align(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("procrustes_align: shape mismatch");
  const Eigen::Index r = a.cols();
  const DenseMatrix m = a.transpose() * b;
  Eigen::JacobiSVD<DenseMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  const double cutoff = std::max(s.size() > 0 ? s(0) : 0.0, 1.0) * 1e-13 * static_cast<double>(std::max<Eigen::Index>(r, 1));
  Eigen::Index rank = 0;
  while (rank < r && s(rank) > cutoff) ++rank;

  const DenseMatrix& p = svd.matrixU();
  const DenseMatrix& w = svd.matrixV();
  DenseMatrix rot = p.leftCols(rank) * w.leftCols(rank).transpose();
  if (rank < r) {
    const DenseMatrix p_null = p.rightCols(r - rank);
    const DenseMatrix w_null = w.rightCols(r - rank);
    Eigen::JacobiSVD<DenseMatrix> polar(p_null.transpose() * w_null, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const DenseMatrix c = polar.matrixU() * polar.matrixV().transpose();
    rot += p_null * c * w_null.transpose();
  }
  ProcrustesResult out{std::move(rot), 0.0};
  out.residual = (a * out.rotation - b).squaredNorm();
  return out;
}

}  // namespace osmc
