#pragma once

// Estimators of the column Gram matrix Θ* = (1/m) XᵀX from k observed
// entries per row: the renormalized empirical target, the weighted
// completion loss and its gradient, the factored (VVᵀ) and convex
// (nuclear-norm) solvers, and the three baselines.

#include "osmc/masking.hpp"
#include "osmc/matcore.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace osmc {

/// Θ^(emp) together with the co-occurrence weights it was averaged over.
/// Entries with zero weight are stored as 0 and never enter a loss.
struct EmpiricalTarget {
  DenseMatrix theta_emp;
  CooccurrenceWeights weights;
  std::size_t m = 0;
  double max_sq_entry = 0.0;  // largest observed X_ij^2

  Eigen::Index d() const { return theta_emp.rows(); }
};

enum class InitMode { spectral, gaussian };

struct SolverConfig {
  std::size_t rank = 1;
  std::size_t steps = 10000;
  double learning_rate = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon_adam = 1e-8;
  // Regularization weight. Unset means the solver's own default: the
  // theoretical rate for solve_convex, 0.1 for baseline_full_completion.
  std::optional<double> lambda_reg;
  // Max-entry bound α for solve_convex. Unset means the largest observed X_ij^2.
  std::optional<double> alpha_cap;
  InitMode init_mode = InitMode::spectral;
  // Std-dev of gaussian init entries; <= 0 selects 0.1/sqrt(d).
  double init_scale = 0.0;
  // Learning rate decays along a cosine from learning_rate to
  // learning_rate * lr_final_fraction; 1 keeps it constant.
  double lr_final_fraction = 1e-3;
  std::size_t log_every = 100;
  // Proximal-gradient controls for solve_convex.
  std::size_t convex_max_steps = 20000;
  double convex_tolerance = 1e-9;

  void validate() const {
    if (rank < 1) throw std::invalid_argument("SolverConfig: rank must be >= 1");
    if (steps < 1) throw std::invalid_argument("SolverConfig: steps must be >= 1");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("SolverConfig: learning_rate must be > 0");
    if (!(lr_final_fraction > 0.0 && lr_final_fraction <= 1.0))
      throw std::invalid_argument("SolverConfig: lr_final_fraction must be in (0, 1]");
    if (log_every < 1) throw std::invalid_argument("SolverConfig: log_every must be >= 1");
  }

  double lr_at(std::size_t step) const {
    if (lr_final_fraction == 1.0 || steps <= 1) return learning_rate;
    const double progress = static_cast<double>(step) / static_cast<double>(steps - 1);
    const double cosine = 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
    return learning_rate * (lr_final_fraction + (1.0 - lr_final_fraction) * cosine);
  }
};

/// Recovered singular vectors / values of an estimate of Θ*.
struct FactorEstimate {
  DenseMatrix q;   // d x r, orthonormal columns
  Vector lambda;   // length r, nonincreasing
  bool degenerate = false;  // trailing singular values vanished; q is not determined
};

struct ThetaEstimate {
  DenseMatrix theta_hat;
  FactorEstimate factors;
  std::vector<double> loss_trace;
  bool warning = false;     // loss trace rose inside the trailing window
  bool converged = true;    // solve_convex only
  std::size_t iterations = 0;
  double lambda_used = 0.0;
  double alpha_used = 0.0;
};

// ---------------------------------------------------------------------------
// Empirical target and losses
// ---------------------------------------------------------------------------

/// Θ^(emp) = [P_E(X)ᵀP_E(X)] ⊘ [EᵀE]; division only where the count is positive.
inline EmpiricalTarget empirical_target(const ObservedEntries& x) {
  const auto d = static_cast<Eigen::Index>(x.obs.d());
  DenseMatrix sums = DenseMatrix::Zero(d, d);
  DenseMatrix counts = DenseMatrix::Zero(d, d);
  double max_sq = 0.0;
  for (std::size_t i = 0; i < x.obs.m(); ++i) {
    const auto cols = x.obs.row(i);
    const auto vals = x.row(i);
    for (std::size_t s = 0; s < cols.size(); ++s) {
      max_sq = std::max(max_sq, vals[s] * vals[s]);
      for (std::size_t t = 0; t < cols.size(); ++t) {
        sums(cols[s], cols[t]) += vals[s] * vals[t];
        counts(cols[s], cols[t]) += 1.0;
      }
    }
  }
  DenseMatrix theta = DenseMatrix::Zero(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b)
      if (counts(a, b) > 0.0) theta(a, b) = sums(a, b) / counts(a, b);
  return EmpiricalTarget{std::move(theta), CooccurrenceWeights{std::move(counts)}, x.obs.m(), max_sq};
}

/// x_obs may be the full matrix or P_E(X); only observed entries are read.
template <EntrySource S>
EmpiricalTarget empirical_target(const S& x_obs, const ObservationSet& obs) {
  return empirical_target(observe(x_obs, obs));
}

/// The per-row loss for k = 2:
/// (1/4m) Σ_i (Θ_ab - x_a x_b)² + (Θ_ba - x_b x_a)² + (Θ_aa - x_a²)² + (Θ_bb - x_b²)².
inline double loss_rowform(const DenseMatrix& theta, const ObservedEntries& x) {
  if (x.obs.k() != 2) throw std::invalid_argument("loss_rowform: requires k = 2, use loss_weighted for k > 2");
  if (theta.rows() != static_cast<Eigen::Index>(x.obs.d()) || theta.cols() != theta.rows())
    throw std::invalid_argument("loss_rowform: theta must be d x d");
  double total = 0.0;
  for (std::size_t i = 0; i < x.obs.m(); ++i) {
    const auto a = x.obs.row(i)[0], b = x.obs.row(i)[1];
    const double xa = x.row(i)[0], xb = x.row(i)[1];
    const double t1 = theta(a, b) - xa * xb;
    const double t2 = theta(b, a) - xb * xa;
    const double t3 = theta(a, a) - xa * xa;
    const double t4 = theta(b, b) - xb * xb;
    total += t1 * t1 + t2 * t2 + t3 * t3 + t4 * t4;
  }
  return total / (4.0 * static_cast<double>(x.obs.m()));
}

template <EntrySource S>
double loss_rowform(const DenseMatrix& theta, const S& x_obs, const ObservationSet& obs) {
  return loss_rowform(theta, observe(x_obs, obs));
}

namespace detail {
inline void check_target_shape(const DenseMatrix& theta, const EmpiricalTarget& target, const char* who) {
  if (theta.rows() != target.d() || theta.cols() != target.d())
    throw std::invalid_argument(std::string(who) + ": theta is " + std::to_string(theta.rows()) + "x" +
                                std::to_string(theta.cols()) + ", target is " + std::to_string(target.d()) + "x" +
                                std::to_string(target.d()));
}
}  // namespace detail

/// (1/4m) Σ_{j1,j2} w_{j1j2} (Θ_{j1j2} - Θ^(emp)_{j1j2})². Equals the row-form
/// loss up to a Θ-independent constant, and extends it to k > 2.
inline double loss_weighted(const DenseMatrix& theta, const EmpiricalTarget& target) {
  detail::check_target_shape(theta, target, "loss_weighted");
  if (target.m == 0) return 0.0;
  const double s = (target.weights.w.array() * (theta - target.theta_emp).array().square()).sum();
  return s / (4.0 * static_cast<double>(target.m));
}

/// ∂ loss_weighted / ∂Θ = (1/2m) w ⊙ (Θ - Θ^(emp)), entries treated independently.
inline DenseMatrix loss_gradient(const DenseMatrix& theta, const EmpiricalTarget& target) {
  detail::check_target_shape(theta, target, "loss_gradient");
  if (target.m == 0) return DenseMatrix::Zero(theta.rows(), theta.cols());
  return (target.weights.w.array() * (theta - target.theta_emp).array() / (2.0 * static_cast<double>(target.m)))
      .matrix();
}

// ---------------------------------------------------------------------------
// Adam
// ---------------------------------------------------------------------------

/// Adam moments for one matrix-shaped parameter.
class AdamState {
 public:
  AdamState(Eigen::Index rows, Eigen::Index cols)
      : m1_(DenseMatrix::Zero(rows, cols)), m2_(DenseMatrix::Zero(rows, cols)) {}

  void step(DenseMatrix& param, const DenseMatrix& grad, std::size_t t, double lr, const SolverConfig& cfg) {
    m1_ = cfg.beta1 * m1_ + (1.0 - cfg.beta1) * grad;
    m2_ = cfg.beta2 * m2_ + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
    const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
    param.array() -= lr * (m1_.array() / c1) / ((m2_.array() / c2).sqrt() + cfg.epsilon_adam);
  }

 private:
  DenseMatrix m1_, m2_;
};

// ---------------------------------------------------------------------------
// Factor helpers
// ---------------------------------------------------------------------------

namespace detail {

inline FactorEstimate factors_from_svd(const SvdResult& svd, double scale = 1.0) {
  FactorEstimate f{svd.v, svd.s * scale, false};
  const Eigen::Index r = svd.s.size();
  if (r > 0) {
    const double top = svd.s(0);
    f.degenerate = top == 0.0 || svd.s(r - 1) <= 1e-12 * top;
  }
  return f;
}

/// V0 = Q Λ^{1/2} from the top-r eigenpairs of a symmetric matrix, with
/// eigenvalues floored at 1e-3 of the largest so no column starts at zero.
inline DenseMatrix spectral_init(const DenseMatrix& theta, Eigen::Index r) {
  const SymmetricEigen eig = symmetric_eigen(theta);
  const double floor = 1e-3 * std::max(eig.values(0), 0.0);
  DenseMatrix v(theta.rows(), r);
  for (Eigen::Index c = 0; c < r; ++c) v.col(c) = eig.vectors.col(c) * std::sqrt(std::max(eig.values(c), floor));
  return v;
}

inline bool trailing_window_increases(const std::vector<double>& trace, std::size_t window = 10) {
  if (trace.size() < 2) return false;
  const std::size_t start = trace.size() > window ? trace.size() - window : 0;
  for (std::size_t i = start + 1; i < trace.size(); ++i)
    if (trace[i] > trace[i - 1] + 1e-12 * std::abs(trace[i - 1])) return true;
  return false;
}

[[noreturn]] inline void fail_non_finite(const char* who, std::size_t step, double lr) {
  std::ostringstream msg;
  msg << who << ": loss became non-finite at step " << step << " (learning rate " << lr
      << " is likely too high)";
  throw NumericalError(msg.str());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Our estimator, non-convex form: min_V loss_weighted(VVᵀ)
// ---------------------------------------------------------------------------

inline ThetaEstimate solve_factored(const EmpiricalTarget& target, const SolverConfig& cfg, Rng& rng) {
  cfg.validate();
  const Eigen::Index d = target.d();
  const auto r = static_cast<Eigen::Index>(cfg.rank);
  if (r > d) throw std::invalid_argument("solve_factored: rank exceeds d");

  DenseMatrix v;
  if (cfg.init_mode == InitMode::spectral) {
    v = detail::spectral_init(target.theta_emp, r);
  } else {
    const double scale = cfg.init_scale > 0.0 ? cfg.init_scale : 0.1 / std::sqrt(static_cast<double>(d));
    v = rng.gaussian_matrix(d, r, scale);
  }

  // loss = Σ c ⊙ (VVᵀ - E)², c = w / 4m; ∂loss/∂V = 4 (c ⊙ (VVᵀ - E)) V.
  const DenseMatrix c = target.weights.w / (4.0 * static_cast<double>(std::max<std::size_t>(target.m, 1)));
  const DenseMatrix& e = target.theta_emp;
  AdamState adam(d, r);
  ThetaEstimate out;
  DenseMatrix theta(d, d), resid(d, d), grad(d, r);
  for (std::size_t t = 0; t <= cfg.steps; ++t) {
    theta.noalias() = v * v.transpose();
    resid = (c.array() * (theta - e).array()).matrix();
    const double loss = (resid.array() * (theta - e).array()).sum();
    if (!std::isfinite(loss) || !v.allFinite()) detail::fail_non_finite("solve_factored", t, cfg.learning_rate);
    if (t % cfg.log_every == 0 || t == cfg.steps) out.loss_trace.push_back(loss);
    if (t == cfg.steps) break;
    grad.noalias() = 4.0 * resid * v;
    adam.step(v, grad, t + 1, cfg.lr_at(t), cfg);
  }
  out.iterations = cfg.steps;
  out.theta_hat = v * v.transpose();
  out.theta_hat = 0.5 * (out.theta_hat + out.theta_hat.transpose()).eval();
  out.factors = detail::factors_from_svd(svd_truncated(out.theta_hat, r));
  out.warning = detail::trailing_window_increases(out.loss_trace);
  return out;
}

// ---------------------------------------------------------------------------
// Our estimator, convex form: min_{|Θ|_max <= α} loss_weighted(Θ) + λ |Θ|_nuc
// ---------------------------------------------------------------------------

/// Default λ = 16 α sqrt((log d + δ) / (d m)) with δ = log d.
inline double theoretical_lambda(double alpha, std::size_t d, std::size_t m) {
  const double logd = std::log(static_cast<double>(d));
  return 16.0 * alpha * std::sqrt((logd + logd) / (static_cast<double>(d) * static_cast<double>(m)));
}

namespace detail {

/// Singular-value soft threshold of a symmetric matrix: singular values are
/// |eigenvalues|, so each eigenvalue shrinks toward zero by tau.
inline DenseMatrix symmetric_svt(const DenseMatrix& z, double tau) {
  const SymmetricEigen eig = symmetric_eigen(z);
  Vector shrunk(eig.values.size());
  for (Eigen::Index i = 0; i < shrunk.size(); ++i) {
    const double l = eig.values(i);
    shrunk(i) = l > 0 ? std::max(l - tau, 0.0) : std::min(l + tau, 0.0);
  }
  DenseMatrix out = eig.vectors * shrunk.asDiagonal() * eig.vectors.transpose();
  return 0.5 * (out + out.transpose());
}

inline double nuclear_symmetric(const DenseMatrix& a) { return symmetric_eigen(a).values.cwiseAbs().sum(); }

}  // namespace detail

inline ThetaEstimate solve_convex(const EmpiricalTarget& target, const SolverConfig& cfg) {
  cfg.validate();
  const Eigen::Index d = target.d();
  if (d > 400) throw std::invalid_argument("solve_convex: reference solver supports d <= 400");
  const auto r = static_cast<Eigen::Index>(cfg.rank);
  if (r > d) throw std::invalid_argument("solve_convex: rank exceeds d");
  const std::size_t m = std::max<std::size_t>(target.m, 1);

  const double alpha = cfg.alpha_cap.value_or(target.max_sq_entry);
  const double lambda = cfg.lambda_reg.value_or(theoretical_lambda(alpha, static_cast<std::size_t>(d), m));
  if (!(alpha >= 0.0) || !(lambda >= 0.0)) throw std::invalid_argument("solve_convex: alpha and lambda must be >= 0");

  auto clip = [alpha](DenseMatrix x) {
    x = x.cwiseMax(-alpha).cwiseMin(alpha);
    return x;
  };
  auto objective = [&](const DenseMatrix& th) { return loss_weighted(th, target) + lambda * detail::nuclear_symmetric(th); };

  // Start from the better of 0 and clip(Θ^(emp)); iterates never increase the objective.
  DenseMatrix theta = DenseMatrix::Zero(d, d);
  double f = objective(theta);
  {
    DenseMatrix alt = clip(target.theta_emp);
    const double f_alt = objective(alt);
    if (f_alt < f) {
      theta = std::move(alt);
      f = f_alt;
    }
  }

  const double max_w = target.weights.w.maxCoeff();
  const double lip = max_w / (2.0 * static_cast<double>(m));
  ThetaEstimate out;
  out.lambda_used = lambda;
  out.alpha_used = alpha;
  out.converged = false;
  out.loss_trace.push_back(f);
  if (lip == 0.0) {
    // No observations: the loss is flat and the minimizer is 0.
    theta.setZero();
    out.converged = true;
  } else {
    double step = 1.0 / lip;
    std::size_t it = 0;
    for (; it < cfg.convex_max_steps; ++it) {
      const DenseMatrix grad = loss_gradient(theta, target);
      DenseMatrix next;
      double f_next = f;
      bool decreased = false;
      for (int halvings = 0; halvings < 60; ++halvings) {
        next = clip(detail::symmetric_svt(theta - step * grad, step * lambda));
        f_next = objective(next);
        if (!std::isfinite(f_next)) detail::fail_non_finite("solve_convex", it, step);
        if (f_next <= f) {
          decreased = true;
          break;
        }
        step *= 0.5;
      }
      if (!decreased) {
        out.converged = true;
        break;
      }
      const double change = (f - f_next) / std::max(std::abs(f), std::numeric_limits<double>::min());
      theta = std::move(next);
      f = f_next;
      if ((it + 1) % cfg.log_every == 0) out.loss_trace.push_back(f);
      if (change < cfg.convex_tolerance) {
        out.converged = true;
        ++it;
        break;
      }
    }
    out.iterations = it;
  }
  out.loss_trace.push_back(f);
  out.theta_hat = std::move(theta);
  out.factors = detail::factors_from_svd(svd_truncated(out.theta_hat, r));
  return out;
}

// ---------------------------------------------------------------------------
// Baselines
// ---------------------------------------------------------------------------

/// P_E(X)ᵀ P_E(X), accumulated from the observed entries.
inline DenseMatrix masked_gram(const ObservedEntries& x) {
  const auto d = static_cast<Eigen::Index>(x.obs.d());
  DenseMatrix g = DenseMatrix::Zero(d, d);
  for (std::size_t i = 0; i < x.obs.m(); ++i) {
    const auto cols = x.obs.row(i);
    const auto vals = x.row(i);
    for (std::size_t s = 0; s < cols.size(); ++s)
      for (std::size_t t = 0; t < cols.size(); ++t) g(cols[s], cols[t]) += vals[s] * vals[t];
  }
  return g;
}

/// Direct factorization: top-r SVD of P_E(X)ᵀP_E(X). lambda is reported as
/// singular values / m.
inline FactorEstimate baseline_direct(const ObservedEntries& x, std::size_t r) {
  if (r < 1 || r > x.obs.d()) throw std::invalid_argument("baseline_direct: need 1 <= r <= d");
  const double m = static_cast<double>(std::max<std::size_t>(x.obs.m(), 1));
  return detail::factors_from_svd(svd_truncated(masked_gram(x), static_cast<Eigen::Index>(r)), 1.0 / m);
}

/// Factorization without the diagonal: top-r SVD of P_off-diag(P_E(X)ᵀP_E(X)).
inline FactorEstimate baseline_no_diagonal(const ObservedEntries& x, std::size_t r) {
  if (r < 1 || r > x.obs.d()) throw std::invalid_argument("baseline_no_diagonal: need 1 <= r <= d");
  DenseMatrix g = masked_gram(x);
  g.diagonal().setZero();
  const double m = static_cast<double>(std::max<std::size_t>(x.obs.m(), 1));
  return detail::factors_from_svd(svd_truncated(g, static_cast<Eigen::Index>(r)), 1.0 / m);
}

template <EntrySource S>
FactorEstimate baseline_direct(const S& x_obs, const ObservationSet& obs, std::size_t r) {
  return baseline_direct(observe(x_obs, obs), r);
}

template <EntrySource S>
FactorEstimate baseline_no_diagonal(const S& x_obs, const ObservationSet& obs, std::size_t r) {
  return baseline_no_diagonal(observe(x_obs, obs), r);
}

/// Right singular vectors of U Vᵀ without forming it: V = Q_v R_v, then
/// U R_vᵀ = Q_b R_b, and the SVD of the r x r factor R_b gives
/// U Vᵀ = Q_b P S Wᵀ Q_vᵀ, so the right vectors are Q_v W.
inline FactorEstimate right_factors(const DenseMatrix& u, const DenseMatrix& v) {
  const Eigen::Index r = v.cols();
  Eigen::HouseholderQR<DenseMatrix> qr_v(v);
  const DenseMatrix q_v = qr_v.householderQ() * DenseMatrix::Identity(v.rows(), r);
  const DenseMatrix r_v = qr_v.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  const DenseMatrix b = u * r_v.transpose();
  Eigen::HouseholderQR<DenseMatrix> qr_b(b);
  const DenseMatrix r_b = qr_b.matrixQR().topRows(std::min(r, b.rows())).triangularView<Eigen::Upper>();
  const SvdResult small = svd_truncated(r_b, std::min(r, r_b.rows()));
  SvdResult full{DenseMatrix::Zero(0, small.s.size()), small.s, q_v * small.v};
  detail::canonicalize_signs(full);
  FactorEstimate f = detail::factors_from_svd(full);
  f.lambda = f.lambda.array().square().matrix() / static_cast<double>(std::max<Eigen::Index>(u.rows(), 1));
  return f;
}

/// Vanilla matrix completion by Adam on
/// (1/|E|) |P_E(UVᵀ) - P_E(X)|_F² + λ ((1/m) Σ|u_i|² + (1/d) Σ|v_j|²),
/// then the right factors of UVᵀ. lambda is reported on the Θ scale
/// (squared singular values / m).
inline FactorEstimate baseline_full_completion(const ObservedEntries& x, const SolverConfig& cfg, Rng& rng) {
  cfg.validate();
  const std::size_t m = x.obs.m(), d = x.obs.d(), k = x.obs.k();
  const auto r = static_cast<Eigen::Index>(cfg.rank);
  if (cfg.rank > std::min(m, d)) throw std::invalid_argument("baseline_full_completion: rank exceeds min(m, d)");
  const double lambda = cfg.lambda_reg.value_or(0.1);
  const double n_obs = static_cast<double>(m * k);
  const auto mi = static_cast<Eigen::Index>(m), di = static_cast<Eigen::Index>(d);

  DenseMatrix u, v;
  if (cfg.init_mode == InitMode::spectral) {
    v = detail::spectral_init(empirical_target(x).theta_emp, r);
    // Per-row ridge least squares on the k observed entries.
    u.resize(mi, r);
    const double ridge = std::max(lambda * n_obs / static_cast<double>(m), 1e-6);
    DenseMatrix vo(static_cast<Eigen::Index>(k), r);
    Vector xo(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t t = 0; t < k; ++t) {
        vo.row(static_cast<Eigen::Index>(t)) = v.row(x.obs.row(i)[t]);
        xo(static_cast<Eigen::Index>(t)) = x.row(i)[t];
      }
      const DenseMatrix gram = vo.transpose() * vo + ridge * DenseMatrix::Identity(r, r);
      u.row(static_cast<Eigen::Index>(i)) = gram.ldlt().solve(vo.transpose() * xo).transpose();
    }
  } else {
    const double scale = cfg.init_scale > 0.0 ? cfg.init_scale : 0.1 / std::sqrt(static_cast<double>(d));
    u = rng.gaussian_matrix(mi, r, scale);
    v = rng.gaussian_matrix(di, r, scale);
  }

  AdamState adam_u(mi, r), adam_v(di, r);
  DenseMatrix gu(mi, r), gv(di, r);
  for (std::size_t t = 0; t < cfg.steps; ++t) {
    gu = (2.0 * lambda / static_cast<double>(m)) * u;
    gv = (2.0 * lambda / static_cast<double>(d)) * v;
    double loss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      const auto cols = x.obs.row(i);
      const auto vals = x.row(i);
      for (std::size_t s = 0; s < k; ++s) {
        const double res = u.row(ii).dot(v.row(cols[s])) - vals[s];
        loss += res * res;
        const double g = 2.0 * res / n_obs;
        gu.row(ii) += g * v.row(cols[s]);
        gv.row(cols[s]) += g * u.row(ii);
      }
    }
    if (!std::isfinite(loss)) detail::fail_non_finite("baseline_full_completion", t, cfg.learning_rate);
    const double lr = cfg.lr_at(t);
    adam_u.step(u, gu, t + 1, lr, cfg);
    adam_v.step(v, gv, t + 1, lr, cfg);
  }
  if (!u.allFinite() || !v.allFinite()) detail::fail_non_finite("baseline_full_completion", cfg.steps, cfg.learning_rate);
  return right_factors(u, v);
}

template <EntrySource S>
FactorEstimate baseline_full_completion(const S& x_obs, const ObservationSet& obs, const SolverConfig& cfg, Rng& rng) {
  return baseline_full_completion(observe(x_obs, obs), cfg, rng);
}

/// Θ̂ = Q Λ Qᵀ rebuilt from factors (for estimators that only return factors).
inline DenseMatrix theta_from_factors(const FactorEstimate& f) {
  return f.q * f.lambda.asDiagonal() * f.q.transpose();
}

}  // namespace osmc
