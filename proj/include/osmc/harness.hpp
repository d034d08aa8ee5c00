#pragma once

// Experiment driver: paired sweeps over (m, k) with repeated masks, the
// rank-dependence binary search, CSV output and flat key=value configs.

#include "osmc/datagen.hpp"
#include "osmc/estimators.hpp"
#include "osmc/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace osmc {

enum class Dataset { gaussian, correlated, special, file };
enum class Algorithm { ours, ours_convex, full_mc, direct, no_diag };

inline const char* to_string(Dataset d) {
  switch (d) {
    case Dataset::gaussian: return "gaussian";
    case Dataset::correlated: return "correlated";
    case Dataset::special: return "special";
    case Dataset::file: return "file";
  }
  return "?";
}

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::ours: return "ours";
    case Algorithm::ours_convex: return "ours_convex";
    case Algorithm::full_mc: return "full_mc";
    case Algorithm::direct: return "direct";
    case Algorithm::no_diag: return "no_diag";
  }
  return "?";
}

inline Dataset parse_dataset(const std::string& s) {
  for (Dataset d : {Dataset::gaussian, Dataset::correlated, Dataset::special, Dataset::file})
    if (s == to_string(d)) return d;
  throw std::invalid_argument("unknown dataset '" + s + "'");
}

inline Algorithm parse_algorithm(const std::string& s) {
  for (Algorithm a : {Algorithm::ours, Algorithm::ours_convex, Algorithm::full_mc, Algorithm::direct, Algorithm::no_diag})
    if (s == to_string(a)) return a;
  throw std::invalid_argument("unknown algorithm '" + s + "'");
}

/// Runs fn(0..n-1) on up to `threads` workers. Callers write results into
/// preassigned slots, so the outcome does not depend on scheduling.
inline void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct SweepSpec {
  Dataset dataset = Dataset::gaussian;
  std::size_t d = 100;
  std::size_t r = 25;
  std::vector<std::size_t> k_list{2};
  std::vector<std::size_t> m_list{10000};
  std::vector<Algorithm> algorithms{Algorithm::ours, Algorithm::direct, Algorithm::no_diag};
  std::size_t repeats = 10;
  std::uint64_t base_seed = 0;
  SolverConfig solver;  // rank is taken from r

  double power_law_a = 0.0;  // correlated: s_i = i^-a (0 gives a flat spectrum)
  SpecialKind special = SpecialKind::all_ones;
  std::string file;  // dense matrix file for Dataset::file; m_list truncates rows

  bool record_timing = false;  // off keeps the CSV byte-reproducible
  std::size_t threads = 1;

  void validate() const {
    if (repeats < 1) throw std::invalid_argument("sweep: repeats must be >= 1");
    if (algorithms.empty()) throw std::invalid_argument("sweep: algorithm set is empty");
    if (k_list.empty()) throw std::invalid_argument("sweep: k list is empty");
    if (m_list.empty() && dataset != Dataset::file) throw std::invalid_argument("sweep: m list is empty");
    if (r < 1) throw std::invalid_argument("sweep: r must be >= 1");
    if (dataset == Dataset::file && file.empty()) throw std::invalid_argument("sweep: dataset=file needs a file path");
  }
};

struct ExperimentRecord {
  std::string dataset;
  std::size_t d = 0, r = 0, k = 0, m = 0;
  Algorithm algorithm = Algorithm::ours;
  std::size_t repeat = 0;
  std::uint64_t seed = 0;
  std::optional<EvalReport> report;  // empty for failed runs
  std::optional<double> seconds;
  std::string status = "ok";
};

/// Evaluates an estimate (factors plus Θ̂) against ground truth.
inline EvalReport evaluate(const DenseMatrix& theta_hat, const FactorEstimate& f, const GroundTruth& gt,
                           const Incoherence& mu) {
  EvalReport rep;
  const double r = static_cast<double>(gt.q_true.cols());
  rep.theta_err = eval_theta(theta_hat, gt.theta_star);
  rep.rowspace_err = eval_rowspace(f.q, gt.q_true);
  rep.rowspace_err_normalized = rep.rowspace_err / r;
  rep.colfactor_err = eval_colfactors(f.q, f.lambda.cwiseMax(0.0), gt.q_true, gt.lambda_true.cwiseMax(0.0));
  rep.mu1 = mu.mu1;
  rep.mu2 = mu.mu2;
  rep.mu3 = mu.mu3;
  return rep;
}

/// One estimator run on a prepared mask. Returns (Θ̂, factors).
inline std::pair<DenseMatrix, FactorEstimate> run_algorithm(Algorithm alg, const ObservedEntries& x,
                                                            const EmpiricalTarget& target, SolverConfig cfg,
                                                            std::size_t r, Rng& rng) {
  cfg.rank = r;
  switch (alg) {
    case Algorithm::ours: {
      ThetaEstimate est = solve_factored(target, cfg, rng);
      return {std::move(est.theta_hat), std::move(est.factors)};
    }
    case Algorithm::ours_convex: {
      ThetaEstimate est = solve_convex(target, cfg);
      return {std::move(est.theta_hat), std::move(est.factors)};
    }
    case Algorithm::full_mc: {
      FactorEstimate f = baseline_full_completion(x, cfg, rng);
      DenseMatrix th = theta_from_factors(f);
      return {std::move(th), std::move(f)};
    }
    case Algorithm::direct: {
      FactorEstimate f = baseline_direct(x, r);
      DenseMatrix th = theta_from_factors(f);
      return {std::move(th), std::move(f)};
    }
    case Algorithm::no_diag: {
      FactorEstimate f = baseline_no_diagonal(x, r);
      DenseMatrix th = theta_from_factors(f);
      return {std::move(th), std::move(f)};
    }
  }
  throw std::logic_error("run_algorithm: unhandled algorithm");
}

namespace detail {

inline std::string sanitize_status(std::string msg) {
  for (char& c : msg)
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  return "error: " + msg;
}

inline GroundTruth make_ground_truth(const SweepSpec& spec, std::size_t m, std::uint64_t seed,
                                     const std::optional<DenseMatrix>& file_matrix) {
  Rng rng(seed);
  const auto r = static_cast<Eigen::Index>(spec.r);
  switch (spec.dataset) {
    case Dataset::gaussian: return gen_gaussian(m, spec.d, spec.r, rng);
    case Dataset::correlated: {
      const Vector s = power_law_spectrum(spec.r, 1.0, spec.power_law_a);
      GroundTruth gt = gen_correlated(m, spec.d, s, rng);
      if (gt.rank() != r) set_spectrum(gt, r);
      return gt;
    }
    case Dataset::special: {
      GroundTruth gt = gen_special(spec.special, m, spec.d);
      if (gt.rank() != r) set_spectrum(gt, r);
      return gt;
    }
    case Dataset::file: return ground_truth_from_matrix(file_matrix->topRows(static_cast<Eigen::Index>(m)), r);
  }
  throw std::logic_error("make_ground_truth: unhandled dataset");
}

}  // namespace detail

/// For each (m, k) point: one ground truth shared by every repeat and
/// algorithm; each repeat draws a fresh mask shared by all algorithms.
/// Failures are recorded per run and never abort the sweep.
inline std::vector<ExperimentRecord> run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::optional<DenseMatrix> file_matrix;
  std::vector<std::size_t> m_list = spec.m_list;
  std::size_t d = spec.d;
  if (spec.dataset == Dataset::file) {
    file_matrix = load_matrix(spec.file);
    d = static_cast<std::size_t>(file_matrix->cols());
    const auto rows = static_cast<std::size_t>(file_matrix->rows());
    if (m_list.empty()) m_list = {rows};
    for (auto& m : m_list) m = std::min(m, rows);
  }

  struct Point {
    std::size_t m, k;
  };
  std::vector<Point> points;
  for (std::size_t m : m_list)
    for (std::size_t k : spec.k_list) points.push_back({m, k});

  std::vector<ExperimentRecord> records;
  for (std::size_t p = 0; p < points.size(); ++p) {
    const auto [m, k] = points[p];
    const std::size_t n_alg = spec.algorithms.size();
    std::vector<ExperimentRecord> slot(spec.repeats * n_alg);
    for (std::size_t rep = 0; rep < spec.repeats; ++rep)
      for (std::size_t a = 0; a < n_alg; ++a) {
        auto& rec = slot[rep * n_alg + a];
        rec.dataset = to_string(spec.dataset);
        rec.d = d;
        rec.r = spec.r;
        rec.k = k;
        rec.m = m;
        rec.algorithm = spec.algorithms[a];
        rec.repeat = rep;
        rec.seed = derive_seed(spec.base_seed, p, rep, a + 1);
      }

    std::optional<GroundTruth> gt;
    Incoherence mu;
    try {
      SweepSpec local = spec;
      local.d = d;
      gt = detail::make_ground_truth(local, m, derive_seed(spec.base_seed, p), file_matrix);
      mu = incoherence(gt->theta_star, spec.r, gt->max_sq_entry());
    } catch (const std::exception& e) {
      for (auto& rec : slot) rec.status = detail::sanitize_status(e.what());
      gt.reset();
    }

    if (gt) {
      parallel_for(spec.repeats, spec.threads, [&](std::size_t rep) {
        std::optional<ObservedEntries> x;
        std::optional<EmpiricalTarget> target;
        try {
          Rng mask_rng(derive_seed(spec.base_seed, p, rep));
          x = observe(*gt, sample_mask(m, d, k, mask_rng));
          target = empirical_target(*x);
        } catch (const std::exception& e) {
          for (std::size_t a = 0; a < n_alg; ++a) slot[rep * n_alg + a].status = detail::sanitize_status(e.what());
          return;
        }
        for (std::size_t a = 0; a < n_alg; ++a) {
          auto& rec = slot[rep * n_alg + a];
          const auto t0 = std::chrono::steady_clock::now();
          try {
            Rng rng(rec.seed);
            auto [theta, factors] = run_algorithm(rec.algorithm, *x, *target, spec.solver, spec.r, rng);
            rec.report = evaluate(theta, factors, *gt, mu);
          } catch (const std::exception& e) {
            rec.report.reset();
            rec.status = detail::sanitize_status(e.what());
          }
          if (spec.record_timing)
            rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
      });
    }
    records.insert(records.end(), slot.begin(), slot.end());
  }
  return records;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline constexpr const char* kCsvHeader =
    "dataset,d,r,k,m,algorithm,repeat,seed,theta_err,rowspace_err,rowspace_err_norm,colfactor_err,mu1,mu2,mu3,"
    "seconds,status";

inline std::string format_metric(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline void write_csv_row(std::ostream& os, const ExperimentRecord& rec) {
  os << rec.dataset << ',' << rec.d << ',' << rec.r << ',' << rec.k << ',' << rec.m << ',' << to_string(rec.algorithm)
     << ',' << rec.repeat << ',' << rec.seed << ',';
  if (rec.report) {
    const auto& e = *rec.report;
    for (double v : {e.theta_err, e.rowspace_err, e.rowspace_err_normalized, e.colfactor_err, e.mu1, e.mu2, e.mu3})
      os << format_metric(v) << ',';
  } else {
    os << ",,,,,,,";
  }
  if (rec.seconds) os << format_metric(*rec.seconds);
  os << ',' << rec.status << '\n';
}

inline void write_csv(std::ostream& os, const std::vector<ExperimentRecord>& records, bool header = true) {
  if (header) os << kCsvHeader << '\n';
  for (const auto& rec : records) write_csv_row(os, rec);
}

/// Appends to `path`; the header is written only when the file is new or
/// empty, and an existing header must match.
inline void append_csv(const std::string& path, const std::vector<ExperimentRecord>& records) {
  bool need_header = true;
  {
    std::ifstream in(path);
    std::string first;
    if (in && std::getline(in, first)) {
      if (first != kCsvHeader) throw std::runtime_error("'" + path + "' has a different CSV header");
      need_header = false;
    }
  }
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_csv(out, records, need_header);
}

// ---------------------------------------------------------------------------
// Rank dependence
// ---------------------------------------------------------------------------

struct RankDepSpec {
  std::vector<std::size_t> r_list{2, 3, 4, 6};
  std::size_t d = 200;
  std::size_t k = 2;
  double target = 0.1;
  double tolerance = 0.02;
  std::size_t runs_per_probe = 20;
  std::size_t m_max = 4'000'000;  // search range is (0, m_max]
  std::size_t max_probes = 22;
  double stop_ratio = 1.05;  // stop bisecting once hi/lo falls below this
  std::uint64_t base_seed = 0;
  SolverConfig solver;
  std::size_t threads = 1;

  void validate() const {
    if (r_list.empty()) throw std::invalid_argument("rankdep: r list is empty");
    if (!std::is_sorted(r_list.begin(), r_list.end())) throw std::invalid_argument("rankdep: r list must be nondecreasing");
    if (!(target > tolerance && tolerance > 0.0)) throw std::invalid_argument("rankdep: need target > tolerance > 0");
    if (runs_per_probe < 1 || max_probes < 1 || m_max < 1) throw std::invalid_argument("rankdep: counts must be >= 1");
  }
};

struct RankPoint {
  std::size_t r = 0;
  double m_star = 0.0;
  bool accepted = false;   // a probe landed inside target ± tolerance
  bool exhausted = false;  // never got below the band inside the m range
  std::size_t probes = 0;
  double last_error = 0.0;
};

struct RankDepResult {
  std::vector<RankPoint> points;
  std::optional<double> slope;  // least-squares slope of log m* against log r
};

/// Mean normalized rowspace error at (r, m).
using RankProbe = std::function<double(std::size_t r, std::size_t m)>;

/// Least-squares slope of log y against log x; absent with fewer than two distinct x.
inline std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

/// Bisection on m for each r, assuming the error decreases in m. A probe
/// inside target ± tolerance is accepted; above the band the search moves
/// up, below it moves down. Without acceptance the search ends when
/// hi/lo < stop_ratio (m* = midpoint) or when no probe ever fell below the
/// band (m* = m_max, flagged exhausted).
inline RankDepResult rank_dependence(const RankDepSpec& spec, const RankProbe& probe) {
  spec.validate();
  RankDepResult out;
  for (std::size_t r : spec.r_list) {
    RankPoint pt;
    pt.r = r;
    double lo = 0.0, hi = static_cast<double>(spec.m_max);
    bool went_below = false;
    while (pt.probes < spec.max_probes) {
      if (lo > 0.0 && hi / lo < spec.stop_ratio) break;
      const auto mid = static_cast<std::size_t>(std::llround(0.5 * (lo + hi)));
      const std::size_t m = std::max(mid, std::max<std::size_t>(r, 1));
      if (static_cast<double>(m) <= lo || static_cast<double>(m) > hi) break;
      const double err = probe(r, m);
      ++pt.probes;
      pt.last_error = err;
      if (std::abs(err - spec.target) <= spec.tolerance) {
        pt.accepted = true;
        pt.m_star = static_cast<double>(m);
        break;
      }
      if (err > spec.target + spec.tolerance) {
        lo = static_cast<double>(m);
      } else {
        hi = static_cast<double>(m);
        went_below = true;
      }
    }
    if (!pt.accepted) {
      if (!went_below) {
        pt.exhausted = true;
        pt.m_star = static_cast<double>(spec.m_max);
      } else {
        pt.m_star = 0.5 * (lo + hi);
      }
    }
    out.points.push_back(pt);
  }
  std::vector<double> rs, ms;
  for (const auto& pt : out.points) {
    rs.push_back(static_cast<double>(pt.r));
    ms.push_back(pt.m_star);
  }
  out.slope = loglog_slope(rs, ms);
  return out;
}

/// The standard probe: fresh Gaussian factors and mask per run, our
/// factored solver, normalized rowspace error averaged over the runs.
inline RankProbe factored_probe(const RankDepSpec& spec) {
  return [spec](std::size_t r, std::size_t m) {
    std::vector<double> errs(spec.runs_per_probe, 0.0);
    parallel_for(spec.runs_per_probe, spec.threads, [&](std::size_t run) {
      Rng rng(derive_seed(spec.base_seed, r, m, run));
      const GroundTruth gt = gen_gaussian(m, spec.d, r, rng);
      const EmpiricalTarget target = empirical_target(observe(gt, sample_mask(m, spec.d, spec.k, rng)));
      SolverConfig cfg = spec.solver;
      cfg.rank = r;
      const ThetaEstimate est = solve_factored(target, cfg, rng);
      errs[run] = eval_rowspace(est.factors.q, gt.q_true) / static_cast<double>(r);
    });
    double total = 0.0;
    for (double e : errs) total += e;
    return total / static_cast<double>(errs.size());
  };
}

inline void write_rankdep_csv(std::ostream& os, const RankDepResult& res) {
  os << "r,m_star,accepted,exhausted,probes,last_error\n";
  for (const auto& pt : res.points)
    os << pt.r << ',' << format_metric(pt.m_star) << ',' << (pt.accepted ? 1 : 0) << ',' << (pt.exhausted ? 1 : 0)
       << ',' << pt.probes << ',' << format_metric(pt.last_error) << '\n';
  os << "# slope," << (res.slope ? format_metric(*res.slope) : std::string("NA")) << '\n';
}

// ---------------------------------------------------------------------------
// Config files: flat key=value lines, '#' starts a comment.
// ---------------------------------------------------------------------------

using ConfigMap = std::map<std::string, std::string>;

inline ConfigMap parse_config(std::istream& is) {
  ConfigMap out;
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError(lineno, "empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

inline ConfigMap load_config(const std::string& path) {
  auto in = detail::open_in(path);
  return detail::with_path(path, [&] { return parse_config(in); });
}

namespace detail {

template <typename T>
T config_number(const std::string& key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw std::invalid_argument("config: bad value '" + value + "' for " + key);
  return out;
}

template <typename T>
std::vector<T> config_list(const std::string& key, const std::string& value) {
  std::vector<T> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    item = item.substr(b, e - b + 1);
    if constexpr (std::is_same_v<T, std::string>) {
      out.push_back(item);
    } else {
      // Accept 1e6-style integers.
      const double x = config_number<double>(key, item);
      if (x < 0 || x != std::floor(x)) throw std::invalid_argument("config: '" + item + "' is not a count for " + key);
      out.push_back(static_cast<T>(x));
    }
  }
  return out;
}

inline std::size_t config_count(const std::string& key, const std::string& value) {
  const auto v = config_list<std::size_t>(key, value);
  if (v.size() != 1) throw std::invalid_argument("config: expected one count for " + key);
  return v[0];
}

inline bool config_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw std::invalid_argument("config: bad boolean '" + value + "' for " + key);
}

/// Applies a solver key if it is one; returns false otherwise.
inline bool apply_solver_key(SolverConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "steps") cfg.steps = config_count(key, value);
  else if (key == "learning_rate") cfg.learning_rate = config_number<double>(key, value);
  else if (key == "lr_final_fraction") cfg.lr_final_fraction = config_number<double>(key, value);
  else if (key == "beta1") cfg.beta1 = config_number<double>(key, value);
  else if (key == "beta2") cfg.beta2 = config_number<double>(key, value);
  else if (key == "epsilon_adam") cfg.epsilon_adam = config_number<double>(key, value);
  else if (key == "lambda_reg") cfg.lambda_reg = config_number<double>(key, value);
  else if (key == "alpha_cap") cfg.alpha_cap = config_number<double>(key, value);
  else if (key == "init_scale") cfg.init_scale = config_number<double>(key, value);
  else if (key == "log_every") cfg.log_every = config_count(key, value);
  else if (key == "convex_max_steps") cfg.convex_max_steps = config_count(key, value);
  else if (key == "convex_tolerance") cfg.convex_tolerance = config_number<double>(key, value);
  else if (key == "init") {
    if (value == "spectral") cfg.init_mode = InitMode::spectral;
    else if (value == "gaussian") cfg.init_mode = InitMode::gaussian;
    else throw std::invalid_argument("config: init must be spectral or gaussian");
  } else {
    return false;
  }
  return true;
}

}  // namespace detail

inline void apply_config(SweepSpec& spec, const ConfigMap& cfg) {
  for (const auto& [key, value] : cfg) {
    if (detail::apply_solver_key(spec.solver, key, value)) continue;
    if (key == "dataset") spec.dataset = parse_dataset(value);
    else if (key == "d") spec.d = detail::config_count(key, value);
    else if (key == "r") spec.r = detail::config_count(key, value);
    else if (key == "k") spec.k_list = detail::config_list<std::size_t>(key, value);
    else if (key == "m") spec.m_list = detail::config_list<std::size_t>(key, value);
    else if (key == "algorithms") {
      spec.algorithms.clear();
      for (const auto& a : detail::config_list<std::string>(key, value)) spec.algorithms.push_back(parse_algorithm(a));
    } else if (key == "repeats") spec.repeats = detail::config_count(key, value);
    else if (key == "seed") spec.base_seed = detail::config_number<std::uint64_t>(key, value);
    else if (key == "power_law_a") spec.power_law_a = detail::config_number<double>(key, value);
    else if (key == "special") {
      if (value == "all_ones") spec.special = SpecialKind::all_ones;
      else if (value == "single_zero") spec.special = SpecialKind::single_zero;
      else throw std::invalid_argument("config: special must be all_ones or single_zero");
    } else if (key == "file") spec.file = value;
    else if (key == "timing") spec.record_timing = detail::config_bool(key, value);
    else if (key == "threads") spec.threads = detail::config_count(key, value);
    else throw std::invalid_argument("config: unknown key '" + key + "' for sweep");
  }
}

inline void apply_config(RankDepSpec& spec, const ConfigMap& cfg) {
  for (const auto& [key, value] : cfg) {
    if (detail::apply_solver_key(spec.solver, key, value)) continue;
    if (key == "r") spec.r_list = detail::config_list<std::size_t>(key, value);
    else if (key == "d") spec.d = detail::config_count(key, value);
    else if (key == "k") spec.k = detail::config_count(key, value);
    else if (key == "target") spec.target = detail::config_number<double>(key, value);
    else if (key == "tolerance") spec.tolerance = detail::config_number<double>(key, value);
    else if (key == "runs_per_probe") spec.runs_per_probe = detail::config_count(key, value);
    else if (key == "m_max") spec.m_max = detail::config_count(key, value);
    else if (key == "max_probes") spec.max_probes = detail::config_count(key, value);
    else if (key == "stop_ratio") spec.stop_ratio = detail::config_number<double>(key, value);
    else if (key == "seed") spec.base_seed = detail::config_number<std::uint64_t>(key, value);
    else if (key == "threads") spec.threads = detail::config_count(key, value);
    else throw std::invalid_argument("config: unknown key '" + key + "' for rankdep");
  }
}

}  // namespace osmc
