// osmc: command-line front end for synthesis, single estimates, evaluation,
// sweeps and the rank-dependence search.
//
// Exit codes: 0 success, 1 usage error (bad flags, unreadable or invalid
// config), 2 runtime failure.

#include "osmc/harness.hpp"
#include "osmc/io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

osmc::ConfigMap read_config(const std::string& path) {
  if (path.empty()) return {};
  if (!std::filesystem::is_regular_file(path)) throw UsageError("config file '" + path + "' not found");
  try {
    return osmc::load_config(path);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

// Pulls a key out of the map so the remaining keys can be checked for leftovers.
std::optional<std::string> take(osmc::ConfigMap& cfg, const std::string& key) {
  auto it = cfg.find(key);
  if (it == cfg.end()) return std::nullopt;
  std::string v = it->second;
  cfg.erase(it);
  return v;
}

void apply_solver(osmc::SolverConfig& solver, osmc::ConfigMap& cfg) {
  for (auto it = cfg.begin(); it != cfg.end();) {
    if (osmc::detail::apply_solver_key(solver, it->first, it->second)) it = cfg.erase(it);
    else ++it;
  }
}

void reject_leftovers(const osmc::ConfigMap& cfg, const char* cmd) {
  if (!cfg.empty()) throw UsageError(std::string("unknown config key '") + cfg.begin()->first + "' for " + cmd);
}

std::ostream& open_or_stdout(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  return file;
}

struct SynthArgs {
  std::string config, out, obs, factors;
  std::uint64_t seed = 0;
  std::string dataset = "gaussian", special = "all_ones";
  std::size_t m = 1000, d = 50, r = 5, k = 2;
  double power_law_a = 0.0;
};

int run_synth(SynthArgs a, bool seed_given) {
  auto cfg = read_config(a.config);
  try {
    if (auto v = take(cfg, "dataset")) a.dataset = *v;
    if (auto v = take(cfg, "special")) a.special = *v;
    if (auto v = take(cfg, "m")) a.m = osmc::detail::config_count("m", *v);
    if (auto v = take(cfg, "d")) a.d = osmc::detail::config_count("d", *v);
    if (auto v = take(cfg, "r")) a.r = osmc::detail::config_count("r", *v);
    if (auto v = take(cfg, "k")) a.k = osmc::detail::config_count("k", *v);
    if (auto v = take(cfg, "power_law_a")) a.power_law_a = osmc::detail::config_number<double>("power_law_a", *v);
    if (auto v = take(cfg, "seed"); v && !seed_given) a.seed = osmc::detail::config_number<std::uint64_t>("seed", *v);
    reject_leftovers(cfg, "synth");
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  osmc::SweepSpec spec;
  spec.dataset = osmc::parse_dataset(a.dataset);
  if (spec.dataset == osmc::Dataset::file) throw UsageError("synth: dataset=file is not synthetic");
  spec.d = a.d;
  spec.r = a.r;
  spec.power_law_a = a.power_law_a;
  if (a.special == "single_zero") spec.special = osmc::SpecialKind::single_zero;
  else if (a.special != "all_ones") throw UsageError("synth: special must be all_ones or single_zero");

  const osmc::GroundTruth gt = osmc::detail::make_ground_truth(spec, a.m, osmc::derive_seed(a.seed, 0), {});
  if (!a.out.empty()) osmc::save_matrix(a.out, gt.x());
  if (!a.factors.empty()) osmc::save_factors(a.factors, osmc::FactorEstimate{gt.q_true, gt.lambda_true, false});
  if (!a.obs.empty()) {
    osmc::Rng rng(osmc::derive_seed(a.seed, 1));
    osmc::save_observations(a.obs, osmc::observe(gt, osmc::sample_mask(a.m, a.d, a.k, rng)));
  }
  return 0;
}

struct EstimateArgs {
  std::string config, in, matrix, out, theta, algorithm = "ours";
  std::uint64_t seed = 0;
  std::size_t r = 1, k = 2;
};

int run_estimate(EstimateArgs a, bool seed_given) {
  if (a.in.empty() == a.matrix.empty()) throw UsageError("estimate: give exactly one of --in or --matrix");
  auto cfg = read_config(a.config);
  osmc::SolverConfig solver;
  osmc::Algorithm alg;
  try {
    apply_solver(solver, cfg);
    if (auto v = take(cfg, "r")) a.r = osmc::detail::config_count("r", *v);
    if (auto v = take(cfg, "k")) a.k = osmc::detail::config_count("k", *v);
    if (auto v = take(cfg, "algorithm")) a.algorithm = *v;
    if (auto v = take(cfg, "seed"); v && !seed_given) a.seed = osmc::detail::config_number<std::uint64_t>("seed", *v);
    reject_leftovers(cfg, "estimate");
    alg = osmc::parse_algorithm(a.algorithm);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  osmc::ObservedEntries x;
  if (!a.in.empty()) {
    x = osmc::load_observations(a.in);
  } else {
    const osmc::DenseMatrix dense = osmc::load_matrix(a.matrix);
    osmc::Rng mask_rng(osmc::derive_seed(a.seed, 1));
    const auto m = static_cast<std::size_t>(dense.rows()), d = static_cast<std::size_t>(dense.cols());
    x = osmc::observe([&](std::size_t i, std::size_t j) { return dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)); },
                      osmc::sample_mask(m, d, a.k, mask_rng));
  }
  const osmc::EmpiricalTarget target = osmc::empirical_target(x);
  osmc::Rng rng(osmc::derive_seed(a.seed, 2));
  auto [theta, factors] = osmc::run_algorithm(alg, x, target, solver, a.r, rng);
  if (!a.out.empty()) osmc::save_factors(a.out, factors);
  else osmc::write_factors(std::cout, factors);
  if (!a.theta.empty()) osmc::save_matrix(a.theta, theta);
  return 0;
}

struct EvalArgs {
  std::string est, truth, truth_matrix, out, config;
  std::size_t r = 0;
};

int run_eval(const EvalArgs& a) {
  if (a.truth.empty() == a.truth_matrix.empty()) throw UsageError("eval: give exactly one of --truth or --truth-matrix");
  if (!a.config.empty()) reject_leftovers(read_config(a.config), "eval");
  const osmc::FactorEstimate est = osmc::load_factors(a.est);
  osmc::FactorEstimate truth;
  if (!a.truth.empty()) {
    truth = osmc::load_factors(a.truth);
  } else {
    const osmc::GroundTruth gt =
        osmc::ground_truth_from_matrix(osmc::load_matrix(a.truth_matrix), a.r ? static_cast<Eigen::Index>(a.r) : est.q.cols());
    truth = osmc::FactorEstimate{gt.q_true, gt.lambda_true, false};
  }
  const double r = static_cast<double>(truth.q.cols());
  const double rowspace = osmc::eval_rowspace(est.q, truth.q);
  const double colfactor = osmc::eval_colfactors(est.q, est.lambda.cwiseMax(0.0), truth.q, truth.lambda.cwiseMax(0.0));
  std::ofstream file;
  std::ostream& os = open_or_stdout(a.out, file);
  os << "rowspace_err=" << osmc::format_metric(rowspace) << '\n'
     << "rowspace_err_norm=" << osmc::format_metric(rowspace / r) << '\n'
     << "colfactor_err=" << osmc::format_metric(colfactor) << '\n';
  return 0;
}

struct TableArgs {
  std::string config, out;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
};

template <typename Spec>
Spec spec_from(const TableArgs& a, bool seed_given) {
  Spec spec;
  try {
    osmc::apply_config(spec, read_config(a.config));
    spec.validate();
  } catch (const UsageError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (seed_given) spec.base_seed = a.seed;
  if (a.threads) spec.threads = a.threads;
  return spec;
}

int run_sweep_cmd(const TableArgs& a, bool seed_given) {
  const auto spec = spec_from<osmc::SweepSpec>(a, seed_given);
  const auto records = osmc::run_sweep(spec);
  if (a.out.empty()) osmc::write_csv(std::cout, records);
  else osmc::append_csv(a.out, records);
  std::size_t failed = 0;
  for (const auto& rec : records) failed += rec.status != "ok";
  if (failed) std::cerr << "osmc sweep: " << failed << " of " << records.size() << " runs failed\n";
  return 0;
}

int run_rankdep_cmd(const TableArgs& a, bool seed_given) {
  const auto spec = spec_from<osmc::RankDepSpec>(a, seed_given);
  const auto res = osmc::rank_dependence(spec, osmc::factored_probe(spec));
  std::ofstream file;
  osmc::write_rankdep_csv(open_or_stdout(a.out, file), res);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-sided matrix completion tools"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Generate a synthetic X (and optionally a mask and true factors)");
  c_synth->add_option("--seed", synth.seed, "Random seed");
  c_synth->add_option("--out", synth.out, "Dense matrix output file");
  c_synth->add_option("--config", synth.config, "key=value config file");
  c_synth->add_option("--dataset", synth.dataset, "gaussian, correlated or special");
  c_synth->add_option("--special", synth.special, "all_ones or single_zero");
  c_synth->add_option("-m,--rows", synth.m, "Rows");
  c_synth->add_option("-d,--cols", synth.d, "Columns");
  c_synth->add_option("-r,--rank", synth.r, "Rank");
  c_synth->add_option("-k,--per-row", synth.k, "Observations per row for --obs");
  c_synth->add_option("--power-law", synth.power_law_a, "Spectrum exponent for correlated data");
  c_synth->add_option("--obs", synth.obs, "Also write a masked triplet file");
  c_synth->add_option("--factors", synth.factors, "Also write the true top-r factors");

  EstimateArgs est;
  auto* c_est = app.add_subcommand("estimate", "Run one estimator on an observation or dense matrix file");
  c_est->add_option("--seed", est.seed, "Random seed");
  c_est->add_option("--out", est.out, "Factor output file (default stdout)");
  c_est->add_option("--config", est.config, "key=value config file");
  c_est->add_option("--in", est.in, "Triplet observation file");
  c_est->add_option("--matrix", est.matrix, "Dense matrix file, masked with k entries per row");
  c_est->add_option("-k,--per-row", est.k, "Observations per row for --matrix");
  c_est->add_option("-r,--rank", est.r, "Rank");
  c_est->add_option("--algorithm", est.algorithm, "ours, ours_convex, full_mc, direct or no_diag");
  c_est->add_option("--theta", est.theta, "Also write the estimated Theta");

  EvalArgs ev;
  auto* c_eval = app.add_subcommand("eval", "Compare saved factors with the truth");
  c_eval->add_option("--est", ev.est, "Estimated factor file")->required();
  c_eval->add_option("--truth", ev.truth, "True factor file");
  c_eval->add_option("--truth-matrix", ev.truth_matrix, "Dense X; truth is the top-r eigenpairs of X^T X / m");
  c_eval->add_option("-r,--rank", ev.r, "Rank for --truth-matrix (default: rank of the estimate)");
  c_eval->add_option("--out", ev.out, "Output file (default stdout)");
  c_eval->add_option("--config", ev.config, "key=value config file");

  TableArgs sweep, rankdep;
  auto* c_sweep = app.add_subcommand("sweep", "Run a parameter sweep and write CSV records");
  auto* c_rank = app.add_subcommand("rankdep", "Binary-search the sample size needed at each rank");
  for (auto [cmd, args] : {std::pair{c_sweep, &sweep}, std::pair{c_rank, &rankdep}}) {
    cmd->add_option("--seed", args->seed, "Base seed (overrides the config)");
    cmd->add_option("--out", args->out, "CSV output file (default stdout)");
    cmd->add_option("--config", args->config, "key=value config file");
    cmd->add_option("--threads", args->threads, "Worker threads");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  auto seed_given = [](CLI::App* cmd) { return cmd->count("--seed") > 0; };
  try {
    if (*c_synth) return run_synth(synth, seed_given(c_synth));
    if (*c_est) return run_estimate(est, seed_given(c_est));
    if (*c_eval) return run_eval(ev);
    if (*c_sweep) return run_sweep_cmd(sweep, seed_given(c_sweep));
    if (*c_rank) return run_rankdep_cmd(rankdep, seed_given(c_rank));
  } catch (const UsageError& e) {
    std::cerr << "osmc: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "osmc: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
