#include "l1net/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "l1net/config.hpp"
#include "l1net/parallel.hpp"
#include "l1net/textio.hpp"
#include "l1net/version.hpp"

namespace l1net {

namespace {

namespace fs = std::filesystem;

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool parallel = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "key = value config file");
  cmd->add_option("--set", opts.overrides,
                  "override a config key, e.g. --set plan.replicates=3")
      ->take_all();
  cmd->add_option("--out", opts.out_dir,
                  "output directory (default $L1NET_OUT_DIR or .)");
  cmd->add_option("--seed", opts.seed, "master seed override")
      ->each([&opts](const std::string&) { opts.seed_given = true; });
  cmd->add_flag("--parallel", opts.parallel, "run grid cells on all cores");
}

Config load_config(const CommonOpts& opts) {
  Config cfg = opts.config_path.empty() ? Config::parse_text("")
                                        : Config::parse_file(opts.config_path);
  for (const std::string& kv : opts.overrides) cfg.apply_override(kv);
  return cfg;
}

fs::path resolve_out_dir(const CommonOpts& opts) {
  std::string dir = opts.out_dir;
  if (dir.empty()) {
    const char* env = std::getenv("L1NET_OUT_DIR");
    dir = env && *env ? env : ".";
  }
  fs::create_directories(dir);
  return dir;
}

// Studies stream into <name>.csv.partial and rename on success, so an
// aborted run leaves a clearly marked partial artifact.
class CsvSink {
 public:
  CsvSink(const fs::path& dir, const std::string& name)
      : final_(dir / (name + ".csv")), partial_(dir / (name + ".csv.partial")) {}

  void write(const std::vector<RunRecord>& records) {
    write_records_csv_file(records, partial_.string());
  }

  std::string commit() {
    fs::rename(partial_, final_);
    return final_.string();
  }

 private:
  fs::path final_;
  fs::path partial_;
};

void apply_seed(ExperimentPlan& plan, const CommonOpts& opts) {
  if (opts.seed_given) plan.master_seed = opts.seed;
  plan.parallel = opts.parallel;
}

std::string kv(const char* key, double value) {
  return std::string(key) + "=" + fmt_g17(value);
}

int run_train(const CommonOpts& opts) {
  Config cfg = load_config(opts);
  TargetSpec target = build_target(cfg);
  NoiseSpec noise = build_noise(cfg);
  DataDistribution dist = build_distribution(cfg, target.d);
  FunctionClassSpec spec = build_class_spec(cfg, target.d);
  TrainConfig train = build_train_config(cfg, "train");
  int n = static_cast<int>(cfg.get_int("data.n", 500));
  int eval_samples = static_cast<int>(cfg.get_int("plan.eval_samples", 100000));
  std::uint64_t seed = cfg.get_seed("plan.seed", 1);
  cfg.reject_unused();
  if (opts.seed_given) seed = opts.seed;

  Dataset data = sample_dataset(target, dist, noise, n, derive_seed(seed, {0}));
  train.seed = derive_seed(seed, {1});
  TrainReport report = train_erm(data, spec, train);
  if (!report.ok) {
    std::cerr << "train failed: " << report.failure_reason << "\n";
    return 1;
  }
  RiskEstimate risk =
      population_risk_mc(report.best_params, spec.activation, target, dist,
                         noise, eval_samples, derive_seed(seed, {2}));

  fs::path out_dir = resolve_out_dir(opts);
  fs::path params_path = out_dir / "params.txt";
  save_params_file(report.best_params, params_path.string());
  std::cout << "train " << kv("train_loss", report.best_objective) << " "
            << kv("pop_risk", risk.estimate) << " "
            << kv("pop_risk_se", risk.std_error) << " "
            << kv("constraint_residual", report.constraint_residual)
            << " iters=" << report.iters_run << " params=" << params_path.string()
            << "\n";
  return 0;
}

int run_eval_risk(const CommonOpts& opts, const std::string& params_path) {
  Config cfg = load_config(opts);
  TargetSpec target = build_target(cfg);
  NoiseSpec noise = build_noise(cfg);
  DataDistribution dist = build_distribution(cfg, target.d);
  int eval_samples = static_cast<int>(cfg.get_int("plan.eval_samples", 100000));
  std::uint64_t seed = cfg.get_seed("plan.seed", 1);
  cfg.reject_unused();
  if (opts.seed_given) seed = opts.seed;
  if (params_path.empty())
    throw ConfigError("--params", 0, "eval-risk needs a params file");

  TwoLayerParams params = load_params_file(params_path);
  ActivationSpec act;
  RiskEstimate risk = population_risk_mc(params, act, target, dist, noise,
                                         eval_samples, derive_seed(seed, {2}));
  std::cout << "eval-risk " << kv("pop_risk", risk.estimate) << " "
            << kv("pop_risk_se", risk.std_error) << " m=" << eval_samples
            << "\n";
  return 0;
}

int run_bounds(const CommonOpts& opts, double delta_flag, bool delta_given) {
  Config cfg = load_config(opts);
  BoundInputs in = build_bound_inputs(cfg);
  double delta = cfg.get_double("bounds.delta", -1.0);
  cfg.reject_unused();
  if (delta_given) delta = delta_flag;
  ActivationSpec act;
  if (delta < 0.0)
    delta = in.eta > 0.0 ? activation_step_deficit(act, in.eta) : 0.0;

  std::cout << "bounds " << kv("thm3", output_l1_risk_bound(in, delta)) << " "
            << kv("thm4", minimax_risk_floor(in)) << " "
            << kv("thm5", joint_l1_risk_bound(in, delta)) << " "
            << kv("prop1", sparse_support_risk_bound(in)) << " "
            << kv("thm1", approximation_bound(in, delta)) << " "
            << "thm2_r=" << suggested_neuron_count(in) << " "
            << kv("delta", delta) << "\n";
  return 0;
}

int run_delta_eta(const CommonOpts& opts, double eta_flag, bool eta_given) {
  Config cfg = load_config(opts);
  double eta = cfg.get_double("delta.eta", 10.0);
  cfg.reject_unused();
  if (eta_given) eta = eta_flag;
  ActivationSpec act;
  std::cout << "delta-eta eta=" << fmt_g17(eta) << " "
            << kv("delta", activation_step_deficit(act, eta)) << "\n";
  return 0;
}

int run_rademacher(const CommonOpts& opts) {
  Config cfg = load_config(opts);
  int d = static_cast<int>(cfg.get_int("rad.d", 4));
  std::vector<int> n_grid = cfg.get_ints("rad.n", {256});
  int trials = static_cast<int>(cfg.get_int("rad.trials", 200));
  FunctionClassSpec spec = build_class_spec(cfg, d);
  DataDistribution dist = build_distribution(cfg, d);
  InnerMaxConfig inner;
  inner.restarts = static_cast<int>(cfg.get_int("inner.restarts", 20));
  inner.iters = static_cast<int>(cfg.get_int("inner.iters", 500));
  inner.step = cfg.get_double("inner.step", 2.0);
  inner.init_scale = cfg.get_double("inner.init_scale", 8.0);
  std::uint64_t seed = cfg.get_seed("plan.seed", 1);
  cfg.reject_unused();
  if (opts.seed_given) seed = opts.seed;
  int threads = opts.parallel ? default_thread_count() : 1;

  std::vector<double> ns, means;
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    int n = n_grid[i];
    if (n < 1) throw ConfigError("rad.n", cfg.line_of("rad.n"), "n must be >= 1");
    Rng x_rng(derive_seed(seed, {static_cast<std::uint64_t>(n), 7}));
    std::vector<double> X(static_cast<std::size_t>(n) * d);
    for (double& v : X)
      v = dist.kind == DistKind::UniformBox ? x_rng.uniform(-dist.M, dist.M)
                                            : x_rng.normal();
    RademacherEstimate est = rademacher_mc(
        spec, X, n, d, trials, inner,
        derive_seed(seed, {static_cast<std::uint64_t>(n), 8}), threads);
    std::cout << "rademacher n=" << n << " " << kv("mean", est.mean) << " "
              << kv("se", est.std_error) << " trials=" << est.trials << "\n";
    ns.push_back(n);
    means.push_back(est.mean);
  }
  if (ns.size() >= 3) {
    RateFit fit = fit_rate(ns, means);
    std::cout << "rademacher-slope " << kv("slope", fit.slope) << " "
              << kv("stderr", fit.slope_std_error) << "\n";
  }
  return 0;
}

int run_rate_study_cmd(const CommonOpts& opts) {
  Config cfg = load_config(opts);
  ExperimentPlan plan = build_plan(cfg);
  cfg.reject_unused();
  apply_seed(plan, opts);

  fs::path out_dir = resolve_out_dir(opts);
  CsvSink sink(out_dir, "rate_study");
  RateStudyResult result = run_rate_study(plan);
  sink.write(result.records);
  std::string path = sink.commit();
  bool all_ok = true;
  for (const RunRecord& rec : result.records) all_ok = all_ok && rec.ok;
  for (const SlopeSummary& s : result.slopes)
    std::cout << "rate-study d=" << s.d << " regime=" << s.regime << " "
              << kv("slope", s.fit.slope) << " "
              << kv("stderr", s.fit.slope_std_error)
              << " points=" << s.fit.points_used << " csv=" << path << "\n";
  if (!all_ok) {
    std::cerr << "rate-study: some cells failed; see NaN rows in " << path
              << "\n";
    return 1;
  }
  return 0;
}

int run_sparsity_study_cmd(const CommonOpts& opts) {
  Config cfg = load_config(opts);
  ExperimentPlan plan = build_plan(cfg);
  cfg.reject_unused();
  apply_seed(plan, opts);

  fs::path out_dir = resolve_out_dir(opts);
  CsvSink sink(out_dir, "sparsity_study");
  SparsityStudyResult result = run_sparsity_study(plan);
  sink.write(result.records);
  std::string path = sink.commit();
  bool all_ok = true;
  for (const RunRecord& rec : result.records) all_ok = all_ok && rec.ok;
  for (const SparsityRegimeSummary& s : result.regimes) {
    std::cout << "sparsity-study regime=" << s.regime << " "
              << kv("risk_ratio", s.risk_ratio);
    for (std::size_t i = 0; i < s.d_values.size(); ++i)
      std::cout << " risk_d" << s.d_values[i] << "="
                << fmt_g17(s.mean_risk[i]);
    std::cout << " csv=" << path << "\n";
  }
  std::cout << "sparsity-study "
            << kv("leakage_controlled_fraction",
                  result.leakage_controlled_fraction)
            << "\n";
  if (!all_ok) {
    std::cerr << "sparsity-study: some cells failed; see NaN rows in " << path
              << "\n";
    return 1;
  }
  return 0;
}

int run_overfit_study_cmd(const CommonOpts& opts) {
  Config cfg = load_config(opts);
  ExperimentPlan plan = build_plan(cfg);
  cfg.reject_unused();
  apply_seed(plan, opts);

  fs::path out_dir = resolve_out_dir(opts);
  CsvSink sink(out_dir, "overfit_study");
  OverfitStudyResult result = run_overfit_study(plan);
  sink.write(result.records);
  std::string path = sink.commit();
  bool all_ok = true;
  for (const RunRecord& rec : result.records) all_ok = all_ok && rec.ok;
  for (const OverfitCellSummary& cell : result.cells)
    std::cout << "overfit-study arm=" << cell.arm << " r=" << cell.r << " "
              << kv("train_loss", cell.mean_train_loss) << " "
              << kv("pop_risk", cell.mean_pop_risk) << " balanced_r="
              << result.balanced_r << " csv=" << path << "\n";
  if (!all_ok) {
    std::cerr << "overfit-study: some cells failed; see NaN rows in " << path
              << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"L1-regularized two-layer network trainer and risk-bound lab"};
  app.set_version_flag("--version", std::string("l1net ") + kVersion);
  app.require_subcommand(1);

  CommonOpts opts;

  CLI::App* train = app.add_subcommand("train", "train one model, save params");
  add_common(train, opts);

  CLI::App* eval_risk =
      app.add_subcommand("eval-risk", "population risk of saved params");
  add_common(eval_risk, opts);
  std::string params_path;
  eval_risk->add_option("--params", params_path, "params file to evaluate");

  CLI::App* bounds =
      app.add_subcommand("bounds", "evaluate the closed-form bounds");
  add_common(bounds, opts);
  double delta_flag = 0.0;
  bool delta_given = false;
  bounds->add_option("--delta", delta_flag, "approximation deficit delta")
      ->each([&delta_given](const std::string&) { delta_given = true; });

  CLI::App* delta_eta =
      app.add_subcommand("delta-eta", "activation step deficit");
  add_common(delta_eta, opts);
  double eta_flag = 0.0;
  bool eta_given = false;
  delta_eta->add_option("--eta", eta_flag, "input-layer scale eta")
      ->each([&eta_given](const std::string&) { eta_given = true; });

  CLI::App* rademacher =
      app.add_subcommand("rademacher", "Monte Carlo complexity estimate");
  add_common(rademacher, opts);

  CLI::App* rate = app.add_subcommand("rate-study", "risk vs n rate sweep");
  add_common(rate, opts);

  CLI::App* sparsity =
      app.add_subcommand("sparsity-study", "risk vs input dimension sweep");
  add_common(sparsity, opts);

  CLI::App* overfit =
      app.add_subcommand("overfit-study", "many-neuron generalization check");
  add_common(overfit, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    // CLI11 returns 0 for --help/--version.
    return code == 0 ? 0 : 2;
  }

  try {
    if (train->parsed()) return run_train(opts);
    if (eval_risk->parsed()) return run_eval_risk(opts, params_path);
    if (bounds->parsed()) return run_bounds(opts, delta_flag, delta_given);
    if (delta_eta->parsed()) return run_delta_eta(opts, eta_flag, eta_given);
    if (rademacher->parsed()) return run_rademacher(opts);
    if (rate->parsed()) return run_rate_study_cmd(opts);
    if (sparsity->parsed()) return run_sparsity_study_cmd(opts);
    if (overfit->parsed()) return run_overfit_study_cmd(opts);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace l1net
