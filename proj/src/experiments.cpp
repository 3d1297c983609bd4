#include "l1net/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "l1net/parallel.hpp"
#include "l1net/rng.hpp"
#include "l1net/textio.hpp"

namespace l1net {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? kNaN : s / static_cast<double>(v.size());
}

}  // namespace

RiskEstimate population_risk_mc(
    const TwoLayerParams& params, const ActivationSpec& act,
    const std::function<double(std::span<const double>)>& truth,
    const DataDistribution& dist, const NoiseSpec& noise, int m,
    std::uint64_t seed) {
  dist.validate();
  noise.validate();
  if (m < 1) throw std::invalid_argument("population risk: m must be >= 1");
  if (dist.d != params.d)
    throw std::invalid_argument("population risk: dimension mismatch");

  Rng x_rng(derive_seed(seed, {0}));
  Rng e_rng(derive_seed(seed, {1}));
  std::vector<double> x(static_cast<std::size_t>(dist.d));
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int t = 0; t < dist.d; ++t)
      x[static_cast<std::size_t>(t)] = dist.kind == DistKind::UniformBox
                                           ? x_rng.uniform(-dist.M, dist.M)
                                           : x_rng.normal();
    double eps = noise.sample(e_rng);
    double s = std::abs(truth(x) + eps - forward(params, act, x));
    sum += s;
    sum_sq += s * s;
  }
  double mean = sum / m;
  double var = m > 1 ? (sum_sq - m * mean * mean) / (m - 1) : 0.0;
  if (var < 0.0) var = 0.0;

  RiskEstimate est;
  est.estimate = mean - noise.mean_abs();
  est.std_error = std::sqrt(var / m);
  return est;
}

RiskEstimate population_risk_mc(const TwoLayerParams& params,
                                const ActivationSpec& act,
                                const TargetSpec& target,
                                const DataDistribution& dist,
                                const NoiseSpec& noise, int m,
                                std::uint64_t seed) {
  target.validate();
  if (target.d != dist.d)
    throw std::invalid_argument("population risk: target dimension mismatch");
  return population_risk_mc(
      params, act,
      [&target](std::span<const double> x) { return eval_target(target, x); },
      dist, noise, m, seed);
}

RateFit fit_rate(std::span<const double> ns, std::span<const double> risks) {
  if (ns.size() != risks.size())
    throw std::invalid_argument("fit_rate: length mismatch");
  std::vector<double> lx, ly;
  int dropped = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (!(risks[i] > 0.0) || !std::isfinite(risks[i])) {
      ++dropped;  // nonpositive or failed cells carry no log-scale information
      continue;
    }
    if (!(ns[i] > 0.0))
      throw std::invalid_argument("fit_rate: sample sizes must be positive");
    lx.push_back(std::log(ns[i]));
    ly.push_back(std::log(risks[i]));
  }
  std::size_t m = lx.size();
  if (m < 3)
    throw std::invalid_argument(
        "fit_rate: fewer than 3 usable points after dropping " +
        std::to_string(dropped) + " nonpositive risks");

  double mx = mean_of(lx), my = mean_of(ly);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("fit_rate: degenerate n grid");

  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double resid = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ssr += resid * resid;
  }
  fit.slope_std_error =
      m > 2 ? std::sqrt(ssr / static_cast<double>(m - 2) / sxx) : 0.0;
  fit.points_used = static_cast<int>(m);
  fit.points_dropped = dropped;
  return fit;
}

void ExperimentPlan::validate_common() const {
  target.validate();
  noise.validate();
  train.validate();
  if (n_grid.empty()) throw std::invalid_argument("plan: empty n grid");
  for (int n : n_grid)
    if (n < 2) throw std::invalid_argument("plan: every n must be >= 2");
  if (d_grid.empty()) throw std::invalid_argument("plan: empty d grid");
  for (int d : d_grid) {
    if (d < 1) throw std::invalid_argument("plan: every d must be >= 1");
    if (d < target.d)
      throw std::invalid_argument("plan: d smaller than target dimension");
  }
  if (replicates < 1) throw std::invalid_argument("plan: replicates must be >= 1");
  if (eval_samples < 10000)
    throw std::invalid_argument("plan: eval_samples must be >= 10000");
  if (v_policy.kind == VPolicy::Kind::Fixed && !(v_policy.value >= 0.0))
    throw std::invalid_argument("plan: fixed V must be >= 0");
  if (v_policy.kind == VPolicy::Kind::MinAdmissibleTimes && !(v_policy.value > 0.0))
    throw std::invalid_argument("plan: V factor must be > 0");
  if (eta_policy.kind == EtaPolicy::Kind::Fixed && !(eta_policy.value > 0.0))
    throw std::invalid_argument("plan: fixed eta must be > 0");
  if (r_policy.kind == RPolicy::Kind::Fixed &&
      (!(r_policy.value >= 1.0) ||
       r_policy.value != std::floor(r_policy.value)))
    throw std::invalid_argument("plan: fixed r must be a positive integer");
  if (r_policy.kind == RPolicy::Kind::MultipleOfN && !(r_policy.value > 0.0))
    throw std::invalid_argument("plan: r multiple must be > 0");
  if (dist_kind == DistKind::UniformBox && !(dist_M > 0.0))
    throw std::invalid_argument("plan: box half-width must be > 0");
  if (!(loose_v_factor > 0.0))
    throw std::invalid_argument("plan: loose V factor must be > 0");
}

void ExperimentPlan::validate_rate_study() const {
  validate_common();
  if (n_grid.size() < 3 || replicates < 3)
    throw std::invalid_argument(
        "rate study: need >= 3 n values and >= 3 replicates per cell");
}

void ExperimentPlan::validate_sparsity_study() const {
  validate_common();
  if (d_grid.size() < 2)
    throw std::invalid_argument("sparsity study: need >= 2 d values");
  if (target.support().empty())
    throw std::invalid_argument("sparsity study: target must have a support");
}

void ExperimentPlan::validate_overfit_study() const {
  validate_common();
  if (n_grid.size() != 1 || d_grid.size() != 1)
    throw std::invalid_argument("overfit study: single n and d expected");
  if (overfit_r_factors.empty())
    throw std::invalid_argument("overfit study: empty r factor list");
  for (double f : overfit_r_factors)
    if (!(f > 0.0))
      throw std::invalid_argument("overfit study: r factors must be > 0");
}

namespace {

struct CellSetup {
  TargetSpec target;
  DataDistribution dist;
  FunctionClassSpec spec;
  double C = 0.0;
};

double resolve_v(const ExperimentPlan& plan, const TargetSpec& target,
                 const DataDistribution& dist) {
  if (plan.v_policy.kind == VPolicy::Kind::Fixed) return plan.v_policy.value;
  return min_admissible_v(target, dist) * plan.v_policy.value;
}

double resolve_eta(const ExperimentPlan& plan, int n) {
  if (plan.eta_policy.kind == EtaPolicy::Kind::Fixed)
    return plan.eta_policy.value;
  return joint_l1_eta_choice(static_cast<double>(n));
}

int resolve_r(const ExperimentPlan& plan, double V, int d, int n) {
  switch (plan.r_policy.kind) {
    case RPolicy::Kind::Fixed:
      return static_cast<int>(plan.r_policy.value);
    case RPolicy::Kind::BalancedChoice: {
      BoundInputs in;
      in.V = V;
      in.d = d;
      in.n = n;
      return static_cast<int>(suggested_neuron_count(in));
    }
    case RPolicy::Kind::MultipleOfN: {
      long r = std::lround(plan.r_policy.value * n);
      return static_cast<int>(r < 1 ? 1 : r);
    }
  }
  throw std::logic_error("unknown r policy");
}

CellSetup make_cell_setup(const ExperimentPlan& plan, Regime regime, int d,
                          int n, double v_scale, int r_override) {
  CellSetup cell;
  cell.target = embed_target(plan.target, d);
  cell.dist = DataDistribution{plan.dist_kind, d, plan.dist_M};
  cell.C = barron_constant(cell.target, cell.dist);
  double V = resolve_v(plan, cell.target, cell.dist) * v_scale;
  int r = r_override > 0 ? r_override : resolve_r(plan, V, d, n);
  switch (regime) {
    case Regime::OutputL1:
      cell.spec = FunctionClassSpec::output_l1(V, r, d);
      break;
    case Regime::JointL1:
      cell.spec = FunctionClassSpec::joint_l1(V, resolve_eta(plan, n), r, d);
      break;
    case Regime::InputL0:
      cell.spec = FunctionClassSpec::input_l0(V, cell.target.support(), r, d);
      break;
  }
  return cell;
}

// Trains one cell replicate and fills a RunRecord. All stochastic streams
// derive from the cell seed, so results are independent of scheduling.
RunRecord run_cell(const ExperimentPlan& plan, const CellSetup& cell, int n,
                   int replicate, std::uint64_t cell_seed,
                   const TrainConfig& train_template,
                   TwoLayerParams* best_params_out = nullptr) {
  auto t0 = std::chrono::steady_clock::now();

  RunRecord rec;
  rec.regime = to_string(cell.spec.regime);
  rec.target = plan.target.name;
  rec.d = cell.spec.d;
  rec.n = n;
  rec.r = cell.spec.r;
  rec.V = cell.spec.V;
  rec.tau = plan.noise.tau;
  rec.replicate = replicate;
  rec.seed = cell_seed;

  std::vector<int> target_support = cell.target.support();
  rec.k = cell.spec.regime == Regime::InputL0
              ? cell.spec.k
              : std::max<int>(1, static_cast<int>(target_support.size()));
  rec.eta = cell.spec.regime == Regime::JointL1 ? cell.spec.eta
                                                : resolve_eta(plan, n);

  Dataset data = sample_dataset(cell.target, cell.dist, plan.noise, n,
                                derive_seed(cell_seed, {0}));
  TrainConfig cfg = train_template;
  cfg.seed = derive_seed(cell_seed, {1});
  cfg.record_trace = false;
  if (plan.scale_iters_with_n) {
    int min_n = *std::min_element(plan.n_grid.begin(), plan.n_grid.end());
    cfg.max_iters = static_cast<int>(std::lround(
        cfg.max_iters * std::sqrt(static_cast<double>(n) / min_n)));
  }
  if (plan.scale_restarts_with_n) {
    int max_n = *std::max_element(plan.n_grid.begin(), plan.n_grid.end());
    cfg.restarts = static_cast<int>(std::lround(
        cfg.restarts * std::sqrt(static_cast<double>(max_n) / n)));
    if (cfg.restarts < 1) cfg.restarts = 1;
  }
  TrainReport report = train_erm(data, cell.spec, cfg);

  if (report.ok) {
    // The L1 training error of the delivered model; equals best_objective
    // whenever the arm itself minimizes the L1 loss.
    rec.train_loss =
        empirical_loss(report.best_params, cell.spec.activation, data, Loss::L1);
    RiskEstimate risk = population_risk_mc(
        report.best_params, cell.spec.activation, cell.target, cell.dist,
        plan.noise, plan.eval_samples, derive_seed(cell_seed, {2}));
    rec.pop_risk = risk.estimate;
    rec.pop_risk_se = risk.std_error;
    if (best_params_out) *best_params_out = std::move(report.best_params);
  } else {
    rec.ok = false;
    rec.train_loss = kNaN;
    rec.pop_risk = kNaN;
    rec.pop_risk_se = kNaN;
  }

  BoundInputs in;
  in.C = cell.C;
  in.V = rec.V;
  in.eta = rec.eta;
  in.tau = rec.tau;
  in.r = rec.r;
  in.d = rec.d;
  in.k = rec.k;
  in.n = rec.n;
  double delta = activation_step_deficit(cell.spec.activation, in.eta);
  rec.bound_thm3 = output_l1_risk_bound(in, delta);
  rec.bound_thm5 = joint_l1_risk_bound(in, delta);
  rec.bound_prop1 = sparse_support_risk_bound(in);
  rec.bound_thm4 = minimax_risk_floor(in);

  if (plan.record_timings) {
    auto t1 = std::chrono::steady_clock::now();
    rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  }
  return rec;
}

int plan_threads(const ExperimentPlan& plan) {
  if (!plan.parallel) return 1;
  return plan.threads > 0 ? plan.threads : default_thread_count();
}

// Mean population risk per n over ok replicates, for one (d, regime) slice.
std::vector<double> mean_risk_per_n(const std::vector<RunRecord>& records,
                                    const std::vector<int>& n_grid,
                                    const std::string& regime, int d) {
  std::vector<double> means;
  for (int n : n_grid) {
    std::vector<double> risks;
    for (const RunRecord& rec : records)
      if (rec.ok && rec.n == n && rec.d == d && rec.regime == regime)
        risks.push_back(rec.pop_risk);
    means.push_back(mean_of(risks));
  }
  return means;
}

}  // namespace

RateStudyResult run_rate_study(const ExperimentPlan& plan) {
  plan.validate_rate_study();
  const int reps = plan.replicates;
  const int cells =
      static_cast<int>(plan.d_grid.size() * plan.n_grid.size()) * reps;

  RateStudyResult result;
  result.records.resize(static_cast<std::size_t>(cells));
  parallel_for(cells, plan_threads(plan), [&](int idx) {
    int rep = idx % reps;
    int rest = idx / reps;
    int n_idx = rest % static_cast<int>(plan.n_grid.size());
    int d_idx = rest / static_cast<int>(plan.n_grid.size());
    int n = plan.n_grid[static_cast<std::size_t>(n_idx)];
    int d = plan.d_grid[static_cast<std::size_t>(d_idx)];
    std::uint64_t cell_seed = derive_seed(
        plan.master_seed, {1, static_cast<std::uint64_t>(d),
                           static_cast<std::uint64_t>(n),
                           static_cast<std::uint64_t>(rep)});
    CellSetup cell = make_cell_setup(plan, plan.regime, d, n, 1.0, 0);
    result.records[static_cast<std::size_t>(idx)] =
        run_cell(plan, cell, n, rep, cell_seed, plan.train);
  });
  sort_records(result.records);

  for (int d : plan.d_grid) {
    std::vector<double> ns(plan.n_grid.begin(), plan.n_grid.end());
    std::vector<double> means = mean_risk_per_n(
        result.records, plan.n_grid, to_string(plan.regime), d);
    SlopeSummary summary;
    summary.d = d;
    summary.regime = to_string(plan.regime);
    summary.fit = fit_rate(ns, means);
    result.slopes.push_back(summary);
  }
  return result;
}

SparsityStudyResult run_sparsity_study(const ExperimentPlan& plan) {
  plan.validate_sparsity_study();
  const Regime regimes[3] = {Regime::OutputL1, Regime::JointL1, Regime::InputL0};
  const int n = plan.n_grid.front();
  const int reps = plan.replicates;
  const int cells = static_cast<int>(plan.d_grid.size()) * 3 * reps;

  SparsityStudyResult result;
  result.records.resize(static_cast<std::size_t>(cells));
  // Leakage check needs the trained input layer, which records do not keep,
  // so collect it alongside.
  const int d_max = *std::max_element(plan.d_grid.begin(), plan.d_grid.end());
  std::vector<int> leak_ok(static_cast<std::size_t>(reps), -1);

  parallel_for(cells, plan_threads(plan), [&](int idx) {
    int rep = idx % reps;
    int rest = idx / reps;
    int reg_idx = rest % 3;
    int d_idx = rest / 3;
    int d = plan.d_grid[static_cast<std::size_t>(d_idx)];
    Regime regime = regimes[reg_idx];
    std::uint64_t cell_seed = derive_seed(
        plan.master_seed, {2, static_cast<std::uint64_t>(d),
                           static_cast<std::uint64_t>(reg_idx),
                           static_cast<std::uint64_t>(rep)});
    CellSetup cell = make_cell_setup(plan, regime, d, n, 1.0, 0);

    bool want_leakage = regime == Regime::JointL1 && d == d_max;
    TwoLayerParams best;
    result.records[static_cast<std::size_t>(idx)] = run_cell(
        plan, cell, n, rep, cell_seed, plan.train, want_leakage ? &best : nullptr);
    if (want_leakage && result.records[static_cast<std::size_t>(idx)].ok) {
      std::vector<char> mask(static_cast<std::size_t>(d), 0);
      for (int i : cell.target.support()) mask[static_cast<std::size_t>(i)] = 1;
      double on = 0.0, off = 0.0;
      for (int t = 0; t < d; ++t) {
        double col_max = 0.0;
        for (int j = 0; j < best.r; ++j)
          col_max = std::max(
              col_max, std::abs(best.W[static_cast<std::size_t>(j) * d + t]));
        (mask[static_cast<std::size_t>(t)] ? on : off) += col_max;
      }
      leak_ok[static_cast<std::size_t>(rep)] = off < on ? 1 : 0;
    }
  });
  sort_records(result.records);

  for (Regime regime : regimes) {
    SparsityRegimeSummary summary;
    summary.regime = to_string(regime);
    for (int d : plan.d_grid) {
      std::vector<double> risks;
      for (const RunRecord& rec : result.records)
        if (rec.ok && rec.d == d && rec.regime == summary.regime)
          risks.push_back(rec.pop_risk);
      summary.d_values.push_back(d);
      summary.mean_risk.push_back(mean_of(risks));
    }
    auto [lo_it, hi_it] =
        std::minmax_element(plan.d_grid.begin(), plan.d_grid.end());
    double risk_lo =
        summary.mean_risk[static_cast<std::size_t>(lo_it - plan.d_grid.begin())];
    double risk_hi =
        summary.mean_risk[static_cast<std::size_t>(hi_it - plan.d_grid.begin())];
    summary.risk_ratio = risk_hi / risk_lo;
    result.regimes.push_back(summary);
  }

  int counted = 0, controlled = 0;
  for (int v : leak_ok)
    if (v >= 0) {
      ++counted;
      controlled += v;
    }
  result.leakage_controlled_fraction =
      counted > 0 ? static_cast<double>(controlled) / counted : 0.0;
  return result;
}

OverfitStudyResult run_overfit_study(const ExperimentPlan& plan) {
  plan.validate_overfit_study();
  const int n = plan.n_grid.front();
  const int d = plan.d_grid.front();
  const int reps = plan.replicates;

  // r cells: the data-driven choice plus each requested multiple of n.
  TargetSpec target_d = embed_target(plan.target, d);
  DataDistribution dist_d{plan.dist_kind, d, plan.dist_M};
  double base_v = resolve_v(plan, target_d, dist_d);
  BoundInputs bi;
  bi.V = base_v;
  bi.d = d;
  bi.n = n;
  int balanced_r = static_cast<int>(suggested_neuron_count(bi));

  std::vector<int> r_cells;
  auto add_r = [&r_cells](int r) {
    if (std::find(r_cells.begin(), r_cells.end(), r) == r_cells.end())
      r_cells.push_back(r);
  };
  if (plan.include_balanced_r_cell) add_r(balanced_r);
  for (double f : plan.overfit_r_factors) {
    long r = std::lround(f * n);
    add_r(static_cast<int>(r < 1 ? 1 : r));
  }

  struct Arm {
    const char* name;
    double v_scale;
  };
  const Arm arms[2] = {{"constrained", 1.0}, {"loose", plan.loose_v_factor}};

  OverfitStudyResult result;
  result.balanced_r = balanced_r;
  const int cells = 2 * static_cast<int>(r_cells.size()) * reps;
  result.records.resize(static_cast<std::size_t>(cells));

  parallel_for(cells, plan_threads(plan), [&](int idx) {
    int rep = idx % reps;
    int rest = idx / reps;
    int r_idx = rest % static_cast<int>(r_cells.size());
    int arm_idx = rest / static_cast<int>(r_cells.size());
    int r = r_cells[static_cast<std::size_t>(r_idx)];
    std::uint64_t cell_seed = derive_seed(
        plan.master_seed, {3, static_cast<std::uint64_t>(arm_idx),
                           static_cast<std::uint64_t>(r),
                           static_cast<std::uint64_t>(rep)});
    CellSetup cell =
        make_cell_setup(plan, plan.regime, d, n, arms[arm_idx].v_scale, r);
    const TrainConfig& tmpl =
        arm_idx == 1 && plan.loose_train ? *plan.loose_train : plan.train;
    result.records[static_cast<std::size_t>(idx)] =
        run_cell(plan, cell, n, rep, cell_seed, tmpl);
  });

  // Summaries walk the index layout directly, before the canonical sort.
  for (int arm_idx = 0; arm_idx < 2; ++arm_idx) {
    for (int r_idx = 0; r_idx < static_cast<int>(r_cells.size()); ++r_idx) {
      OverfitCellSummary cell;
      cell.arm = arms[arm_idx].name;
      cell.r = r_cells[static_cast<std::size_t>(r_idx)];
      std::vector<double> train_losses, risks;
      for (int rep = 0; rep < reps; ++rep) {
        int idx =
            (arm_idx * static_cast<int>(r_cells.size()) + r_idx) * reps + rep;
        const RunRecord& rec = result.records[static_cast<std::size_t>(idx)];
        if (!rec.ok) continue;
        train_losses.push_back(rec.train_loss);
        risks.push_back(rec.pop_risk);
      }
      cell.mean_train_loss = mean_of(train_losses);
      cell.mean_pop_risk = mean_of(risks);
      result.cells.push_back(cell);
    }
  }
  sort_records(result.records);
  return result;
}

const char* const kRunRecordCsvHeader =
    "regime,target,d,k,n,r,V,eta,tau,replicate,seed,train_loss,pop_risk,"
    "pop_risk_se,bound_thm3,bound_thm5,bound_prop1,bound_thm4,wall_ms";

void sort_records(std::vector<RunRecord>& records) {
  std::sort(records.begin(), records.end(),
            [](const RunRecord& a, const RunRecord& b) {
              auto key = [](const RunRecord& r) {
                return std::tie(r.regime, r.target, r.d, r.k, r.n, r.r, r.V,
                                r.eta, r.tau, r.replicate);
              };
              return key(a) < key(b);
            });
}

void write_records_csv(const std::vector<RunRecord>& records,
                       std::ostream& out) {
  out << kRunRecordCsvHeader << "\n";
  for (const RunRecord& r : records) {
    out << r.regime << "," << r.target << "," << r.d << "," << r.k << ","
        << r.n << "," << r.r << "," << fmt_g17(r.V) << "," << fmt_g17(r.eta)
        << "," << fmt_g17(r.tau) << "," << r.replicate << "," << r.seed << ","
        << fmt_g17(r.train_loss) << "," << fmt_g17(r.pop_risk) << ","
        << fmt_g17(r.pop_risk_se) << "," << fmt_g17(r.bound_thm3) << ","
        << fmt_g17(r.bound_thm5) << "," << fmt_g17(r.bound_prop1) << ","
        << fmt_g17(r.bound_thm4) << "," << fmt_g17(r.wall_ms) << "\n";
  }
}

std::vector<RunRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("records csv: empty input");
  if (trim(line) != kRunRecordCsvHeader)
    throw std::runtime_error("records csv: unexpected header");

  std::vector<RunRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> f = split(line, ',');
    if (f.size() != 19)
      throw std::runtime_error("records csv: line " + std::to_string(line_no) +
                               ": expected 19 fields, got " +
                               std::to_string(f.size()));
    auto bad = [&](const char* what) {
      return std::runtime_error("records csv: line " + std::to_string(line_no) +
                                ": bad " + what);
    };
    RunRecord r;
    r.regime = trim(f[0]);
    r.target = trim(f[1]);
    long long iv;
    if (!try_parse_long(trim(f[2]), iv)) throw bad("d");
    r.d = static_cast<int>(iv);
    if (!try_parse_long(trim(f[3]), iv)) throw bad("k");
    r.k = static_cast<int>(iv);
    if (!try_parse_long(trim(f[4]), iv)) throw bad("n");
    r.n = static_cast<int>(iv);
    if (!try_parse_long(trim(f[5]), iv)) throw bad("r");
    r.r = static_cast<int>(iv);
    if (!try_parse_double(trim(f[6]), r.V)) throw bad("V");
    if (!try_parse_double(trim(f[7]), r.eta)) throw bad("eta");
    if (!try_parse_double(trim(f[8]), r.tau)) throw bad("tau");
    if (!try_parse_long(trim(f[9]), iv)) throw bad("replicate");
    r.replicate = static_cast<int>(iv);
    {
      const std::string s = trim(f[10]);
      char* end = nullptr;
      r.seed = std::strtoull(s.c_str(), &end, 10);
      if (s.empty() || end != s.c_str() + s.size()) throw bad("seed");
    }
    if (!try_parse_double(trim(f[11]), r.train_loss)) throw bad("train_loss");
    if (!try_parse_double(trim(f[12]), r.pop_risk)) throw bad("pop_risk");
    if (!try_parse_double(trim(f[13]), r.pop_risk_se)) throw bad("pop_risk_se");
    if (!try_parse_double(trim(f[14]), r.bound_thm3)) throw bad("bound_thm3");
    if (!try_parse_double(trim(f[15]), r.bound_thm5)) throw bad("bound_thm5");
    if (!try_parse_double(trim(f[16]), r.bound_prop1)) throw bad("bound_prop1");
    if (!try_parse_double(trim(f[17]), r.bound_thm4)) throw bad("bound_thm4");
    if (!try_parse_double(trim(f[18]), r.wall_ms)) throw bad("wall_ms");
    r.ok = std::isfinite(r.train_loss);
    records.push_back(std::move(r));
  }
  return records;
}

void write_records_csv_file(const std::vector<RunRecord>& records,
                            const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_records_csv(records, out);
}

std::vector<RunRecord> read_records_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_records_csv(in);
}

}  // namespace l1net
