#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "l1net/complexity.hpp"
#include "l1net/dataset.hpp"
#include "l1net/optim.hpp"
#include "l1net/target.hpp"

namespace l1net {

struct VPolicy {
  enum class Kind { Fixed, MinAdmissibleTimes };
  Kind kind = Kind::MinAdmissibleTimes;
  double value = 1.0;  // fixed V, or the factor on the admissible minimum
};

struct EtaPolicy {
  enum class Kind { Fixed, RateChoice };  // RateChoice: (n (log n)^2)^(1/3)
  Kind kind = Kind::RateChoice;
  double value = 0.0;
};

struct RPolicy {
  enum class Kind { Fixed, BalancedChoice, MultipleOfN };
  Kind kind = Kind::BalancedChoice;
  double value = 0.0;  // fixed r, or the multiple of n
};

struct ExperimentPlan {
  std::vector<int> n_grid;
  std::vector<int> d_grid;
  Regime regime = Regime::OutputL1;
  VPolicy v_policy;
  EtaPolicy eta_policy;
  RPolicy r_policy;
  NoiseSpec noise;
  TargetSpec target;  // frequencies on the leading coords; embedded per d
  DistKind dist_kind = DistKind::UniformBox;
  double dist_M = 1.0;
  int replicates = 5;
  int eval_samples = 100000;
  std::uint64_t master_seed = 1;
  TrainConfig train;
  // Scale each cell's iteration budget by sqrt(n / min n). Under the
  // 1/sqrt(t) step schedule this keeps the optimizer's floor proportional
  // to the statistical error, so rate fits measure the estimator, not the
  // solver.
  bool scale_iters_with_n = false;
  // Scale each cell's restart count by sqrt(max n / n): small-n cells are
  // search-limited rather than refinement-limited, and their restarts are
  // nearly free.
  bool scale_restarts_with_n = false;
  // Overfit study only: configuration and budget of the relaxed arm.
  std::optional<TrainConfig> loose_train;
  double loose_v_factor = 1000.0;
  std::vector<double> overfit_r_factors = {0.25, 1.0, 4.0};
  bool include_balanced_r_cell = true;
  bool parallel = false;
  int threads = 0;  // 0 = hardware concurrency when parallel
  bool record_timings = false;

  void validate_common() const;
  void validate_rate_study() const;
  void validate_sparsity_study() const;
  void validate_overfit_study() const;
};

// One experiment cell. Failed training runs keep their coordinates and
// carry NaN losses; they are excluded from every fit.
struct RunRecord {
  std::string regime;
  std::string target;
  int d = 0;
  int k = 0;
  int n = 0;
  int r = 0;
  double V = 0.0;
  double eta = 0.0;
  double tau = 0.0;
  int replicate = 0;
  std::uint64_t seed = 0;
  double train_loss = 0.0;
  double pop_risk = 0.0;
  double pop_risk_se = 0.0;
  double bound_thm3 = 0.0;
  double bound_thm5 = 0.0;
  double bound_prop1 = 0.0;
  double bound_thm4 = 0.0;
  double wall_ms = 0.0;
  bool ok = true;  // not serialized; NaN losses mark failures in the CSV
};

struct RiskEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

// Excess L1 risk of the predictor against a known target: fresh Monte Carlo
// draws of (x, eps) with the exact E|eps| subtracted.
RiskEstimate population_risk_mc(const TwoLayerParams& params,
                                const ActivationSpec& act,
                                const TargetSpec& target,
                                const DataDistribution& dist,
                                const NoiseSpec& noise, int m,
                                std::uint64_t seed);

// Same estimate for an arbitrary ground-truth function.
RiskEstimate population_risk_mc(const TwoLayerParams& params,
                                const ActivationSpec& act,
                                const std::function<double(std::span<const double>)>& truth,
                                const DataDistribution& dist,
                                const NoiseSpec& noise, int m,
                                std::uint64_t seed);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_std_error = 0.0;
  int points_used = 0;
  int points_dropped = 0;  // nonpositive risks excluded with a warning
};

// Ordinary least squares on (log n, log risk). Throws when fewer than three
// usable points remain.
RateFit fit_rate(std::span<const double> ns, std::span<const double> risks);

struct SlopeSummary {
  int d = 0;
  std::string regime;
  RateFit fit;
};

struct RateStudyResult {
  std::vector<RunRecord> records;
  std::vector<SlopeSummary> slopes;
};

struct SparsityRegimeSummary {
  std::string regime;
  std::vector<int> d_values;
  std::vector<double> mean_risk;   // per d, over ok replicates
  double risk_ratio = 0.0;         // mean risk at d_max over d_min
};

struct SparsityStudyResult {
  std::vector<RunRecord> records;
  std::vector<SparsityRegimeSummary> regimes;
  // Fraction of JointL1 replicates at the largest d whose off-support
  // column-max mass is below the on-support mass.
  double leakage_controlled_fraction = 0.0;
};

struct OverfitCellSummary {
  std::string arm;  // "constrained" or "loose"
  int r = 0;
  double mean_train_loss = 0.0;
  double mean_pop_risk = 0.0;
};

struct OverfitStudyResult {
  std::vector<RunRecord> records;
  std::vector<OverfitCellSummary> cells;
  int balanced_r = 0;  // the data-driven neuron-count cell
};

RateStudyResult run_rate_study(const ExperimentPlan& plan);
SparsityStudyResult run_sparsity_study(const ExperimentPlan& plan);
OverfitStudyResult run_overfit_study(const ExperimentPlan& plan);

// Fixed header, 17-significant-digit values, canonical row order.
extern const char* const kRunRecordCsvHeader;
void write_records_csv(const std::vector<RunRecord>& records,
                       std::ostream& out);
std::vector<RunRecord> read_records_csv(std::istream& in);
void write_records_csv_file(const std::vector<RunRecord>& records,
                            const std::string& path);
std::vector<RunRecord> read_records_csv_file(const std::string& path);

// Canonical sort key over plan coordinates + replicate; restores byte
// determinism after parallel execution.
void sort_records(std::vector<RunRecord>& records);

}  // namespace l1net
