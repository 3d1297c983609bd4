#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "l1net/class_spec.hpp"
#include "l1net/dataset.hpp"
#include "l1net/params.hpp"

namespace l1net {

enum class Loss { L1, L2 };

enum class StepSchedule {
  Constant,  // gamma_t = step
  InvSqrt,   // gamma_t = step / sqrt(t)
  Polyak,    // gamma_t = (loss_t - polyak_target) / ||g_t||^2
};

std::string to_string(Loss loss);
Loss loss_from_string(const std::string& name);
std::string to_string(StepSchedule s);

struct TrainConfig {
  Loss loss = Loss::L1;
  int max_iters = 500;
  StepSchedule schedule = StepSchedule::InvSqrt;
  double step = 0.5;
  double polyak_target = 0.0;
  double init_scale = 1.0;
  int restarts = 5;
  std::uint64_t seed = 0;
  // > 0 enables the plateau stop: give up on a restart once the best
  // objective has not improved by more than `tolerance` over
  // `plateau_window` consecutive iterations.
  double tolerance = 0.0;
  int plateau_window = 50;
  // Used as the initial point of restart 1 when present (restart 0 is
  // always the zero network).
  std::optional<TwoLayerParams> warm_start;
  bool record_trace = true;

  void validate() const;
};

struct TrainReport {
  TwoLayerParams best_params;
  double best_objective = 0.0;
  std::vector<double> objective_trace;  // one entry per evaluated iterate
  long iters_run = 0;
  double constraint_residual = 0.0;
  bool ok = true;
  std::string failure_reason;
};

// Subgradient of the empirical loss with respect to every parameter.
struct ParamGrad {
  double a0 = 0.0;
  std::vector<double> a;
  std::vector<double> W;
  std::vector<double> b;
};

struct FeasibilityReport {
  bool feasible = true;
  double output_residual = 0.0;       // max(0, output norm - V)
  double neuron_residual = 0.0;       // JointL1: worst neuron excess
  double off_support_residual = 0.0;  // InputL0: largest off-support |W|
};

double empirical_loss(const TwoLayerParams& p, const ActivationSpec& act,
                      const Dataset& data, Loss loss);

// sign(0) is taken as 0, so exact fits are stationary under the L1 loss.
ParamGrad loss_subgradient(const TwoLayerParams& p, const ActivationSpec& act,
                           const Dataset& data, Loss loss);

// Euclidean projection onto {v : ||v||_1 <= V}; identity when already
// feasible, zero vector when V = 0. Sort-based threshold search.
std::vector<double> project_l1_ball(std::span<const double> v, double V);

// Componentwise sign(v_i) * max(|v_i| - lambda, 0).
std::vector<double> soft_threshold(std::span<const double> v, double lambda);

// Projected subgradient descent with multi-restart best-iterate tracking.
// Restart 0 is the zero network, so the zero predictor's loss is always an
// upper bound on the result. Divergence is reported, not clipped.
TrainReport train_erm(const Dataset& data, const FunctionClassSpec& spec,
                      const TrainConfig& config);

FeasibilityReport check_feasibility(const TwoLayerParams& p,
                                    const FunctionClassSpec& spec);

}  // namespace l1net
