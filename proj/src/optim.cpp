#include "l1net/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "l1net/rng.hpp"

namespace l1net {

std::string to_string(Loss loss) { return loss == Loss::L1 ? "l1" : "l2"; }

Loss loss_from_string(const std::string& name) {
  if (name == "l1") return Loss::L1;
  if (name == "l2") return Loss::L2;
  throw std::invalid_argument("unknown loss '" + name + "' (expected l1 or l2)");
}

std::string to_string(StepSchedule s) {
  switch (s) {
    case StepSchedule::Constant: return "constant";
    case StepSchedule::InvSqrt: return "inv-sqrt";
    case StepSchedule::Polyak: return "polyak";
  }
  throw std::logic_error("unknown schedule");
}

void TrainConfig::validate() const {
  if (max_iters < 1) throw std::invalid_argument("train: max_iters must be >= 1");
  if (!(step > 0.0)) throw std::invalid_argument("train: step must be > 0");
  if (restarts < 1) throw std::invalid_argument("train: restarts must be >= 1");
  if (init_scale < 0.0) throw std::invalid_argument("train: init_scale < 0");
  if (tolerance < 0.0) throw std::invalid_argument("train: tolerance < 0");
  if (plateau_window < 1) throw std::invalid_argument("train: plateau_window < 1");
}

double empirical_loss(const TwoLayerParams& p, const ActivationSpec& act,
                      const Dataset& data, Loss loss) {
  if (data.n < 1) throw std::invalid_argument("empirical_loss: empty dataset");
  if (data.d != p.d)
    throw std::invalid_argument("empirical_loss: dimension mismatch");
  double total = 0.0;
  for (int i = 0; i < data.n; ++i) {
    double res = forward(p, act, data.x_row(i)) - data.y[static_cast<std::size_t>(i)];
    total += loss == Loss::L1 ? std::abs(res) : res * res;
  }
  return total / data.n;
}

namespace {

inline double sign0(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// One pass over the data computing the mean loss and its subgradient.
double eval_loss_grad(const TwoLayerParams& p, const ActivationSpec& act,
                      const Dataset& data, Loss loss, ParamGrad& grad,
                      std::vector<double>& sigma_buf,
                      std::vector<double>& dsigma_buf) {
  const int n = data.n;
  const int r = p.r;
  const int d = p.d;
  grad.a0 = 0.0;
  grad.a.assign(static_cast<std::size_t>(r), 0.0);
  grad.W.assign(static_cast<std::size_t>(r) * d, 0.0);
  grad.b.assign(static_cast<std::size_t>(r), 0.0);
  sigma_buf.resize(static_cast<std::size_t>(r));
  dsigma_buf.resize(static_cast<std::size_t>(r));

  const double inv_n = 1.0 / n;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double* x = data.X.data() + static_cast<std::size_t>(i) * d;
    double pred = p.a0;
    const double* w = p.W.data();
    for (int j = 0; j < r; ++j, w += d) {
      double z = p.b[static_cast<std::size_t>(j)];
      for (int t = 0; t < d; ++t) z += w[t] * x[t];
      double s = act.value(z);
      sigma_buf[static_cast<std::size_t>(j)] = s;
      dsigma_buf[static_cast<std::size_t>(j)] = s * (1.0 - s);
      pred += p.a[static_cast<std::size_t>(j)] * s;
    }
    double res = pred - data.y[static_cast<std::size_t>(i)];
    double g;
    if (loss == Loss::L1) {
      total += std::abs(res);
      g = sign0(res) * inv_n;
    } else {
      total += res * res;
      g = 2.0 * res * inv_n;
    }
    if (g != 0.0) {
      grad.a0 += g;
      double* gW = grad.W.data();
      const double* wj = p.W.data();
      for (int j = 0; j < r; ++j, gW += d, wj += d) {
        grad.a[static_cast<std::size_t>(j)] += g * sigma_buf[static_cast<std::size_t>(j)];
        double c = g * p.a[static_cast<std::size_t>(j)] *
                   dsigma_buf[static_cast<std::size_t>(j)];
        if (c != 0.0) {
          grad.b[static_cast<std::size_t>(j)] += c;
          for (int t = 0; t < d; ++t) gW[t] += c * x[t];
        }
      }
    }
  }
  return total * inv_n;
}

}  // namespace

ParamGrad loss_subgradient(const TwoLayerParams& p, const ActivationSpec& act,
                           const Dataset& data, Loss loss) {
  if (data.n < 1) throw std::invalid_argument("loss_subgradient: empty dataset");
  if (data.d != p.d)
    throw std::invalid_argument("loss_subgradient: dimension mismatch");
  ParamGrad grad;
  std::vector<double> s, ds;
  eval_loss_grad(p, act, data, loss, grad, s, ds);
  return grad;
}

std::vector<double> project_l1_ball(std::span<const double> v, double V) {
  if (!(V >= 0.0)) throw std::invalid_argument("project_l1_ball: V must be >= 0");
  std::vector<double> out(v.begin(), v.end());
  double norm = 0.0;
  for (double x : out) norm += std::abs(x);
  if (norm <= V) return out;
  if (V == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return out;
  }

  // Threshold search on the sorted magnitudes: theta is the unique value
  // with sum_i max(|v_i| - theta, 0) = V.
  std::vector<double> mags(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) mags[i] = std::abs(out[i]);
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < mags.size(); ++j) {
    cumulative += mags[j];
    double candidate = (cumulative - V) / static_cast<double>(j + 1);
    if (candidate < mags[j]) theta = candidate;
  }

  auto shrink = [&out](double t) {
    std::vector<double> res(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      double m = std::abs(out[i]) - t;
      res[i] = m > 0.0 ? (out[i] > 0.0 ? m : -m) : 0.0;
    }
    return res;
  };
  std::vector<double> res = shrink(theta);
  // Newton polish on the active set until the recomputed norm is at most V;
  // the same summation order is used by the feasibility check above, which
  // makes the projection exactly idempotent.
  for (int guard = 0; guard < 64; ++guard) {
    double s = 0.0;
    int active = 0;
    for (double x : res) {
      s += std::abs(x);
      if (x != 0.0) ++active;
    }
    if (s <= V || active == 0) break;
    double next = theta + (s - V) / active;
    if (!(next > theta))
      next = std::nextafter(theta, std::numeric_limits<double>::infinity());
    theta = next;
    res = shrink(theta);
  }
  return res;
}

std::vector<double> soft_threshold(std::span<const double> v, double lambda) {
  if (!(lambda >= 0.0))
    throw std::invalid_argument("soft_threshold: lambda must be >= 0");
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double m = std::abs(v[i]) - lambda;
    out[i] = m > 0.0 ? (v[i] > 0.0 ? m : -m) : 0.0;
  }
  return out;
}

namespace {

// Enforces the regime's constraints in place.
void enforce_constraints(TwoLayerParams& p, const FunctionClassSpec& spec,
                         const std::vector<char>& support_mask) {
  // Output layer: project (a0, a) onto the V-ball.
  std::vector<double> coef(static_cast<std::size_t>(p.r) + 1);
  coef[0] = p.a0;
  std::copy(p.a.begin(), p.a.end(), coef.begin() + 1);
  double norm = 0.0;
  for (double c : coef) norm += std::abs(c);
  if (norm > spec.V) {
    coef = project_l1_ball(coef, spec.V);
    p.a0 = coef[0];
    std::copy(coef.begin() + 1, coef.end(), p.a.begin());
  }

  if (spec.regime == Regime::JointL1) {
    std::vector<double> row(static_cast<std::size_t>(p.d) + 1);
    for (int j = 0; j < p.r; ++j) {
      double* w = p.W.data() + static_cast<std::size_t>(j) * p.d;
      double s = std::abs(p.b[static_cast<std::size_t>(j)]);
      for (int t = 0; t < p.d; ++t) s += std::abs(w[t]);
      if (s <= spec.eta) continue;
      std::copy(w, w + p.d, row.begin());
      row[static_cast<std::size_t>(p.d)] = p.b[static_cast<std::size_t>(j)];
      std::vector<double> proj = project_l1_ball(row, spec.eta);
      std::copy(proj.begin(), proj.end() - 1, w);
      p.b[static_cast<std::size_t>(j)] = proj.back();
    }
  } else if (spec.regime == Regime::InputL0) {
    for (int j = 0; j < p.r; ++j) {
      double* w = p.W.data() + static_cast<std::size_t>(j) * p.d;
      for (int t = 0; t < p.d; ++t)
        if (!support_mask[static_cast<std::size_t>(t)]) w[t] = 0.0;
    }
  }
}

double grad_sq_norm(const ParamGrad& g) {
  double s = g.a0 * g.a0;
  for (double v : g.a) s += v * v;
  for (double v : g.W) s += v * v;
  for (double v : g.b) s += v * v;
  return s;
}

TwoLayerParams make_restart_init(int restart, const FunctionClassSpec& spec,
                                 const TrainConfig& config) {
  if (restart == 0) return TwoLayerParams::zeros(spec.r, spec.d);
  if (restart == 1 && config.warm_start) {
    TwoLayerParams p = *config.warm_start;
    p.validate();
    if (p.r != spec.r || p.d != spec.d)
      throw std::invalid_argument("train: warm start shape mismatch");
    return p;
  }
  // Random input layer, zero output layer: the first iterate is still the
  // zero predictor.
  TwoLayerParams p = TwoLayerParams::zeros(spec.r, spec.d);
  Rng rng(derive_seed(config.seed, {static_cast<std::uint64_t>(restart)}));
  for (double& w : p.W) w = rng.uniform(-config.init_scale, config.init_scale);
  for (double& b : p.b) b = rng.uniform(-config.init_scale, config.init_scale);
  return p;
}

}  // namespace

TrainReport train_erm(const Dataset& data, const FunctionClassSpec& spec,
                      const TrainConfig& config) {
  spec.validate();
  config.validate();
  if (data.n < 1) throw std::invalid_argument("train: empty dataset");
  if (data.d != spec.d) throw std::invalid_argument("train: dimension mismatch");

  std::vector<char> support_mask(static_cast<std::size_t>(spec.d), 1);
  if (spec.regime == Regime::InputL0) {
    support_mask.assign(static_cast<std::size_t>(spec.d), 0);
    for (int i : spec.support) support_mask[static_cast<std::size_t>(i)] = 1;
  }

  TrainReport report;
  report.best_objective = std::numeric_limits<double>::infinity();
  ParamGrad grad;
  std::vector<double> sig, dsig;

  for (int restart = 0; restart < config.restarts; ++restart) {
    TwoLayerParams params = make_restart_init(restart, spec, config);
    enforce_constraints(params, spec, support_mask);
    double obj = eval_loss_grad(params, spec.activation, data, config.loss,
                                grad, sig, dsig);
    if (!std::isfinite(obj)) {
      report.ok = false;
      report.failure_reason = "non-finite objective at initialization";
      break;
    }
    double restart_best = obj;
    int last_improve = 0;
    if (obj < report.best_objective) {
      report.best_objective = obj;
      report.best_params = params;
    }
    if (config.record_trace) report.objective_trace.push_back(obj);

    for (int t = 1; t <= config.max_iters; ++t) {
      double gamma;
      switch (config.schedule) {
        case StepSchedule::Constant:
          gamma = config.step;
          break;
        case StepSchedule::InvSqrt:
          gamma = config.step / std::sqrt(static_cast<double>(t));
          break;
        case StepSchedule::Polyak: {
          double gap = obj - config.polyak_target;
          if (gap < 0.0) gap = 0.0;
          double denom = grad_sq_norm(grad);
          gamma = denom > 1e-300 ? config.step * gap / denom : 0.0;
          break;
        }
        default:
          throw std::logic_error("unknown schedule");
      }

      params.a0 -= gamma * grad.a0;
      for (int j = 0; j < spec.r; ++j)
        params.a[static_cast<std::size_t>(j)] -= gamma * grad.a[static_cast<std::size_t>(j)];
      for (std::size_t i = 0; i < params.W.size(); ++i)
        params.W[i] -= gamma * grad.W[i];
      for (int j = 0; j < spec.r; ++j)
        params.b[static_cast<std::size_t>(j)] -= gamma * grad.b[static_cast<std::size_t>(j)];
      enforce_constraints(params, spec, support_mask);

      obj = eval_loss_grad(params, spec.activation, data, config.loss, grad,
                           sig, dsig);
      ++report.iters_run;
      if (!std::isfinite(obj)) {
        report.ok = false;
        report.failure_reason = "non-finite objective at iteration " +
                                std::to_string(t) + " of restart " +
                                std::to_string(restart);
        break;
      }
      if (config.record_trace) report.objective_trace.push_back(obj);
      if (obj < report.best_objective) {
        report.best_objective = obj;
        report.best_params = params;
      }
      if (obj < restart_best - config.tolerance) {
        restart_best = obj;
        last_improve = t;
      }
      if (config.tolerance > 0.0 && t - last_improve >= config.plateau_window)
        break;
    }
    if (!report.ok) break;
  }

  if (report.ok) {
    FeasibilityReport feas = check_feasibility(report.best_params, spec);
    report.constraint_residual =
        std::max({feas.output_residual, feas.neuron_residual,
                  feas.off_support_residual});
  }
  return report;
}

FeasibilityReport check_feasibility(const TwoLayerParams& p,
                                    const FunctionClassSpec& spec) {
  constexpr double kSlack = 1e-12;
  FeasibilityReport report;
  report.output_residual = std::max(0.0, output_l1_norm(p) - spec.V);
  if (spec.regime == Regime::JointL1) {
    double worst = 0.0;
    for (double norm : neuron_l1_norms(p))
      worst = std::max(worst, norm - spec.eta);
    report.neuron_residual = std::max(0.0, worst);
  }
  if (spec.regime == Regime::InputL0) {
    std::vector<char> mask(static_cast<std::size_t>(spec.d), 0);
    for (int i : spec.support) mask[static_cast<std::size_t>(i)] = 1;
    double worst = 0.0;
    for (int j = 0; j < p.r; ++j) {
      const double* w = p.W.data() + static_cast<std::size_t>(j) * p.d;
      for (int t = 0; t < p.d; ++t)
        if (!mask[static_cast<std::size_t>(t)])
          worst = std::max(worst, std::abs(w[t]));
    }
    report.off_support_residual = worst;
  }
  report.feasible = report.output_residual <= kSlack &&
                    report.neuron_residual <= kSlack &&
                    report.off_support_residual <= kSlack;
  return report;
}

}  // namespace l1net
