#include "l1net/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "l1net/optim.hpp"
#include "l1net/parallel.hpp"
#include "l1net/rng.hpp"

namespace l1net {

void BoundInputs::validate() const {
  for (double v : {C, V, eta, tau})
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("bound inputs: C, V, eta, tau must be >= 0");
  if (!(r >= 1.0) || !(d >= 1.0) || !(k >= 1.0))
    throw std::invalid_argument("bound inputs: r, d, k must be >= 1");
  if (!(n >= 2.0))
    throw std::invalid_argument("bound inputs: n must be >= 2");
}

namespace {

constexpr double kGolden = 0.6180339887498949;

// Golden-section minimization on [lo, hi]; assumes a well-behaved 1-D
// objective (ours is convex in eps).
template <typename F>
double golden_min(F f, double lo, double hi, int iters) {
  double x1 = hi - kGolden * (hi - lo);
  double x2 = lo + kGolden * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < iters; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGolden * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGolden * (hi - lo);
      f2 = f(x2);
    }
  }
  return std::min(f1, f2);
}

}  // namespace

double activation_step_deficit(const ActivationSpec& act, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("step deficit: eta must be > 0");
  auto objective = [&](double eps) { return 2.0 * eps + act.step_gap(eta, eps); };

  // Log-spaced grid over (0, 1/2): the minimizer scales like log(eta)/eta,
  // so uniform spacing would miss it for large eta.
  constexpr int kGridPoints = 10000;
  const double lo = 1e-9;
  const double hi = 0.5;
  const double ratio = std::log(hi / lo) / (kGridPoints - 1);
  double best_val = std::numeric_limits<double>::infinity();
  int best_idx = 0;
  std::vector<double> grid(kGridPoints);
  for (int i = 0; i < kGridPoints; ++i) {
    grid[static_cast<std::size_t>(i)] = lo * std::exp(ratio * i);
    double v = objective(grid[static_cast<std::size_t>(i)]);
    if (v < best_val) {
      best_val = v;
      best_idx = i;
    }
  }
  double bracket_lo = grid[static_cast<std::size_t>(std::max(best_idx - 1, 0))];
  double bracket_hi =
      grid[static_cast<std::size_t>(std::min(best_idx + 1, kGridPoints - 1))];
  double refined = golden_min(objective, bracket_lo, bracket_hi, 80);
  return std::min(best_val, refined);
}

namespace {

struct NeuronConstraint {
  Regime regime;
  double eta = 0.0;
  std::vector<char> mask;  // InputL0 support mask, size d

  void apply(std::vector<double>& wb, int d) const {
    if (regime == Regime::JointL1) {
      double norm = 0.0;
      for (double v : wb) norm += std::abs(v);
      if (norm > eta) wb = project_l1_ball(wb, eta);
    } else if (regime == Regime::InputL0) {
      for (int t = 0; t < d; ++t)
        if (!mask[static_cast<std::size_t>(t)]) wb[static_cast<std::size_t>(t)] = 0.0;
    }
  }
};

}  // namespace

InnerMaxResult max_neuron_correlation(std::span<const double> X, int n, int d,
                                      std::span<const double> xi,
                                      const FunctionClassSpec& spec,
                                      const InnerMaxConfig& config,
                                      std::uint64_t seed) {
  if (n < 1 || d < 1) throw std::invalid_argument("inner max: empty design");
  if (X.size() != static_cast<std::size_t>(n) * d ||
      xi.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("inner max: shape mismatch");

  const ActivationSpec& act = spec.activation;
  NeuronConstraint constraint;
  constraint.regime = spec.regime;
  constraint.eta = spec.eta;
  if (spec.regime == Regime::InputL0) {
    constraint.mask.assign(static_cast<std::size_t>(d), 0);
    for (int i : spec.support) constraint.mask[static_cast<std::size_t>(i)] = 1;
  }

  const double inv_n = 1.0 / n;
  double mean_xi = 0.0;
  for (int i = 0; i < n; ++i) mean_xi += xi[static_cast<std::size_t>(i)];
  mean_xi *= inv_n;

  InnerMaxResult result;
  // The constant direction is always admissible (b dominates w.x).
  result.best = std::abs(mean_xi);
  result.init_values.reserve(static_cast<std::size_t>(config.restarts));

  std::vector<double> wb(static_cast<std::size_t>(d) + 1);
  std::vector<double> grad(static_cast<std::size_t>(d) + 1);
  for (int restart = 0; restart < config.restarts; ++restart) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(restart)}));
    for (double& v : wb) v = rng.uniform(-config.init_scale, config.init_scale);
    constraint.apply(wb, d);

    double init_val = -1.0;
    for (int t = 0; t <= config.iters; ++t) {
      double corr = 0.0;
      std::fill(grad.begin(), grad.end(), 0.0);
      for (int i = 0; i < n; ++i) {
        const double* x = X.data() + static_cast<std::size_t>(i) * d;
        double z = wb[static_cast<std::size_t>(d)];
        for (int c = 0; c < d; ++c) z += wb[static_cast<std::size_t>(c)] * x[c];
        double s = act.value(z);
        double xs = xi[static_cast<std::size_t>(i)];
        corr += xs * s;
        double gz = xs * s * (1.0 - s);
        for (int c = 0; c < d; ++c) grad[static_cast<std::size_t>(c)] += gz * x[c];
        grad[static_cast<std::size_t>(d)] += gz;
      }
      corr *= inv_n;
      double value = std::abs(corr);
      if (t == 0) init_val = value;
      if (value > result.best) result.best = value;
      if (t == config.iters) break;

      double direction = corr >= 0.0 ? 1.0 : -1.0;
      double gnorm = 0.0;
      for (double g : grad) gnorm += g * g;
      gnorm = std::sqrt(gnorm) * inv_n;
      if (gnorm < 1e-14) break;
      double gamma =
          config.step / std::sqrt(static_cast<double>(t + 1)) / (gnorm * n);
      for (std::size_t c = 0; c < wb.size(); ++c)
        wb[c] += gamma * direction * grad[c];
      constraint.apply(wb, d);
    }
    result.init_values.push_back(init_val);
  }
  return result;
}

RademacherEstimate rademacher_mc(const FunctionClassSpec& spec,
                                 std::span<const double> X, int n, int d,
                                 int trials, const InnerMaxConfig& config,
                                 std::uint64_t seed, int threads) {
  spec.validate();
  if (trials < 1) throw std::invalid_argument("rademacher: trials must be >= 1");
  if (n < 1 || X.size() != static_cast<std::size_t>(n) * d)
    throw std::invalid_argument("rademacher: shape mismatch");

  std::vector<double> inner(static_cast<std::size_t>(trials));
  parallel_for(trials, threads, [&](int trial) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(trial), 0}));
    std::vector<double> xi(static_cast<std::size_t>(n));
    for (double& v : xi) v = static_cast<double>(rng.sign());
    InnerMaxResult r = max_neuron_correlation(
        X, n, d, xi, spec, config,
        derive_seed(seed, {static_cast<std::uint64_t>(trial), 1}));
    inner[static_cast<std::size_t>(trial)] = r.best;
  });

  double mean_inner = 0.0;
  for (double v : inner) mean_inner += v;
  mean_inner /= trials;
  double var = 0.0;
  for (double v : inner) var += (v - mean_inner) * (v - mean_inner);
  var = trials > 1 ? var / (trials - 1) : 0.0;

  RademacherEstimate est;
  est.trials = trials;
  est.inner_restarts = config.restarts;
  // Linear in V by construction, so doubling V exactly doubles the estimate.
  est.mean = spec.V * mean_inner;
  est.std_error = spec.V * std::sqrt(var / trials);
  return est;
}

double rademacher_norm_bound(std::span<const double> neuron_norms, double V,
                             double n) {
  if (!(n >= 2.0)) throw std::invalid_argument("norm bound: n must be >= 2");
  if (!(V >= 0.0)) throw std::invalid_argument("norm bound: V must be >= 0");
  double max_norm = 0.0;
  for (double v : neuron_norms) max_norm = std::max(max_norm, v);
  return V * std::sqrt(std::log(n) / n) * max_norm;
}

double approximation_bound(const BoundInputs& in, double delta) {
  in.validate();
  return 2.0 * in.C * (1.0 / std::sqrt(in.r) + delta);
}

long suggested_neuron_count(const BoundInputs& in) {
  in.validate();
  double raw = in.V * std::sqrt(in.n / (in.d * std::log(in.n)));
  long r = std::lround(raw);
  return r < 1 ? 1 : r;
}

double output_l1_risk_bound(const BoundInputs& in, double delta) {
  in.validate();
  return (1.0 / std::sqrt(in.r) + delta) * in.C +
         (in.V * std::sqrt(in.d * std::log(in.n)) + in.tau) / std::sqrt(in.n);
}

double minimax_risk_floor(const BoundInputs& in) {
  in.validate();
  return in.V * std::sqrt(in.d / in.n);
}

double sparse_support_risk_bound(const BoundInputs& in) {
  in.validate();
  return std::sqrt(in.k * std::log(in.d * in.n) / in.n);
}

double joint_l1_risk_bound(const BoundInputs& in, double delta) {
  in.validate();
  return in.C * (1.0 / std::sqrt(in.r) + delta) +
         (in.V * in.eta + in.tau) / std::sqrt(in.n);
}

double joint_l1_eta_choice(double n) {
  if (!(n >= 2.0)) throw std::invalid_argument("eta choice: n must be >= 2");
  double ln = std::log(n);
  return std::cbrt(n * ln * ln);
}

double joint_l1_risk_rate(const BoundInputs& in) {
  in.validate();
  return in.V * std::cbrt(std::log(in.n) / in.n);
}

}  // namespace l1net
