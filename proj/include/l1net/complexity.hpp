#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "l1net/class_spec.hpp"

namespace l1net {

struct RademacherEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  int trials = 0;
  int inner_restarts = 0;
};

// Inputs shared by the closed-form bound calculators. All bounds are
// evaluated with constant 1; only shapes, orderings and exponents are
// meaningful.
struct BoundInputs {
  double C = 0.0;
  double V = 0.0;
  double eta = 0.0;
  double tau = 0.0;
  double r = 1.0;
  double d = 1.0;
  double k = 1.0;
  double n = 2.0;

  void validate() const;  // finite, nonnegative, n >= 2
};

// inf over eps in (0, 1/2) of 2*eps + sup_{|t|>eps} |sigma(eta t) - 1{t>0}|.
// Log-spaced 10^4-point grid refined by golden section; nonincreasing in eta
// and bounded in (0, 1].
double activation_step_deficit(const ActivationSpec& act, double eta);

struct InnerMaxConfig {
  int restarts = 20;
  int iters = 500;
  double step = 2.0;        // normalized-ascent step scale, decays 1/sqrt(t)
  double init_scale = 8.0;  // uniform init range for (w, b)
};

struct InnerMaxResult {
  double best = 0.0;
  std::vector<double> init_values;  // |correlation| at each restart's init
};

// max over a single neuron (w, b), honoring the regime's input-layer
// constraints, of |n^-1 sum_i xi_i sigma(w.x_i + b)|. The constant feature
// |n^-1 sum_i xi_i| is always a candidate. Multi-restart projected gradient
// ascent; the result is a certified lower bound on the true sup.
InnerMaxResult max_neuron_correlation(std::span<const double> X, int n, int d,
                                      std::span<const double> xi,
                                      const FunctionClassSpec& spec,
                                      const InnerMaxConfig& config,
                                      std::uint64_t seed);

// Monte Carlo estimate of E_xi sup_{f in class} |n^-1 sum_i xi_i f(x_i)|
// on a fixed design X. The sup over the class equals V times the single
// neuron sup, so the estimate is exactly linear in V.
RademacherEstimate rademacher_mc(const FunctionClassSpec& spec,
                                 std::span<const double> X, int n, int d,
                                 int trials, const InnerMaxConfig& config,
                                 std::uint64_t seed, int threads = 1);

// V * sqrt(log n / n) * max_j (||w_j||_1 + |b_j|).
double rademacher_norm_bound(std::span<const double> neuron_norms, double V,
                             double n);

// 2C (1/sqrt(r) + delta).
double approximation_bound(const BoundInputs& in, double delta);

// round(V sqrt(n / (d log n))), at least 1.
long suggested_neuron_count(const BoundInputs& in);

// (1/sqrt(r) + delta) C + (V sqrt(d log n) + tau) / sqrt(n).
double output_l1_risk_bound(const BoundInputs& in, double delta);

// V sqrt(d / n).
double minimax_risk_floor(const BoundInputs& in);

// sqrt(k log(d n) / n).
double sparse_support_risk_bound(const BoundInputs& in);

// C (1/sqrt(r) + delta) + (V eta + tau) / sqrt(n).
double joint_l1_risk_bound(const BoundInputs& in, double delta);

// (n (log n)^2)^(1/3).
double joint_l1_eta_choice(double n);

// V ((log n) / n)^(1/3), the closed-form rate the joint constraint attains
// under the eta choice above.
double joint_l1_risk_rate(const BoundInputs& in);

}  // namespace l1net
