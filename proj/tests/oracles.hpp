#pragma once

// Test-only oracles, independent of the library's implementation paths.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "l1net/optim.hpp"
#include "l1net/rng.hpp"

namespace oracles {

// Central finite differences of the empirical loss over every parameter,
// laid out like ParamGrad.
inline l1net::ParamGrad fd_gradient(const l1net::TwoLayerParams& p,
                                    const l1net::ActivationSpec& act,
                                    const l1net::Dataset& data,
                                    l1net::Loss loss, double h) {
  l1net::TwoLayerParams work = p;
  auto diff = [&](double& slot) {
    double keep = slot;
    slot = keep + h;
    double up = l1net::empirical_loss(work, act, data, loss);
    slot = keep - h;
    double down = l1net::empirical_loss(work, act, data, loss);
    slot = keep;
    return (up - down) / (2.0 * h);
  };
  l1net::ParamGrad g;
  g.a0 = diff(work.a0);
  g.a.resize(work.a.size());
  for (std::size_t i = 0; i < work.a.size(); ++i) g.a[i] = diff(work.a[i]);
  g.W.resize(work.W.size());
  for (std::size_t i = 0; i < work.W.size(); ++i) g.W[i] = diff(work.W[i]);
  g.b.resize(work.b.size());
  for (std::size_t i = 0; i < work.b.size(); ++i) g.b[i] = diff(work.b[i]);
  return g;
}

// Symmetric relative error between two gradients.
inline double gradient_rel_error(const l1net::ParamGrad& a,
                                 const l1net::ParamGrad& b) {
  double diff = (a.a0 - b.a0) * (a.a0 - b.a0);
  double na = a.a0 * a.a0, nb = b.a0 * b.a0;
  auto acc = [&](const std::vector<double>& u, const std::vector<double>& v) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      diff += (u[i] - v[i]) * (u[i] - v[i]);
      na += u[i] * u[i];
      nb += v[i] * v[i];
    }
  };
  acc(a.a, b.a);
  acc(a.W, b.W);
  acc(a.b, b.b);
  return std::sqrt(diff) / (std::sqrt(na) + std::sqrt(nb) + 1e-300);
}

// L1-ball projection by bisection on the threshold: the unique theta >= 0
// with sum_i max(|v_i| - theta, 0) = V.
inline std::vector<double> project_l1_bisect(const std::vector<double>& v,
                                             double V) {
  double norm = 0.0, hi = 0.0;
  for (double x : v) {
    norm += std::abs(x);
    hi = std::max(hi, std::abs(x));
  }
  if (norm <= V) return v;
  std::vector<double> out(v.size());
  if (V == 0.0) return out;
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    double theta = 0.5 * (lo + hi);
    double s = 0.0;
    for (double x : v) s += std::max(std::abs(x) - theta, 0.0);
    (s > V ? lo : hi) = theta;
  }
  double theta = 0.5 * (lo + hi);
  for (std::size_t i = 0; i < v.size(); ++i) {
    double m = std::max(std::abs(v[i]) - theta, 0.0);
    out[i] = v[i] >= 0.0 ? m : -m;
  }
  return out;
}

// Dense uniform-grid minimizer of 2*eps + 1/(1 + exp(eta*eps)) on (0, 1/2);
// adequate for moderate eta where the minimizer is not microscopic.
inline double delta_eta_dense(double eta, int points = 2000000) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 1; i < points; ++i) {
    double eps = 0.5 * i / points;
    double val = 2.0 * eps + 1.0 / (1.0 + std::exp(eta * eps));
    best = std::min(best, val);
  }
  return best;
}

inline l1net::TwoLayerParams random_params(int r, int d, l1net::Rng& rng,
                                           double scale = 1.0) {
  l1net::TwoLayerParams p = l1net::TwoLayerParams::zeros(r, d);
  p.a0 = rng.uniform(-scale, scale);
  for (double& v : p.a) v = rng.uniform(-scale, scale);
  for (double& v : p.W) v = rng.uniform(-scale, scale);
  for (double& v : p.b) v = rng.uniform(-scale, scale);
  return p;
}

inline l1net::Dataset random_dataset(int n, int d, l1net::Rng& rng,
                                     double x_scale = 1.0,
                                     double y_scale = 1.0) {
  l1net::Dataset data;
  data.n = n;
  data.d = d;
  data.X.resize(static_cast<std::size_t>(n) * d);
  data.y.resize(static_cast<std::size_t>(n));
  for (double& v : data.X) v = rng.uniform(-x_scale, x_scale);
  for (double& v : data.y) v = rng.uniform(-y_scale, y_scale);
  return data;
}

}  // namespace oracles
