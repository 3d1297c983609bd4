#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "l1net/activation.hpp"

namespace l1net {

// Two-layer network f(x) = a0 + sum_j a[j] * sigma(w_j . x + b[j]).
// W is r x d row-major; row j holds w_j. r = 0 (constant model) is allowed.
struct TwoLayerParams {
  int r = 0;
  int d = 0;
  double a0 = 0.0;
  std::vector<double> a;  // size r
  std::vector<double> W;  // size r*d
  std::vector<double> b;  // size r

  static TwoLayerParams zeros(int r, int d);

  std::span<const double> row(int j) const {
    return {W.data() + static_cast<std::size_t>(j) * d,
            static_cast<std::size_t>(d)};
  }

  bool all_finite() const;
  void validate() const;  // throws std::invalid_argument on bad shape
};

double forward(const TwoLayerParams& p, const ActivationSpec& act,
               std::span<const double> x);

// |a0| + sum_j |a_j|; the output bias counts toward the budget.
double output_l1_norm(const TwoLayerParams& p);

// Entry j is ||w_j||_1 + |b_j|.
std::vector<double> neuron_l1_norms(const TwoLayerParams& p);

// 0-based input coordinates i with |W[j,i]| > tolerance for some j.
std::vector<int> support_of(const TwoLayerParams& p, double tolerance);

// Flat key-value text: r, d, a0, a, W (row-major), b; values round-trip
// exactly at 17 significant digits.
void save_params(const TwoLayerParams& p, std::ostream& out);
TwoLayerParams load_params(std::istream& in);
void save_params_file(const TwoLayerParams& p, const std::string& path);
TwoLayerParams load_params_file(const std::string& path);

}  // namespace l1net
