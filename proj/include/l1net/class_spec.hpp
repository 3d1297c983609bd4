#pragma once

#include <string>
#include <vector>

#include "l1net/activation.hpp"

namespace l1net {

// Constraint regime for the estimator class.
//   OutputL1: |a0| + ||a||_1 <= V
//   JointL1:  OutputL1 plus ||w_j||_1 + |b_j| <= eta per neuron
//   InputL0:  OutputL1 plus each w_j supported on a given index set
enum class Regime { OutputL1, JointL1, InputL0 };

std::string to_string(Regime regime);
Regime regime_from_string(const std::string& name);

struct FunctionClassSpec {
  Regime regime = Regime::OutputL1;
  double V = 1.0;
  double eta = 0.0;            // JointL1 only, > 0
  int k = 0;                   // InputL0 only, 1 <= k <= d
  std::vector<int> support;    // InputL0 only, 0-based, size k
  ActivationSpec activation;
  int r = 1;
  int d = 1;

  static FunctionClassSpec output_l1(double V, int r, int d);
  static FunctionClassSpec joint_l1(double V, double eta, int r, int d);
  static FunctionClassSpec input_l0(double V, std::vector<int> support, int r,
                                    int d);

  void validate() const;  // throws std::invalid_argument
};

}  // namespace l1net
