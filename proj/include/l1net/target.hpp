#pragma once

#include <span>
#include <string>
#include <vector>

#include "l1net/rng.hpp"

namespace l1net {

// One cosine component c * cos(w . x + phi).
struct CosineAtom {
  double amplitude = 0.0;
  std::vector<double> frequency;  // length d
  double phase = 0.0;
};

// Ground truth f_*(x) = sum_k c_k cos(w_k . x + phi_k). A finite cosine
// mixture has an atomic Fourier magnitude measure, so its smoothness
// constant is exact and the admissible output budget is computable.
struct TargetSpec {
  std::string name = "target";
  int d = 1;
  std::vector<CosineAtom> atoms;

  void validate() const;
  std::vector<int> support() const;  // 0-based coords with a nonzero frequency
};

double eval_target(const TargetSpec& target, std::span<const double> x);

// Pads atom frequencies with zeros up to dimension d (d >= target.d).
TargetSpec embed_target(const TargetSpec& target, int d);

enum class DistKind { UniformBox, StandardGaussian };

struct DataDistribution {
  DistKind kind = DistKind::UniformBox;
  int d = 1;
  double M = 1.0;  // uniform-box half width

  void validate() const;
};

enum class NoiseKind { None, Gaussian, Laplace };

// Symmetric-at-zero noise with second moment bounded by tau^2 and E|eps|
// available in closed form.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::None;
  double sd = 0.0;     // gaussian
  double scale = 0.0;  // laplace
  double tau = 0.0;

  static NoiseSpec none();
  static NoiseSpec gaussian(double sd);   // tau = sd
  static NoiseSpec laplace(double scale); // tau = sqrt(2) * scale

  double mean_abs() const;
  double sample(Rng& rng) const;
  void validate() const;
};

std::string to_string(DistKind k);
std::string to_string(NoiseKind k);

// Total ||w||_X mass of the Fourier measure: sum_k |c_k| * M * ||w_k||_1.
// Only defined for the bounded box; Gaussian inputs are rejected.
double barron_constant(const TargetSpec& target, const DataDistribution& dist);

// Smallest admissible output budget, 2*C + f_*(0).
double min_admissible_v(const TargetSpec& target, const DataDistribution& dist);

}  // namespace l1net
