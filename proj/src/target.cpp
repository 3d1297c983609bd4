#include "l1net/target.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace l1net {

void TargetSpec::validate() const {
  if (d < 1) throw std::invalid_argument("target: d must be >= 1");
  for (const CosineAtom& atom : atoms) {
    if (atom.frequency.size() != static_cast<std::size_t>(d))
      throw std::invalid_argument("target: atom frequency length != d");
    if (!std::isfinite(atom.amplitude) || !std::isfinite(atom.phase))
      throw std::invalid_argument("target: non-finite atom");
    for (double f : atom.frequency)
      if (!std::isfinite(f))
        throw std::invalid_argument("target: non-finite frequency");
  }
  for (char c : name)
    if (c == ',' || c == '\n' || c == '\r')
      throw std::invalid_argument("target: name may not contain ',' or newlines");
}

std::vector<int> TargetSpec::support() const {
  std::set<int> coords;
  for (const CosineAtom& atom : atoms)
    for (int i = 0; i < d; ++i)
      if (atom.frequency[static_cast<std::size_t>(i)] != 0.0) coords.insert(i);
  return {coords.begin(), coords.end()};
}

double eval_target(const TargetSpec& target, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(target.d))
    throw std::invalid_argument("eval_target: x has dimension " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(target.d));
  double out = 0.0;
  for (const CosineAtom& atom : target.atoms) {
    double z = atom.phase;
    for (int i = 0; i < target.d; ++i)
      z += atom.frequency[static_cast<std::size_t>(i)] *
           x[static_cast<std::size_t>(i)];
    out += atom.amplitude * std::cos(z);
  }
  return out;
}

TargetSpec embed_target(const TargetSpec& target, int d) {
  if (d < target.d)
    throw std::invalid_argument("embed_target: d smaller than target dimension");
  TargetSpec out = target;
  out.d = d;
  for (CosineAtom& atom : out.atoms)
    atom.frequency.resize(static_cast<std::size_t>(d), 0.0);
  return out;
}

void DataDistribution::validate() const {
  if (d < 1) throw std::invalid_argument("distribution: d must be >= 1");
  if (kind == DistKind::UniformBox && !(M > 0.0))
    throw std::invalid_argument("distribution: box half-width M must be > 0");
}

NoiseSpec NoiseSpec::none() { return NoiseSpec{}; }

NoiseSpec NoiseSpec::gaussian(double sd) {
  if (!(sd >= 0.0)) throw std::invalid_argument("noise: sd must be >= 0");
  NoiseSpec spec;
  spec.kind = NoiseKind::Gaussian;
  spec.sd = sd;
  spec.tau = sd;
  return spec;
}

NoiseSpec NoiseSpec::laplace(double scale) {
  if (!(scale >= 0.0)) throw std::invalid_argument("noise: scale must be >= 0");
  NoiseSpec spec;
  spec.kind = NoiseKind::Laplace;
  spec.scale = scale;
  spec.tau = std::sqrt(2.0) * scale;
  return spec;
}

double NoiseSpec::mean_abs() const {
  switch (kind) {
    case NoiseKind::None: return 0.0;
    case NoiseKind::Gaussian:
      return sd * std::sqrt(2.0 / 3.14159265358979323846);
    case NoiseKind::Laplace: return scale;
  }
  throw std::logic_error("unknown noise kind");
}

double NoiseSpec::sample(Rng& rng) const {
  switch (kind) {
    case NoiseKind::None: return 0.0;
    case NoiseKind::Gaussian: return sd * rng.normal();
    case NoiseKind::Laplace: return rng.laplace(scale);
  }
  throw std::logic_error("unknown noise kind");
}

void NoiseSpec::validate() const {
  if (!(tau >= 0.0) || !std::isfinite(tau))
    throw std::invalid_argument("noise: tau must be a finite value >= 0");
  double variance = 0.0;
  if (kind == NoiseKind::Gaussian) variance = sd * sd;
  if (kind == NoiseKind::Laplace) variance = 2.0 * scale * scale;
  if (variance > tau * tau * (1.0 + 1e-12))
    throw std::invalid_argument("noise: variance exceeds tau^2");
}

std::string to_string(DistKind k) {
  switch (k) {
    case DistKind::UniformBox: return "uniform-box";
    case DistKind::StandardGaussian: return "standard-gaussian";
  }
  throw std::logic_error("unknown distribution kind");
}

std::string to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::None: return "none";
    case NoiseKind::Gaussian: return "gaussian";
    case NoiseKind::Laplace: return "laplace";
  }
  throw std::logic_error("unknown noise kind");
}

double barron_constant(const TargetSpec& target, const DataDistribution& dist) {
  target.validate();
  dist.validate();
  if (dist.kind != DistKind::UniformBox)
    throw std::invalid_argument(
        "barron_constant: only defined for uniform-box inputs (||.||_X is "
        "unbounded for Gaussian inputs)");
  if (dist.d != target.d)
    throw std::invalid_argument("barron_constant: dimension mismatch");
  double total = 0.0;
  for (const CosineAtom& atom : target.atoms) {
    double freq_l1 = 0.0;
    for (double f : atom.frequency) freq_l1 += std::abs(f);
    total += std::abs(atom.amplitude) * dist.M * freq_l1;
  }
  return total;
}

double min_admissible_v(const TargetSpec& target, const DataDistribution& dist) {
  double C = barron_constant(target, dist);
  std::vector<double> origin(static_cast<std::size_t>(target.d), 0.0);
  return 2.0 * C + eval_target(target, origin);
}

}  // namespace l1net
