#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace l1net {

// splitmix64 step; also the basis for deriving independent sub-stream seeds.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic seed for a sub-stream identified by a path of ids, e.g.
// derive_seed(master, {study, d, n, replicate}). Independent of evaluation
// order, so parallel and serial runs see identical streams.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = master;
  std::uint64_t out = splitmix64_next(s);
  for (std::uint64_t id : path) {
    s = out ^ (id + 0x9e3779b97f4a7c15ULL + (out << 6) + (out >> 2));
    out = splitmix64_next(s);
  }
  return out;
}

// mt19937_64 engine with hand-rolled variate transforms. The standard pins
// the engine output exactly; the std:: distributions are implementation
// defined, so we do the transforms ourselves to keep datasets bit-identical
// for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // [0, 1)
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  // N(0,1) via Box-Muller; caches the second variate.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform01();  // (0, 1]
    double u2 = uniform01();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = kTwoPi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  // Symmetric Laplace with the given scale (variance 2*scale^2).
  double laplace(double scale) {
    double u = uniform01() - 0.5;
    double t = 1.0 - 2.0 * std::abs(u);
    if (t < kTinyPositive) t = kTinyPositive;
    double mag = -scale * std::log(t);
    return u < 0 ? -mag : mag;
  }

  // +1 or -1 with equal probability.
  int sign() { return (engine_() & 1ULL) ? 1 : -1; }

 private:
  static constexpr double kTwoPi = 6.283185307179586476925286766559;
  static constexpr double kTinyPositive = 2.2250738585072014e-308;

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace l1net
