#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace l1net {

enum class ActivationKind { LogisticSigmoid };

// Bounded, nondecreasing activation with limits 1 at +inf and 0 at -inf.
// Only the logistic sigmoid ships; the enum leaves room for others.
struct ActivationSpec {
  ActivationKind kind = ActivationKind::LogisticSigmoid;

  double lipschitz() const { return 0.25; }

  double value(double x) const {
    if (x >= 0.0) {
      double e = std::exp(-x);
      return 1.0 / (1.0 + e);
    }
    double e = std::exp(x);
    return e / (1.0 + e);
  }

  double derivative(double x) const {
    double s = value(x);
    return s * (1.0 - s);
  }

  // sup over |t| > eps of |sigma(eta*t) - 1{t > 0}|. For the logistic both
  // tails give the same boundary value sigma(-eta*eps).
  double step_gap(double eta, double eps) const {
    double z = eta * eps;
    double lower = value(-z);         // t -> eps+ from above
    double upper = 1.0 - value(z);    // t -> -eps from below, reflected
    return lower > upper ? lower : upper;
  }
};

inline std::string to_string(ActivationKind k) {
  switch (k) {
    case ActivationKind::LogisticSigmoid: return "logistic";
  }
  throw std::logic_error("unknown activation kind");
}

}  // namespace l1net
