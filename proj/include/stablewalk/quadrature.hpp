#pragma once

#include <vector>

namespace stablewalk {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Rules of order 1..64, computed once by Newton iteration on P_n.
const GaussRule& gauss_legendre(int order);

/// Integral of f over [a, b] with the given rule.
template <class F>
double integrate(const GaussRule& rule, F&& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    s += rule.weights[k] * f(mid + half * rule.nodes[k]);
  }
  return half * s;
}

/// Mean of |a + b x|^p over x in [0, 1]. Closed form through the
/// antiderivative sign(y)|y|^{p+1}/(p+1); falls back to an 8-point rule when
/// the slope is too small for the closed form to be well conditioned.
double mean_abs_pow(double a, double b, double p);

}  // namespace stablewalk
