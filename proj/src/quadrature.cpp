#include "stablewalk/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include "stablewalk/errors.hpp"

namespace stablewalk {

namespace {

constexpr int kMaxOrder = 64;

// Returns (P_n(x), P_n'(x)) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

GaussRule compute_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [pn, dpn] = legendre(n, x);
      const double dx = pn / dpn;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    const double dpn = legendre(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dpn * dpn);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  static const std::array<GaussRule, kMaxOrder + 1> rules = [] {
    std::array<GaussRule, kMaxOrder + 1> r;
    for (int n = 1; n <= kMaxOrder; ++n) r[n] = compute_rule(n);
    return r;
  }();
  if (order < 1 || order > kMaxOrder) throw DomainError("Gauss-Legendre order must be in [1, 64]");
  return rules[order];
}

double mean_abs_pow(double a, double b, double p) {
  const double lo = std::fabs(a);
  const double hi = std::fabs(a + b);
  const double big = std::max(lo, hi);
  if (big == 0.0) return 0.0;
  if (std::fabs(b) <= 1e-3 * big) {
    // Nearly constant and sign-definite; integrand is analytic on [0, 1].
    const GaussRule& g = gauss_legendre(8);
    return integrate(g, [&](double x) { return std::pow(std::fabs(a + b * x), p); }, 0.0, 1.0);
  }
  auto anti = [p](double y) { return std::copysign(std::pow(std::fabs(y), p + 1.0), y); };
  return (anti(a + b) - anti(a)) / (b * (p + 1.0));
}

}  // namespace stablewalk
