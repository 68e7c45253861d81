#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "stablewalk/rng.hpp"

namespace stablewalk {

/// Symmetric Pareto law with density (alpha/2)|y|^{-alpha-1} on |y| > 1.
class SymmetricParetoLaw {
 public:
  explicit SymmetricParetoLaw(double alpha);

  double alpha() const noexcept { return alpha_; }

  double cdf(double y) const;
  double quantile(double u) const;

 private:
  double alpha_;
};

/// Symmetric law in the normal domain of attraction of an alpha-stable law.
///
/// For t >= 1, P(Y > t) = (A + K t^{-gamma}) / (2 t^alpha); the same on the
/// negative side. The remaining mass 1 - (A + K) is spread uniformly over
/// [-1, 1]. With A = 1, K = 0 this is the symmetric Pareto law.
class PerturbedTailLaw {
 public:
  PerturbedTailLaw(double alpha, double A, double K, double gamma);

  double alpha() const noexcept { return alpha_; }
  double A() const noexcept { return A_; }
  double K() const noexcept { return K_; }
  double gamma() const noexcept { return gamma_; }

  /// P(Y > t) for t >= 1.
  double survival(double t) const;
  double cdf(double y) const;
  /// Density of Y; finite everywhere except possibly the jumps at +-1.
  double density(double y) const;
  /// Generalized inverse, solved by bisection in the tails.
  double quantile(double u) const;

 private:
  double tail_quantile(double v) const;

  double alpha_;
  double A_;
  double K_;
  double gamma_;
};

using HeavyTailLaw = std::variant<SymmetricParetoLaw, PerturbedTailLaw>;

/// Symmetric alpha-stable law with characteristic function
/// exp(-|scale * theta|^alpha).
class StableLaw {
 public:
  explicit StableLaw(double alpha, double scale = 1.0);

  double alpha() const noexcept { return alpha_; }
  double scale() const noexcept { return scale_; }

 private:
  double alpha_;
  double scale_;
};

/// Upper-tail quantile of a symmetric stable law: x with P(X > x) = v, from
/// the first five terms of the large-x expansion of the survival function.
/// Accurate once those terms have decayed; stable_series_threshold gives the
/// largest v for which the fifth term is below 1e-5 of the first.
double stable_upper_quantile(const StableLaw& law, double v);
double stable_series_threshold(double alpha);

/// Sorted pool of stable draws used as a numeric quantile function.
///
/// Inside the body the quantile interpolates order statistics. In each tail
/// of mass tail_fraction (capped at stable_series_threshold) it switches to
/// stable_upper_quantile: a pool of 10^6 draws holds only ~100 points beyond
/// v = 1e-4 and none beyond 1e-6, and a clamped or noisy tail would dominate
/// any coupling with a law of the same tail index. tail_fraction = 0 keeps
/// plain interpolation all the way out, clamped at the extreme draws.
class QuantileTable {
 public:
  static constexpr std::size_t kMinPoolSize = 100000;
  static constexpr double kDefaultTailFraction = 0.01;

  QuantileTable(StableLaw law, std::vector<double> sorted_pool,
                double tail_fraction = kDefaultTailFraction);

  const StableLaw& law() const noexcept { return law_; }
  double alpha() const noexcept { return law_.alpha(); }
  std::size_t pool_size() const noexcept { return pool_.size(); }
  std::span<const double> sorted_pool() const noexcept { return pool_; }
  /// Tail mass handled by the series; 0 when the pool covers everything.
  double tail_switch() const noexcept { return switch_; }

  double quantile(double u) const;

 private:
  double interpolate(double u) const;

  StableLaw law_;
  std::vector<double> pool_;
  double switch_ = 0.0;
  double edge_ = 0.0;  // interpolated value at 1 - switch_
};

double pareto_quantile(const SymmetricParetoLaw& law, double u);
double quantile(const HeavyTailLaw& law, double u);
double cdf(const HeavyTailLaw& law, double y);
double alpha_of(const HeavyTailLaw& law);

double sample(const SymmetricParetoLaw& law, RngStream& stream);
double sample(const PerturbedTailLaw& law, RngStream& stream);
double sample(const HeavyTailLaw& law, RngStream& stream);

/// Chambers-Mallows-Stuck map for the symmetric case: `angle` uniform on
/// (-pi/2, pi/2), `expo` unit exponential. Output has characteristic
/// function exp(-|theta|^alpha).
double cms_variate(double alpha, double angle, double expo);

double sample_stable(const StableLaw& law, RngStream& stream);

/// Builds a table from pool_size stable draws. Draws are mirrored in sign
/// pairs so that the table's quantile function is exactly odd about 1/2.
QuantileTable build_quantile_table(const StableLaw& law, std::size_t pool_size,
                                   RngStream& stream,
                                   double tail_fraction = QuantileTable::kDefaultTailFraction);

/// E|Y|^p for 0 < p < alpha.
double abs_moment(const SymmetricParetoLaw& law, double p);
double abs_moment(const PerturbedTailLaw& law, double p);
double abs_moment(const HeavyTailLaw& law, double p);

/// |x|^p outside [-1, 1], the parabola (p/2)x^2 + 1 - p/2 inside.
double phi_p(double x, double p);

/// Two-sided tail amplitude: P(|Y| > t) ~ amplitude * t^{-alpha}.
double tail_amplitude(const HeavyTailLaw& law);

/// Scale of the stable limit of 2^{-n/alpha} (Y_1 + ... + Y_{2^n}):
/// (amplitude * Gamma(1 - alpha) * cos(pi alpha / 2))^{1/alpha}.
double limit_stable_scale(const HeavyTailLaw& law);

}  // namespace stablewalk
