#include "stablewalk/randlaws.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "stablewalk/errors.hpp"

namespace stablewalk {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) {
    std::ostringstream msg;
    msg << "stability index must satisfy 1 < alpha < 2 (got " << alpha << ")";
    throw DomainError(msg.str());
  }
}

void check_probability(double u) {
  if (!(u > 0.0 && u < 1.0)) {
    std::ostringstream msg;
    msg << "probability must lie in (0, 1) (got " << u << ")";
    throw DomainError(msg.str());
  }
}

void check_moment_order(double alpha, double p) {
  if (!(p > 0.0)) throw DomainError("moment order must be positive");
  if (!(p < alpha)) {
    std::ostringstream msg;
    msg << "moment of order p = " << p << " diverges for alpha = " << alpha
        << " (need p < alpha)";
    throw DomainError(msg.str());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Symmetric Pareto

SymmetricParetoLaw::SymmetricParetoLaw(double alpha) : alpha_(alpha) {
  check_alpha(alpha);
}

double SymmetricParetoLaw::cdf(double y) const {
  if (y <= -1.0) return 0.5 * std::pow(-y, -alpha_);
  if (y < 1.0) return 0.5;
  return 1.0 - 0.5 * std::pow(y, -alpha_);
}

double SymmetricParetoLaw::quantile(double u) const {
  check_probability(u);
  if (u < 0.5) return -std::pow(2.0 * u, -1.0 / alpha_);
  if (u > 0.5) return std::pow(2.0 * (1.0 - u), -1.0 / alpha_);
  return -1.0;  // left-continuous inverse across the flat part
}

// ---------------------------------------------------------------------------
// Perturbed tail

PerturbedTailLaw::PerturbedTailLaw(double alpha, double A, double K,
                                   double gamma)
    : alpha_(alpha), A_(A), K_(K), gamma_(gamma) {
  check_alpha(alpha);
  if (!(A > 0.0)) throw DomainError("tail amplitude must satisfy A > 0");
  if (!(K >= 0.0)) throw DomainError("perturbation amplitude must satisfy K >= 0");
  if (!(gamma > 0.0)) throw DomainError("perturbation decay must satisfy gamma > 0");
  if (!(A + K <= 1.0)) {
    std::ostringstream msg;
    msg << "tail mass must satisfy A + K <= 1 (got A + K = " << A + K << ")";
    throw DomainError(msg.str());
  }
}

double PerturbedTailLaw::survival(double t) const {
  return 0.5 * (A_ + K_ * std::pow(t, -gamma_)) * std::pow(t, -alpha_);
}

double PerturbedTailLaw::cdf(double y) const {
  if (y <= -1.0) return survival(-y);
  if (y < 1.0) return 0.5 * (A_ + K_) + 0.5 * (1.0 - A_ - K_) * (y + 1.0);
  return 1.0 - survival(y);
}

double PerturbedTailLaw::density(double y) const {
  const double a = std::fabs(y);
  if (a < 1.0) return 0.5 * (1.0 - A_ - K_);
  return 0.5 * (A_ * alpha_ * std::pow(a, -alpha_ - 1.0) +
                K_ * (alpha_ + gamma_) * std::pow(a, -alpha_ - gamma_ - 1.0));
}

double PerturbedTailLaw::tail_quantile(double v) const {
  // Solves survival(t) = v on [1, inf). The survival function is squeezed
  // between A/(2t^a) and (A+K)/(2t^a), which brackets the root.
  double lo = std::max(1.0, std::pow(A_ / (2.0 * v), 1.0 / alpha_));
  double hi = std::max(1.0, std::pow((A_ + K_) / (2.0 * v), 1.0 / alpha_));
  if (K_ == 0.0 || hi <= lo) return lo;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double s = survival(mid);
    if (s > v) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (survival(lo) - survival(hi) <= 1e-12 * v) break;
  }
  return 0.5 * (lo + hi);
}

double PerturbedTailLaw::quantile(double u) const {
  check_probability(u);
  const double edge = 0.5 * (A_ + K_);
  if (u <= edge) return -tail_quantile(u);
  if (u >= 1.0 - edge) return tail_quantile(1.0 - u);
  return -1.0 + 2.0 * (u - edge) / (1.0 - A_ - K_);
}

// ---------------------------------------------------------------------------
// Stable

StableLaw::StableLaw(double alpha, double scale) : alpha_(alpha), scale_(scale) {
  check_alpha(alpha);
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw DomainError("stable scale must be positive and finite");
}

double cms_variate(double alpha, double angle, double expo) {
  if (angle == 0.0) return 0.0;
  const double lead = std::sin(alpha * angle) / std::pow(std::cos(angle), 1.0 / alpha);
  const double tail =
      std::pow(std::cos((1.0 - alpha) * angle) / expo, (1.0 - alpha) / alpha);
  return lead * tail;
}

double sample_stable(const StableLaw& law, RngStream& stream) {
  const double angle = std::numbers::pi * (stream.uniform() - 0.5);
  const double expo = stream.exponential();
  return law.scale() * cms_variate(law.alpha(), angle, expo);
}

namespace {

// Large-x expansion of the standard symmetric stable survival function,
// P(X > x) = sum_k c_k x^{-k alpha}. Divergent for alpha > 1 but
// asymptotic, so a few terms are very accurate far enough out.
constexpr int kSeriesTerms = 5;

struct TailSeries {
  double alpha;
  std::array<double, kSeriesTerms + 2> c{};

  explicit TailSeries(double a) : alpha(a) {
    for (int k = 1; k <= kSeriesTerms + 2; ++k) {
      const double sign = k % 2 ? 1.0 : -1.0;
      c[k - 1] = sign * std::exp(std::lgamma(k * a) - std::lgamma(k + 1.0)) *
                 std::sin(k * std::numbers::pi * a / 2.0) / std::numbers::pi;
    }
  }

  double survival(double x) const {
    double s = 0.0;
    for (int k = kSeriesTerms; k >= 1; --k) s += c[k - 1] * std::pow(x, -k * alpha);
    return s;
  }

  double survival_slope(double x) const {
    double s = 0.0;
    for (int k = kSeriesTerms; k >= 1; --k) {
      s -= c[k - 1] * k * alpha * std::pow(x, -k * alpha - 1.0);
    }
    return s;
  }

  // Smallest x where the first omitted terms are below 1e-5 of the leading one.
  double start() const {
    double x = 1.0;
    for (int k = kSeriesTerms + 1; k <= kSeriesTerms + 2; ++k) {
      const double ratio = std::fabs(c[k - 1] / c[0]);
      if (ratio > 0.0) x = std::max(x, std::pow(1e5 * ratio, 1.0 / ((k - 1) * alpha)));
    }
    return x;
  }

  double solve(double v) const {
    double x = std::max(start(), std::pow(c[0] / v, 1.0 / alpha));
    for (int it = 0; it < 100; ++it) {
      const double step = (survival(x) - v) / survival_slope(x);
      x -= step;
      if (std::fabs(step) <= 1e-15 * x) break;
    }
    return x;
  }
};

}  // namespace

double stable_series_threshold(double alpha) {
  check_alpha(alpha);
  const TailSeries t(alpha);
  return t.survival(t.start());
}

double stable_upper_quantile(const StableLaw& law, double v) {
  const double limit = stable_series_threshold(law.alpha());
  if (!(v > 0.0 && v <= limit)) {
    std::ostringstream msg;
    msg << "tail series needs 0 < v <= " << limit << " (got " << v << ")";
    throw DomainError(msg.str());
  }
  return law.scale() * TailSeries(law.alpha()).solve(v);
}

QuantileTable::QuantileTable(StableLaw law, std::vector<double> sorted_pool, double tail_fraction)
    : law_(law), pool_(std::move(sorted_pool)) {
  if (pool_.size() < kMinPoolSize) {
    std::ostringstream msg;
    msg << "quantile table pool must hold at least " << kMinPoolSize
        << " draws (got " << pool_.size() << ")";
    throw ConfigError(msg.str());
  }
  if (!std::is_sorted(pool_.begin(), pool_.end()))
    throw ConfigError("quantile table pool must be sorted");
  if (!(tail_fraction >= 0.0 && tail_fraction < 0.5))
    throw ConfigError("table tail fraction must lie in [0, 0.5)");
  if (tail_fraction > 0.0) {
    switch_ = std::min(tail_fraction, stable_series_threshold(law_.alpha()));
    edge_ = interpolate(1.0 - switch_);
  }
}

double QuantileTable::interpolate(double u) const {
  const double rank = u * static_cast<double>(pool_.size() - 1);
  const auto i = static_cast<std::size_t>(rank);
  if (i + 1 >= pool_.size()) return pool_.back();
  const double frac = rank - static_cast<double>(i);
  return pool_[i] + frac * (pool_[i + 1] - pool_[i]);
}

double QuantileTable::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("table quantile needs u in [0, 1]");
  const double v = std::min(u, 1.0 - u);
  if (!(v < switch_)) return interpolate(u);
  // max() keeps the junction monotone against pool noise at the edge
  const double x = v > 0.0 ? std::max(stable_upper_quantile(law_, v), edge_)
                           : std::numeric_limits<double>::infinity();
  return u > 0.5 ? x : -x;
}

QuantileTable build_quantile_table(const StableLaw& law, std::size_t pool_size,
                                   RngStream& stream, double tail_fraction) {
  if (pool_size < QuantileTable::kMinPoolSize) {
    std::ostringstream msg;
    msg << "quantile table pool must hold at least " << QuantileTable::kMinPoolSize
        << " draws (got " << pool_size << ")";
    throw ConfigError(msg.str());
  }
  std::vector<double> pool;
  pool.reserve(pool_size);
  const std::size_t half = pool_size / 2;
  for (std::size_t i = 0; i < half; ++i) {
    const double x = std::fabs(sample_stable(law, stream));
    pool.push_back(x);
    pool.push_back(-x);
  }
  if (pool.size() < pool_size) pool.push_back(0.0);
  std::sort(pool.begin(), pool.end());
  return QuantileTable(law, std::move(pool), tail_fraction);
}

// ---------------------------------------------------------------------------
// Variant dispatch

double pareto_quantile(const SymmetricParetoLaw& law, double u) { return law.quantile(u); }

double quantile(const HeavyTailLaw& law, double u) {
  return std::visit([u](const auto& l) { return l.quantile(u); }, law);
}

double cdf(const HeavyTailLaw& law, double y) {
  return std::visit([y](const auto& l) { return l.cdf(y); }, law);
}

double alpha_of(const HeavyTailLaw& law) {
  return std::visit([](const auto& l) { return l.alpha(); }, law);
}

double sample(const SymmetricParetoLaw& law, RngStream& stream) {
  return law.quantile(stream.uniform());
}

double sample(const PerturbedTailLaw& law, RngStream& stream) {
  return law.quantile(stream.uniform());
}

double sample(const HeavyTailLaw& law, RngStream& stream) {
  return std::visit([&stream](const auto& l) { return sample(l, stream); }, law);
}

// ---------------------------------------------------------------------------
// Moments

double abs_moment(const SymmetricParetoLaw& law, double p) {
  check_moment_order(law.alpha(), p);
  return law.alpha() / (law.alpha() - p);
}

double abs_moment(const PerturbedTailLaw& law, double p) {
  check_moment_order(law.alpha(), p);
  using boost::math::quadrature::gauss_kronrod;
  const double alpha = law.alpha();
  constexpr double kTol = 1e-12;

  // Core [-1, 1]: 2 * int_0^1 y^p f(y) dy.
  const double core = gauss_kronrod<double, 31>::integrate(
      [&](double y) { return 2.0 * std::pow(y, p) * law.density(y); }, 0.0, 1.0, 15, kTol);

  // Tails: 2 * int_1^inf y^p f(y) dy with y = w^{-1/(alpha-p)}. The Jacobian
  // turns the integrand into y^{alpha+1} f(y) / (alpha - p), bounded on (0, 1].
  const double s = alpha - p;
  const double tails = gauss_kronrod<double, 31>::integrate(
      [&](double w) {
        const double y = std::exp(-std::log(w) / s);
        if (!std::isfinite(y)) {
          // y^{alpha+1} f(y) tends to A alpha / 2 as y grows.
          return 2.0 * 0.5 * law.A() * alpha / s;
        }
        return 2.0 * std::pow(y, alpha + 1.0) * law.density(y) / s;
      },
      0.0, 1.0, 15, kTol);
  return core + tails;
}

double abs_moment(const HeavyTailLaw& law, double p) {
  return std::visit([p](const auto& l) { return abs_moment(l, p); }, law);
}

double phi_p(double x, double p) {
  const double a = std::fabs(x);
  if (a > 1.0) return std::pow(a, p);
  return 0.5 * p * x * x + (1.0 - 0.5 * p);
}

double tail_amplitude(const HeavyTailLaw& law) {
  return std::visit(
      [](const auto& l) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(l)>, PerturbedTailLaw>) {
          return l.A();
        } else {
          return 1.0;
        }
      },
      law);
}

double limit_stable_scale(const HeavyTailLaw& law) {
  const double alpha = alpha_of(law);
  const double c = tail_amplitude(law) * std::tgamma(1.0 - alpha) *
                   std::cos(std::numbers::pi * alpha / 2.0);
  return std::pow(c, 1.0 / alpha);
}

}  // namespace stablewalk
