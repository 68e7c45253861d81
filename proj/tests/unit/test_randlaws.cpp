#include <doctest.h>

#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "stablewalk/errors.hpp"
#include "stablewalk/randlaws.hpp"

using namespace stablewalk;

namespace {

// Plain composite Simpson, independent of the library's quadrature.
template <class F>
double simpson(F f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

std::string message_of(auto&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("pareto quantile at hand-inverted points") {
  CHECK(pareto_quantile(SymmetricParetoLaw(1.6), 0.25) ==
        doctest::Approx(-1.5422108254079407).epsilon(1e-14));
  CHECK(pareto_quantile(SymmetricParetoLaw(1.5), 0.875) ==
        doctest::Approx(2.5198420997897464).epsilon(1e-14));
  // generalized inverse: the lower edge of the gap (-1, 1)
  CHECK(pareto_quantile(SymmetricParetoLaw(1.5), 0.5) == -1.0);
}

TEST_CASE("pareto quantile follows the tail near zero") {
  const SymmetricParetoLaw law(1.7);
  for (double u : {1e-3, 1e-6, 1e-9}) {
    CHECK(law.quantile(u) == doctest::Approx(-std::pow(2.0 * u, -1.0 / 1.7)).epsilon(1e-12));
  }
}

TEST_CASE("quantile rejects u outside (0, 1)") {
  const SymmetricParetoLaw law(1.5);
  for (double u : {0.0, 1.0, -0.1, 1.5, std::nan("")}) CHECK_THROWS_AS(law.quantile(u), DomainError);
}

TEST_CASE("cdf and quantile are inverse") {
  const HeavyTailLaw laws[] = {SymmetricParetoLaw(1.3), PerturbedTailLaw(1.5, 0.6, 0.2, 1.0),
                               PerturbedTailLaw(1.8, 0.3, 0.5, 0.4)};
  for (const auto& law : laws) {
    for (double u : {1e-7, 0.01, 0.2, 0.3, 0.45, 0.55, 0.7, 0.9, 0.999, 1.0 - 1e-7}) {
      CHECK(cdf(law, quantile(law, u)) == doctest::Approx(u).epsilon(1e-9));
    }
  }
}

TEST_CASE("perturbed tail survival and density") {
  const PerturbedTailLaw law(1.5, 0.6, 0.2, 1.0);
  CHECK(law.survival(2.0) == doctest::Approx(0.7 / (2.0 * std::pow(2.0, 1.5))).epsilon(1e-14));
  CHECK(law.survival(2.0) == doctest::Approx(0.12374368670764582).epsilon(1e-12));
  // total mass: core on [-1, 1] plus both tails, integrated by substitution t = 1/x^2
  const double core = simpson([&](double y) { return law.density(y); }, -1.0 + 1e-12, 1.0 - 1e-12);
  const double tail = simpson(
      [&](double x) { return x <= 0.0 ? 0.0 : law.density(1.0 / (x * x)) * 2.0 / (x * x * x); },
      0.0, 1.0);
  CHECK(core + 2.0 * tail == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("law validation names the violated constraint") {
  CHECK(message_of([] { SymmetricParetoLaw(2.5); }).find("1 < alpha < 2") != std::string::npos);
  CHECK(message_of([] { PerturbedTailLaw(1.5, 0.9, 0.3, 1.0); }).find("A + K <= 1") !=
        std::string::npos);
  CHECK_THROWS_AS(PerturbedTailLaw(1.5, 0.0, 0.3, 1.0), DomainError);
  CHECK_THROWS_AS(PerturbedTailLaw(1.5, 0.5, -0.1, 1.0), DomainError);
  CHECK_THROWS_AS(PerturbedTailLaw(1.5, 0.5, 0.1, 0.0), DomainError);
  CHECK_THROWS_AS(StableLaw(1.0), DomainError);
  CHECK_THROWS_AS(StableLaw(1.5, -1.0), DomainError);
}

TEST_CASE("A = 1, K = 0 reproduces the Pareto law") {
  const PerturbedTailLaw p(1.5, 1.0, 0.0, 1.0);
  const SymmetricParetoLaw q(1.5);
  for (double u : {0.01, 0.3, 0.7, 0.99}) CHECK(p.quantile(u) == doctest::Approx(q.quantile(u)));
  CHECK(abs_moment(p, 1.0) == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("absolute moments") {
  CHECK(abs_moment(SymmetricParetoLaw(1.5), 1.0) == doctest::Approx(3.0));
  CHECK(abs_moment(SymmetricParetoLaw(1.5), 1e-9) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(abs_moment(SymmetricParetoLaw(1.5), 1.5), DomainError);
  CHECK_THROWS_AS(abs_moment(PerturbedTailLaw(1.5, 0.5, 0.2, 1.0), 1.6), DomainError);

  // core mass spread uniformly plus the two power tails
  auto expected = [](double a, double A, double K, double g, double p) {
    return (1.0 - A - K) / (p + 1.0) + A * a / (a - p) + K * (a + g) / (a + g - p);
  };
  for (double p : {0.3, 1.0, 1.2, 1.45}) {
    CHECK(abs_moment(PerturbedTailLaw(1.5, 0.6, 0.2, 1.0), p) ==
          doctest::Approx(expected(1.5, 0.6, 0.2, 1.0, p)).epsilon(1e-8));
    CHECK(abs_moment(PerturbedTailLaw(1.5, 0.3, 0.4, 0.25), p) ==
          doctest::Approx(expected(1.5, 0.3, 0.4, 0.25, p)).epsilon(1e-8));
  }
}

TEST_CASE("sampler moment and symmetry") {
  const SymmetricParetoLaw law(1.5);
  RngStream s(11, 0);
  const int n = 1000000;
  double sum = 0.0;
  int positive = 0;
  for (int i = 0; i < n; ++i) {
    const double y = sample(law, s);
    sum += std::sqrt(std::fabs(y));
    positive += y > 0.0;
  }
  CHECK(sum / n == doctest::Approx(1.5).epsilon(0.01));
  CHECK(std::fabs(double(positive) / n - 0.5) <= 3.0 / std::sqrt(4.0 * n));
}

TEST_CASE("perturbed sampler tail probability") {
  const PerturbedTailLaw law(1.5, 0.6, 0.2, 1.0);
  RngStream s(12, 0);
  const int n = 1000000;
  int above = 0;
  for (int i = 0; i < n; ++i) above += sample(law, s) > 2.0;
  const double q = 0.12374368670764582;
  CHECK(std::fabs(double(above) / n - q) <= 3.0 * std::sqrt(q * (1.0 - q) / n));
}

TEST_CASE("stable variates") {
  CHECK(cms_variate(1.5, 0.0, 0.7) == 0.0);
  CHECK(cms_variate(1.5, 0.0, 123.0) == 0.0);

  const StableLaw law(1.5);
  RngStream s(13, 0);
  const int n = 1000000;
  double c[3] = {0, 0, 0};
  const double theta[3] = {0.5, 1.0, 2.0};
  int positive = 0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_stable(law, s);
    for (int k = 0; k < 3; ++k) c[k] += std::cos(theta[k] * x);
    positive += x > 0.0;
  }
  for (int k = 0; k < 3; ++k) {
    CHECK(std::fabs(c[k] / n - std::exp(-std::pow(theta[k], 1.5))) <= 0.005);
  }
  CHECK(std::fabs(double(positive) / n - 0.5) <= 3.0 / std::sqrt(4.0 * n));
}

TEST_CASE("stable scale enters as exp(-|scale theta|^alpha)") {
  const StableLaw law(1.5, 2.0);
  RngStream s(14, 0);
  const int n = 400000;
  double c = 0.0;
  for (int i = 0; i < n; ++i) c += std::cos(0.25 * sample_stable(law, s));
  CHECK(std::fabs(c / n - std::exp(-std::pow(0.5, 1.5))) <= 0.006);
}

TEST_CASE("quantile table") {
  const StableLaw law(1.5);
  RngStream s(15, 0);
  CHECK_THROWS_AS(build_quantile_table(law, 1000, s), ConfigError);
  const QuantileTable table = build_quantile_table(law, QuantileTable::kMinPoolSize, s);
  CHECK(table.pool_size() == QuantileTable::kMinPoolSize);
  CHECK(std::fabs(table.quantile(0.5)) < 1e-12);
  for (double u : {0.001, 0.1, 0.37}) {
    CHECK(table.quantile(u) == doctest::Approx(-table.quantile(1.0 - u)).epsilon(1e-12));
  }
  // 1 - 1e-7 is itself rounded at the 1e-9 level
  CHECK(table.quantile(1e-7) == doctest::Approx(-table.quantile(1.0 - 1e-7)).epsilon(1e-8));
  CHECK(table.quantile(1.0) == std::numeric_limits<double>::infinity());
  CHECK(table.quantile(0.0) == -std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(table.quantile(1.2), DomainError);

  // the pool's rank arithmetic holds away from the tails
  const auto pool = table.sorted_pool();
  const double q = table.quantile(0.25);
  const auto below = std::lower_bound(pool.begin(), pool.end(), q) - pool.begin();
  CHECK(std::fabs(double(below) / double(pool.size()) - 0.25) <= 1.0 / double(pool.size()));

  // monotone through the switch to the series
  const double w = table.tail_switch();
  REQUIRE(w > 0.0);
  double last = -std::numeric_limits<double>::infinity();
  for (int k = 200; k >= -200; --k) {
    const double x = table.quantile(1.0 - w * (1.0 + k * 1e-3));
    CHECK(x >= last);
    last = x;
  }

  RngStream plain_stream(15, 0);
  const QuantileTable plain =
      build_quantile_table(law, QuantileTable::kMinPoolSize, plain_stream, 0.0);
  CHECK(plain.tail_switch() == 0.0);
  CHECK(plain.quantile(0.0) == plain.sorted_pool().front());
  CHECK(plain.quantile(1.0) == plain.sorted_pool().back());
  CHECK(plain.quantile(0.3) == table.quantile(0.3));
  CHECK_THROWS_AS(QuantileTable(law, std::vector<double>(pool.begin(), pool.end()), 0.5),
                  ConfigError);
}

TEST_CASE("stable tail quantile against characteristic-function inversion") {
  // P(X > x) = 1/2 - (1/pi) int_0^inf sin(x t) exp(-t^alpha) / t dt
  boost::math::quadrature::ooura_fourier_sin<double> sine;
  for (double alpha : {1.2, 1.5, 1.8}) {
    const double top = stable_series_threshold(alpha);
    CHECK(top > 0.0);
    CHECK(top < 0.05);
    for (double v : {top, top / 10.0, 1e-5}) {
      const double x = stable_upper_quantile(StableLaw(alpha), v);
      auto f = [alpha](double t) { return std::exp(-std::pow(t, alpha)) / t; };
      const double tail = 0.5 - sine.integrate(f, x).first / std::numbers::pi;
      CHECK(tail == doctest::Approx(v).epsilon(1e-5));
    }
    // scale enters linearly
    CHECK(stable_upper_quantile(StableLaw(alpha, 2.5), top / 3.0) ==
          doctest::Approx(2.5 * stable_upper_quantile(StableLaw(alpha), top / 3.0)).epsilon(1e-13));
    CHECK_THROWS_AS(stable_upper_quantile(StableLaw(alpha), 2.0 * top), DomainError);
    CHECK_THROWS_AS(stable_upper_quantile(StableLaw(alpha), 0.0), DomainError);
  }
}

TEST_CASE("Pareto and limit-stable quantiles merge in the far tail") {
  const HeavyTailLaw law = SymmetricParetoLaw(1.5);
  const StableLaw limit(1.5, limit_stable_scale(law));
  double previous = std::numeric_limits<double>::infinity();
  for (double v : {1e-3, 1e-5, 1e-7, 1e-9}) {
    const double gap = std::fabs(quantile(law, 1.0 - v) - stable_upper_quantile(limit, v));
    CHECK(gap < previous);
    previous = gap;
  }
  CHECK(previous < 0.01);
}

TEST_CASE("phi_p regularized power") {
  CHECK(phi_p(0.0, 1.5) == doctest::Approx(0.25));
  CHECK(phi_p(2.0, 1.5) == doctest::Approx(2.8284271247461903));
  CHECK(phi_p(1.0, 1.5) == doctest::Approx(1.0));
  CHECK(phi_p(-0.4, 1.2) == phi_p(0.4, 1.2));
  // derivative p on both sides of |x| = 1
  const double h = 1e-6;
  CHECK((phi_p(1.0, 1.5) - phi_p(1.0 - h, 1.5)) / h == doctest::Approx(1.5).epsilon(1e-5));
  CHECK((phi_p(1.0 + h, 1.5) - phi_p(1.0, 1.5)) / h == doctest::Approx(1.5).epsilon(1e-5));
}

TEST_CASE("limit stable scale matches the tail amplitude") {
  const double pi = std::numbers::pi;
  const HeavyTailLaw laws[] = {SymmetricParetoLaw(1.5), SymmetricParetoLaw(1.2),
                               PerturbedTailLaw(1.7, 0.4, 0.3, 0.5)};
  for (const auto& law : laws) {
    const double a = alpha_of(law);
    const double sigma = limit_stable_scale(law);
    // stable tail P(|Z| > t) ~ (2/pi) Gamma(a) sin(pi a / 2) sigma^a t^{-a}
    const double stable_amp = 2.0 / pi * std::tgamma(a) * std::sin(pi * a / 2.0) * std::pow(sigma, a);
    CHECK(stable_amp == doctest::Approx(tail_amplitude(law)).epsilon(1e-12));
  }
  CHECK(limit_stable_scale(SymmetricParetoLaw(1.5)) ==
        doctest::Approx(std::pow(std::sqrt(2.0 * pi), 2.0 / 3.0)).epsilon(1e-12));
  CHECK(tail_amplitude(PerturbedTailLaw(1.7, 0.4, 0.3, 0.5)) == doctest::Approx(0.4));
}
