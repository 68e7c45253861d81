#include <doctest.h>

#include <cmath>

#include "stablewalk/distance.hpp"
#include "stablewalk/errors.hpp"

using namespace stablewalk;

namespace {

const QuantileTable& shared_table() {
  static const QuantileTable table = [] {
    RngStream s(77, 0);
    return build_quantile_table(StableLaw(1.5), QuantileTable::kMinPoolSize, s);
  }();
  return table;
}

}  // namespace

TEST_CASE("w1 on small hand examples") {
  const std::vector<double> a{0.3, -1.0, 2.0};
  CHECK(w1_sorted(a, a) == 0.0);
  CHECK(w1_sorted(std::vector<double>{0.0}, std::vector<double>{1.0}) == 1.0);
  CHECK(w1_sorted(std::vector<double>{0.0, 2.0}, std::vector<double>{1.0, 3.0}) == 1.0);
  CHECK(w1_sorted(std::vector<double>{2.0, 0.0}, std::vector<double>{3.0, 1.0}) == 1.0);
  // sorted: (0,1,2,3) against (0,1,3,5)
  CHECK(w1_sorted(std::vector<double>{0, 1, 2, 3}, std::vector<double>{3, 0, 5, 1}) == 0.75);
  CHECK(w1_sorted(std::vector<double>{-1, 1}, std::vector<double>{1, -1}) == 0.0);
  CHECK_THROWS_AS(w1_sorted(std::vector<double>{1, 2}, std::vector<double>{1}), ShapeError);
  CHECK_THROWS_AS(w1_sorted(std::vector<double>{}, std::vector<double>{}), ShapeError);
}

TEST_CASE("estimate mean and standard error") {
  const std::vector<double> v{1, 2, 3, 4};
  const Estimate e = make_estimate(v);
  CHECK(e.mean == 2.5);
  CHECK(e.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)).epsilon(1e-14));
  CHECK(e.replications == 4);
  CHECK_THROWS_AS(make_estimate(std::vector<double>{1.0}), ConfigError);
}

TEST_CASE("coupling at the median") {
  const HeavyTailLaw law = SymmetricParetoLaw(1.5);
  const std::vector<double> u(8, 0.5);
  const CoupledPair pair = coupled_pair_from_uniforms(u, law, shared_table(), 1.5);
  CHECK(pair.level() == 3);
  const double c = std::pow(2.0, -3.0 / 1.5);
  for (std::size_t k = 0; k <= 8; ++k) {
    CHECK(pair.walk_path.node(k) == doctest::Approx(-c * k).epsilon(1e-14));
    CHECK(std::fabs(pair.stable_path.node(k)) < 1e-12);
  }
}

TEST_CASE("coupling checks the index and shape") {
  const HeavyTailLaw law = SymmetricParetoLaw(1.6);
  const std::vector<double> u(8, 0.5);
  CHECK_THROWS_AS(coupled_pair_from_uniforms(u, law, shared_table(), 1.6), DomainError);
  const std::vector<double> bad(6, 0.5);
  CHECK_THROWS_AS(
      coupled_pair_from_uniforms(bad, SymmetricParetoLaw(1.5), shared_table(), 1.5), ShapeError);
}

TEST_CASE("coupled pair is comonotone") {
  const HeavyTailLaw law = SymmetricParetoLaw(1.5);
  RngStream s(5, 5);
  const CoupledPair pair = coupled_path_pair(6, law, shared_table(), 1.5, s);
  std::vector<std::pair<double, double>> inc;
  for (std::size_t k = 0; k < pair.walk_path.cells(); ++k) {
    inc.emplace_back(pair.walk_path.node(k + 1) - pair.walk_path.node(k),
                     pair.stable_path.node(k + 1) - pair.stable_path.node(k));
  }
  std::sort(inc.begin(), inc.end());
  for (std::size_t k = 1; k < inc.size(); ++k) CHECK(inc[k].second >= inc[k - 1].second);
}

TEST_CASE("self coupling has zero distance") {
  MonteCarloOptions opt;
  opt.reps = 8;
  const Estimate e = coupled_distance(5, SymmetricParetoLaw(1.5), shared_table(),
                                      SobolevParams{0.2, 1.2}, opt, CouplingMode::self);
  CHECK(e.mean == 0.0);
  CHECK(e.std_error == 0.0);
}

TEST_CASE("Monte Carlo output does not depend on the worker count") {
  MonteCarloOptions opt;
  opt.reps = 24;
  opt.master_seed = 99;
  opt.workers = 1;
  const SobolevParams params{0.2, 1.2};
  const HeavyTailLaw law = SymmetricParetoLaw(1.5);
  const Estimate one = coupled_distance(6, law, shared_table(), params, opt);
  opt.workers = 5;
  const Estimate five = coupled_distance(6, law, shared_table(), params, opt);
  CHECK(one.mean == five.mean);
  CHECK(one.std_error == five.std_error);

  const int levels[] = {1, 3};
  const auto g1 = projection_gaps(GapSource::random_walk(law), levels, 6, params, opt);
  opt.workers = 2;
  const auto g2 = projection_gaps(GapSource::random_walk(law), levels, 6, params, opt);
  CHECK(g1[0].mean == g2[0].mean);
  CHECK(g1[1].mean == g2[1].mean);
}

TEST_CASE("exact and banded distances agree") {
  MonteCarloOptions opt;
  opt.reps = 6;
  const SobolevParams params{0.2, 1.2};
  const HeavyTailLaw law = SymmetricParetoLaw(1.5);
  const Estimate banded = coupled_distance(6, law, shared_table(), params, opt);
  opt.method = NormMethod::exact;
  const Estimate exact = coupled_distance(6, law, shared_table(), params, opt);
  CHECK(banded.mean == doctest::Approx(exact.mean).epsilon(2e-3));
}

TEST_CASE("projection gaps") {
  MonteCarloOptions opt;
  opt.reps = 4;
  const SobolevParams params{0.2, 1.2};
  const GapSource affine = GapSource::affine(0.5, -3.0);
  for (int m = 0; m < 6; ++m) CHECK(projection_gap(affine, m, 6, params, opt).mean == 0.0);
  CHECK_THROWS_AS(projection_gap(affine, 6, 6, params, opt), DomainError);
  CHECK_THROWS_AS(projection_gap(affine, -1, 6, params, opt), DomainError);
  opt.reps = 1;
  CHECK_THROWS_AS(projection_gap(affine, 2, 6, params, opt), ConfigError);

  opt.reps = 50;
  const auto gaps =
      projection_gaps(GapSource::stable_process(StableLaw(1.5)), std::vector<int>{1, 4}, 7, params, opt);
  CHECK(gaps[0].mean > gaps[1].mean);
}
