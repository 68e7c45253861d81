#include <doctest.h>

#include <cmath>
#include <sstream>

#include "stablewalk/errors.hpp"
#include "stablewalk/paths.hpp"

using namespace stablewalk;

namespace {

std::vector<double> pareto_increments(int n, std::uint64_t seed) {
  const SymmetricParetoLaw law(1.5);
  RngStream s(seed, 0);
  std::vector<double> y(std::size_t{1} << n);
  for (double& v : y) v = sample(law, s);
  return y;
}

}  // namespace

TEST_CASE("walk nodes are scaled partial sums") {
  const std::vector<double> y{1, 2, 3, 4};
  const DyadicPath w = build_walk(y, 1.5, 2);
  const double c = std::pow(2.0, -4.0 / 3.0);
  const double expected[] = {0, 1, 3, 6, 10};
  REQUIRE(w.nodes().size() == 5);
  for (int k = 0; k < 5; ++k) CHECK(w.node(k) == doctest::Approx(c * expected[k]).epsilon(1e-15));
  CHECK_THROWS_AS(build_walk(y, 1.5, 3), ShapeError);
  const std::vector<double> zeros(8, 0.0);
  CHECK(build_walk(zeros, 1.5, 3) == DyadicPath::zero(3));
}

TEST_CASE("eval interpolates between nodes") {
  const DyadicPath p(2, {0.0, 1.0, -1.0, 2.0, 4.0});
  CHECK(p.eval(0.0) == 0.0);
  CHECK(p.eval(0.25) == 1.0);
  CHECK(p.eval(0.125) == doctest::Approx(0.5));
  CHECK(p.eval(0.625) == doctest::Approx(0.5));
  CHECK(p.eval(1.0) == 4.0);
  CHECK_THROWS_AS(p.eval(-0.01), DomainError);
  CHECK_THROWS_AS(p.eval(1.01), DomainError);
  CHECK_THROWS_AS(DyadicPath(2, {0.0, 1.0, 2.0}), ShapeError);
}

TEST_CASE("projection keeps coarse nodes and is linear in between") {
  const DyadicPath w = build_walk(pareto_increments(6, 1), 1.5, 6);
  const DyadicPath p = project(w, 3);
  CHECK(p.level() == 3);
  for (int k = 0; k <= 8; ++k) CHECK(p.node(k) == w.node(8 * k));
  CHECK(project(w, 6) == w);
  CHECK_THROWS_AS(project(w, 7), DomainError);
  CHECK_THROWS_AS(project(w, -1), DomainError);
}

TEST_CASE("projection is idempotent and has the tower property") {
  const DyadicPath w = build_walk(pareto_increments(7, 2), 1.5, 7);
  CHECK(project(project(w, 4), 4) == project(w, 4));
  for (int a = 0; a <= 7; ++a) {
    for (int b = a; b <= 7; ++b) CHECK(project(project(w, b), a) == project(w, a));
  }
}

TEST_CASE("block sums") {
  const std::vector<double> y{1, 2, 3, 4};
  const auto b = block_sums(y, 2, 1, 1.5);
  REQUIRE(b.size() == 2);
  const double c = std::pow(2.0, -2.0 / 3.0);
  CHECK(b[0] == doctest::Approx(3.0 * c).epsilon(1e-15));
  CHECK(b[1] == doctest::Approx(7.0 * c).epsilon(1e-15));
  CHECK(block_sums(y, 2, 2, 1.5) == y);
  CHECK_THROWS_AS(block_sums(y, 2, 3, 1.5), DomainError);
  CHECK_THROWS_AS(block_sums(y, 3, 1, 1.5), ShapeError);
}

TEST_CASE("walk of block sums equals projected walk") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 10;
    const auto y = pareto_increments(n, 100 + seed);
    const DyadicPath w = build_walk(y, 1.5, n);
    for (int m : {0, 3, 7}) {
      const DyadicPath coarse = build_walk(block_sums(y, n, m, 1.5), 1.5, m);
      const DyadicPath proj = project(w, m);
      for (std::size_t k = 0; k < coarse.nodes().size(); ++k) {
        const double scale = std::max(1.0, std::fabs(proj.node(k)));
        CHECK(std::fabs(coarse.node(k) - proj.node(k)) <= 1e-12 * scale);
      }
    }
  }
}

TEST_CASE("refinement does not change the function") {
  const DyadicPath w = build_walk(pareto_increments(3, 3), 1.5, 3);
  const DyadicPath r = w.refined(6);
  CHECK(r.level() == 6);
  for (double t : {0.0, 0.1, 0.33, 0.5, 0.77, 1.0}) CHECK(r.eval(t) == doctest::Approx(w.eval(t)));
  CHECK_THROWS_AS(w.refined(2), DomainError);
}

TEST_CASE("arithmetic refines to the finer level") {
  const DyadicPath a = DyadicPath::from_function(1, [](double t) { return t; });
  const DyadicPath b = DyadicPath::from_function(3, [](double t) { return t * t; });
  const DyadicPath d = a - b;
  CHECK(d.level() == 3);
  CHECK(d.eval(0.375) == doctest::Approx(0.375 - 0.375 * 0.375));
  const DyadicPath s = 2.0 * a + b;
  CHECK(s.eval(0.5) == doctest::Approx(1.25));
}

TEST_CASE("stable path at level 0 holds one draw") {
  const StableLaw law(1.5);
  RngStream s1(4, 9), s2(4, 9);
  const DyadicPath p = sample_stable_path(law, 0, s1);
  REQUIRE(p.nodes().size() == 2);
  CHECK(p.node(0) == 0.0);
  CHECK(p.node(1) == sample_stable(law, s2));
}

TEST_CASE("hat coefficients carry the H1 seminorm") {
  const DyadicPath id = DyadicPath::from_function(5, [](double t) { return t; });
  double s = 0.0;
  for (double c : hat_coefficients(id)) s += c * c;
  CHECK(s == doctest::Approx(1.0));

  const DyadicPath w = build_walk(pareto_increments(5, 5), 1.5, 5);
  double energy = 0.0;
  for (std::size_t k = 0; k < w.cells(); ++k) {
    const double slope = (w.node(k + 1) - w.node(k)) / w.step();
    energy += slope * slope * w.step();
  }
  s = 0.0;
  for (double c : hat_coefficients(w)) s += c * c;
  CHECK(s == doctest::Approx(energy));
}

TEST_CASE("path CSV round trip") {
  const DyadicPath w = build_walk(pareto_increments(4, 6), 1.5, 4);
  std::stringstream ss;
  write_path_csv(ss, w);
  CHECK(ss.str().rfind("t,value\n", 0) == 0);
  CHECK(read_path_csv(ss) == w);
}

TEST_CASE("malformed path CSV is rejected") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_path_csv(in);
  };
  CHECK_THROWS_AS(parse("t,value\n0,0\n0.5,1\n"), ConfigError);              // 3 nodes
  CHECK_THROWS_AS(parse("t,value\n0,0\n0.5,1\n0.4,2\n1,3\n0.9,1\n"), ConfigError);
  CHECK_THROWS_AS(parse("t,value\n0,0\n0.3,1\n1,2\n"), ConfigError);          // not dyadic
  CHECK_THROWS_AS(parse("t,value\n0,0\n0.5,abc\n1,2\n"), ConfigError);
  CHECK_THROWS_AS(parse(""), ConfigError);
  CHECK(parse("0,1\n1,2\n").level() == 0);  // header is optional
}
