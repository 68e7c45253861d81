#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "stablewalk/randlaws.hpp"
#include "stablewalk/rng.hpp"

namespace stablewalk {

/// Piecewise-linear function on [0, 1] with breakpoints at k 2^{-level}.
///
/// Stored by its 2^level + 1 node values; evaluation between nodes is
/// affine. Paths are immutable values once built.
class DyadicPath {
 public:
  static constexpr int kMaxLevel = 26;

  DyadicPath(int level, std::vector<double> node_values);

  static DyadicPath zero(int level);
  /// Samples f at the nodes of the given level.
  static DyadicPath from_function(int level, const std::function<double(double)>& f);

  int level() const noexcept { return level_; }
  std::size_t cells() const noexcept { return nodes_.size() - 1; }
  std::span<const double> nodes() const noexcept { return nodes_; }
  double node(std::size_t k) const { return nodes_.at(k); }
  double step() const noexcept { return 1.0 / static_cast<double>(cells()); }

  double eval(double t) const;

  /// Same function written on a finer grid; exact for piecewise-linear paths.
  DyadicPath refined(int level) const;

  DyadicPath& operator+=(const DyadicPath& other);
  DyadicPath& operator-=(const DyadicPath& other);
  DyadicPath& operator*=(double a);

  friend bool operator==(const DyadicPath&, const DyadicPath&) = default;

 private:
  int level_;
  std::vector<double> nodes_;
};

/// Pointwise operations refine both operands to the finer level first.
DyadicPath operator+(const DyadicPath& a, const DyadicPath& b);
DyadicPath operator-(const DyadicPath& a, const DyadicPath& b);
DyadicPath operator*(double a, const DyadicPath& p);

/// Interpolated random walk: node k holds 2^{-n/alpha} (Y_1 + ... + Y_k).
DyadicPath build_walk(std::span<const double> increments, double alpha, int n);

/// Affine interpolation on the level-m grid: keeps the values at k 2^{-m}.
DyadicPath project(const DyadicPath& path, int m);

/// Block sums 2^{-(n-m)/alpha} * sum of increments over blocks of 2^{n-m}.
std::vector<double> block_sums(std::span<const double> increments, int n, int m,
                               double alpha);

/// Cumulative sums of 2^level iid stable draws scaled by 2^{-level/alpha};
/// distributed as the level-`level` interpolation of the stable process.
DyadicPath sample_stable_path(const StableLaw& law, int level, RngStream& stream);

/// Interpolated random walk with 2^level iid increments from `law`.
DyadicPath sample_walk_path(const HeavyTailLaw& law, int level, RngStream& stream);

/// Coefficients <f, h_level^j> = 2^{level/2} (f(t_{j+1}) - f(t_j)) in the
/// Schauder hat basis orthonormal for the H^1 seminorm.
std::vector<double> hat_coefficients(const DyadicPath& path);

/// CSV with header "t,value" and one row per node.
void write_path_csv(std::ostream& out, const DyadicPath& path);
/// Parses the format written by write_path_csv. Throws ConfigError if the
/// abscissae are not the dyadic nodes of some level.
DyadicPath read_path_csv(std::istream& in);

}  // namespace stablewalk
