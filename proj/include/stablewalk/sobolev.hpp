#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "stablewalk/paths.hpp"

namespace stablewalk {

/// Regularity eta and integrability p of the fractional Sobolev norm
///   ||f||^p = int |f|^p + int int |f(s) - f(t)|^p / |s - t|^{1 + eta p}.
struct SobolevParams {
  double eta;
  double p;

  /// Throws DomainError unless 0 < eta < 1 and p >= 1.
  void validate() const;
  /// Kernel exponent 1 + eta p.
  double kernel_exponent() const noexcept { return 1.0 + eta * p; }
  /// p (1 - eta); the exponent of |t - s| left after an affine increment.
  double reduced_exponent() const noexcept { return p * (1.0 - eta); }
};

/// Seminorm contributions by cell-pair class; `total()` is their sum.
struct SeminormParts {
  double same_cell = 0.0;
  double adjacent = 0.0;
  double far = 0.0;

  double total() const noexcept { return same_cell + adjacent + far; }
};

/// int_0^1 |f(t)|^p dt, exact per cell.
double lp_part(const DyadicPath& path, double p);

/// Double-integral seminorm (the p-th power), split by cell-pair class.
///
/// Same-cell pairs are integrated in closed form. A pair of distinct cells
/// is integrated along rho = u + v, where u and v are the distances of s and
/// t to the gap between the cells; along each line rho = const the
/// increment is affine and its p-th power integrates in closed form, which
/// leaves a one-dimensional Gauss-Legendre integral in rho. For adjacent
/// cells the part rho <= 1 factors exactly.
SeminormParts seminorm_parts(const DyadicPath& path, const SobolevParams& params);

double seminorm_p(const DyadicPath& path, const SobolevParams& params);

/// (lp_part + seminorm_p)^{1/p}.
double norm(const DyadicPath& path, const SobolevParams& params);

/// Norm of p1 - p2 after refinement to the finer of the two levels.
double diff_norm(const DyadicPath& p1, const DyadicPath& p2, const SobolevParams& params);

/// Contribution of the cell pair (i, i + lag), lag >= 1, in cell units:
/// int_0^1 int_0^1 |c + a_left u + a_right v|^p (lag - 1 + u + v)^{-beta} du dv
/// with c = f(t_{i+lag}) - f(t_{i+1}). Exposed for the banded evaluator and
/// tests.
double cell_pair_integral(std::size_t lag, double gap, double a_left, double a_right,
                          const SobolevParams& params);

/// Seminorm evaluator for repeated use at one level, O(4^level) with one
/// power evaluation per node pair.
///
/// Cell pairs up to `band` cells apart are integrated as in seminorm_parts.
/// Farther pairs use product integration: |f(s) - f(t)|^p is replaced by its
/// bilinear interpolant from the four corner node pairs, integrated exactly
/// against the kernel, plus a centre correction for the curvature along each
/// cell. The far field thus reduces to lag-wise sums of |f_{a+e} - f_a|^p
/// over nodes and over cell midpoints.
class BandedSeminorm {
 public:
  BandedSeminorm(int level, SobolevParams params, std::size_t band = 2);

  int level() const noexcept { return level_; }
  const SobolevParams& params() const noexcept { return params_; }
  std::size_t band() const noexcept { return band_; }

  double seminorm_p(std::span<const double> nodes) const;
  double seminorm_p(const DyadicPath& path) const;
  /// lp_part + seminorm_p, i.e. ||f||^p.
  double norm_p(const DyadicPath& path) const;

 private:
  struct CornerWeights {
    double w00, w10, w01, w11;
  };

  int level_;
  SobolevParams params_;
  std::size_t band_;
  std::vector<CornerWeights> weights_;  // indexed by lag
};

/// Kernel moments of the four bilinear corner functions over the unit cell
/// pair at distance `lag` (in cells), kernel (lag + tau - sigma)^{-beta}.
/// Order: (0,0), (1,0), (0,1), (1,1) in (sigma, tau).
std::array<double, 4> corner_kernel_moments(std::size_t lag, double beta);

}  // namespace stablewalk
