#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stablewalk/distance.hpp"
#include "stablewalk/randlaws.hpp"
#include "stablewalk/sobolev.hpp"

namespace stablewalk {

/// Parameters shared by the sweeps. `n_values` is read per sweep:
/// projection levels m (interp_error), sample sizes N (moment_sweep) or
/// walk levels n (rate_sweep).
struct ExperimentConfig {
  double alpha = 1.5;
  double eta = 0.2;
  double p = 1.2;
  double gamma = 1.0;
  double A = 1.0;
  double K = 0.0;
  std::vector<int> n_values;
  std::size_t reps = 1000;
  int n_ref_offset = 4;
  std::uint64_t seed = 1;
  std::size_t pool_size = 1000000;
  /// Tail mass of the stable quantile table served by the series (0: none).
  double table_tail = QuantileTable::kDefaultTailFraction;

  /// Throws ConfigError or DomainError naming the violated constraint.
  void validate() const;

  /// Symmetric Pareto when A = 1 and K = 0, the perturbed-tail law otherwise.
  HeavyTailLaw law() const;
  SobolevParams sobolev() const { return {eta, p}; }
  /// gamma, or +infinity when the perturbation vanishes (K = 0).
  double effective_gamma() const;

  static ExperimentConfig interp_error_defaults();
  static ExperimentConfig moment_sweep_defaults();
  static ExperimentConfig rate_sweep_defaults();
};

/// Reads "key = value" lines over `base`. Keys: alpha, eta, p, gamma, A, K,
/// n_values, reps, n_ref_offset, seed, pool_size, table_tail. n_values is a
/// comma list or an inclusive range "a..b". '#' starts a comment.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base);
/// Applies one key/value pair; used for both files and flag overrides.
void apply_config_value(ExperimentConfig& config, const std::string& key, const std::string& value);
/// Inverse of parse_config.
std::string format_config(const ExperimentConfig& config);

struct KappaUpsilon {
  double kappa;
  double upsilon;
};

/// kappa = min(2/alpha - 1, gamma/alpha) / (1 + (1/alpha - eta) p) and
/// upsilon = (1/alpha - eta) p kappa. gamma may be +infinity.
KappaUpsilon plan_kappa_upsilon(double alpha, double eta, double p, double gamma);

struct RateFitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_std_error = 0.0;
};

/// Ordinary least squares of log2(value) on n. Needs >= 3 points; throws
/// FitError on a nonpositive value.
RateFitResult fit_loglog(std::span<const std::pair<double, double>> points);

// ---------------------------------------------------------------------------

struct InterpErrorRow {
  int m;
  Estimate estimate;
};

struct InterpErrorResult {
  int n_ref = 0;
  std::vector<InterpErrorRow> rows;
  RateFitResult fit;
  double predicted_slope = 0.0;  ///< -(1/alpha - eta) p
  double slope_band = 0.15;
  bool within_band = false;
};

/// E||F - pi_m F||^p for m in config.n_values, F from `source` at level
/// n_ref = max(m) + n_ref_offset, and a log2 fit against m.
InterpErrorResult interp_error_sweep(const ExperimentConfig& config, const GapSource& source,
                                     int workers, double slope_band = 0.15);

struct IncrementPair {
  enum class Kind { on_grid, same_cell, straddling };
  Kind kind;
  double s;
  double t;
  Estimate moment;  ///< E|X_n(t) - X_n(s)|^p
  double ratio;     ///< moment.mean / (t - s)^{p/alpha}
};

struct IncrementMomentReport {
  int n = 0;
  double max_ratio = 0.0;
  std::vector<IncrementPair> pairs;
};

/// Pair battery for level n: on-grid pairs (0, k 2^-n), the same-cell pair
/// (2^-n/4, 3 2^-n/4), and straddling pairs (2^-n/2, (k + 1/2) 2^-n), with k
/// running over powers of two. Replicate r uses the same stream for every n.
std::vector<std::pair<double, double>> increment_pair_battery(int n);

IncrementMomentReport increment_moment_check(const HeavyTailLaw& law, double alpha, double p,
                                             int n, std::size_t reps, std::uint64_t seed,
                                             int workers);

struct MomentSweepRow {
  long long n;
  Estimate estimate;
};

struct MomentSweepResult {
  std::vector<MomentSweepRow> rows;
  /// max / min of the estimates over the upper half of n_values.
  double bounded_ratio = 0.0;
};

/// E|(Y_1 + ... + Y_N) / N^{1/alpha}|^p for N in `sizes`.
MomentSweepResult moment_sweep(const HeavyTailLaw& law, double alpha, double p,
                               std::span<const long long> sizes, std::size_t reps,
                               std::uint64_t seed, int workers);

struct RateSweepRow {
  int n;
  int m;
  Estimate distance;
  Estimate gap_walk;    ///< E||X_n - pi_m X_n||^p
  Estimate gap_stable;  ///< E||S - pi_m S||^p, S at level n + n_ref_offset
};

struct RateSweepResult {
  KappaUpsilon plan{};
  std::vector<RateSweepRow> rows;
  RateFitResult fit;
  double slope_ratio = 0.0;  ///< slope / (-upsilon)
  bool decay_ok = false;     ///< slope <= -decay_fraction * upsilon
  bool monotone_ok = false;  ///< first minus last mean >= monotone_sigmas combined stderr
  bool steeper_flag = false; ///< slope_ratio > 2; reported, never a failure
  double limit_scale = 1.0;  ///< scale of the coupled stable law
};

struct RateSweepOptions {
  double decay_fraction = 0.8;
  double monotone_sigmas = 3.0;
  CouplingMode mode = CouplingMode::walk;
};

/// Coupled distance at each n in config.n_values with m = round(kappa n),
/// plus both projection gaps, then a log2 fit of the mean distance on n.
/// The stable side uses the scale of the walk's stable limit.
RateSweepResult rate_sweep(const ExperimentConfig& config, int workers,
                           const RateSweepOptions& options = {});

}  // namespace stablewalk
