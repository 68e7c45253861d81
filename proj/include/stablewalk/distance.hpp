#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stablewalk/paths.hpp"
#include "stablewalk/randlaws.hpp"
#include "stablewalk/sobolev.hpp"

namespace stablewalk {

/// Monte Carlo mean with standard error (sample sd / sqrt(replications)).
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t replications = 0;
};

/// Requires at least two values.
Estimate make_estimate(std::span<const double> values);

/// Exact W1 between two empirical measures with N atoms each:
/// mean |a_(i) - b_(i)| over the sorted samples.
double w1_sorted(std::span<const double> a, std::span<const double> b);

/// Walk and stable skeleton at one level whose cell increments are
/// comonotone images of shared uniforms.
struct CoupledPair {
  DyadicPath walk_path;
  DyadicPath stable_path;

  int level() const noexcept { return walk_path.level(); }
};

enum class CouplingMode {
  walk,  ///< walk increments from the heavy-tailed law
  self,  ///< walk increments from the stable table itself (sanity check)
};

/// Builds the coupled pair from explicit uniforms (one per cell).
CoupledPair coupled_pair_from_uniforms(std::span<const double> uniforms,
                                       const HeavyTailLaw& law, const QuantileTable& table,
                                       double alpha, CouplingMode mode = CouplingMode::walk);

/// Level-n coupled pair; draws 2^n uniforms from `stream`.
CoupledPair coupled_path_pair(int n, const HeavyTailLaw& law, const QuantileTable& table,
                              double alpha, RngStream& stream,
                              CouplingMode mode = CouplingMode::walk);

enum class NormMethod {
  banded,  ///< BandedSeminorm product rule; what the sweeps use
  exact,   ///< seminorm_parts quadrature; O(4^level) pair integrals
};

/// Replication controls shared by all Monte Carlo estimators. Replicate r of
/// sweep point `tag` draws from RngStream(master_seed, index_for(tag, r)).
struct MonteCarloOptions {
  std::size_t reps = 1000;
  std::uint64_t master_seed = 1;
  int workers = 1;
  NormMethod method = NormMethod::banded;
  std::size_t band = 2;
};

/// Mean over replicates of diff_norm(walk_path, stable_path) at level n.
Estimate coupled_distance(int n, const HeavyTailLaw& law, const QuantileTable& table,
                          const SobolevParams& params, const MonteCarloOptions& options,
                          CouplingMode mode = CouplingMode::walk);

/// Process whose interpolation gap is measured.
struct GapSource {
  enum class Kind { stable, walk, affine };

  Kind kind = Kind::stable;
  std::optional<StableLaw> stable;
  std::optional<HeavyTailLaw> walk;
  double intercept = 0.0;
  double slope = 0.0;

  static GapSource stable_process(const StableLaw& law);
  static GapSource random_walk(const HeavyTailLaw& law);
  /// Deterministic c0 + c1 t; its gap is zero at every level.
  static GapSource affine(double c0, double c1);

  DyadicPath draw(int level, RngStream& stream) const;
};

/// Estimates E ||F - pi_m F||^p (the p-th power, Lp part plus seminorm) for
/// each m in `levels`, with F drawn at level n_ref. Every m sees the same
/// replicate paths; the stream tag is n_ref.
std::vector<Estimate> projection_gaps(const GapSource& source, std::span<const int> levels,
                                      int n_ref, const SobolevParams& params,
                                      const MonteCarloOptions& options,
                                      std::uint64_t tag_offset = 0);

Estimate projection_gap(const GapSource& source, int m, int n_ref, const SobolevParams& params,
                        const MonteCarloOptions& options, std::uint64_t tag_offset = 0);

}  // namespace stablewalk
