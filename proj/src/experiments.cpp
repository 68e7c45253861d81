#include "stablewalk/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stablewalk/errors.hpp"
#include "stablewalk/parallel.hpp"

namespace stablewalk {

namespace {

// Stream tags. Walk levels and sample sizes use their own value as tag;
// these offsets keep the auxiliary streams disjoint from them.
constexpr std::uint64_t kTableTag = 0xFFFFFF;
constexpr std::uint64_t kIncrementTag = 0xFFFFFE;
constexpr std::uint64_t kWalkGapOffset = 1ULL << 20;
constexpr std::uint64_t kStableGapOffset = 2ULL << 20;

}  // namespace

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (!(alpha > 1.0 && alpha < 2.0)) fail("alpha must satisfy 1 < alpha < 2");
  if (!(eta > 0.0 && eta < 1.0 / alpha)) fail("eta must satisfy 0 < eta < 1/alpha");
  if (!(p >= 1.0 && p < alpha)) fail("p must satisfy 1 <= p < alpha");
  if (!(gamma > 0.0)) fail("gamma must be positive");
  if (!(A > 0.0)) fail("A must be positive");
  if (!(K >= 0.0)) fail("K must be nonnegative");
  if (!(A + K <= 1.0)) fail("A + K must not exceed 1");
  if (n_values.empty()) fail("n_values must not be empty");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 0) fail("n_values must be nonnegative");
    if (i > 0 && n_values[i] <= n_values[i - 1]) fail("n_values must be strictly increasing");
  }
  if (reps < 2) fail("reps must be at least 2");
  if (n_ref_offset < 0) fail("n_ref_offset must be nonnegative");
  if (pool_size < QuantileTable::kMinPoolSize) fail("pool_size must be at least 100000");
  if (!(table_tail >= 0.0 && table_tail < 0.5)) fail("table_tail must lie in [0, 0.5)");
}

HeavyTailLaw ExperimentConfig::law() const {
  if (A == 1.0 && K == 0.0) return SymmetricParetoLaw(alpha);
  return PerturbedTailLaw(alpha, A, K, gamma);
}

double ExperimentConfig::effective_gamma() const {
  return K > 0.0 ? gamma : std::numeric_limits<double>::infinity();
}

ExperimentConfig ExperimentConfig::interp_error_defaults() {
  ExperimentConfig c;
  c.n_values = {2, 3, 4, 5, 6, 7};
  c.reps = 2000;
  c.n_ref_offset = 5;
  return c;
}

ExperimentConfig ExperimentConfig::moment_sweep_defaults() {
  ExperimentConfig c;
  for (int k = 4; k <= 14; ++k) c.n_values.push_back(1 << k);
  c.reps = 5000;
  return c;
}

ExperimentConfig ExperimentConfig::rate_sweep_defaults() {
  ExperimentConfig c;
  c.n_values = {3, 4, 5, 6, 7, 8, 9};
  c.reps = 1000;
  c.n_ref_offset = 4;
  return c;
}

KappaUpsilon plan_kappa_upsilon(double alpha, double eta, double p, double gamma) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("alpha must satisfy 1 < alpha < 2");
  if (!(eta > 0.0 && eta < 1.0 / alpha)) throw DomainError("eta must satisfy 0 < eta < 1/alpha");
  if (!(p >= 1.0 && p < alpha)) throw DomainError("p must satisfy 1 <= p < alpha");
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  const double regularity = (1.0 / alpha - eta) * p;
  const double rate = std::min(2.0 / alpha - 1.0, gamma / alpha);
  const double kappa = rate / (1.0 + regularity);
  return {kappa, regularity * kappa};
}

RateFitResult fit_loglog(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw DomainError("a rate fit needs at least three points");
  for (const auto& [n, v] : points) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      std::ostringstream msg;
      msg << "log-scale fit needs positive values (got " << v << " at n = " << n << ")";
      throw FitError(msg.str());
    }
  }
  const double k = static_cast<double>(points.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [n, v] : points) {
    mx += n;
    my += std::log2(v);
  }
  mx /= k;
  my /= k;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& [n, v] : points) {
    const double dx = n - mx;
    const double dy = std::log2(v) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw DomainError("a rate fit needs distinct abscissae");
  RateFitResult r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  const double ssr = std::max(0.0, syy - r.slope * sxy);
  r.r_squared = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
  r.slope_std_error = std::sqrt(ssr / (k - 2.0) / sxx);
  return r;
}

// ---------------------------------------------------------------------------

InterpErrorResult interp_error_sweep(const ExperimentConfig& config, const GapSource& source,
                                     int workers, double slope_band) {
  config.validate();
  InterpErrorResult result;
  result.n_ref = config.n_values.back() + config.n_ref_offset;
  if (config.n_values.front() < 2 || config.n_values.back() > result.n_ref - 2) {
    throw ConfigError("interpolation levels must lie in [2, n_ref - 2]");
  }
  MonteCarloOptions mc;
  mc.reps = config.reps;
  mc.master_seed = config.seed;
  mc.workers = workers;
  const auto estimates =
      projection_gaps(source, config.n_values, result.n_ref, config.sobolev(), mc);

  std::vector<std::pair<double, double>> points;
  for (std::size_t k = 0; k < estimates.size(); ++k) {
    result.rows.push_back({config.n_values[k], estimates[k]});
    points.emplace_back(config.n_values[k], estimates[k].mean);
  }
  result.predicted_slope = -(1.0 / config.alpha - config.eta) * config.p;
  result.slope_band = slope_band;
  result.fit = fit_loglog(points);
  result.within_band = std::fabs(result.fit.slope - result.predicted_slope) <= slope_band;
  return result;
}

std::vector<std::pair<double, double>> increment_pair_battery(int n) {
  const double h = std::exp2(-n);
  std::vector<std::pair<double, double>> pairs;
  for (long long k = 1; k <= (1LL << n); k *= 2) pairs.emplace_back(0.0, k * h);
  pairs.emplace_back(0.25 * h, 0.75 * h);
  for (long long k = 1; k < (1LL << n); k *= 2) pairs.emplace_back(0.5 * h, (k + 0.5) * h);
  return pairs;
}

IncrementMomentReport increment_moment_check(const HeavyTailLaw& law, double alpha, double p,
                                             int n, std::size_t reps, std::uint64_t seed,
                                             int workers) {
  if (alpha_of(law) != alpha) throw DomainError("increment law alpha differs from alpha");
  if (!(p > 0.0 && p < alpha)) throw DomainError("increment moments need 0 < p < alpha");
  if (reps < 2) throw ConfigError("reps must be at least 2");
  const auto battery = increment_pair_battery(n);
  const auto per_rep =
      run_indexed<std::vector<double>>(reps, workers, [&](std::size_t r) {
        RngStream stream(seed, RngStream::index_for(kIncrementTag, r));
        const DyadicPath walk = sample_walk_path(law, n, stream);
        std::vector<double> out;
        out.reserve(battery.size());
        for (const auto& [s, t] : battery) {
          out.push_back(std::pow(std::fabs(walk.eval(t) - walk.eval(s)), p));
        }
        return out;
      });

  IncrementMomentReport report;
  report.n = n;
  const double h = std::exp2(-n);
  std::vector<double> column(reps);
  for (std::size_t k = 0; k < battery.size(); ++k) {
    for (std::size_t r = 0; r < reps; ++r) column[r] = per_rep[r][k];
    const auto [s, t] = battery[k];
    IncrementPair pair;
    const bool grid_s = std::fmod(s, h) == 0.0;
    const bool grid_t = std::fmod(t, h) == 0.0;
    if (grid_s && grid_t) {
      pair.kind = IncrementPair::Kind::on_grid;
    } else if (std::floor(s / h) == std::floor(t / h)) {
      pair.kind = IncrementPair::Kind::same_cell;
    } else {
      pair.kind = IncrementPair::Kind::straddling;
    }
    pair.s = s;
    pair.t = t;
    pair.moment = make_estimate(column);
    pair.ratio = pair.moment.mean / std::pow(t - s, p / alpha);
    report.max_ratio = std::max(report.max_ratio, pair.ratio);
    report.pairs.push_back(pair);
  }
  return report;
}

MomentSweepResult moment_sweep(const HeavyTailLaw& law, double alpha, double p,
                               std::span<const long long> sizes, std::size_t reps,
                               std::uint64_t seed, int workers) {
  if (alpha_of(law) != alpha) throw DomainError("increment law alpha differs from alpha");
  if (!(p > 0.0 && p < alpha)) throw DomainError("moment sweep needs 0 < p < alpha");
  if (reps < 2) throw ConfigError("reps must be at least 2");
  if (sizes.empty()) throw ConfigError("moment sweep needs at least one sample size");
  for (long long n : sizes) {
    if (n < 1) throw ConfigError("sample sizes must be positive");
  }
  MomentSweepResult result;
  for (long long n : sizes) {
    const double norm = std::pow(static_cast<double>(n), -1.0 / alpha);
    const auto values = run_indexed<double>(reps, workers, [&](std::size_t r) {
      RngStream stream(seed, RngStream::index_for(static_cast<std::uint64_t>(n), r));
      double sum = 0.0;
      for (long long i = 0; i < n; ++i) sum += sample(law, stream);
      return std::pow(std::fabs(sum * norm), p);
    });
    result.rows.push_back({n, make_estimate(values)});
  }
  const std::size_t upper = std::max<std::size_t>(1, result.rows.size() / 2);
  double hi = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t k = result.rows.size() - upper; k < result.rows.size(); ++k) {
    hi = std::max(hi, result.rows[k].estimate.mean);
    lo = std::min(lo, result.rows[k].estimate.mean);
  }
  result.bounded_ratio = hi / lo;
  return result;
}

RateSweepResult rate_sweep(const ExperimentConfig& config, int workers,
                           const RateSweepOptions& options) {
  config.validate();
  RateSweepResult result;
  result.plan = plan_kappa_upsilon(config.alpha, config.eta, config.p, config.effective_gamma());
  const HeavyTailLaw law = config.law();
  const SobolevParams params = config.sobolev();
  result.limit_scale = limit_stable_scale(law);
  const StableLaw stable(config.alpha, result.limit_scale);

  RngStream table_stream(config.seed, RngStream::index_for(kTableTag, 0));
  const QuantileTable table = build_quantile_table(stable, config.pool_size, table_stream, config.table_tail);

  MonteCarloOptions mc;
  mc.reps = config.reps;
  mc.master_seed = config.seed;
  mc.workers = workers;

  std::vector<std::pair<double, double>> points;
  for (int n : config.n_values) {
    if (n < 1) throw ConfigError("rate sweep levels must be at least 1");
    RateSweepRow row;
    row.n = n;
    row.m = std::min<int>(n - 1, static_cast<int>(std::lround(result.plan.kappa * n)));
    row.distance = coupled_distance(n, law, table, params, mc, options.mode);
    row.gap_walk =
        projection_gap(GapSource::random_walk(law), row.m, n, params, mc, kWalkGapOffset);
    row.gap_stable = projection_gap(GapSource::stable_process(stable), row.m,
                                    n + config.n_ref_offset, params, mc, kStableGapOffset);
    points.emplace_back(n, row.distance.mean);
    result.rows.push_back(row);
  }

  result.fit = fit_loglog(points);
  const double upsilon = result.plan.upsilon;
  result.slope_ratio = result.fit.slope / (-upsilon);
  result.decay_ok = result.fit.slope <= -options.decay_fraction * upsilon;
  result.steeper_flag = result.slope_ratio > 2.0;
  const Estimate& first = result.rows.front().distance;
  const Estimate& last = result.rows.back().distance;
  const double combined = std::hypot(first.std_error, last.std_error);
  result.monotone_ok = first.mean - last.mean >= options.monotone_sigmas * combined;
  return result;
}

}  // namespace stablewalk
