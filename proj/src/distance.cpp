#include "stablewalk/distance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stablewalk/errors.hpp"
#include "stablewalk/parallel.hpp"

namespace stablewalk {

Estimate make_estimate(std::span<const double> values) {
  if (values.size() < 2) throw ConfigError("an estimate needs at least two replications");
  double sum = 0.0;
  for (double v : values) sum += v;
  const double n = static_cast<double>(values.size());
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n), values.size()};
}

double w1_sorted(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeError("w1_sorted needs samples of equal size");
  if (a.empty()) throw ShapeError("w1_sorted needs at least one atom");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::fabs(x[i] - y[i]);
  return s / static_cast<double>(x.size());
}

CoupledPair coupled_pair_from_uniforms(std::span<const double> uniforms,
                                       const HeavyTailLaw& law, const QuantileTable& table,
                                       double alpha, CouplingMode mode) {
  if (table.alpha() != alpha) throw DomainError("quantile table alpha differs from walk alpha");
  if (alpha_of(law) != alpha) throw DomainError("increment law alpha differs from walk alpha");
  const std::size_t cells = uniforms.size();
  if (cells == 0 || (cells & (cells - 1)) != 0) throw ShapeError("need 2^n uniforms");
  int n = 0;
  while ((std::size_t{1} << n) < cells) ++n;

  std::vector<double> y(cells);
  std::vector<double> z(cells);
  for (std::size_t k = 0; k < cells; ++k) {
    z[k] = table.quantile(uniforms[k]);
    y[k] = mode == CouplingMode::self ? z[k] : quantile(law, uniforms[k]);
  }
  return {build_walk(y, alpha, n), build_walk(z, alpha, n)};
}

CoupledPair coupled_path_pair(int n, const HeavyTailLaw& law, const QuantileTable& table,
                              double alpha, RngStream& stream, CouplingMode mode) {
  if (n < 0 || n > DyadicPath::kMaxLevel) throw DomainError("invalid level");
  std::vector<double> u(std::size_t{1} << n);
  for (double& x : u) x = stream.uniform();
  return coupled_pair_from_uniforms(u, law, table, alpha, mode);
}

namespace {

// ||path||^p by the selected method.
class PowerNorm {
 public:
  PowerNorm(int level, const SobolevParams& params, const MonteCarloOptions& options)
      : params_(params), method_(options.method) {
    if (method_ == NormMethod::banded) banded_.emplace(level, params, options.band);
  }

  double operator()(const DyadicPath& path) const {
    if (banded_) return banded_->norm_p(path);
    return lp_part(path, params_.p) + seminorm_p(path, params_);
  }

 private:
  SobolevParams params_;
  NormMethod method_;
  std::optional<BandedSeminorm> banded_;
};

void check_reps(const MonteCarloOptions& options) {
  if (options.reps < 2) throw ConfigError("Monte Carlo estimates need reps >= 2");
}

}  // namespace

Estimate coupled_distance(int n, const HeavyTailLaw& law, const QuantileTable& table,
                          const SobolevParams& params, const MonteCarloOptions& options,
                          CouplingMode mode) {
  params.validate();
  check_reps(options);
  const double alpha = alpha_of(law);
  const PowerNorm power(n, params, options);
  const auto values = run_indexed<double>(options.reps, options.workers, [&](std::size_t r) {
    RngStream stream(options.master_seed, RngStream::index_for(static_cast<std::uint64_t>(n), r));
    const CoupledPair pair = coupled_path_pair(n, law, table, alpha, stream, mode);
    return std::pow(power(pair.walk_path - pair.stable_path), 1.0 / params.p);
  });
  return make_estimate(values);
}

GapSource GapSource::stable_process(const StableLaw& law) {
  GapSource s;
  s.kind = Kind::stable;
  s.stable = law;
  return s;
}

GapSource GapSource::random_walk(const HeavyTailLaw& law) {
  GapSource s;
  s.kind = Kind::walk;
  s.walk = law;
  return s;
}

GapSource GapSource::affine(double c0, double c1) {
  GapSource s;
  s.kind = Kind::affine;
  s.intercept = c0;
  s.slope = c1;
  return s;
}

DyadicPath GapSource::draw(int level, RngStream& stream) const {
  switch (kind) {
    case Kind::stable:
      return sample_stable_path(*stable, level, stream);
    case Kind::walk:
      return sample_walk_path(*walk, level, stream);
    case Kind::affine:
      break;
  }
  return DyadicPath::from_function(level, [this](double t) { return intercept + slope * t; });
}

std::vector<Estimate> projection_gaps(const GapSource& source, std::span<const int> levels,
                                      int n_ref, const SobolevParams& params,
                                      const MonteCarloOptions& options,
                                      std::uint64_t tag_offset) {
  params.validate();
  check_reps(options);
  for (int m : levels) {
    if (m < 0 || m >= n_ref) {
      std::ostringstream msg;
      msg << "projection level must satisfy 0 <= m < n_ref = " << n_ref << " (got " << m << ")";
      throw DomainError(msg.str());
    }
  }
  const PowerNorm power(n_ref, params, options);
  const std::uint64_t tag = tag_offset + static_cast<std::uint64_t>(n_ref);
  const auto per_rep = run_indexed<std::vector<double>>(
      options.reps, options.workers, [&](std::size_t r) {
        RngStream stream(options.master_seed, RngStream::index_for(tag, r));
        const DyadicPath f = source.draw(n_ref, stream);
        std::vector<double> out;
        out.reserve(levels.size());
        for (int m : levels) out.push_back(power(f - project(f, m)));
        return out;
      });
  std::vector<Estimate> estimates;
  std::vector<double> column(options.reps);
  for (std::size_t k = 0; k < levels.size(); ++k) {
    for (std::size_t r = 0; r < options.reps; ++r) column[r] = per_rep[r][k];
    estimates.push_back(make_estimate(column));
  }
  return estimates;
}

Estimate projection_gap(const GapSource& source, int m, int n_ref, const SobolevParams& params,
                        const MonteCarloOptions& options, std::uint64_t tag_offset) {
  const int levels[] = {m};
  return projection_gaps(source, levels, n_ref, params, options, tag_offset).front();
}

}  // namespace stablewalk
