// stablewalk command-line tool: samplers, path norms and the Monte Carlo sweeps.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "stablewalk/distance.hpp"
#include "stablewalk/errors.hpp"
#include "stablewalk/experiments.hpp"
#include "stablewalk/format.hpp"
#include "stablewalk/parallel.hpp"
#include "stablewalk/paths.hpp"
#include "stablewalk/randlaws.hpp"
#include "stablewalk/sobolev.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace stablewalk;

namespace {

constexpr const char* kToolVersion = "0.3.0";

enum Exit { kOk = 0, kConfig = 2, kNumeric = 3 };

// Output sink: a file when a path is given, standard output otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ConfigError("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
  out << text;
}

json config_json(const ExperimentConfig& c) {
  return {{"alpha", c.alpha},   {"eta", c.eta},
          {"p", c.p},           {"gamma", c.gamma},
          {"A", c.A},           {"K", c.K},
          {"n_values", c.n_values}, {"reps", c.reps},
          {"n_ref_offset", c.n_ref_offset}, {"seed", c.seed},
          {"pool_size", c.pool_size}, {"table_tail", c.table_tail}};
}

json fit_json(const RateFitResult& f) {
  return {{"slope", f.slope},
          {"intercept", f.intercept},
          {"r_squared", f.r_squared},
          {"slope_std_error", f.slope_std_error}};
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// ---------------------------------------------------------------------------
// Law flags shared by `sample` and `path`.

struct LawFlags {
  std::string law = "pareto";
  double alpha = 1.5;
  double A = 1.0;
  double K = 0.0;
  double gamma = 1.0;
  double scale = 1.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--law", law, "pareto | perturbed | stable")
        ->check(CLI::IsMember({"pareto", "perturbed", "stable"}));
    cmd->add_option("--alpha", alpha, "stability index, 1 < alpha < 2");
    cmd->add_option("--A", A, "tail amplitude (perturbed law)");
    cmd->add_option("--K", K, "perturbation amplitude (perturbed law)");
    cmd->add_option("--gamma", gamma, "perturbation decay exponent (perturbed law)");
    cmd->add_option("--scale", scale, "scale of the stable law");
  }

  HeavyTailLaw heavy() const {
    if (law == "pareto") return SymmetricParetoLaw(alpha);
    return PerturbedTailLaw(alpha, A, K, gamma);
  }
};

// ---------------------------------------------------------------------------

struct SampleCmd {
  LawFlags law;
  std::size_t count = 10;
  std::uint64_t seed = 1;
  std::string out;

  int run() const {
    RngStream stream(seed, 0);
    std::vector<double> xs(count);
    if (law.law == "stable") {
      const StableLaw s(law.alpha, law.scale);
      for (double& x : xs) x = sample_stable(s, stream);
    } else {
      const HeavyTailLaw h = law.heavy();
      for (double& x : xs) x = sample(h, stream);
    }
    Sink sink(out);
    auto& os = sink.stream();
    os << "index,value\n";
    for (std::size_t i = 0; i < xs.size(); ++i) os << i << ',' << format_real(xs[i]) << '\n';
    return kOk;
  }
};

struct PathCmd {
  LawFlags law;
  std::string kind = "walk";
  int level = 8;
  std::uint64_t seed = 1;
  std::string out;

  int run() const {
    if (level < 0 || level > DyadicPath::kMaxLevel) throw ConfigError("level out of range");
    RngStream stream(seed, 0);
    std::optional<DyadicPath> path;
    if (kind == "identity") {
      path = DyadicPath::from_function(level, [](double t) { return t; });
    } else if (kind == "zero") {
      path = DyadicPath::zero(level);
    } else if (law.law == "stable") {
      path = sample_stable_path(StableLaw(law.alpha, law.scale), level, stream);
    } else {
      path = sample_walk_path(law.heavy(), level, stream);
    }
    Sink sink(out);
    write_path_csv(sink.stream(), *path);
    return kOk;
  }
};

struct NormCmd {
  std::string path;
  double eta = 0.25;
  double p = 1.2;
  bool seminorm_only = false;
  int max_level = 12;

  int run() const {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read path file '" + path + "'");
    const DyadicPath f = read_path_csv(in);
    if (f.level() > max_level) {
      // every cell pair is integrated, so each extra level quadruples the work
      throw ConfigError("path level " + std::to_string(f.level()) + " exceeds --max-level " +
                        std::to_string(max_level) + "; exact evaluation costs O(4^level)");
    }
    const SobolevParams params{eta, p};
    const double v = seminorm_only ? seminorm_p(f, params) : norm(f, params);
    std::cout << format_short(v) << '\n';
    return kOk;
  }
};

struct PlanCmd {
  double alpha = 1.5;
  double eta = 0.2;
  double p = 1.2;
  double gamma = std::numeric_limits<double>::infinity();
  std::vector<int> levels;

  int run() const {
    const KappaUpsilon plan = plan_kappa_upsilon(alpha, eta, p, gamma);
    json j = {{"alpha", alpha}, {"eta", eta}, {"p", p},
              {"gamma", std::isinf(gamma) ? json("inf") : json(gamma)},
              {"kappa", plan.kappa}, {"upsilon", plan.upsilon}};
    json ms = json::array();
    for (int n : levels) ms.push_back({{"n", n}, {"m", std::lround(plan.kappa * n)}});
    if (!levels.empty()) j["levels"] = ms;
    std::cout << j.dump(2) << '\n';
    return kOk;
  }
};

// ---------------------------------------------------------------------------
// Sweeps

struct SweepFlags {
  std::string config_file;
  std::map<std::string, std::string> overrides;
  int workers = 0;
  std::string out = ".";

  void attach(CLI::App* cmd) {
    cmd->add_option("config", config_file, "key = value config file")->check(CLI::ExistingFile);
    cmd->add_option("--workers,-W", workers, "worker threads (default: STABLEWALK_WORKERS or all cores)");
    cmd->add_option("--out", out, "output directory");
    for (const char* key : {"alpha", "eta", "p", "gamma", "A", "K", "n_values", "reps",
                            "n_ref_offset", "seed", "pool_size", "table_tail"}) {
      cmd->add_option_function<std::string>(
          std::string("--") + key,
          [this, key](const std::string& v) { overrides[key] = v; },
          "override config key");
    }
  }

  ExperimentConfig load(ExperimentConfig base) const {
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw ConfigError("cannot read config '" + config_file + "'");
      base = parse_config(in, base);
    }
    for (const auto& [k, v] : overrides) apply_config_value(base, k, v);
    base.validate();
    return base;
  }

  int thread_count() const { return workers > 0 ? workers : default_workers(); }
};

// Writes summary, plot script and manifest next to the data file.
void finish_outputs(const fs::path& dir, const std::string& stem, const std::string& csv,
                    json summary, const std::string& plot, const ExperimentConfig& config) {
  fs::create_directories(dir);
  const fs::path data = dir / (stem + ".csv");
  const fs::path summary_path = dir / (stem + ".json");
  const fs::path plot_path = dir / (stem + ".gp");
  write_text(data, csv);
  write_text(summary_path, summary.dump(2) + "\n");
  write_text(plot_path, plot);

  json manifest = {{"config", config_json(config)},
                   {"tool_version", kToolVersion},
                   {"timestamp", utc_timestamp()},
                   {"output_paths",
                    {data.string(), summary_path.string(), plot_path.string()}}};
  write_text(dir / (stem + ".manifest.json"), manifest.dump(2) + "\n");
  std::cout << summary.dump(2) << '\n';
}

std::string plot_script(const std::string& stem, const std::string& xlabel,
                        const std::string& ylabel, const std::string& extra) {
  std::ostringstream gp;
  gp << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set logscale y 2\n"
     << "set xlabel '" << xlabel << "'\n"
     << "set ylabel '" << ylabel << "'\n"
     << "set terminal pngcairo size 800,600\n"
     << "set output '" << stem << ".png'\n"
     << extra;
  return gp.str();
}

struct InterpCmd {
  SweepFlags flags;
  std::string source = "stable";
  double slope_band = 0.15;

  int run() const {
    const ExperimentConfig config = flags.load(ExperimentConfig::interp_error_defaults());
    GapSource src = source == "walk"     ? GapSource::random_walk(config.law())
                    : source == "affine" ? GapSource::affine(1.0, -2.0)
                                         : GapSource::stable_process(StableLaw(config.alpha));
    const InterpErrorResult r = interp_error_sweep(config, src, flags.thread_count(), slope_band);

    std::ostringstream csv;
    csv << "m,estimate,stderr\n";
    for (const auto& row : r.rows) {
      csv << row.m << ',' << format_real(row.estimate.mean) << ','
          << format_real(row.estimate.std_error) << '\n';
    }
    const auto& first = r.rows.front().estimate;
    const auto& last = r.rows.back().estimate;
    const bool decreasing =
        first.mean - last.mean >= 2.0 * std::hypot(first.std_error, last.std_error);
    json summary = {{"command", "interp_error"},
                    {"source", source},
                    {"config", config_json(config)},
                    {"n_ref", r.n_ref},
                    {"slope", r.fit.slope},
                    {"fit", fit_json(r.fit)},
                    {"predicted_slope", r.predicted_slope},
                    {"slope_band", r.slope_band},
                    {"pass", {{"slope_within_band", r.within_band}, {"decreasing", decreasing}}}};
    std::ostringstream extra;
    extra << "f(x) = 2**(" << format_short(r.fit.intercept) << " + " << format_short(r.fit.slope)
          << "*x)\n"
          << "plot 'interp_error.csv' using 1:2:3 with yerrorlines title 'estimate', "
          << "f(x) title 'fit'\n";
    finish_outputs(flags.out, "interp_error", csv.str(), summary,
                   plot_script("interp_error", "m", "E ||F - pi_m F||^p", extra.str()), config);
    return kOk;
  }
};

struct MomentCmd {
  SweepFlags flags;
  double ratio_limit = 1.25;

  int run() const {
    const ExperimentConfig config = flags.load(ExperimentConfig::moment_sweep_defaults());
    const std::vector<long long> sizes(config.n_values.begin(), config.n_values.end());
    const MomentSweepResult r = moment_sweep(config.law(), config.alpha, config.p, sizes,
                                             config.reps, config.seed, flags.thread_count());
    std::ostringstream csv;
    csv << "n,estimate,stderr\n";
    for (const auto& row : r.rows) {
      csv << row.n << ',' << format_real(row.estimate.mean) << ','
          << format_real(row.estimate.std_error) << '\n';
    }
    json summary = {{"command", "moment_sweep"},
                    {"config", config_json(config)},
                    {"bounded_ratio", r.bounded_ratio},
                    {"ratio_limit", ratio_limit},
                    {"pass", {{"bounded", r.bounded_ratio <= ratio_limit}}}};
    const std::string extra =
        "set logscale x 2\n"
        "plot 'moment_sweep.csv' using 1:2:3 with yerrorlines title 'estimate'\n";
    finish_outputs(flags.out, "moment_sweep", csv.str(), summary,
                   plot_script("moment_sweep", "N", "E |S_N / N^(1/alpha)|^p", extra), config);
    return kOk;
  }
};

struct RateCmd {
  SweepFlags flags;
  std::string coupling = "walk";
  double decay_fraction = 0.8;

  int run() const {
    const ExperimentConfig config = flags.load(ExperimentConfig::rate_sweep_defaults());
    RateSweepOptions opts;
    opts.decay_fraction = decay_fraction;
    opts.mode = coupling == "self" ? CouplingMode::self : CouplingMode::walk;
    const RateSweepResult r = rate_sweep(config, flags.thread_count(), opts);

    std::ostringstream csv;
    csv << "n,m,distance_mean,distance_stderr,gap_walk,gap_stable\n";
    for (const auto& row : r.rows) {
      csv << row.n << ',' << row.m << ',' << format_real(row.distance.mean) << ','
          << format_real(row.distance.std_error) << ',' << format_real(row.gap_walk.mean) << ','
          << format_real(row.gap_stable.mean) << '\n';
    }
    json summary = {{"command", "rate_sweep"},
                    {"config", config_json(config)},
                    {"kappa", r.plan.kappa},
                    {"upsilon", r.plan.upsilon},
                    {"slope", r.fit.slope},
                    {"fit", fit_json(r.fit)},
                    {"minus_upsilon", -r.plan.upsilon},
                    {"slope_ratio", r.slope_ratio},
                    {"limit_scale", r.limit_scale},
                    {"steeper_than_predicted", r.steeper_flag},
                    {"pass", {{"decay", r.decay_ok}, {"monotone", r.monotone_ok}}}};
    std::ostringstream extra;
    extra << "f(x) = 2**(" << format_short(r.fit.intercept) << " + " << format_short(r.fit.slope)
          << "*x)\n"
          << "plot 'rate_sweep.csv' using 1:3:4 with yerrorlines title 'distance', "
          << "f(x) title 'fit'\n";
    finish_outputs(flags.out, "rate_sweep", csv.str(), summary,
                   plot_script("rate_sweep", "n", "E ||X_n - S||", extra.str()), config);
    return kOk;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heavy-tailed random walks, stable processes and fractional Sobolev distances"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  SampleCmd sample_cmd;
  auto* sample = app.add_subcommand("sample", "draw iid variates as CSV (index,value)");
  sample_cmd.law.attach(sample);
  sample->add_option("--count", sample_cmd.count, "number of draws");
  sample->add_option("--seed", sample_cmd.seed, "master seed");
  sample->add_option("--out", sample_cmd.out, "output file (default: stdout)");

  PathCmd path_cmd;
  auto* path = app.add_subcommand("path", "write a dyadic path as CSV (t,value)");
  path_cmd.law.attach(path);
  path->add_option("--kind", path_cmd.kind, "walk | identity | zero; walk honours --law")
      ->check(CLI::IsMember({"walk", "identity", "zero"}));
  path->add_option("--level", path_cmd.level, "dyadic level");
  path->add_option("--seed", path_cmd.seed, "master seed");
  path->add_option("--out", path_cmd.out, "output file (default: stdout)");

  NormCmd norm_cmd;
  auto* norm = app.add_subcommand("norm", "fractional Sobolev norm of a path file");
  norm->add_option("--path", norm_cmd.path, "CSV written by `path`")->required();
  norm->add_option("--eta", norm_cmd.eta, "regularity, 0 < eta < 1");
  norm->add_option("--p", norm_cmd.p, "integrability, p >= 1");
  norm->add_flag("--seminorm", norm_cmd.seminorm_only, "print the p-th power seminorm only");
  norm->add_option("--max-level", norm_cmd.max_level,
                   "refuse paths above this level; cost grows 4x per level")
      ->check(CLI::Range(0, DyadicPath::kMaxLevel));

  PlanCmd plan_cmd;
  auto* plan = app.add_subcommand("plan", "kappa and upsilon for a parameter set");
  plan->add_option("--alpha", plan_cmd.alpha);
  plan->add_option("--eta", plan_cmd.eta);
  plan->add_option("--p", plan_cmd.p);
  plan->add_option("--gamma", plan_cmd.gamma, "perturbation exponent (default: none)");
  plan->add_option("--levels", plan_cmd.levels, "walk levels to report m = round(kappa n) for")
      ->delimiter(',');

  InterpCmd interp_cmd;
  auto* interp = app.add_subcommand("interp_error", "interpolation error against m");
  interp_cmd.flags.attach(interp);
  interp->add_option("--source", interp_cmd.source, "stable | walk | affine")
      ->check(CLI::IsMember({"stable", "walk", "affine"}));
  interp->add_option("--slope-band", interp_cmd.slope_band, "accepted |slope - predicted|");

  MomentCmd moment_cmd;
  auto* moment = app.add_subcommand("moment_sweep", "normalized partial-sum moments against N");
  moment_cmd.flags.attach(moment);
  moment->add_option("--ratio-limit", moment_cmd.ratio_limit, "accepted max/min ratio");

  RateCmd rate_cmd;
  auto* rate = app.add_subcommand("rate_sweep", "coupled walk/stable distance against n");
  rate_cmd.flags.attach(rate);
  rate->add_option("--coupling", rate_cmd.coupling, "walk | self")
      ->check(CLI::IsMember({"walk", "self"}));
  rate->add_option("--decay-fraction", rate_cmd.decay_fraction,
                   "required slope as a fraction of -upsilon");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (*sample) return sample_cmd.run();
    if (*path) return path_cmd.run();
    if (*norm) return norm_cmd.run();
    if (*plan) return plan_cmd.run();
    if (*interp) return interp_cmd.run();
    if (*moment) return moment_cmd.run();
    if (*rate) return rate_cmd.run();
  } catch (const FitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kOk;
}
