#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>
#include <sstream>

#include "stablewalk/distance.hpp"
#include "stablewalk/errors.hpp"
#include "stablewalk/experiments.hpp"
#include "stablewalk/paths.hpp"
#include "stablewalk/randlaws.hpp"
#include "stablewalk/sobolev.hpp"

namespace py = pybind11;
using namespace stablewalk;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(std::span<const double> v) {
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

std::vector<double> to_vector(const Array& a) {
  if (a.ndim() != 1) throw ShapeError("expected a one-dimensional array");
  return {a.data(), a.data() + a.size()};
}

template <class Draw>
Array draw_many(std::size_t count, std::uint64_t seed, std::uint64_t stream, Draw draw) {
  RngStream s(seed, stream);
  Array out(static_cast<py::ssize_t>(count));
  double* p = out.mutable_data();
  {
    py::gil_scoped_release release;
    for (std::size_t i = 0; i < count; ++i) p[i] = draw(s);
  }
  return out;
}

// The law variant has no default state, so it is converted by hand.
HeavyTailLaw to_law(const py::handle& obj) {
  if (py::isinstance<SymmetricParetoLaw>(obj)) return obj.cast<SymmetricParetoLaw>();
  if (py::isinstance<PerturbedTailLaw>(obj)) return obj.cast<PerturbedTailLaw>();
  throw py::type_error("expected SymmetricParetoLaw or PerturbedTailLaw");
}

py::dict estimate_dict(const Estimate& e) {
  py::dict d;
  d["mean"] = e.mean;
  d["std_error"] = e.std_error;
  d["replications"] = e.replications;
  return d;
}

py::dict fit_dict(const RateFitResult& f) {
  py::dict d;
  d["slope"] = f.slope;
  d["intercept"] = f.intercept;
  d["r_squared"] = f.r_squared;
  d["slope_std_error"] = f.slope_std_error;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Heavy-tailed walks, stable processes and fractional Sobolev norms";

  auto domain = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<FitError>(m, "FitError", domain.ptr());

  // -- laws -----------------------------------------------------------------
  py::class_<SymmetricParetoLaw>(m, "SymmetricParetoLaw")
      .def(py::init<double>(), py::arg("alpha"))
      .def_property_readonly("alpha", &SymmetricParetoLaw::alpha)
      .def("cdf", &SymmetricParetoLaw::cdf)
      .def("quantile", &SymmetricParetoLaw::quantile)
      .def("__repr__", [](const SymmetricParetoLaw& l) {
        std::ostringstream s;
        s << "SymmetricParetoLaw(alpha=" << l.alpha() << ")";
        return s.str();
      });

  py::class_<PerturbedTailLaw>(m, "PerturbedTailLaw")
      .def(py::init<double, double, double, double>(), py::arg("alpha"), py::arg("A"),
           py::arg("K"), py::arg("gamma"))
      .def_property_readonly("alpha", &PerturbedTailLaw::alpha)
      .def_property_readonly("A", &PerturbedTailLaw::A)
      .def_property_readonly("K", &PerturbedTailLaw::K)
      .def_property_readonly("gamma", &PerturbedTailLaw::gamma)
      .def("survival", &PerturbedTailLaw::survival)
      .def("cdf", &PerturbedTailLaw::cdf)
      .def("density", &PerturbedTailLaw::density)
      .def("quantile", &PerturbedTailLaw::quantile);

  py::class_<StableLaw>(m, "StableLaw")
      .def(py::init<double, double>(), py::arg("alpha"), py::arg("scale") = 1.0)
      .def_property_readonly("alpha", &StableLaw::alpha)
      .def_property_readonly("scale", &StableLaw::scale);

  m.def("sample",
        [](const py::object& obj, std::size_t count, std::uint64_t seed, std::uint64_t stream) {
          const HeavyTailLaw law = to_law(obj);
          return draw_many(count, seed, stream, [&](RngStream& s) { return sample(law, s); });
        },
        py::arg("law"), py::arg("count"), py::arg("seed") = 1, py::arg("stream") = 0);
  m.def("sample_stable",
        [](const StableLaw& law, std::size_t count, std::uint64_t seed, std::uint64_t stream) {
          return draw_many(count, seed, stream,
                           [&](RngStream& s) { return sample_stable(law, s); });
        },
        py::arg("law"), py::arg("count"), py::arg("seed") = 1, py::arg("stream") = 0);
  m.def("stable_upper_quantile", &stable_upper_quantile, py::arg("law"), py::arg("v"));
  m.def("stable_series_threshold", &stable_series_threshold, py::arg("alpha"));
  m.def("cms_variate", &cms_variate, py::arg("alpha"), py::arg("angle"), py::arg("expo"));
  m.def("abs_moment",
        [](const py::object& obj, double p) { return abs_moment(to_law(obj), p); },
        py::arg("law"), py::arg("p"));
  m.def("phi_p", &phi_p, py::arg("x"), py::arg("p"));
  m.def("tail_amplitude", [](const py::object& obj) { return tail_amplitude(to_law(obj)); },
        py::arg("law"));
  m.def("limit_stable_scale",
        [](const py::object& obj) { return limit_stable_scale(to_law(obj)); }, py::arg("law"));

  // -- paths ----------------------------------------------------------------
  py::class_<DyadicPath>(m, "DyadicPath")
      .def(py::init([](int level, const Array& nodes) { return DyadicPath(level, to_vector(nodes)); }),
           py::arg("level"), py::arg("nodes"))
      .def_static("zero", &DyadicPath::zero, py::arg("level"))
      .def_property_readonly("level", &DyadicPath::level)
      .def_property_readonly("nodes", [](const DyadicPath& p) { return to_array(p.nodes()); })
      .def("eval", &DyadicPath::eval, py::arg("t"))
      .def("refined", &DyadicPath::refined, py::arg("level"))
      .def("__sub__", [](const DyadicPath& a, const DyadicPath& b) { return a - b; })
      .def("__add__", [](const DyadicPath& a, const DyadicPath& b) { return a + b; })
      .def("__rmul__", [](const DyadicPath& p, double a) { return a * p; })
      .def("__eq__", [](const DyadicPath& a, const DyadicPath& b) { return a == b; });

  m.def("build_walk",
        [](const Array& y, double alpha, int n) { return build_walk(to_vector(y), alpha, n); },
        py::arg("increments"), py::arg("alpha"), py::arg("n"));
  m.def("project", &project, py::arg("path"), py::arg("m"));
  m.def("block_sums",
        [](const Array& y, int n, int m, double alpha) {
          const auto v = to_vector(y);
          const auto b = block_sums(v, n, m, alpha);
          return to_array(b);
        },
        py::arg("increments"), py::arg("n"), py::arg("m"), py::arg("alpha"));
  m.def("sample_walk_path",
        [](const py::object& obj, int level, std::uint64_t seed, std::uint64_t stream) {
          RngStream s(seed, stream);
          return sample_walk_path(to_law(obj), level, s);
        },
        py::arg("law"), py::arg("level"), py::arg("seed") = 1, py::arg("stream") = 0);
  m.def("sample_stable_path",
        [](const StableLaw& law, int level, std::uint64_t seed, std::uint64_t stream) {
          RngStream s(seed, stream);
          return sample_stable_path(law, level, s);
        },
        py::arg("law"), py::arg("level"), py::arg("seed") = 1, py::arg("stream") = 0);

  // -- norms ----------------------------------------------------------------
  m.def("lp_part", &lp_part, py::arg("path"), py::arg("p"));
  m.def("seminorm_p",
        [](const DyadicPath& f, double eta, double p, const std::string& method, std::size_t band) {
          const SobolevParams params{eta, p};
          if (method == "exact") return seminorm_p(f, params);
          if (method == "banded") return BandedSeminorm(f.level(), params, band).seminorm_p(f);
          throw ConfigError("method must be 'exact' or 'banded'");
        },
        py::arg("path"), py::arg("eta"), py::arg("p"), py::arg("method") = "exact",
        py::arg("band") = 2, py::call_guard<py::gil_scoped_release>());
  m.def("norm",
        [](const DyadicPath& f, double eta, double p) { return norm(f, SobolevParams{eta, p}); },
        py::arg("path"), py::arg("eta"), py::arg("p"), py::call_guard<py::gil_scoped_release>());
  m.def("diff_norm",
        [](const DyadicPath& a, const DyadicPath& b, double eta, double p) {
          return diff_norm(a, b, SobolevParams{eta, p});
        },
        py::arg("a"), py::arg("b"), py::arg("eta"), py::arg("p"),
        py::call_guard<py::gil_scoped_release>());

  // -- distances ------------------------------------------------------------
  m.def("w1_sorted",
        [](const Array& a, const Array& b) { return w1_sorted(to_vector(a), to_vector(b)); },
        py::arg("a"), py::arg("b"));

  // -- experiments ----------------------------------------------------------
  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("alpha", &ExperimentConfig::alpha)
      .def_readwrite("eta", &ExperimentConfig::eta)
      .def_readwrite("p", &ExperimentConfig::p)
      .def_readwrite("gamma", &ExperimentConfig::gamma)
      .def_readwrite("A", &ExperimentConfig::A)
      .def_readwrite("K", &ExperimentConfig::K)
      .def_readwrite("n_values", &ExperimentConfig::n_values)
      .def_readwrite("reps", &ExperimentConfig::reps)
      .def_readwrite("n_ref_offset", &ExperimentConfig::n_ref_offset)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("pool_size", &ExperimentConfig::pool_size)
      .def_readwrite("table_tail", &ExperimentConfig::table_tail)
      .def("validate", &ExperimentConfig::validate)
      .def("set", &apply_config_value, py::arg("key"), py::arg("value"))
      .def("__str__", &format_config)
      .def_static("interp_error_defaults", &ExperimentConfig::interp_error_defaults)
      .def_static("moment_sweep_defaults", &ExperimentConfig::moment_sweep_defaults)
      .def_static("rate_sweep_defaults", &ExperimentConfig::rate_sweep_defaults);

  m.def("plan_kappa_upsilon",
        [](double alpha, double eta, double p, double gamma) {
          const KappaUpsilon k = plan_kappa_upsilon(alpha, eta, p, gamma);
          return py::make_tuple(k.kappa, k.upsilon);
        },
        py::arg("alpha"), py::arg("eta"), py::arg("p"),
        py::arg("gamma") = std::numeric_limits<double>::infinity());
  m.def("fit_loglog",
        [](const std::vector<std::pair<double, double>>& pts) { return fit_dict(fit_loglog(pts)); },
        py::arg("points"));

  m.def("interp_error_sweep",
        [](const ExperimentConfig& c, const std::string& source, int workers) {
          GapSource src = source == "walk" ? GapSource::random_walk(c.law())
                                           : GapSource::stable_process(StableLaw(c.alpha));
          InterpErrorResult r;
          {
            py::gil_scoped_release release;
            r = interp_error_sweep(c, src, workers);
          }
          py::list rows;
          for (const auto& row : r.rows) {
            py::dict d = estimate_dict(row.estimate);
            d["m"] = row.m;
            rows.append(d);
          }
          py::dict out;
          out["n_ref"] = r.n_ref;
          out["rows"] = rows;
          out["fit"] = fit_dict(r.fit);
          out["predicted_slope"] = r.predicted_slope;
          out["within_band"] = r.within_band;
          return out;
        },
        py::arg("config"), py::arg("source") = "stable", py::arg("workers") = 1);

  m.def("moment_sweep",
        [](const py::object& obj, double p, const std::vector<long long>& sizes,
           std::size_t reps, std::uint64_t seed, int workers) {
          const HeavyTailLaw law = to_law(obj);
          MomentSweepResult r;
          {
            py::gil_scoped_release release;
            r = moment_sweep(law, alpha_of(law), p, sizes, reps, seed, workers);
          }
          py::list rows;
          for (const auto& row : r.rows) {
            py::dict d = estimate_dict(row.estimate);
            d["n"] = row.n;
            rows.append(d);
          }
          py::dict out;
          out["rows"] = rows;
          out["bounded_ratio"] = r.bounded_ratio;
          return out;
        },
        py::arg("law"), py::arg("p"), py::arg("sizes"), py::arg("reps"), py::arg("seed") = 1,
        py::arg("workers") = 1);

  m.def("rate_sweep",
        [](const ExperimentConfig& c, int workers, bool self_coupling) {
          RateSweepOptions opts;
          if (self_coupling) opts.mode = CouplingMode::self;
          RateSweepResult r;
          {
            py::gil_scoped_release release;
            r = rate_sweep(c, workers, opts);
          }
          py::list rows;
          for (const auto& row : r.rows) {
            py::dict d;
            d["n"] = row.n;
            d["m"] = row.m;
            d["distance"] = estimate_dict(row.distance);
            d["gap_walk"] = estimate_dict(row.gap_walk);
            d["gap_stable"] = estimate_dict(row.gap_stable);
            rows.append(d);
          }
          py::dict out;
          out["kappa"] = r.plan.kappa;
          out["upsilon"] = r.plan.upsilon;
          out["rows"] = rows;
          out["fit"] = fit_dict(r.fit);
          out["slope_ratio"] = r.slope_ratio;
          out["decay_ok"] = r.decay_ok;
          out["monotone_ok"] = r.monotone_ok;
          out["limit_scale"] = r.limit_scale;
          return out;
        },
        py::arg("config"), py::arg("workers") = 1, py::arg("self_coupling") = false);
}
