#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "levy/errors.hpp"
#include "levy/exact.hpp"
#include "levy/experiments.hpp"
#include "levy/heavy_tail.hpp"
#include "levy/quadrature.hpp"
#include "levy/records.hpp"

namespace py = pybind11;
using namespace levy;

namespace {

py::tuple as_tuple(const FormulaResult& r) { return py::make_tuple(r.value, r.error_estimate); }

py::object nullable(double v) { return std::isnan(v) ? py::none() : py::object(py::float_(v)); }

py::array_t<double> to_array(const DisorderMatrix& m) {
  const int n = m.n_sites();
  py::array_t<double> a({n, n});
  auto w = a.mutable_unchecked<2>();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w(i, j) = m(i, j);
  return a;
}

// Only the strict upper triangle is read; the diagonal must be zero.
DisorderMatrix from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw ConfigError("couplings must be a square matrix");
  const int n = static_cast<int>(a.shape(0));
  require(n >= 1, "couplings must have at least one site");
  auto r = a.unchecked<2>();
  DisorderMatrix m(n);
  for (int i = 0; i < n; ++i) {
    require(r(i, i) == 0.0, "couplings diagonal must be zero");
    for (int j = i + 1; j < n; ++j) {
      require(r(i, j) == r(j, i), "couplings must be symmetric");
      m.set(i, j, r(i, j));
    }
  }
  return m;
}

py::dict record_dict(const ResultRecord& r) {
  py::dict params;
  for (const auto& p : r.parameters) {
    if (p.numeric)
      params[py::str(p.key)] = p.number;
    else
      params[py::str(p.key)] = p.text;
  }
  py::dict d;
  d["experiment"] = r.experiment;
  d["label"] = r.label;
  d["parameters"] = params;
  d["values"] = r.values;
  d["seeds"] = r.seeds;
  d["estimate"] = nullable(r.estimate);
  d["stderr"] = nullable(r.stderr_);
  d["theory_value"] = nullable(r.theory_value);
  d["theory_ref"] = r.theory_ref;
  d["statistic"] = nullable(r.statistic);
  d["p_value"] = nullable(r.p_value);
  d["verdict"] = r.verdict;
  return d;
}

ExperimentConfig make_config(const std::string& experiment, const py::dict& options) {
  ExperimentConfig cfg(experiment);
  for (auto [k, v] : options) cfg.set(py::str(k), std::string(py::str(v)));
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Heavy-tailed spin glass numerics";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ResourceGuardError>(m, "ResourceGuardError", PyExc_RuntimeError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  m.def("beta_alpha", [](double alpha) { return as_tuple(beta_alpha(alpha)); }, py::arg("alpha"),
        "Critical inverse temperature as (value, error_estimate).");
  m.def("free_energy_limit", [](double alpha, double beta) { return as_tuple(free_energy_limit(alpha, beta)); },
        py::arg("alpha"), py::arg("beta"));
  m.def("centering_integral",
        [](double alpha, double beta, std::int64_t N) { return as_tuple(centering_integral(alpha, beta, N)); },
        py::arg("alpha"), py::arg("beta"), py::arg("N"));
  m.def("bond_overlap_limit",
        [](double alpha, double beta, double K) { return as_tuple(bond_overlap_limit(alpha, beta, K).value); },
        py::arg("alpha"), py::arg("beta"), py::arg("K"));
  m.def("gamma_ell", [](double alpha, double beta, int ell) { return as_tuple(gamma_ell(alpha, beta, ell)); },
        py::arg("alpha"), py::arg("beta"), py::arg("ell"));
  m.def("L_pmf", [](double alpha, double beta, int k) { return as_tuple(L_pmf(alpha, beta, k)); },
        py::arg("alpha"), py::arg("beta"), py::arg("k"));
  m.def(
      "a_N", [](double alpha, double N, double power) {
        HeavyTailSpec spec = power == 0.0 ? HeavyTailSpec::canonical(alpha) : HeavyTailSpec::log_power(alpha, power);
        spec.validate();
        return compute_a_N(spec, N);
      },
      py::arg("alpha"), py::arg("N"), py::arg("tail_power") = 0.0);

  m.def(
      "derive_seed", [](std::uint64_t master, const std::string& stream, std::uint64_t index) {
        return derive_seed(master, stream_id_of(stream.c_str()), index);
      },
      py::arg("master"), py::arg("stream"), py::arg("index"));

  m.def(
      "sample_disorder", [](double alpha, int N, std::uint64_t seed) {
        HeavyTailSpec spec = HeavyTailSpec::canonical(alpha);
        spec.validate();
        require(N >= 1, "N must be >= 1");
        Rng rng(seed);
        return to_array(sample_disorder(spec, N, rng, false));
      },
      py::arg("alpha"), py::arg("N"), py::arg("seed"),
      "Symmetric N x N coupling matrix J_ij / a_N with zero diagonal.");

  m.def(
      "exact_thermo", [](py::array_t<double, py::array::c_style | py::array::forcecast> J, double beta) {
        require(beta >= 0.0, "beta must be >= 0");
        DisorderMatrix mat = from_array(J);
        ExactThermo t;
        {
          py::gil_scoped_release nogil;
          t = exact_log_partition(mat, beta);
        }
        py::dict d;
        d["log_Z"] = t.log_Z;
        d["log_Z_bar"] = t.log_Z_bar;
        d["log_Z_hat"] = t.log_Z_hat;
        return d;
      },
      py::arg("J"), py::arg("beta"));
  m.def(
      "pair_correlations", [](py::array_t<double, py::array::c_style | py::array::forcecast> J, double beta) {
        require(beta >= 0.0, "beta must be >= 0");
        DisorderMatrix mat = from_array(J);
        std::vector<double> c;
        {
          py::gil_scoped_release nogil;
          c = pair_correlations(mat, beta);
        }
        const int n = mat.n_sites();
        py::array_t<double> a({n, n});
        std::copy(c.begin(), c.end(), a.mutable_data());
        return a;
      },
      py::arg("J"), py::arg("beta"));

  m.def("experiment_names", &experiment_names);
  m.def("config_keys", &known_config_keys);
  m.def(
      "run", [](const std::string& experiment, const py::dict& options) {
        ExperimentConfig cfg = make_config(experiment, options);
        std::vector<ResultRecord> recs;
        {
          py::gil_scoped_release nogil;
          recs = run(cfg);
        }
        py::list out;
        for (const auto& r : recs) out.append(record_dict(r));
        return out;
      },
      py::arg("experiment"), py::arg("options") = py::dict(),
      "Run one experiment; options are config keys and must include seed.");
  m.def(
      "run_jsonl", [](const std::string& experiment, const py::dict& options) {
        ExperimentConfig cfg = make_config(experiment, options);
        std::ostringstream os;
        {
          py::gil_scoped_release nogil;
          emit_jsonl(os, run(cfg));
        }
        return os.str();
      },
      py::arg("experiment"), py::arg("options") = py::dict());
}
