// Copyright 2026 The drbo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <map>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "drbo/acquisition.hpp"
#include "drbo/benchmarks.hpp"
#include "drbo/cli.hpp"
#include "drbo/divergence.hpp"
#include "drbo/engine.hpp"
#include "drbo/errors.hpp"
#include "drbo/kernels_gp.hpp"
#include "drbo/verify.hpp"

namespace py = pybind11;
using Vec = std::vector<double>;

namespace {

drbo::Divergence div(const std::string& name) { return drbo::divergence_from_string(name); }

drbo::Dataset make_dataset(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.rows() != y.size()) throw drbo::ConfigError("inputs and targets differ in length");
  drbo::Dataset data(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    Vec copy(x.cols());
    for (Eigen::Index d = 0; d < x.cols(); ++d) copy[d] = x(i, d);
    data.add(copy, y[i]);
  }
  return data;
}

std::string as_setting(const py::handle& value) {
  if (py::isinstance<py::bool_>(value)) return value.cast<bool>() ? "true" : "false";
  if (py::isinstance<py::str>(value)) return value.cast<std::string>();
  if (py::isinstance<py::list>(value) || py::isinstance<py::tuple>(value)) {
    std::string out;
    for (auto item : value) {
      if (!out.empty()) out += ",";
      out += as_setting(item);
    }
    return out;
  }
  return py::str(value).cast<std::string>();
}

py::dict record_dict(const drbo::RegretRecord& record, const std::string& run_id) {
  const auto n = record.iterations.size();
  const auto dx = n == 0 ? 0 : record.iterations.front().x.size();
  Eigen::MatrixXd x(n, dx);
  Eigen::VectorXd c(n), y(n), eps(n), r(n), cum(n);
  for (std::size_t t = 0; t < n; ++t) {
    const auto& it = record.iterations[t];
    for (std::size_t d = 0; d < dx; ++d) x(t, d) = it.x[d];
    c[t] = it.c;
    y[t] = it.y;
    eps[t] = it.eps;
    r[t] = it.regret;
    cum[t] = it.cumulative_regret;
  }
  py::dict out;
  out["run_id"] = run_id;
  out["label"] = record.label;
  out["seed"] = record.seed;
  out["x"] = x;
  out["c"] = c;
  out["y"] = y;
  out["eps"] = eps;
  out["regret"] = r;
  out["cumulative_regret"] = cum;
  out["final_regret"] = record.final_regret();
  out["dataset_size"] = record.dataset_size;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Distributionally robust Bayesian optimization core";

  py::register_exception<drbo::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<drbo::DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<drbo::NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<drbo::KernelSpec>(m, "KernelSpec")
      .def(py::init([](const std::string& kind, Vec lengthscales, double signal_variance, double noise_variance) {
             drbo::KernelSpec spec;
             spec.kind = drbo::kernel_kind_from_string(kind);
             spec.lengthscales = std::move(lengthscales);
             spec.signal_variance = signal_variance;
             spec.noise_variance = noise_variance;
             spec.validate();
             return spec;
           }),
           py::arg("kind"), py::arg("lengthscales"), py::arg("signal_variance") = 1.0,
           py::arg("noise_variance") = 1e-2)
      .def_property_readonly("kind", [](const drbo::KernelSpec& s) { return std::string(drbo::to_string(s.kind)); })
      .def_readonly("lengthscales", &drbo::KernelSpec::lengthscales)
      .def_readonly("signal_variance", &drbo::KernelSpec::signal_variance)
      .def_readonly("noise_variance", &drbo::KernelSpec::noise_variance)
      .def("__call__", [](const drbo::KernelSpec& s, const Vec& a, const Vec& b) { return drbo::kernel_eval(s, a, b); })
      .def("__repr__", [](const drbo::KernelSpec& s) {
        return "KernelSpec(" + std::string(drbo::to_string(s.kind)) + ", sv=" + std::to_string(s.signal_variance) + ")";
      });

  py::class_<drbo::GpPosterior>(m, "GpPosterior")
      .def_property_readonly("size", &drbo::GpPosterior::size)
      .def_property_readonly("jitter", &drbo::GpPosterior::jitter)
      .def_property_readonly("kernel", &drbo::GpPosterior::kernel)
      .def_property_readonly("chol_factor", &drbo::GpPosterior::chol_factor)
      .def("log_marginal_likelihood", &drbo::GpPosterior::log_marginal_likelihood)
      .def("predict", [](const drbo::GpPosterior& gp, const Eigen::MatrixXd& queries) {
        Eigen::VectorXd mean, var;
        gp.predict_batch(queries, mean, var);
        return py::make_tuple(mean, var);
      });

  m.def(
      "fit_gp",
      [](const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const drbo::KernelSpec& spec, bool center) {
        return drbo::GpPosterior::fit(make_dataset(x, y), spec, {center});
      },
      py::arg("x"), py::arg("y"), py::arg("kernel"), py::arg("center_targets") = false);
  m.def(
      "fit_hyperparams",
      [](const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const std::vector<drbo::KernelSpec>& grid, bool center) {
        return drbo::fit_hyperparams(make_dataset(x, y), grid, {center});
      },
      py::arg("x"), py::arg("y"), py::arg("grid"), py::arg("center_targets") = false);
  m.def(
      "default_kernel_grid",
      [](const std::string& kind, const Vec& widths, double noise, double scale) {
        return drbo::default_kernel_grid(drbo::kernel_kind_from_string(kind), widths, noise, scale);
      },
      py::arg("kind"), py::arg("joint_widths"), py::arg("noise_variance") = 1e-2, py::arg("signal_scale") = 1.0);

  m.def("phi", [](const std::string& kind, double u) { return drbo::phi(div(kind), u); });
  m.def("phi_conjugate", [](const std::string& kind, double u, double lambda) {
    return drbo::phi_conjugate(div(kind), u, lambda);
  });
  m.def(
      "dual_objective",
      [](const std::string& kind, const Vec& f, const Vec& w, double eps, double lambda, double b) {
        return drbo::dual_objective(div(kind), f, w, eps, {lambda, b});
      },
      py::arg("kind"), py::arg("f"), py::arg("weights"), py::arg("eps"), py::arg("lam"), py::arg("b"));
  m.def(
      "robust_value",
      [](const std::string& kind, const Vec& f, const Vec& w, double eps) {
        return drbo::robust_value(div(kind), f, w, eps, drbo::default_kl_lambda_grid());
      },
      py::arg("kind"), py::arg("f"), py::arg("weights"), py::arg("eps"));
  m.def(
      "worst_case_oracle",
      [](const std::string& kind, const Vec& f, const Vec& w, double eps, double step) {
        auto r = drbo::worst_case_oracle(div(kind), f, w, eps, step);
        return py::make_tuple(r.value, r.q);
      },
      py::arg("kind"), py::arg("f"), py::arg("weights"), py::arg("eps"), py::arg("step") = 0.005);
  m.def("gamma_map", [](const std::string& kind, double d) { return drbo::gamma_map(div(kind), d); });
  m.def("gamma_inverse", [](const std::string& kind, double y) { return drbo::gamma_inverse(div(kind), y); });
  m.def(
      "epsilon_at",
      [](const std::string& kind, std::size_t t, double eps) {
        const auto schedule =
            kind == "fixed" ? drbo::RadiusSchedule::fixed(eps) : drbo::RadiusSchedule::adaptive(div(kind));
        return drbo::epsilon_at(schedule, t);
      },
      py::arg("schedule"), py::arg("t"), py::arg("eps") = 0.0,
      "schedule is 'fixed' or a divergence name for the adaptive radius");

  m.def(
      "acquisition_score",
      [](const std::string& kind, const Vec& mean, const Vec& stddev, const Vec& w, double eps, double sqrt_beta) {
        return drbo::acquisition_score(drbo::AcquisitionKind::from_string(kind), mean, stddev, w, eps, sqrt_beta,
                                       drbo::default_kl_lambda_grid());
      },
      py::arg("kind"), py::arg("mean"), py::arg("stddev"), py::arg("weights"), py::arg("eps"),
      py::arg("sqrt_beta") = 2.0);

  m.def("benchmark_names", &drbo::benchmark_names);
  m.def(
      "evaluate",
      [](const std::string& name, const Vec& x, double c) { return drbo::make_benchmark(name).evaluate(x, c); },
      py::arg("name"), py::arg("x"), py::arg("c"));
  m.def("benchmark_domain", [](const std::string& name) {
    const auto fn = drbo::make_benchmark(name);
    const auto box = fn.box();
    return py::make_tuple(box.lo, box.hi, py::make_tuple(fn.context_interval().lo, fn.context_interval().hi));
  });

  m.def(
      "run",
      [](const py::dict& settings, std::size_t jobs) {
        std::map<std::string, std::string> values;
        for (auto item : settings) values[item.first.cast<std::string>()] = as_setting(item.second);
        const auto suite = drbo::cli::resolve_suite({}, values);
        std::vector<drbo::SuiteEntry> entries;
        {
          py::gil_scoped_release release;
          entries = drbo::run_suite(suite.configs, suite.repeats, jobs);
        }
        py::list out;
        for (const auto& entry : entries) {
          const auto id = drbo::cli::run_id(suite.configs[entry.config_index], entry.repeat);
          if (entry.record) {
            out.append(record_dict(*entry.record, id));
          } else {
            py::dict failed;
            failed["run_id"] = id;
            failed["seed"] = entry.seed;
            failed["error"] = entry.error;
            out.append(failed);
          }
        }
        return out;
      },
      py::arg("settings"), py::arg("jobs") = 1,
      "Run a suite from config keys (same names as the command-line tool).");

  m.def(
      "verify",
      [](const std::string& profile, std::optional<std::string> only) {
        std::optional<drbo::Divergence> kind;
        if (only) kind = div(*only);
        py::list out;
        for (const auto& c : drbo::run_verification(drbo::VerifyProfile::named(profile), kind)) {
          py::dict d;
          d["name"] = c.name;
          d["passed"] = c.passed;
          d["worst"] = c.worst;
          d["tolerance"] = c.tolerance;
          d["cases"] = c.cases;
          out.append(d);
        }
        return out;
      },
      py::arg("profile") = "quick", py::arg("divergence") = py::none());
}
