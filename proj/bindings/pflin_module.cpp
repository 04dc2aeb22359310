#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pflin/ac_solver.hpp"
#include "pflin/case_io.hpp"
#include "pflin/errors.hpp"
#include "pflin/linear_models.hpp"
#include "pflin/metrics.hpp"
#include "pflin/network.hpp"
#include "pflin/regression.hpp"
#include "pflin/scenarios.hpp"
#include "pflin/version.hpp"

namespace py = pybind11;

namespace {

pflin::ModelCoefficients coeffs_from_parts(double k_d, const std::vector<double>& k_a) {
  if (k_a.size() != 5) throw pflin::InvalidArgument("k_a must hold 5 numbers");
  pflin::ModelCoefficients coeffs;
  coeffs.k_d = k_d;
  for (std::size_t i = 0; i < 5; ++i) coeffs.k_a[i] = k_a[i];
  return coeffs;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "power flow linearization toolkit";
  m.attr("__version__") = pflin::kVersion;

  py::register_exception<pflin::Error>(m, "PflinError");

  py::class_<pflin::Network>(m, "Network")
      .def_readonly("name", &pflin::Network::name)
      .def_readonly("base_mva", &pflin::Network::base_mva)
      .def_property_readonly("n_buses",
                             [](const pflin::Network& n) { return n.buses.size(); })
      .def_property_readonly("n_branches",
                             [](const pflin::Network& n) { return n.branches.size(); })
      .def("__repr__", [](const pflin::Network& n) {
        return "<Network '" + n.name + "', " + std::to_string(n.buses.size()) + " buses, " +
               std::to_string(n.branches.size()) + " branches>";
      });

  py::class_<pflin::BranchFlow>(m, "BranchFlow")
      .def_readonly("branch", &pflin::BranchFlow::branch)
      .def_readonly("p_from", &pflin::BranchFlow::p_from)
      .def_readonly("q_from", &pflin::BranchFlow::q_from)
      .def_readonly("p_to", &pflin::BranchFlow::p_to)
      .def_readonly("q_to", &pflin::BranchFlow::q_to);

  py::class_<pflin::AcSolution>(m, "AcSolution")
      .def_readonly("case_name", &pflin::AcSolution::case_name)
      .def_readonly("vm", &pflin::AcSolution::vm)
      .def_readonly("va", &pflin::AcSolution::va)
      .def_readonly("flows", &pflin::AcSolution::flows)
      .def_readonly("iterations", &pflin::AcSolution::iterations)
      .def_readonly("max_mismatch", &pflin::AcSolution::max_mismatch);

  py::class_<pflin::LinearSolution>(m, "LinearSolution")
      .def_property_readonly(
          "model", [](const pflin::LinearSolution& s) { return pflin::to_string(s.model); })
      .def_readonly("case_name", &pflin::LinearSolution::case_name)
      .def_readonly("vm", &pflin::LinearSolution::vm)
      .def_readonly("va", &pflin::LinearSolution::va)
      .def_readonly("flows", &pflin::LinearSolution::flows)
      .def_readonly("slack_p", &pflin::LinearSolution::slack_p);

  py::class_<pflin::ModelCoefficients>(m, "ModelCoefficients")
      .def(py::init(&coeffs_from_parts), py::arg("k_d") = 1.0,
           py::arg("k_a") = std::vector<double>{1.0, 1.0, 1.0, 1.0, 1.0})
      .def_readonly("k_d", &pflin::ModelCoefficients::k_d)
      .def_property_readonly("k_a",
                             [](const pflin::ModelCoefficients& c) {
                               return std::vector<double>(c.k_a.begin(), c.k_a.end());
                             })
      .def_readonly("trained_on", &pflin::ModelCoefficients::trained_on);

  m.def("load_case", [](const std::string& path, const std::string& format) {
          if (format == "auto")
            return pflin::load_case(path, path.size() > 2 && path.substr(path.size() - 2) == ".m"
                                              ? pflin::CaseFormat::matpower
                                              : pflin::CaseFormat::native);
          if (format == "native") return pflin::load_case(path, pflin::CaseFormat::native);
          if (format == "matpower") return pflin::load_case(path, pflin::CaseFormat::matpower);
          throw pflin::InvalidArgument("format must be auto, native or matpower");
        },
        py::arg("path"), py::arg("format") = "auto");
  m.def("parse_case", [](const std::string& text, const std::string& format,
                         const std::string& name) {
          return pflin::parse_case(text,
                                   format == "matpower" ? pflin::CaseFormat::matpower
                                                        : pflin::CaseFormat::native,
                                   name);
        },
        py::arg("text"), py::arg("format") = "native", py::arg("name") = "case");
  m.def("case_to_json", &pflin::case_to_json_text, py::arg("net"));

  m.def("solve_ac", [](const pflin::Network& net, double tol, int max_iter, bool flat_start) {
          pflin::AcOptions options;
          options.tol = tol;
          options.max_iter = max_iter;
          options.flat_start = flat_start;
          return pflin::solve_ac(net, options);
        },
        py::arg("net"), py::arg("tol") = 1e-8, py::arg("max_iter") = 30,
        py::arg("flat_start") = true);
  m.def("solve_dc", &pflin::solve_dc_family, py::arg("net"), py::arg("k_d") = 1.0);
  m.def("solve_lac", [](const pflin::Network& net, const pflin::ModelCoefficients* coeffs) {
          return pflin::solve_lac_family(
              net, coeffs ? *coeffs : pflin::ModelCoefficients::identity());
        },
        py::arg("net"), py::arg("coeffs") = nullptr);

  m.def("fit_coefficients",
        [](const pflin::Network& net, const std::vector<pflin::AcSolution>& solutions) {
          return pflin::fit_model_coefficients(net, solutions).coeffs;
        },
        py::arg("net"), py::arg("solutions"));

  m.def("generate_hourly_cases",
        [](const pflin::Network& base, int hours, double amplitude, double phase_hours,
           double noise_sd, double lambda_min, double lambda_max, std::uint64_t seed) {
          pflin::ScenarioSpec spec;
          spec.hours = hours;
          spec.amplitude = amplitude;
          spec.phase_hours = phase_hours;
          spec.noise_sd = noise_sd;
          spec.lambda_min = lambda_min;
          spec.lambda_max = lambda_max;
          spec.seed = seed;
          std::vector<std::tuple<int, double, pflin::Network>> out;
          for (pflin::HourlyCase& hc : pflin::generate_hourly_cases(base, spec))
            out.emplace_back(hc.hour, hc.lambda, std::move(hc.net));
          return out;
        },
        py::arg("base"), py::arg("hours") = 72, py::arg("amplitude") = 0.15,
        py::arg("phase_hours") = 18.0, py::arg("noise_sd") = 0.01, py::arg("lambda_min") = 0.7,
        py::arg("lambda_max") = 1.3, py::arg("seed") = 1);

  m.def("filtered_mape",
        [](const std::vector<double>& model_vals, const std::vector<double>& ac_vals,
           const std::vector<double>& filter_vals, double tol) {
          const pflin::MapeResult r = pflin::filtered_mape(model_vals, ac_vals, filter_vals, tol);
          return py::make_tuple(r.eps, r.included, r.excluded_near_zero);
        },
        py::arg("model_vals"), py::arg("ac_vals"), py::arg("filter_vals"), py::arg("tol"));
  m.def("improvement", &pflin::improvement, py::arg("eps_a"), py::arg("eps_b"));
}
