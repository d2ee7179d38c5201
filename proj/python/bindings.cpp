#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "cnet/acceptance.hpp"
#include "cnet/engine.hpp"
#include "cnet/io.hpp"
#include "cnet/stats.hpp"

namespace py = pybind11;
using namespace cnet;

namespace {

std::vector<double> net_worths_d(const EconomyState& s) {
  std::vector<double> out;
  for (const auto& f : s.downstream) out.push_back(f.net_worth);
  return out;
}

std::vector<double> net_worths_u(const EconomyState& s) {
  std::vector<double> out;
  for (const auto& f : s.upstream) out.push_back(f.net_worth);
  return out;
}

std::vector<double> equities(const EconomyState& s) {
  std::vector<double> out;
  for (const auto& b : s.banks) out.push_back(b.equity);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Credit-network economy simulator";
  m.attr("__version__") = io::kVersion;

  auto audit = py::register_exception<AuditError>(m, "AuditError", PyExc_RuntimeError);
  (void)audit;
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const io::ConfigError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const ParameterError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  py::class_<Parameters>(m, "Parameters")
      .def(py::init<>())
      .def(py::init([](py::kwargs kw) {
        Parameters p;
        for (auto item : kw) {
          io::set_parameter(p, py::str(item.first).cast<std::string>(),
                            py::str(item.second).cast<std::string>());
        }
        return p;
      }))
      .def_readwrite("phi", &Parameters::phi)
      .def_readwrite("beta", &Parameters::beta)
      .def_readwrite("gamma", &Parameters::gamma)
      .def_readwrite("delta_d", &Parameters::delta_d)
      .def_readwrite("delta_u", &Parameters::delta_u)
      .def_readwrite("k", &Parameters::k)
      .def_readwrite("alpha", &Parameters::alpha)
      .def_readwrite("r_u", &Parameters::r_u)
      .def_readwrite("r_d", &Parameters::r_d)
      .def_readwrite("r_bb", &Parameters::r_bb)
      .def_readwrite("w", &Parameters::w)
      .def_readwrite("p", &Parameters::p)
      .def_readwrite("n_agents", &Parameters::n_agents)
      .def_readwrite("horizon", &Parameters::horizon)
      .def_readwrite("a0", &Parameters::a0)
      .def_readwrite("e0", &Parameters::e0)
      .def_readwrite("seed", &Parameters::seed)
      .def(py::self == py::self)
      .def("__repr__", [](const Parameters& p) {
        std::string text = io::format_config(p);
        for (auto& c : text) {
          if (c == '\n') c = ' ';
        }
        return "Parameters(" + text.substr(0, text.size() - 1) + ")";
      });

  m.def("validate", [](const Parameters& p) { return validate_params(p); },
        "Returns the parameters unchanged or raises ValueError listing every violation.");

  py::class_<PeriodRecord>(m, "PeriodRecord")
      .def_readonly("t", &PeriodRecord::t)
      .def_readonly("avg_output_d", &PeriodRecord::avg_output_d)
      .def_readonly("bankrupt_d", &PeriodRecord::bankrupt_d)
      .def_readonly("bankrupt_u", &PeriodRecord::bankrupt_u)
      .def_readonly("bankrupt_b", &PeriodRecord::bankrupt_b)
      .def_readonly("avalanche", &PeriodRecord::avalanche)
      .def_readonly("total_loans", &PeriodRecord::total_loans)
      .def_readonly("total_interbank", &PeriodRecord::total_interbank)
      .def_readonly("mean_rate_d", &PeriodRecord::mean_rate_d)
      .def_readonly("mean_rate_u", &PeriodRecord::mean_rate_u)
      .def_readonly("median_A_d", &PeriodRecord::median_A_d)
      .def_readonly("median_A_u", &PeriodRecord::median_A_u)
      .def_readonly("mean_E", &PeriodRecord::mean_E);

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("params", &RunResult::params)
      .def_readonly("records", &RunResult::records)
      .def_readonly("final_networth_d", &RunResult::final_networth_d)
      .def_readonly("final_networth_u", &RunResult::final_networth_u)
      .def_readonly("final_equity_b", &RunResult::final_equity_b)
      .def_readonly("growth_networth", &RunResult::growth_networth)
      .def_readonly("growth_output", &RunResult::growth_output)
      .def_readonly("growth_window", &RunResult::growth_window)
      .def_property_readonly("avalanches", [](const RunResult& r) {
        return stats::avalanche_series(r.records).values;
      });

  m.def("run", &run, py::arg("params") = Parameters{}, py::call_guard<py::gil_scoped_release>(),
        "Runs the full horizon and returns the records and final cross-sections.");

  py::class_<Simulation>(m, "Simulation")
      .def(py::init<const Parameters&>(), py::arg("params") = Parameters{})
      .def("step", [](Simulation& s) { return s.step().record; },
           "Advances one period and returns its record.")
      .def_property_readonly("t", [](const Simulation& s) { return s.state().t; })
      .def_property_readonly("params", &Simulation::params)
      .def_property_readonly("networth_d", [](const Simulation& s) { return net_worths_d(s.state()); })
      .def_property_readonly("networth_u", [](const Simulation& s) { return net_worths_u(s.state()); })
      .def_property_readonly("equity_b", [](const Simulation& s) { return equities(s.state()); });

  py::class_<stats::Moments>(m, "Moments")
      .def_readonly("n", &stats::Moments::n)
      .def_readonly("mean", &stats::Moments::mean)
      .def_readonly("variance", &stats::Moments::variance)
      .def_readonly("skewness", &stats::Moments::skewness)
      .def_readonly("excess_kurtosis", &stats::Moments::excess_kurtosis);

  py::class_<stats::TestReport>(m, "TestReport")
      .def_readonly("statistic", &stats::TestReport::statistic)
      .def_readonly("p_value", &stats::TestReport::p_value)
      .def_readonly("reject_at_1pct", &stats::TestReport::reject_at_1pct)
      .def_readonly("n", &stats::TestReport::n);

  py::class_<stats::LaplaceFit>(m, "LaplaceFit")
      .def_readonly("location", &stats::LaplaceFit::location)
      .def_readonly("scale", &stats::LaplaceFit::scale)
      .def_readonly("loglik", &stats::LaplaceFit::loglik);

  py::class_<stats::NormalFit>(m, "NormalFit")
      .def_readonly("mean", &stats::NormalFit::mean)
      .def_readonly("sd", &stats::NormalFit::sd)
      .def_readonly("loglik", &stats::NormalFit::loglik);

  py::class_<stats::FitComparison>(m, "FitComparison")
      .def_readonly("laplace", &stats::FitComparison::laplace)
      .def_readonly("normal", &stats::FitComparison::normal)
      .def_readonly("laplace_preferred", &stats::FitComparison::laplace_preferred);

  m.def("moments", [](const std::vector<double>& v) { return stats::moments(v); });
  m.def("bera_jarque", [](const std::vector<double>& v) { return stats::bera_jarque(v); });
  m.def("fit_laplace", [](const std::vector<double>& v) { return stats::fit_laplace(v); });
  m.def("fit_normal", [](const std::vector<double>& v) { return stats::fit_normal(v); });
  m.def("compare_fits", [](const std::vector<double>& v) { return stats::compare_fits(v); });
  m.def("cross_correlation",
        [](const std::vector<double>& x, const std::vector<double>& y, std::size_t max_lag) {
          return stats::cross_correlation(x, y, max_lag);
        },
        py::arg("x"), py::arg("y"), py::arg("max_lag") = 5);

  m.def("parse_config", &io::parse_config, py::arg("path"));
  m.def("parse_config_text", [](const std::string& text) { return io::parse_config_text(text); });
  m.def("format_config", &io::format_config);
  m.def("emit_all",
        [](const RunResult& r, const std::filesystem::path& dir) {
          const auto now = io::utc_now();
          return io::emit_all(r, dir, now, now);
        },
        py::arg("result"), py::arg("dir"), "Writes every output file and returns the inventory.");
  m.def("sweep",
        [](const Parameters& base, const std::string& grid, const std::filesystem::path& dir) {
          return io::sweep(base, io::parse_grid(grid), dir);
        },
        py::arg("base"), py::arg("grid"), py::arg("dir"));

  m.def("run_acceptance",
        [](const std::filesystem::path& scratch) {
          acceptance::Options opts;
          opts.scratch_dir = scratch;
          std::vector<py::dict> out;
          for (const auto& r : acceptance::run_acceptance(opts)) {
            py::dict d;
            d["id"] = r.id;
            d["name"] = r.name;
            d["passed"] = r.passed;
            d["detail"] = r.detail;
            out.push_back(d);
          }
          return out;
        },
        py::arg("scratch_dir"), "Evaluates the acceptance criteria over seeds 1..10.");
}
