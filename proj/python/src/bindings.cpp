#include <algorithm>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "aggflow/config.hpp"
#include "aggflow/errors.hpp"
#include "aggflow/output.hpp"
#include "aggflow/stepper.hpp"
#include "aggflow/study.hpp"
#include "aggflow/verify.hpp"

namespace py = pybind11;

namespace {

using namespace aggflow;

py::array_t<double> make_array(const Eigen::ArrayXd& d, int rows, int cols) {
  py::array_t<double> a({rows, cols});
  std::copy(d.data(), d.data() + d.size(), a.mutable_data());
  return a;
}

// Cell data is row-major with x fastest, so numpy shape (ny, nx).
py::array_t<double> cells_array(const ScalarField& f) {
  return make_array(f.data, f.grid.ny, f.grid.nx);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Diffuse-interface incompressible two-phase flow core";
  m.attr("__version__") = kVersion;

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<NewtonDiverged>(m, "NewtonDiverged");
  py::register_exception<StepNotAdmissible>(m, "StepNotAdmissible");
  py::register_exception<LinearSolveFailed>(m, "LinearSolveFailed");
  py::register_exception<OuterNoConvergence>(m, "OuterNoConvergence");
  py::register_exception<AbortedAfterRetries>(m, "AbortedAfterRetries");

  py::class_<Config>(m, "Config")
      .def(py::init<>())
      .def_readwrite("nx", &Config::nx)
      .def_readwrite("ny", &Config::ny)
      .def_readwrite("Lx", &Config::Lx)
      .def_readwrite("Ly", &Config::Ly)
      .def_readwrite("rho1", &Config::rho1)
      .def_readwrite("rho2", &Config::rho2)
      .def_readwrite("variant", &Config::variant)
      .def_readwrite("potential", &Config::potential)
      .def_readwrite("theta", &Config::theta)
      .def_readwrite("theta_c", &Config::theta_c)
      .def_readwrite("well_scale", &Config::well_scale)
      .def_readwrite("mobility", &Config::mobility)
      .def_readwrite("viscosity", &Config::viscosity)
      .def_readwrite("gradient_coeff", &Config::gradient_coeff)
      .def_readwrite("scenario_name", &Config::scenario_name)
      .def_readwrite("scenario", &Config::scenario)
      .def_readwrite("seed", &Config::seed)
      .def_readwrite("amplitude", &Config::amplitude)
      .def_readwrite("mean", &Config::mean)
      .def_readwrite("center_x", &Config::center_x)
      .def_readwrite("center_y", &Config::center_y)
      .def_readwrite("radius", &Config::radius)
      .def_readwrite("width", &Config::width)
      .def_readwrite("height", &Config::height)
      .def_readwrite("smoothing_sweeps", &Config::smoothing_sweeps)
      .def_readwrite("h", &Config::h)
      .def_readwrite("steps", &Config::steps)
      .def_readwrite("outer_tol", &Config::outer_tol)
      .def_readwrite("outer_max_iter", &Config::outer_max_iter)
      .def_readwrite("under_relaxation", &Config::under_relaxation)
      .def_readwrite("eps_audit", &Config::eps_audit)
      .def_readwrite("model_h_path", &Config::model_h_path)
      .def_readwrite("newton_tol", &Config::newton_tol)
      .def_readwrite("newton_max_iter", &Config::newton_max_iter)
      .def_readwrite("damping_min", &Config::damping_min)
      .def_readwrite("lin_tol", &Config::lin_tol)
      .def_readwrite("lin_max_iter", &Config::lin_max_iter)
      .def_readwrite("out_dir", &Config::out_dir)
      .def_readwrite("csv_name", &Config::csv_name)
      .def_readwrite("snapshot_every", &Config::snapshot_every)
      .def_readwrite("vtk", &Config::vtk);

  m.def("config_from_text", &config_from_text, py::arg("text"));
  m.def("load_config", &load_config, py::arg("path"));
  m.def("echo_config", &echo_config, py::arg("config"));

  py::class_<EnergyReport>(m, "EnergyReport")
      .def_readonly("E_kin", &EnergyReport::E_kin)
      .def_readonly("E_free", &EnergyReport::E_free)
      .def_readonly("E_tot", &EnergyReport::E_tot)
      .def_readonly("visc_diss", &EnergyReport::visc_diss)
      .def_readonly("mob_diss", &EnergyReport::mob_diss)
      .def_readonly("inertia_defect", &EnergyReport::inertia_defect)
      .def_readonly("transform_defect", &EnergyReport::transform_defect)
      .def_readonly("ineq_residual", &EnergyReport::ineq_residual)
      .def_readonly("mass", &EnergyReport::mass)
      .def_readonly("min_phi", &EnergyReport::min_phi)
      .def_readonly("max_phi", &EnergyReport::max_phi)
      .def_readonly("div_v_inf", &EnergyReport::div_v_inf)
      .def_readonly("outer_iters", &EnergyReport::outer_iters)
      .def_readonly("newton_iters", &EnergyReport::newton_iters)
      .def_readonly("lin_iters", &EnergyReport::lin_iters);

  py::class_<SimState>(m, "SimState")
      .def_readonly("t", &SimState::t)
      .def_readonly("step", &SimState::step)
      .def_property_readonly("nx", [](const SimState& s) { return s.phi.grid.nx; })
      .def_property_readonly("ny", [](const SimState& s) { return s.phi.grid.ny; })
      .def_property_readonly("phi", [](const SimState& s) { return cells_array(s.phi); })
      .def_property_readonly("mu", [](const SimState& s) { return cells_array(s.mu); })
      .def_property_readonly("g", [](const SimState& s) { return cells_array(s.g); })
      .def_property_readonly("u",
                             [](const SimState& s) {
                               return make_array(s.v.u, s.v.grid.ny,
                                                 s.v.grid.nx + 1);
                             })
      .def_property_readonly("v", [](const SimState& s) {
        return make_array(s.v.v, s.v.grid.ny + 1, s.v.grid.nx);
      });

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("state", &RunResult::state)
      .def_readonly("reports", &RunResult::reports)
      .def_readonly("halvings", &RunResult::halvings)
      .def_readonly("h_final", &RunResult::h_final)
      .def_readonly("E0", &RunResult::E0);

  py::class_<RunArtifacts>(m, "RunArtifacts")
      .def_readonly("csv_path", &RunArtifacts::csv_path)
      .def_readonly("snapshot_dir", &RunArtifacts::snapshot_dir)
      .def_readonly("config_echo", &RunArtifacts::config_echo)
      .def_readonly("manifest_path", &RunArtifacts::manifest_path);

  py::class_<RunSummary>(m, "RunSummary")
      .def_readonly("result", &RunSummary::result)
      .def_readonly("artifacts", &RunSummary::artifacts);

  m.def("run_simulation", &run_simulation, py::arg("config"),
        "Run one configuration and write its artifacts; returns the summary.");

  py::class_<EnergyCsvRow>(m, "EnergyCsvRow")
      .def_readonly("step", &EnergyCsvRow::step)
      .def_readonly("time", &EnergyCsvRow::time)
      .def_readonly("report", &EnergyCsvRow::r);
  m.def("read_energy_csv", &read_energy_csv, py::arg("path"));
  m.def("read_snapshot", &read_snapshot, py::arg("dir"));

  py::class_<PropertyResult>(m, "PropertyResult")
      .def_readonly("name", &PropertyResult::name)
      .def_readonly("passed", &PropertyResult::pass)
      .def_readonly("worst", &PropertyResult::worst)
      .def_readonly("bound", &PropertyResult::bound)
      .def_readonly("detail", &PropertyResult::detail)
      .def("__repr__", [](const PropertyResult& r) {
        return "<PropertyResult " + r.name + (r.pass ? " PASS>" : " FAIL>");
      });
  m.def("verify_suite", &verify_suite, py::arg("suite") = "all");

  py::class_<CompareMatchedResult>(m, "CompareMatchedResult")
      .def_readonly("max_diff", &CompareMatchedResult::max_diff)
      .def_readonly("max_diff_phi", &CompareMatchedResult::max_diff_phi)
      .def_readonly("max_diff_mu", &CompareMatchedResult::max_diff_mu)
      .def_readonly("max_diff_v", &CompareMatchedResult::max_diff_v)
      .def_readonly("max_diff_g", &CompareMatchedResult::max_diff_g)
      .def_readonly("steps", &CompareMatchedResult::steps);
  m.def("compare_matched", &compare_matched, py::arg("config"));

  py::class_<ConvergenceLevel>(m, "ConvergenceLevel")
      .def_readonly("h", &ConvergenceLevel::h)
      .def_readonly("steps", &ConvergenceLevel::steps)
      .def_readonly("err_phi", &ConvergenceLevel::err_phi);
  py::class_<ConvergenceResult>(m, "ConvergenceResult")
      .def_readonly("levels", &ConvergenceResult::levels)
      .def_readonly("orders", &ConvergenceResult::orders)
      .def_readonly("slope", &ConvergenceResult::slope)
      .def_readonly("T", &ConvergenceResult::T);
  m.def("convergence_study", &convergence_study, py::arg("config"),
        py::arg("levels") = 4);
}
