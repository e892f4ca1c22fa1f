#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rispeec/errors.hpp"
#include "rispeec/pipeline.hpp"

namespace py = pybind11;
using namespace rispeec;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Thin-wire PEEC solver for RIS-aided links";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::enum_<PortRole>(m, "PortRole")
      .value("Tx", PortRole::Tx)
      .value("Rx", PortRole::Rx)
      .value("Ris", PortRole::Ris);

  py::enum_<LoadConstraint>(m, "LoadConstraint")
      .value("Reactive", LoadConstraint::Reactive)
      .value("Passive", LoadConstraint::Passive);

  py::enum_<CutPlane>(m, "CutPlane")
      .value("Phi", CutPlane::Phi)
      .value("Theta", CutPlane::Theta);

  py::class_<Dipole>(m, "Dipole")
      .def(py::init<>())
      .def_readwrite("center", &Dipole::center)
      .def_readwrite("axis", &Dipole::axis)
      .def_readwrite("length", &Dipole::length)
      .def_readwrite("role", &Dipole::role)
      .def_readwrite("port_index", &Dipole::port_index);

  py::class_<Scenario>(m, "Scenario")
      .def(py::init<>())
      .def_readwrite("frequency_hz", &Scenario::frequency_hz)
      .def_readwrite("wire_radius_m", &Scenario::wire_radius_m)
      .def_readwrite("segments_per_dipole", &Scenario::segments_per_dipole)
      .def_readwrite("dipoles", &Scenario::dipoles)
      .def("wavelength", &Scenario::wavelength)
      .def("validate", &Scenario::validate);

  py::class_<WireMesh>(m, "WireMesh")
      .def_property_readonly("num_segments", &WireMesh::num_segments)
      .def_property_readonly("num_nodes", &WireMesh::num_nodes)
      .def_readonly("incidence", &WireMesh::incidence)
      .def("port_branches", &WireMesh::port_branches)
      .def("dipoles_of_role", &WireMesh::dipoles_of_role);

  py::class_<PartialElements>(m, "PartialElements")
      .def_readonly("Lp", &PartialElements::Lp)
      .def_readonly("P", &PartialElements::P)
      .def_readonly("Zvol", &PartialElements::Zvol)
      .def_readonly("k", &PartialElements::k)
      .def_readonly("s", &PartialElements::s);

  py::class_<PortNetwork>(m, "PortNetwork")
      .def_readonly("Zsys", &PortNetwork::Zsys)
      .def_readonly("roles", &PortNetwork::roles)
      .def_readonly("reciprocity_error", &PortNetwork::reciprocity_error)
      .def_property_readonly("num_ports", &PortNetwork::num_ports);

  py::class_<OptParams>(m, "OptParams")
      .def(py::init<>())
      .def_readwrite("constraint", &OptParams::constraint)
      .def_readwrite("max_sweeps", &OptParams::max_sweeps)
      .def_readwrite("tol", &OptParams::tol)
      .def_readwrite("zg", &OptParams::zg)
      .def_readwrite("zr", &OptParams::zr)
      .def_readwrite("noise_power_ratio", &OptParams::noise_power_ratio);

  py::class_<TraceEntry>(m, "TraceEntry")
      .def_readonly("step", &TraceEntry::step)
      .def_readonly("sweep", &TraceEntry::sweep)
      .def_readonly("ris_index", &TraceEntry::ris_index)
      .def_readonly("objective", &TraceEntry::objective);

  py::class_<OptResult>(m, "OptResult")
      .def_readonly("loads", &OptResult::loads)
      .def_readonly("h", &OptResult::h)
      .def_readonly("objective", &OptResult::objective)
      .def_readonly("rate", &OptResult::rate)
      .def_readonly("objective_initial", &OptResult::objective_initial)
      .def_readonly("sweeps_used", &OptResult::sweeps_used)
      .def_readonly("trace", &OptResult::trace);

  py::class_<PatternSample>(m, "PatternSample")
      .def_readonly("angle_deg", &PatternSample::angle_deg)
      .def_readonly("gain_db", &PatternSample::gain_db);

  py::class_<PatternCut>(m, "PatternCut")
      .def_readonly("fixed_angle_deg", &PatternCut::fixed_angle_deg)
      .def_readonly("samples", &PatternCut::samples)
      .def("angles", [](const PatternCut& c) {
        Eigen::VectorXd out(c.samples.size());
        for (size_t i = 0; i < c.samples.size(); ++i) out(i) = c.samples[i].angle_deg;
        return out;
      })
      .def("gains_db", [](const PatternCut& c) {
        Eigen::VectorXd out(c.samples.size());
        for (size_t i = 0; i < c.samples.size(); ++i) out(i) = c.samples[i].gain_db;
        return out;
      });

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def_readonly("scenario", &ScenarioConfig::scenario)
      .def_readonly("zg", &ScenarioConfig::zg)
      .def_readonly("zr", &ScenarioConfig::zr)
      .def_readonly("digest", &ScenarioConfig::digest);

  py::class_<SimulationContext>(m, "SimulationContext")
      .def_readonly("config", &SimulationContext::config)
      .def_readonly("mesh", &SimulationContext::mesh)
      .def_readonly("pe", &SimulationContext::pe);

  m.def("paper_scenario", &paper_scenario);
  m.def("paper_scenario_config", &paper_scenario_config);
  m.def("parse_scenario_text", &parse_scenario_text, py::arg("text"));
  m.def("parse_scenario_file", &parse_scenario_file, py::arg("path"));
  m.def("mesh_scenario", &mesh_scenario, py::arg("scenario"));
  m.def(
      "assemble_partial_elements",
      [](const WireMesh& mesh, double freq_hz) {
        return assemble_partial_elements(mesh, freq_hz);
      },
      py::arg("mesh"), py::arg("frequency_hz"));
  m.def("extract_zsys", &extract_zsys, py::arg("pe"), py::arg("mesh"));
  m.def("optimize", &optimize, py::arg("net"), py::arg("params") = OptParams{});
  m.def("achievable_rate", &achievable_rate, py::arg("h"), py::arg("noise_power_ratio"));
  m.def("build_context",
        [](const ScenarioConfig& cfg) { return build_context(cfg); }, py::arg("config"));
  m.def("solve_currents", &solve_currents, py::arg("ctx"),
        py::arg("ris_loads") = Eigen::VectorXcd());
  m.def(
      "scattered_pattern",
      [](const SimulationContext& ctx, const Eigen::VectorXcd& loads, CutPlane plane,
         std::optional<double> fixed_angle, int n_points) {
        return scattered_pattern(ctx, loads, plane, fixed_angle, n_points);
      },
      py::arg("ctx"), py::arg("ris_loads"), py::arg("plane"),
      py::arg("fixed_angle_deg") = std::nullopt, py::arg("n_points") = 361);
}
