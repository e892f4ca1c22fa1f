#pragma once

// End-to-end drivers chaining mesh -> partial elements -> MNA -> Z_sys ->
// optimizer -> far field, shared by the CLI, the Python bindings and the
// test suites.

#include <optional>

#include "rispeec/scenario_io.hpp"

namespace rispeec {

struct SimulationContext {
  ScenarioConfig config;
  WireMesh mesh;
  PartialElements pe;
};

SimulationContext build_context(const ScenarioConfig& config,
                                const QuadratureSpec& quad = {});

/// Branch currents with the Tx port driven by a 1 V emf behind zg, the Rx
/// port terminated in zr, and RIS port n loaded with ris_loads[n]
/// (shorts when empty).
Eigen::VectorXcd solve_currents(const SimulationContext& ctx,
                                const Eigen::VectorXcd& ris_loads = {});

/// Direction from the centroid of the RIS elements to the Rx center.
Eigen::Vector3d rx_direction_from_ris(const Scenario& scenario);

/// Scattered-field cut over the RIS segments with the Tx driven and Rx
/// terminated. fixed_angle defaults to the Rx direction seen from the RIS.
PatternCut scattered_pattern(const SimulationContext& ctx, const Eigen::VectorXcd& ris_loads,
                             CutPlane plane, std::optional<double> fixed_angle_deg,
                             int n_points);

}  // namespace rispeec
