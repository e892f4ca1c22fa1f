#include "rispeec/pipeline.hpp"

#include <cmath>

#include "rispeec/constants.hpp"
#include "rispeec/errors.hpp"
#include "rispeec/mna.hpp"

namespace rispeec {

SimulationContext build_context(const ScenarioConfig& config, const QuadratureSpec& quad) {
  SimulationContext ctx;
  ctx.config = config;
  ctx.mesh = mesh_scenario(config.scenario);
  ctx.pe = assemble_partial_elements(ctx.mesh, config.scenario.frequency_hz, {}, quad);
  return ctx;
}

Eigen::VectorXcd solve_currents(const SimulationContext& ctx, const Eigen::VectorXcd& ris_loads) {
  const auto tx_ports = ctx.mesh.port_branches(PortRole::Tx);
  if (tx_ports.size() != 1) throw ConfigError("simulate: need exactly one tx dipole");

  std::map<int, cplx> loads;
  int ris_i = 0;
  for (const Port& p : ctx.mesh.ports) {
    switch (p.role) {
      case PortRole::Tx:
        loads[p.port_index] = ctx.config.zg;
        break;
      case PortRole::Rx:
        loads[p.port_index] = ctx.config.zr;
        break;
      case PortRole::Ris: {
        cplx z(0.0, 0.0);
        if (ris_loads.size() > 0) {
          if (ris_i >= ris_loads.size())
            throw ConfigError("simulate: loads vector shorter than RIS count");
          z = ris_loads(ris_i);
        }
        loads[p.port_index] = z;
        ++ris_i;
        break;
      }
    }
  }
  if (ris_loads.size() > 0 && ris_i != ris_loads.size())
    throw ConfigError("simulate: loads vector longer than RIS count");

  MnaSystem sys = assemble_mna(ctx.pe, ctx.mesh, loads, ctx.pe.s);
  Eigen::VectorXcd vs = Eigen::VectorXcd::Zero(ctx.mesh.num_segments());
  vs(tx_ports[0]) = 1.0;
  const Eigen::VectorXcd is = Eigen::VectorXcd::Zero(ctx.mesh.num_nodes());
  return solve_mna(sys, vs, is).currents;
}

Eigen::Vector3d rx_direction_from_ris(const Scenario& scenario) {
  Eigen::Vector3d ris_centroid = Eigen::Vector3d::Zero();
  const Eigen::Vector3d* rx_center = nullptr;
  int n_ris = 0;
  for (const Dipole& d : scenario.dipoles) {
    if (d.role == PortRole::Ris) {
      ris_centroid += d.center;
      ++n_ris;
    } else if (d.role == PortRole::Rx) {
      rx_center = &d.center;
    }
  }
  if (n_ris == 0 || rx_center == nullptr)
    throw ConfigError("pattern: scenario needs RIS elements and an rx dipole");
  ris_centroid /= n_ris;
  const Eigen::Vector3d dir = *rx_center - ris_centroid;
  if (dir.norm() == 0.0) throw ConfigError("pattern: rx coincides with the RIS centroid");
  return dir / dir.norm();
}

PatternCut scattered_pattern(const SimulationContext& ctx, const Eigen::VectorXcd& ris_loads,
                             CutPlane plane, std::optional<double> fixed_angle_deg,
                             int n_points) {
  double fixed;
  if (fixed_angle_deg) {
    fixed = *fixed_angle_deg;
  } else {
    const Eigen::Vector3d dir = rx_direction_from_ris(ctx.config.scenario);
    const double theta = std::acos(std::clamp(dir.z(), -1.0, 1.0)) * 180.0 / pi;
    double phi = std::atan2(dir.y(), dir.x()) * 180.0 / pi;
    if (phi < 0.0) phi += 360.0;
    fixed = plane == CutPlane::Phi ? theta : phi;
  }
  const Eigen::VectorXcd currents = solve_currents(ctx, ris_loads);
  return pattern_cut(currents, ctx.mesh, ctx.pe.k, plane, fixed, n_points,
                     ctx.mesh.dipoles_of_role(PortRole::Ris));
}

}  // namespace rispeec
