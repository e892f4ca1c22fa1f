#include "rispeec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rispeec/constants.hpp"
#include "rispeec/errors.hpp"

namespace rispeec {

const char* to_string(PortRole role) {
  switch (role) {
    case PortRole::Tx: return "tx";
    case PortRole::Rx: return "rx";
    case PortRole::Ris: return "ris";
  }
  return "?";
}

double Scenario::wavelength() const { return speed_of_light / frequency_hz; }

void Scenario::validate() const {
  if (!(frequency_hz > 0.0)) throw ConfigError("frequency_hz: must be > 0");
  if (!(wire_radius_m > 0.0)) throw ConfigError("wire_radius_m: must be > 0");
  if (segments_per_dipole < 3) throw ConfigError("segments_per_dipole: must be >= 3");
  if (segments_per_dipole % 2 == 0) throw ConfigError("segments_per_dipole must be odd");
  if (dipoles.empty()) throw ConfigError("dipoles: empty scenario");

  double shortest = std::numeric_limits<double>::infinity();
  std::set<int> seen;
  for (size_t i = 0; i < dipoles.size(); ++i) {
    const Dipole& d = dipoles[i];
    if (!(d.length > 0.0)) throw ConfigError("dipoles[" + std::to_string(i) + "].length_m: must be > 0");
    if (std::abs(d.axis.norm() - 1.0) > 1e-12)
      throw ConfigError("dipoles[" + std::to_string(i) + "].axis: must be a unit vector");
    if (!seen.insert(d.port_index).second)
      throw ConfigError("dipoles[" + std::to_string(i) + "].port_index: duplicate");
    shortest = std::min(shortest, d.length);
  }
  if (!(wire_radius_m < shortest / (2.0 * segments_per_dipole)))
    throw ConfigError("wire_radius_m: violates thin-wire bound radius < length/(2*segments_per_dipole)");
}

WireMesh mesh_dipole(const Dipole& dipole, int n_seg, double radius) {
  if (n_seg % 2 == 0) throw ConfigError("segments_per_dipole must be odd");
  if (n_seg < 3) throw ConfigError("segments_per_dipole: must be >= 3");
  if (!(dipole.length > 0.0)) throw ConfigError("dipole length_m: must be > 0");
  if (!(radius > 0.0)) throw ConfigError("wire_radius_m: must be > 0");
  if (std::abs(dipole.axis.norm() - 1.0) > 1e-12) throw ConfigError("dipole axis: must be a unit vector");

  WireMesh mesh;
  const Eigen::Vector3d axis = dipole.axis / dipole.axis.norm();
  const Eigen::Vector3d start = dipole.center - 0.5 * dipole.length * axis;
  const double seg_len = dipole.length / n_seg;

  std::vector<Eigen::Vector3d> pts(n_seg + 1);
  for (int i = 0; i <= n_seg; ++i) pts[i] = start + (i * seg_len) * axis;

  for (int i = 0; i < n_seg; ++i) {
    Segment s;
    s.start = pts[i];
    s.end = pts[i + 1];
    s.direction = axis;
    s.length = seg_len;
    s.radius = radius;
    s.parent_dipole = 0;
    mesh.segments.push_back(s);
    mesh.segment_nodes.emplace_back(i, i + 1);
  }

  for (int i = 0; i <= n_seg; ++i) {
    ChargeNode n;
    n.position = pts[i];
    n.radius = radius;
    n.parent_dipole = 0;
    if (i > 0) n.pieces.push_back({0.5 * (pts[i - 1] + pts[i]), pts[i]});
    if (i < n_seg) n.pieces.push_back({pts[i], 0.5 * (pts[i] + pts[i + 1])});
    for (const auto& p : n.pieces) n.support_length += (p.b - p.a).norm();
    mesh.nodes.push_back(n);
  }

  Port port;
  port.role = dipole.role;
  port.dipole = 0;
  port.branch = n_seg / 2;  // center segment
  port.port_index = dipole.port_index;
  mesh.ports.push_back(port);

  mesh.incidence = build_incidence(mesh);
  return mesh;
}

Eigen::MatrixXd build_incidence(const WireMesh& mesh) {
  const int nb = mesh.num_segments();
  const int nn = mesh.num_nodes();
  if (static_cast<int>(mesh.segment_nodes.size()) != nb)
    throw ConfigError("mesh: segment_nodes size mismatch");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nn, nb);
  for (int m = 0; m < nb; ++m) {
    auto [from, to] = mesh.segment_nodes[m];
    if (from < 0 || from >= nn || to < 0 || to >= nn)
      throw ConfigError("mesh: segment " + std::to_string(m) + " references unknown node");
    a(from, m) = 1.0;   // branch leaves its start node
    a(to, m) = -1.0;    // and enters its end node
  }
  return a;
}

WireMesh mesh_scenario(const Scenario& scenario) {
  scenario.validate();

  WireMesh mesh;
  std::vector<Port> all_ports;
  for (size_t d = 0; d < scenario.dipoles.size(); ++d) {
    WireMesh frag = mesh_dipole(scenario.dipoles[d], scenario.segments_per_dipole, scenario.wire_radius_m);
    const int seg_off = mesh.num_segments();
    const int node_off = mesh.num_nodes();
    for (auto& s : frag.segments) {
      s.parent_dipole = static_cast<int>(d);
      mesh.segments.push_back(s);
    }
    for (auto& n : frag.nodes) {
      n.parent_dipole = static_cast<int>(d);
      mesh.nodes.push_back(n);
    }
    for (auto& [from, to] : frag.segment_nodes)
      mesh.segment_nodes.emplace_back(from + node_off, to + node_off);
    Port p = frag.ports.front();
    p.dipole = static_cast<int>(d);
    p.branch += seg_off;
    all_ports.push_back(p);
  }

  // Port order contract: Tx first, then Rx, then RIS in scenario order.
  for (PortRole role : {PortRole::Tx, PortRole::Rx, PortRole::Ris})
    for (const Port& p : all_ports)
      if (p.role == role) mesh.ports.push_back(p);

  mesh.incidence = build_incidence(mesh);
  return mesh;
}

std::vector<int> WireMesh::port_branches(PortRole role) const {
  std::vector<int> out;
  for (const Port& p : ports)
    if (p.role == role) out.push_back(p.branch);
  return out;
}

std::vector<int> WireMesh::dipoles_of_role(PortRole role) const {
  std::vector<int> out;
  for (const Port& p : ports)
    if (p.role == role) out.push_back(p.dipole);
  return out;
}

std::vector<int> WireMesh::segments_of_dipoles(const std::vector<int>& dipoles) const {
  std::vector<int> out;
  std::set<int> wanted(dipoles.begin(), dipoles.end());
  for (int m = 0; m < num_segments(); ++m)
    if (wanted.count(segments[m].parent_dipole)) out.push_back(m);
  return out;
}

const Port& WireMesh::port_by_index(int port_index) const {
  for (const Port& p : ports)
    if (p.port_index == port_index) return p;
  throw ConfigError("port_index " + std::to_string(port_index) + ": no such port");
}

Scenario paper_scenario() {
  Scenario sc;
  sc.frequency_hz = 28e9;
  const double lambda = speed_of_light / sc.frequency_hz;
  sc.wire_radius_m = lambda / 2000.0;
  sc.segments_per_dipole = 11;

  const double len = lambda / 2.0;
  const Eigen::Vector3d z = Eigen::Vector3d::UnitZ();

  int port = 0;
  sc.dipoles.push_back({{4.0, 0.0, 3.0}, z, len, PortRole::Tx, port++});
  sc.dipoles.push_back({{2.0, 3.46, 1.0}, z, len, PortRole::Rx, port++});

  // 2 z-stacked rows x 32 y-spaced columns on the yz-plane, centered at the
  // array center; row-major expansion (z-row outer, y-column inner).
  const Eigen::Vector3d ris_center(0.0, 0.0, 2.0);
  const int rows = 2, cols = 32;
  const double dy = lambda / 8.0, dz = 3.0 * lambda / 4.0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      Eigen::Vector3d center = ris_center;
      center.y() += (c - 0.5 * (cols - 1)) * dy;
      center.z() += (r - 0.5 * (rows - 1)) * dz;
      sc.dipoles.push_back({center, z, len, PortRole::Ris, port++});
    }
  }
  return sc;
}

}  // namespace rispeec
