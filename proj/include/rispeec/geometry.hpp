#pragma once

// Thin-wire dipole scenarios and their PEEC mesh: straight segments carry
// the currents (volume cells), node-centered half-cells carry the charges
// (surface cells), and a node-branch incidence matrix ties them together.

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

namespace rispeec {

enum class PortRole { Tx, Rx, Ris };

const char* to_string(PortRole role);

struct Dipole {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();  // m
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();   // unit vector
  double length = 0.0;                               // m
  PortRole role = PortRole::Ris;
  int port_index = -1;  // unique across a scenario
};

struct Scenario {
  double frequency_hz = 0.0;
  double wire_radius_m = 0.0;
  int segments_per_dipole = 11;  // odd, so the port gap sits at the center
  std::vector<Dipole> dipoles;

  double wavelength() const;
  /// Throws ConfigError on any violated invariant (non-unit axis, even
  /// segment count, radius outside the thin-wire regime, duplicate ports).
  void validate() const;
};

struct Segment {
  Eigen::Vector3d start, end;
  Eigen::Vector3d direction;  // unit, start -> end
  double length = 0.0;        // m
  double radius = 0.0;        // m
  int parent_dipole = -1;

  Eigen::Vector3d midpoint() const { return 0.5 * (start + end); }
};

/// Charge cell centered on a mesh node. Owns the adjacent half-segments
/// (one at a wire end, two at an interior junction).
struct ChargeNode {
  struct Piece {
    Eigen::Vector3d a, b;
  };
  Eigen::Vector3d position;
  std::vector<Piece> pieces;    // 1 or 2 collinear half-segments
  double support_length = 0.0;  // sum of piece lengths, m
  double radius = 0.0;          // m
  int parent_dipole = -1;
};

struct Port {
  PortRole role;
  int dipole = -1;      // index into the owning mesh's dipole list
  int branch = -1;      // center segment of that dipole
  int port_index = -1;  // scenario-level identifier
};

struct WireMesh {
  std::vector<Segment> segments;
  std::vector<ChargeNode> nodes;
  std::vector<std::pair<int, int>> segment_nodes;  // (start node, end node)
  Eigen::MatrixXd incidence;                       // num_nodes x num_segments, entries in {-1,0,+1}
  std::vector<Port> ports;                         // Tx first, then Rx, then RIS in scenario order

  int num_segments() const { return static_cast<int>(segments.size()); }
  int num_nodes() const { return static_cast<int>(nodes.size()); }

  std::vector<int> port_branches(PortRole role) const;
  std::vector<int> dipoles_of_role(PortRole role) const;
  std::vector<int> segments_of_dipoles(const std::vector<int>& dipoles) const;
  const Port& port_by_index(int port_index) const;
};

/// Mesh one dipole into n_seg equal collinear segments. The returned mesh
/// contains just this dipole; mesh_scenario() merges fragments.
WireMesh mesh_dipole(const Dipole& dipole, int n_seg, double radius);

/// Node-branch incidence: +1 where a branch leaves a node, -1 where it
/// enters, following each segment's direction.
Eigen::MatrixXd build_incidence(const WireMesh& mesh);

WireMesh mesh_scenario(const Scenario& scenario);

/// The built-in 28 GHz scenario: one Tx dipole, one Rx dipole, and a
/// 2x32 array of z-directed half-wave dipoles on the yz-plane.
Scenario paper_scenario();

}  // namespace rispeec
