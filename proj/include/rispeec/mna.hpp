#pragma once

// Frequency-domain MNA for the PEEC circuit. The system matrix has the
// block layout
//
//   [ Zvol + Zload + s*Lp   -A^T        ] [ I   ]   [ Vs ]
//   [ A                      s*P^-1 + Y ] [ Phi ] = [ Is ]
//
// with branch currents I and node potentials Phi as unknowns. Ports are
// series delta-gaps at each dipole's center segment: a port load adds to
// that branch's diagonal impedance, a port source drives that branch's
// entry of Vs. The node-admittance block Y is kept for node-attached
// lumped elements and is zero in the default series-port convention.

#include <Eigen/Dense>
#include <map>
#include <memory>

#include "rispeec/elements.hpp"
#include "rispeec/geometry.hpp"

namespace rispeec {

class MnaSystem {
 public:
  MnaSystem(Eigen::MatrixXcd matrix, int num_branches, int num_nodes);

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  int num_branches() const { return num_branches_; }
  int num_nodes() const { return num_nodes_; }
  int size() const { return num_branches_ + num_nodes_; }

  /// Shared LU factorization, computed on first use. Read-only afterward,
  /// so concurrent solves may share it.
  const Eigen::PartialPivLU<Eigen::MatrixXcd>& lu() const;

 private:
  Eigen::MatrixXcd matrix_;
  int num_branches_ = 0;
  int num_nodes_ = 0;
  struct LazyLu;
  std::shared_ptr<LazyLu> lazy_;
};

struct MnaSolution {
  Eigen::VectorXcd currents;    // per branch, A
  Eigen::VectorXcd potentials;  // per node, V
  double residual = 0.0;        // ||M x - rhs|| / ||rhs||
};

struct PortNetwork {
  Eigen::MatrixXcd Zsys;        // num_ports^2, ohm, symmetrized
  std::vector<PortRole> roles;  // per port, Tx first, then Rx, then RIS
  std::vector<Port> ports;      // mesh port records in matrix order
  double reciprocity_error = 0.0;  // ||Z - Z^T||_inf / ||Z||_inf before symmetrization

  int num_ports() const { return static_cast<int>(roles.size()); }
  std::vector<int> ports_of_role(PortRole role) const;
};

/// Assemble the MNA matrix at s = j*omega. port_loads maps a dipole's
/// port_index to a series impedance on its port branch.
MnaSystem assemble_mna(const PartialElements& pe, const WireMesh& mesh,
                       const std::map<int, cplx>& port_loads, cplx s,
                       const std::map<int, cplx>& node_admittances = {});

/// Dense LU solve with one step of iterative refinement. Throws
/// NumericalError if the relative residual ends up above 1e-10.
MnaSolution solve_mna(const MnaSystem& sys, const Eigen::VectorXcd& Vs,
                      const Eigen::VectorXcd& Is);

/// Multiport impedance matrix by short-circuit excitation: drive 1 V into
/// each port branch in turn with every port unloaded, collect port currents
/// into Y, and invert. The raw asymmetry is checked against 1e-8 before the
/// result is symmetrized.
PortNetwork extract_zsys(const PartialElements& pe, const WireMesh& mesh);

/// Voltage across the receiver load over the source emf for a 2-port
/// [[Z_TT, Z_TR], [Z_RT, Z_RR]] driven through Zg and terminated in Zr.
cplx direct_link_gain(const Eigen::Matrix2cd& z2, cplx zg, cplx zr);
cplx direct_link_gain(const PortNetwork& net, cplx zg, cplx zr);

}  // namespace rispeec
