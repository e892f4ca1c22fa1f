#include "rispeec/mna.hpp"

#include <mutex>
#include <optional>

#include "rispeec/errors.hpp"

namespace rispeec {

struct MnaSystem::LazyLu {
  std::once_flag flag;
  std::optional<Eigen::PartialPivLU<Eigen::MatrixXcd>> lu;
};

MnaSystem::MnaSystem(Eigen::MatrixXcd matrix, int num_branches, int num_nodes)
    : matrix_(std::move(matrix)),
      num_branches_(num_branches),
      num_nodes_(num_nodes),
      lazy_(std::make_shared<LazyLu>()) {
  if (matrix_.rows() != size() || matrix_.cols() != size())
    throw ConfigError("mna: matrix size does not match branch/node counts");
}

const Eigen::PartialPivLU<Eigen::MatrixXcd>& MnaSystem::lu() const {
  std::call_once(lazy_->flag, [this] { lazy_->lu.emplace(matrix_); });
  return *lazy_->lu;
}

MnaSystem assemble_mna(const PartialElements& pe, const WireMesh& mesh,
                       const std::map<int, cplx>& port_loads, cplx s,
                       const std::map<int, cplx>& node_admittances) {
  const int nb = mesh.num_segments();
  const int nn = mesh.num_nodes();
  if (pe.Lp.rows() != nb || pe.P.rows() != nn || pe.Zvol.size() != nb)
    throw ConfigError("mna: partial elements do not match the mesh");
  if (mesh.incidence.rows() != nn || mesh.incidence.cols() != nb)
    throw ConfigError("mna: incidence matrix does not match the mesh");

  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(nb + nn, nb + nn);
  m.topLeftCorner(nb, nb) = s * pe.Lp;
  for (int b = 0; b < nb; ++b) m(b, b) += pe.Zvol(b);
  for (const auto& [port_index, z] : port_loads) {
    const int b = mesh.port_by_index(port_index).branch;
    m(b, b) += z;
  }

  m.topRightCorner(nb, nn) = -mesh.incidence.transpose().cast<cplx>();
  m.bottomLeftCorner(nn, nb) = mesh.incidence.cast<cplx>();

  Eigen::PartialPivLU<Eigen::MatrixXcd> p_lu(pe.P);
  if (p_lu.rcond() < 1e-14)
    throw NumericalError("mna: coefficient-of-potential matrix is numerically singular");
  m.bottomRightCorner(nn, nn) = s * p_lu.inverse();
  for (const auto& [node, y] : node_admittances) {
    if (node < 0 || node >= nn) throw ConfigError("mna: node admittance on unknown node");
    m(nb + node, nb + node) += y;
  }
  return MnaSystem(std::move(m), nb, nn);
}

MnaSolution solve_mna(const MnaSystem& sys, const Eigen::VectorXcd& Vs,
                      const Eigen::VectorXcd& Is) {
  const int nb = sys.num_branches(), nn = sys.num_nodes();
  if (Vs.size() != nb || Is.size() != nn)
    throw ConfigError("mna: source vector sizes do not match the system");

  Eigen::VectorXcd rhs(nb + nn);
  rhs.head(nb) = Vs;
  rhs.tail(nn) = Is;

  MnaSolution sol;
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) {
    sol.currents = Eigen::VectorXcd::Zero(nb);
    sol.potentials = Eigen::VectorXcd::Zero(nn);
    sol.residual = 0.0;
    return sol;
  }

  const auto& lu = sys.lu();
  if (lu.rcond() < 1e-15)
    throw NumericalError("mna: system matrix numerically singular (rcond " +
                         std::to_string(lu.rcond()) + ")");

  Eigen::VectorXcd x = lu.solve(rhs);
  Eigen::VectorXcd r = rhs - sys.matrix() * x;
  if (r.norm() / rhs_norm > 1e-12) {
    x += lu.solve(r);  // one refinement step
    r = rhs - sys.matrix() * x;
  }
  sol.residual = r.norm() / rhs_norm;
  if (!(sol.residual < 1e-10))
    throw NumericalError("mna: solve residual " + std::to_string(sol.residual) +
                         " exceeds 1e-10 (rcond " + std::to_string(lu.rcond()) + ")");
  sol.currents = x.head(nb);
  sol.potentials = x.tail(nn);
  return sol;
}

std::vector<int> PortNetwork::ports_of_role(PortRole role) const {
  std::vector<int> out;
  for (int i = 0; i < num_ports(); ++i)
    if (roles[i] == role) out.push_back(i);
  return out;
}

PortNetwork extract_zsys(const PartialElements& pe, const WireMesh& mesh) {
  const int np = static_cast<int>(mesh.ports.size());
  if (np == 0) throw ConfigError("zsys: mesh has no ports");

  MnaSystem sys = assemble_mna(pe, mesh, {}, pe.s);
  const Eigen::VectorXcd zero_is = Eigen::VectorXcd::Zero(mesh.num_nodes());

  Eigen::MatrixXcd y(np, np);
  for (int p = 0; p < np; ++p) {
    Eigen::VectorXcd vs = Eigen::VectorXcd::Zero(mesh.num_segments());
    vs(mesh.ports[p].branch) = 1.0;
    const MnaSolution sol = solve_mna(sys, vs, zero_is);
    for (int q = 0; q < np; ++q) y(q, p) = sol.currents(mesh.ports[q].branch);
  }

  Eigen::PartialPivLU<Eigen::MatrixXcd> y_lu(y);
  if (y_lu.rcond() < 1e-14)
    throw NumericalError("zsys: port admittance matrix numerically singular");
  Eigen::MatrixXcd z = y_lu.solve(Eigen::MatrixXcd::Identity(np, np));

  PortNetwork net;
  net.reciprocity_error =
      (z - z.transpose()).cwiseAbs().maxCoeff() / z.cwiseAbs().maxCoeff();
  if (!(net.reciprocity_error < 1e-8))
    throw NumericalError("zsys: reciprocity violation " +
                         std::to_string(net.reciprocity_error));
  net.Zsys = 0.5 * (z + z.transpose());
  net.ports = mesh.ports;
  for (const Port& p : mesh.ports) net.roles.push_back(p.role);
  return net;
}

cplx direct_link_gain(const Eigen::Matrix2cd& z2, cplx zg, cplx zr) {
  const cplx denom = (z2(0, 0) + zg) * (z2(1, 1) + zr) - z2(1, 0) * z2(0, 1);
  const double scale = std::abs(z2(0, 0) + zg) * std::abs(z2(1, 1) + zr) +
                       std::abs(z2(1, 0)) * std::abs(z2(0, 1));
  if (std::abs(denom) < 1e-14 * std::max(scale, 1e-300))
    throw NumericalError("link gain: resonance degeneracy, denominator vanishes");
  return zr * z2(1, 0) / denom;
}

cplx direct_link_gain(const PortNetwork& net, cplx zg, cplx zr) {
  const auto tx = net.ports_of_role(PortRole::Tx);
  const auto rx = net.ports_of_role(PortRole::Rx);
  if (tx.size() != 1 || rx.size() != 1 || net.num_ports() != 2)
    throw ConfigError("link gain: network must have exactly one Tx and one Rx port");
  Eigen::Matrix2cd z2;
  z2 << net.Zsys(tx[0], tx[0]), net.Zsys(tx[0], rx[0]),
        net.Zsys(rx[0], tx[0]), net.Zsys(rx[0], rx[0]);
  return direct_link_gain(z2, zg, zr);
}

}  // namespace rispeec
