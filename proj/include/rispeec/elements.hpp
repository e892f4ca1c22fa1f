#pragma once

// Retarded (full-wave) partial elements for a thin-wire mesh: partial
// inductances between current cells, coefficients of potential between
// charge cells, and volume-cell impedances.
//
// All interaction kernels are double line integrals of e^(-jkR)/R along the
// wire axes, with R regularized to sqrt(d^2 + a^2) so self terms stay
// finite (a = wire radius). Collinear pairs (cells of the same wire) are
// evaluated by analytic extraction of the singular part plus Gauss
// quadrature on the smooth remainder; everything else uses tensor-product
// Gauss-Legendre with proximity-based panel subdivision.
//
// Time convention e^(+j omega t); entries are complex at k > 0.

#include <Eigen/Dense>
#include <complex>

#include "rispeec/geometry.hpp"

namespace rispeec {

using cplx = std::complex<double>;

struct Material {
  bool pec = true;
  double conductivity = 0.0;  // S/m, used when pec == false
};

struct QuadratureSpec {
  int gauss_order = 6;      // points per panel and per dimension
  int max_subdivisions = 8; // cap on proximity-driven panel count
};

struct PartialElements {
  Eigen::MatrixXcd Lp;    // num_segments^2, henry
  Eigen::MatrixXcd P;     // num_nodes^2, 1/farad
  Eigen::VectorXcd Zvol;  // num_segments, ohm
  double k = 0.0;         // rad/m
  cplx s;                 // j*omega, rad/s
};

/// Retarded partial inductance between two wire segments (filament
/// approximation). Exactly zero for perpendicular segments.
cplx partial_inductance(const Segment& seg_m, const Segment& seg_n, double k,
                        const QuadratureSpec& quad = {});

/// Retarded coefficient of potential between two charge cells, normalized
/// by the cells' support lengths.
cplx potential_coefficient(const ChargeNode& node_i, const ChargeNode& node_j, double k,
                           const QuadratureSpec& quad = {});

/// DC resistance of a volume cell: 0 for PEC, l/(sigma*pi*a^2) otherwise.
cplx volume_impedance(const Segment& seg, const Material& material, double omega);

PartialElements assemble_partial_elements(const WireMesh& mesh, double freq_hz,
                                          const Material& material = {},
                                          const QuadratureSpec& quad = {});

namespace detail {
/// Integral of e^(-jkR)/R, R = sqrt(|x-y|^2 + a_sq), x on (p1,p2), y on (q1,q2).
cplx line_double_integral(const Eigen::Vector3d& p1, const Eigen::Vector3d& p2,
                          const Eigen::Vector3d& q1, const Eigen::Vector3d& q2,
                          double a_sq, double k, const QuadratureSpec& quad);
/// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);
/// Minimum distance between two 3-D segments.
double segment_distance(const Eigen::Vector3d& p1, const Eigen::Vector3d& p2,
                        const Eigen::Vector3d& q1, const Eigen::Vector3d& q2);
}  // namespace detail

}  // namespace rispeec
