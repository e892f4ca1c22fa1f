#pragma once

// Far-field radiation from solved segment currents. Each segment carries a
// piecewise-constant current and contributes its moment I*l at its
// midpoint; the common spherical-spreading factor and the -j*omega*mu0/4pi
// constant are dropped since only normalized patterns are reported.
//
// Spherical convention: theta from +z, phi from +x toward +y.

#include <Eigen/Dense>
#include <vector>

#include "rispeec/elements.hpp"
#include "rispeec/geometry.hpp"

namespace rispeec {

enum class CutPlane { Phi, Theta };

struct PatternSample {
  double angle_deg = 0.0;
  Eigen::Vector3cd e_field;  // unnormalized, V/m up to the dropped constant
  double gain_db = 0.0;      // 10*log10(|E|^2 / peak)
};

struct PatternCut {
  CutPlane plane = CutPlane::Phi;
  double fixed_angle_deg = 0.0;  // theta for a phi-cut, phi for a theta-cut
  std::vector<PatternSample> samples;
  double peak_e2 = 0.0;  // normalization, peak |E|^2
};

/// Radiation integral E(r_hat) = sum I_m l_m [l_hat - (r_hat.l_hat) r_hat]
/// e^(+jk r_hat.r_m) over the segments of the selected dipoles.
Eigen::Vector3cd far_field(const Eigen::VectorXcd& currents, const WireMesh& mesh,
                           const std::vector<int>& dipole_subset,
                           const Eigen::Vector3d& direction, double k);

Eigen::Vector3d unit_direction(double theta_deg, double phi_deg);

/// Uniform cut through the pattern. A phi-cut spans [0, 360) with the
/// duplicate 360-degree endpoint dropped; a theta-cut spans [0, 180]
/// inclusive. Gain floor is -400 dB for exact nulls.
PatternCut pattern_cut(const Eigen::VectorXcd& currents, const WireMesh& mesh, double k,
                       CutPlane plane, double fixed_angle_deg, int n_points,
                       const std::vector<int>& dipole_subset);

/// Angle of the strongest sample.
double peak_angle_deg(const PatternCut& cut);

}  // namespace rispeec
