#include "rispeec/farfield.hpp"

#include <cmath>

#include "rispeec/constants.hpp"
#include "rispeec/errors.hpp"

namespace rispeec {

Eigen::Vector3cd far_field(const Eigen::VectorXcd& currents, const WireMesh& mesh,
                           const std::vector<int>& dipole_subset,
                           const Eigen::Vector3d& direction, double k) {
  if (currents.size() != mesh.num_segments())
    throw ConfigError("far_field: current vector does not match the mesh");
  if (std::abs(direction.norm() - 1.0) > 1e-9)
    throw ConfigError("far_field: direction must be a unit vector");

  Eigen::Vector3cd e = Eigen::Vector3cd::Zero();
  for (int m : mesh.segments_of_dipoles(dipole_subset)) {
    const Segment& seg = mesh.segments[m];
    const Eigen::Vector3d transverse =
        seg.direction - direction.dot(seg.direction) * direction;
    const double phase = k * direction.dot(seg.midpoint());
    const cplx factor = currents(m) * seg.length * cplx(std::cos(phase), std::sin(phase));
    e += factor * transverse.cast<cplx>();
  }
  return e;
}

Eigen::Vector3d unit_direction(double theta_deg, double phi_deg) {
  const double th = theta_deg * pi / 180.0, ph = phi_deg * pi / 180.0;
  return {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
}

PatternCut pattern_cut(const Eigen::VectorXcd& currents, const WireMesh& mesh, double k,
                       CutPlane plane, double fixed_angle_deg, int n_points,
                       const std::vector<int>& dipole_subset) {
  if (n_points < 2) throw ConfigError("pattern: n_points must be >= 2");

  PatternCut cut;
  cut.plane = plane;
  cut.fixed_angle_deg = fixed_angle_deg;

  const double span = plane == CutPlane::Phi ? 360.0 : 180.0;
  const double step = span / (n_points - 1);
  const int emitted = plane == CutPlane::Phi ? n_points - 1 : n_points;  // drop 360 == 0

  cut.samples.reserve(emitted);
  for (int i = 0; i < emitted; ++i) {
    PatternSample s;
    s.angle_deg = i * step;
    const Eigen::Vector3d dir = plane == CutPlane::Phi
                                    ? unit_direction(fixed_angle_deg, s.angle_deg)
                                    : unit_direction(s.angle_deg, fixed_angle_deg);
    s.e_field = far_field(currents, mesh, dipole_subset, dir / dir.norm(), k);
    cut.samples.push_back(s);
  }

  for (const auto& s : cut.samples) cut.peak_e2 = std::max(cut.peak_e2, s.e_field.squaredNorm());
  for (auto& s : cut.samples) {
    const double e2 = s.e_field.squaredNorm();
    s.gain_db = (cut.peak_e2 > 0.0 && e2 / cut.peak_e2 > 1e-40)
                    ? 10.0 * std::log10(e2 / cut.peak_e2)
                    : -400.0;
  }
  return cut;
}

double peak_angle_deg(const PatternCut& cut) {
  double best = -std::numeric_limits<double>::infinity();
  double angle = 0.0;
  for (const auto& s : cut.samples) {
    if (s.gain_db > best) {
      best = s.gain_db;
      angle = s.angle_deg;
    }
  }
  return angle;
}

}  // namespace rispeec
