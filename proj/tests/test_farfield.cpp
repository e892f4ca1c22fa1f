#include <doctest.h>

#include <cmath>

#include "rispeec/constants.hpp"
#include "rispeec/errors.hpp"
#include "rispeec/farfield.hpp"
#include "test_support.hpp"

using namespace rispeec;

namespace {

// Single-segment "short dipole" mesh with unit current.
WireMesh short_dipole_mesh(const Eigen::Vector3d& center, double len) {
  WireMesh m;
  Segment s;
  s.start = center - Eigen::Vector3d(0, 0, len / 2);
  s.end = center + Eigen::Vector3d(0, 0, len / 2);
  s.direction = Eigen::Vector3d::UnitZ();
  s.length = len;
  s.radius = len / 100;
  s.parent_dipole = 0;
  m.segments.push_back(s);
  m.segment_nodes.emplace_back(0, 1);
  ChargeNode a, b;
  a.position = s.start;
  b.position = s.end;
  m.nodes = {a, b};
  m.incidence = build_incidence(m);
  Port p;
  p.role = PortRole::Ris;
  p.dipole = 0;
  p.branch = 0;
  m.ports.push_back(p);
  return m;
}

WireMesh two_element_mesh(double spacing) {
  WireMesh m = short_dipole_mesh({0, -spacing / 2, 0}, 1e-4);
  WireMesh m2 = short_dipole_mesh({0, spacing / 2, 0}, 1e-4);
  Segment s = m2.segments[0];
  s.parent_dipole = 1;
  m.segments.push_back(s);
  m.segment_nodes.emplace_back(2, 3);
  m.nodes.push_back(m2.nodes[0]);
  m.nodes.push_back(m2.nodes[1]);
  m.incidence = build_incidence(m);
  Port p;
  p.role = PortRole::Ris;
  p.dipole = 1;
  p.branch = 1;
  m.ports.push_back(p);
  return m;
}

}  // namespace

TEST_CASE("far_field: canonical sin(theta) pattern of a short dipole") {
  const WireMesh mesh = short_dipole_mesh({0, 0, 0}, 1e-4);
  const Eigen::VectorXcd currents = Eigen::VectorXcd::Ones(1);
  const double k = 2.0 * pi / 1e-2;

  const double e90 = far_field(currents, mesh, {0}, unit_direction(90, 0), k).norm();
  for (double theta : {5.0, 30.0, 60.0, 90.0, 120.0, 175.0}) {
    const double e = far_field(currents, mesh, {0}, unit_direction(theta, 37.0), k).norm();
    CHECK(std::abs(e / e90 - std::sin(theta * pi / 180.0)) < 1e-12);
  }
  CHECK(far_field(currents, mesh, {0}, unit_direction(0, 0), k).norm() < 1e-12 * e90);
}

TEST_CASE("far_field: transversality for random directions") {
  const WireMesh mesh = two_element_mesh(3e-3);
  Eigen::VectorXcd currents(2);
  currents << cplx(1.0, 0.3), cplx(-0.5, 0.8);
  const double k = 2.0 * pi / 1e-2;

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const double theta = std::acos(2.0 * u(rng) - 1.0) * 180.0 / pi;
    const double phi = 360.0 * u(rng);
    const Eigen::Vector3d dir = unit_direction(theta, phi);
    const Eigen::Vector3cd e = far_field(currents, mesh, {0, 1}, dir, k);
    CHECK(std::abs(e.dot(dir.cast<cplx>())) <= 1e-12 * std::max(e.norm(), 1e-30));
  }
}

TEST_CASE("far_field: two-element array null against the analytic array factor") {
  const double lambda = 1e-2, k = 2.0 * pi / lambda;
  const WireMesh mesh = two_element_mesh(lambda / 2.0);
  const Eigen::VectorXcd currents = Eigen::VectorXcd::Ones(2);

  // theta = 90 cut: |E(phi)| ~ |cos(pi/2 sin(phi))|
  const double e0 = far_field(currents, mesh, {0, 1}, unit_direction(90, 0), k).norm();
  for (double phi : {0.0, 15.0, 30.0, 45.0, 60.0, 75.0, 89.0}) {
    const double e = far_field(currents, mesh, {0, 1}, unit_direction(90, phi), k).norm();
    const double af = std::abs(std::cos(0.5 * pi * std::sin(phi * pi / 180.0)));
    CHECK(std::abs(e / e0 - af) < 1e-3);
  }

  // null location within 0.5 deg of phi = 90
  double null_angle = 0.0, null_val = 1e300;
  for (double phi = 80.0; phi <= 100.0; phi += 0.05) {
    const double e = far_field(currents, mesh, {0, 1}, unit_direction(90, phi), k).norm();
    if (e < null_val) {
      null_val = e;
      null_angle = phi;
    }
  }
  CHECK(std::abs(null_angle - 90.0) < 0.5);
}

TEST_CASE("far_field: superposition over dipole subsets") {
  const WireMesh mesh = two_element_mesh(2.7e-3);
  Eigen::VectorXcd currents(2);
  currents << cplx(0.8, -0.1), cplx(0.2, 0.9);
  const double k = 2.0 * pi / 1e-2;
  const Eigen::Vector3d dir = unit_direction(72.0, 201.0);

  const Eigen::Vector3cd both = far_field(currents, mesh, {0, 1}, dir, k);
  const Eigen::Vector3cd first = far_field(currents, mesh, {0}, dir, k);
  const Eigen::Vector3cd second = far_field(currents, mesh, {1}, dir, k);
  CHECK((both - first - second).norm() <= 1e-12 * both.norm());
}

TEST_CASE("far_field: non-unit direction rejected") {
  const WireMesh mesh = short_dipole_mesh({0, 0, 0}, 1e-4);
  const Eigen::VectorXcd currents = Eigen::VectorXcd::Ones(1);
  CHECK_THROWS_AS(far_field(currents, mesh, {0}, Eigen::Vector3d(0, 0, 2), 1.0), ConfigError);
}

TEST_CASE("pattern_cut: sampling contracts") {
  const WireMesh mesh = short_dipole_mesh({0, 0, 0}, 1e-4);
  const Eigen::VectorXcd currents = Eigen::VectorXcd::Ones(1);
  const double k = 2.0 * pi / 1e-2;

  const PatternCut phi = pattern_cut(currents, mesh, k, CutPlane::Phi, 90.0, 361, {0});
  REQUIRE(phi.samples.size() == 360);  // duplicate endpoint dropped
  for (int i = 0; i < 360; ++i) CHECK(phi.samples[i].angle_deg == doctest::Approx(i).epsilon(1e-14));

  const PatternCut theta = pattern_cut(currents, mesh, k, CutPlane::Theta, 0.0, 181, {0});
  REQUIRE(theta.samples.size() == 181);
  CHECK(theta.samples.front().angle_deg == 0.0);
  CHECK(theta.samples.back().angle_deg == 180.0);

  CHECK_THROWS_AS(pattern_cut(currents, mesh, k, CutPlane::Phi, 90.0, 1, {0}), ConfigError);
}

TEST_CASE("pattern_cut: normalization puts the peak at exactly 0 dB") {
  const double lambda = 1e-2, k = 2.0 * pi / lambda;
  const WireMesh mesh = two_element_mesh(lambda / 3.0);
  Eigen::VectorXcd currents(2);
  currents << cplx(1.0, 0.0), cplx(0.4, 0.35);

  const PatternCut cut = pattern_cut(currents, mesh, k, CutPlane::Theta, 25.0, 181, {0, 1});
  double max_gain = -1e300;
  int zero_count = 0;
  for (const auto& s : cut.samples) {
    max_gain = std::max(max_gain, s.gain_db);
    if (s.gain_db == 0.0) ++zero_count;
    CHECK(s.gain_db <= 0.0);
  }
  CHECK(max_gain == 0.0);
  CHECK(zero_count >= 1);

  // exact null floor: theta-cut of a z-dipole at theta=0
  const PatternCut dip = pattern_cut(Eigen::VectorXcd::Ones(1),
                                     short_dipole_mesh({0, 0, 0}, 1e-4), k, CutPlane::Theta,
                                     0.0, 181, {0});
  CHECK(dip.samples.front().gain_db == -400.0);
}

TEST_CASE("pattern_cut: peak location converges as the angular step halves") {
  const double lambda = 1e-2, k = 2.0 * pi / lambda;
  const WireMesh mesh = two_element_mesh(lambda / 2.0);
  Eigen::VectorXcd currents(2);
  currents << cplx(1.0, 0.0), std::polar(1.0, 1.1);

  const PatternCut coarse = pattern_cut(currents, mesh, k, CutPlane::Phi, 90.0, 181, {0, 1});
  const PatternCut fine = pattern_cut(currents, mesh, k, CutPlane::Phi, 90.0, 361, {0, 1});
  const double coarse_step = 2.0;
  CHECK(std::abs(peak_angle_deg(coarse) - peak_angle_deg(fine)) < coarse_step);
}
