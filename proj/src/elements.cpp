#include "rispeec/elements.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "rispeec/constants.hpp"
#include "rispeec/errors.hpp"

namespace rispeec {

namespace detail {

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  static std::mutex mtx;
  static std::unordered_map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  {
    std::lock_guard lock(mtx);
    auto it = cache.find(order);
    if (it != cache.end()) {
      nodes = it->second.first;
      weights = it->second.second;
      return;
    }
  }
  // Newton iteration on Legendre polynomials, symmetric about 0.
  nodes.assign(order, 0.0);
  weights.assign(order, 0.0);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int n = 2; n <= order; ++n) {
        double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[order - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[order - 1 - i] = w;
  }
  std::lock_guard lock(mtx);
  cache.emplace(order, std::make_pair(nodes, weights));
}

double segment_distance(const Eigen::Vector3d& p1, const Eigen::Vector3d& p2,
                        const Eigen::Vector3d& q1, const Eigen::Vector3d& q2) {
  // Closest approach of two segments (clamped line parameters).
  const Eigen::Vector3d d1 = p2 - p1, d2 = q2 - q1, r = p1 - q1;
  const double a = d1.squaredNorm(), e = d2.squaredNorm(), f = d2.dot(r);
  double s = 0.0, t = 0.0;
  if (a <= 1e-300 && e <= 1e-300) return r.norm();
  if (a <= 1e-300) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= 1e-300) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2), denom = a * e - b * b;
      if (denom > 1e-300) s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return (p1 + s * d1 - (q1 + t * d2)).norm();
}

namespace {

// Antiderivatives used by the collinear extraction. F'' = 1/sqrt(x^2+a^2),
// H'' = sqrt(x^2+a^2); both even.
double aprim_inv(double x, double a) {
  if (a <= 0.0) return x == 0.0 ? 0.0 : std::abs(x) * (std::log(std::abs(x)) - 1.0);
  return x * std::asinh(x / a) - std::hypot(x, a);
}

double aprim_lin(double x, double a) {
  const double r = std::hypot(x, a);
  if (a <= 0.0) return r * r * r / 6.0;
  return r * r * r / 6.0 + 0.5 * a * a * (x * std::asinh(x / a) - r);
}

double interval_comb(double (*f)(double, double), double a1, double a2, double b1, double b2,
                     double a) {
  return f(a2 - b1, a) - f(a1 - b1, a) - f(a2 - b2, a) + f(a1 - b2, a);
}

// (cos(x) - 1 + x^2/2), series for small x to avoid cancellation.
double cos_remainder(double x) {
  const double x2 = x * x;
  if (std::abs(x) < 0.5) {
    return x2 * x2 / 24.0 * (1.0 - x2 / 30.0 * (1.0 - x2 / 56.0 * (1.0 - x2 / 90.0)));
  }
  return std::cos(x) - 1.0 + 0.5 * x2;
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
  }
  return std::sin(x) / x;
}

int phase_panels(double k, double len) {
  return std::max(1, static_cast<int>(std::ceil(k * len / 1.5)));
}

// Double integral over two collinear intervals of e^(-jkR)/R with
// R = sqrt((s-t)^2 + a^2). Singular 1/R and R terms integrate analytically;
// the remainder g = (cos(kR)-1+(kR)^2/2)/R - j*k*sinc(kR) is smooth.
cplx collinear_integral(double a1, double a2, double b1, double b2, double a, double k,
                        const QuadratureSpec& quad) {
  if (a1 > a2) std::swap(a1, a2);
  if (b1 > b2) std::swap(b1, b2);
  const double stat = interval_comb(&aprim_inv, a1, a2, b1, b2, a);
  double lin = 0.0;
  if (k > 0.0) lin = interval_comb(&aprim_lin, a1, a2, b1, b2, a);

  cplx smooth(0.0, 0.0);
  if (k > 0.0) {
    std::vector<double> xg, wg;
    gauss_legendre(quad.gauss_order, xg, wg);
    const int na = phase_panels(k, a2 - a1);
    const int nb = phase_panels(k, b2 - b1);
    const double ha = (a2 - a1) / na, hb = (b2 - b1) / nb;
    for (int pa = 0; pa < na; ++pa) {
      const double ca = a1 + (pa + 0.5) * ha;
      for (int pb = 0; pb < nb; ++pb) {
        const double cb = b1 + (pb + 0.5) * hb;
        cplx acc(0.0, 0.0);
        for (size_t i = 0; i < xg.size(); ++i) {
          const double s = ca + 0.5 * ha * xg[i];
          for (size_t j = 0; j < xg.size(); ++j) {
            const double t = cb + 0.5 * hb * xg[j];
            const double r = std::hypot(s - t, a);
            const double kr = k * r;
            const double w = wg[i] * wg[j];
            acc += w * cplx(cos_remainder(kr) / r, -k * sinc(kr));
          }
        }
        smooth += acc * (0.25 * ha * hb);
      }
    }
  }
  return cplx(stat - 0.5 * k * k * lin, 0.0) + smooth;
}

cplx general_integral(const Eigen::Vector3d& p1, const Eigen::Vector3d& p2,
                      const Eigen::Vector3d& q1, const Eigen::Vector3d& q2, double a_sq,
                      double k, const QuadratureSpec& quad) {
  const double len_a = (p2 - p1).norm(), len_b = (q2 - q1).norm();
  const double dist = segment_distance(p1, p2, q1, q2);
  const double dist_reg = std::max(dist, std::sqrt(a_sq));
  if (dist_reg <= 0.0)
    throw NumericalError("singular kernel: coincident filaments with zero radius");

  const auto prox_panels = [&](double len) {
    const int n = static_cast<int>(std::ceil(len / (0.75 * dist_reg)));
    return std::clamp(n, 1, quad.max_subdivisions);
  };
  const int na = std::max(phase_panels(k, len_a), prox_panels(len_a));
  const int nb = std::max(phase_panels(k, len_b), prox_panels(len_b));

  std::vector<double> xg, wg;
  gauss_legendre(quad.gauss_order, xg, wg);

  const Eigen::Vector3d da = (p2 - p1) / na, db = (q2 - q1) / nb;
  cplx total(0.0, 0.0);
  for (int pa = 0; pa < na; ++pa) {
    const Eigen::Vector3d ca = p1 + (pa + 0.5) * da;
    for (int pb = 0; pb < nb; ++pb) {
      const Eigen::Vector3d cb = q1 + (pb + 0.5) * db;
      cplx acc(0.0, 0.0);
      for (size_t i = 0; i < xg.size(); ++i) {
        const Eigen::Vector3d x = ca + (0.5 * xg[i]) * da;
        for (size_t j = 0; j < xg.size(); ++j) {
          const Eigen::Vector3d y = cb + (0.5 * xg[j]) * db;
          const double r = std::sqrt((x - y).squaredNorm() + a_sq);
          const double kr = k * r;
          acc += (wg[i] * wg[j] / r) * cplx(std::cos(kr), -std::sin(kr));
        }
      }
      total += acc * (0.25 * len_a / na * len_b / nb);
    }
  }
  return total;
}

}  // namespace

cplx line_double_integral(const Eigen::Vector3d& p1, const Eigen::Vector3d& p2,
                          const Eigen::Vector3d& q1, const Eigen::Vector3d& q2, double a_sq,
                          double k, const QuadratureSpec& quad) {
  const double len_a = (p2 - p1).norm(), len_b = (q2 - q1).norm();
  if (len_a <= 0.0 || len_b <= 0.0)
    throw ConfigError("zero-length integration support");

  // Collinear pairs (same wire) take the analytic-extraction route.
  const Eigen::Vector3d u = (p2 - p1) / len_a, v = (q2 - q1) / len_b;
  const double scale = len_a + len_b + (q1 - p1).norm();
  const bool parallel = u.cross(v).norm() < 1e-10;
  if (parallel) {
    const Eigen::Vector3d w = q1 - p1;
    const bool on_line = (w - w.dot(u) * u).norm() < 1e-10 * scale;
    if (on_line) {
      const double b1 = (q1 - p1).dot(u), b2 = (q2 - p1).dot(u);
      const double a = std::sqrt(a_sq);
      if (a <= 0.0) {
        // Overlapping zero-radius filaments have a non-integrable kernel;
        // merely touching intervals are still fine.
        const double lo = std::min(b1, b2), hi = std::max(b1, b2);
        if (std::min(hi, len_a) - std::max(lo, 0.0) > 1e-12 * scale)
          throw NumericalError("singular kernel: coincident filaments with zero radius");
      }
      return collinear_integral(0.0, len_a, b1, b2, a, k, quad);
    }
  }
  return general_integral(p1, p2, q1, q2, a_sq, k, quad);
}

}  // namespace detail

cplx partial_inductance(const Segment& seg_m, const Segment& seg_n, double k,
                        const QuadratureSpec& quad) {
  if (k < 0.0) throw ConfigError("wavenumber: must be >= 0");
  const double dot = seg_m.direction.dot(seg_n.direction);
  if (dot == 0.0) return cplx(0.0, 0.0);
  const double a_sq = seg_m.radius * seg_n.radius;
  const cplx integral = detail::line_double_integral(seg_m.start, seg_m.end, seg_n.start,
                                                     seg_n.end, a_sq, k, quad);
  return (mu0 / (4.0 * pi)) * dot * integral;
}

cplx potential_coefficient(const ChargeNode& node_i, const ChargeNode& node_j, double k,
                           const QuadratureSpec& quad) {
  if (node_i.support_length <= 0.0 || node_j.support_length <= 0.0 || node_i.pieces.empty() ||
      node_j.pieces.empty())
    throw ConfigError("zero-length charge support");
  const double a_sq = node_i.radius * node_j.radius;
  cplx integral(0.0, 0.0);
  for (const auto& pi : node_i.pieces)
    for (const auto& pj : node_j.pieces)
      integral += detail::line_double_integral(pi.a, pi.b, pj.a, pj.b, a_sq, k, quad);
  return integral / (4.0 * pi * eps0 * node_i.support_length * node_j.support_length);
}

cplx volume_impedance(const Segment& seg, const Material& material, double omega) {
  if (!(omega > 0.0)) throw ConfigError("omega: must be > 0");
  if (material.pec) return cplx(0.0, 0.0);
  if (!(material.conductivity > 0.0))
    throw ConfigError("conductivity: must be > 0 for a lossy material");
  return cplx(seg.length / (material.conductivity * pi * seg.radius * seg.radius), 0.0);
}

PartialElements assemble_partial_elements(const WireMesh& mesh, double freq_hz,
                                          const Material& material, const QuadratureSpec& quad) {
  if (!(freq_hz > 0.0)) throw ConfigError("frequency_hz: must be > 0");
  const int nb = mesh.num_segments();
  const int nn = mesh.num_nodes();
  if (nb == 0 || nn == 0) throw ConfigError("mesh: empty");

  PartialElements pe;
  const double omega = 2.0 * pi * freq_hz;
  pe.k = omega * std::sqrt(mu0 * eps0);
  pe.s = cplx(0.0, omega);

  pe.Lp.resize(nb, nb);
  for (int m = 0; m < nb; ++m) {
    for (int n = m; n < nb; ++n) {
      cplx val;
      try {
        val = partial_inductance(mesh.segments[m], mesh.segments[n], pe.k, quad);
      } catch (const std::exception& e) {
        throw NumericalError("Lp(" + std::to_string(m) + "," + std::to_string(n) +
                             "): " + e.what());
      }
      pe.Lp(m, n) = val;
      pe.Lp(n, m) = val;
    }
  }

  pe.P.resize(nn, nn);
  for (int i = 0; i < nn; ++i) {
    for (int j = i; j < nn; ++j) {
      cplx val;
      try {
        val = potential_coefficient(mesh.nodes[i], mesh.nodes[j], pe.k, quad);
      } catch (const std::exception& e) {
        throw NumericalError("P(" + std::to_string(i) + "," + std::to_string(j) +
                             "): " + e.what());
      }
      pe.P(i, j) = val;
      pe.P(j, i) = val;
    }
  }

  pe.Zvol.resize(nb);
  for (int m = 0; m < nb; ++m) pe.Zvol(m) = volume_impedance(mesh.segments[m], material, omega);
  return pe;
}

}  // namespace rispeec
