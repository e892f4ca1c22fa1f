#include "rispeec/ris_opt.hpp"

#include <cmath>
#include <random>

#include "rispeec/errors.hpp"

namespace rispeec {

namespace {

constexpr double kOpenReactance = 1e9;  // ohm, stands in for an open circuit
constexpr double kImproveMargin = 1e-12;

Eigen::Matrix2cd effective_two_port(const OptState& st) {
  Eigen::MatrixXcd t(2, st.n());
  t.row(0) = st.z_ts;
  t.row(1) = st.z_rs;
  Eigen::MatrixXcd s(st.n(), 2);
  s.col(0) = st.z_st;
  s.col(1) = st.z_sr;
  Eigen::Matrix2cd z2;
  z2 << st.z_tt, st.z_tr, st.z_rt, st.z_rr;
  return z2 - (t * st.minv * s);
}

// Rational restriction of h to the line z = z_old + (z(t) - z_old):
// h(z) = (C + c1 (z - z_old)) / (A + a1 (z - z_old)).
struct LoadRational {
  cplx c0, c1;  // numerator
  cplx a0, a1;  // denominator
  cplx z_old;

  double objective(cplx z) const {
    const cplx d = a0 + a1 * (z - z_old);
    const cplx n = c0 + c1 * (z - z_old);
    const double dd = std::norm(d);
    if (dd < 1e-300) return std::numeric_limits<double>::infinity();
    return std::norm(n) / dd;
  }
};

LoadRational load_rational(const OptState& st, int n) {
  const Eigen::VectorXcd u = st.minv.col(n);
  const Eigen::RowVectorXcd v = st.minv.row(n);
  const cplx p_t = st.z_ts * u, p_r = st.z_rs * u;
  const cplx q_t = v * st.z_st, q_r = v * st.z_sr;
  const cplx m_nn = st.minv(n, n);

  const cplx e_tt = st.z_eff(0, 0), e_tr = st.z_eff(0, 1);
  const cplx e_rt = st.z_eff(1, 0), e_rr = st.z_eff(1, 1);

  LoadRational r;
  r.z_old = st.loads(n);
  r.c0 = st.zr * e_rt;
  const cplx e_coef = st.zr * p_r * q_t;
  r.a0 = (e_tt + st.zg) * (e_rr + st.zr) - e_rt * e_tr;
  const cplx b_coef = (e_tt + st.zg) * (p_r * q_r) + (e_rr + st.zr) * (p_t * q_t) -
                      e_rt * (p_t * q_r) - e_tr * (p_r * q_t);
  r.c1 = r.c0 * m_nn + e_coef;
  r.a1 = r.a0 * m_nn + b_coef;
  return r;
}

// Stationary points of |c0' + c1' t|^2 / |a0' + a1' t|^2 along z = dir * t:
// the cubic terms of (N' D - N D') cancel, leaving a real quadratic.
void line_stationary_points(const LoadRational& r, cplx dir, std::vector<double>& out) {
  const cplx alpha = r.c0 - r.c1 * r.z_old, beta = r.c1 * dir;
  const cplx gamma = r.a0 - r.a1 * r.z_old, delta = r.a1 * dir;

  const double n2 = std::norm(beta), n1 = 2.0 * (std::conj(alpha) * beta).real(),
               n0 = std::norm(alpha);
  const double d2 = std::norm(delta), d1 = 2.0 * (std::conj(gamma) * delta).real(),
               d0 = std::norm(gamma);

  const double qa = n2 * d1 - n1 * d2;
  const double qb = 2.0 * (n2 * d0 - n0 * d2);
  const double qc = n1 * d0 - n0 * d1;

  out.clear();
  const double scale = std::max({std::abs(qa), std::abs(qb), std::abs(qc)});
  if (scale <= 0.0) return;  // flat objective along this line
  if (std::abs(qa) > 1e-14 * scale) {
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc >= 0.0) {
      const double root = std::sqrt(disc);
      const double q = -0.5 * (qb + (qb >= 0.0 ? root : -root));
      out.push_back(q / qa);
      if (std::abs(q) > 0.0) out.push_back(qc / q);
    }
  } else if (std::abs(qb) > 0.0) {
    out.push_back(-qc / qb);
  }
}

}  // namespace

OptState partition(const PortNetwork& net, cplx zg, cplx zr, const Eigen::VectorXcd& loads0) {
  const auto tx = net.ports_of_role(PortRole::Tx);
  const auto rx = net.ports_of_role(PortRole::Rx);
  const auto ris = net.ports_of_role(PortRole::Ris);
  if (tx.size() != 1) throw ConfigError("partition: need exactly one Tx port");
  if (rx.size() != 1) throw ConfigError("partition: need exactly one Rx port");
  if (ris.empty()) throw ConfigError("partition: need at least one RIS port");

  const int n = static_cast<int>(ris.size());
  OptState st;
  st.z_tt = net.Zsys(tx[0], tx[0]);
  st.z_tr = net.Zsys(tx[0], rx[0]);
  st.z_rt = net.Zsys(rx[0], tx[0]);
  st.z_rr = net.Zsys(rx[0], rx[0]);
  st.z_ts.resize(n);
  st.z_rs.resize(n);
  st.z_st.resize(n);
  st.z_sr.resize(n);
  st.z_ss.resize(n, n);
  for (int i = 0; i < n; ++i) {
    st.z_ts(i) = net.Zsys(tx[0], ris[i]);
    st.z_rs(i) = net.Zsys(rx[0], ris[i]);
    st.z_st(i) = net.Zsys(ris[i], tx[0]);
    st.z_sr(i) = net.Zsys(ris[i], rx[0]);
    for (int j = 0; j < n; ++j) st.z_ss(i, j) = net.Zsys(ris[i], ris[j]);
    st.ris_port_indices.push_back(net.ports[ris[i]].port_index);
  }
  st.zg = zg;
  st.zr = zr;
  st.loads = loads0.size() == 0 ? Eigen::VectorXcd::Zero(n) : loads0;
  if (st.loads.size() != n) throw ConfigError("partition: loads vector size mismatch");
  refresh(st);
  return st;
}

void refresh(OptState& st) {
  Eigen::MatrixXcd m = st.z_ss;
  m.diagonal() += st.loads;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  if (lu.rcond() < 1e-14)
    throw NumericalError("effective channel: (Z_SS + Z_L) numerically singular; "
                         "perturb the loads");
  st.minv = lu.inverse();
  st.z_eff = effective_two_port(st);
  st.h = direct_link_gain(st.z_eff, st.zg, st.zr);
}

void set_loads(OptState& st, const Eigen::VectorXcd& loads) {
  if (loads.size() != st.n()) throw ConfigError("set_loads: size mismatch");
  st.loads = loads;
  refresh(st);
}

cplx effective_channel(const OptState& st, cplx zg, cplx zr) {
  return direct_link_gain(effective_two_port(st), zg, zr);
}

void rank1_retune(OptState& st, int n, cplx z_new) {
  if (n < 0 || n >= st.n()) throw ConfigError("rank1_retune: index out of range");
  const cplx delta = z_new - st.loads(n);
  if (delta == cplx(0.0, 0.0)) return;

  const cplx denom = cplx(1.0, 0.0) + delta * st.minv(n, n);
  if (std::abs(denom) < 1e-14)
    throw NumericalError("rank1_retune: update denominator below 1e-14, "
                         "re-factorization needed");

  const Eigen::VectorXcd u = st.minv.col(n);
  const Eigen::RowVectorXcd v = st.minv.row(n);
  const cplx w = delta / denom;

  Eigen::Vector2cd p;
  p << st.z_ts * u, st.z_rs * u;
  Eigen::RowVector2cd q;
  q << v * st.z_st, v * st.z_sr;

  st.z_eff += w * (p * q);
  st.minv.noalias() -= w * (u * v);
  st.loads(n) = z_new;
  st.h = direct_link_gain(st.z_eff, st.zg, st.zr);
}

cplx best_load(const OptState& st, int n, LoadConstraint constraint) {
  if (n < 0 || n >= st.n()) throw ConfigError("best_load: index out of range");
  const LoadRational r = load_rational(st, n);

  cplx best_z = st.loads(n);
  double best_f = r.objective(best_z);

  std::vector<double> ts;
  const auto consider = [&](cplx z) {
    const double f = r.objective(z);
    if (std::isfinite(f) && f > best_f * (1.0 + kImproveMargin)) {
      best_f = f;
      best_z = z;
    }
  };

  // Reactance line z = j t; the open-circuit limit enters as +-j*1e9.
  line_stationary_points(r, cplx(0.0, 1.0), ts);
  consider(cplx(0.0, 0.0));
  for (double t : ts) consider(cplx(0.0, t));
  consider(cplx(0.0, kOpenReactance));
  consider(cplx(0.0, -kOpenReactance));

  if (constraint == LoadConstraint::Passive) {
    // |h| is the modulus of a Moebius map of z, so its maximum over the
    // closed right half-plane sits on the boundary; searching the positive
    // real axis as well only widens the candidate set.
    line_stationary_points(r, cplx(1.0, 0.0), ts);
    for (double t : ts)
      if (t >= 0.0) consider(cplx(t, 0.0));
    consider(cplx(kOpenReactance, 0.0));
  }
  return best_z;
}

OptResult optimize(const PortNetwork& net, const OptParams& params) {
  if (params.max_sweeps < 1) throw ConfigError("max_sweeps: must be >= 1");
  if (!(params.tol > 0.0)) throw ConfigError("tol: must be > 0");

  OptState st = partition(net, params.zg, params.zr);
  const int n = st.n();

  OptResult res;
  switch (params.init) {
    case LoadInit::Short:
      res.init_description = "short (0 ohm)";
      break;
    case LoadInit::Open:
      res.init_description = "open (j*1e9 ohm)";
      st.loads.setConstant(cplx(0.0, kOpenReactance));
      refresh(st);
      break;
    case LoadInit::Random: {
      res.init_description = "random reactances, seed " + std::to_string(params.init_seed);
      std::mt19937_64 rng(params.init_seed);
      std::uniform_real_distribution<double> dist(-500.0, 500.0);
      for (int i = 0; i < n; ++i) st.loads(i) = cplx(0.0, dist(rng));
      refresh(st);
      break;
    }
  }

  res.objective_initial = std::norm(st.h);
  double verified = res.objective_initial;
  long step = 0;

  for (int sweep = 1; sweep <= params.max_sweeps; ++sweep) {
    refresh(st);  // cap rank-1 drift once per sweep
    const double sweep_start = verified;
    for (int i = 0; i < n; ++i) {
      const cplx z_star = best_load(st, i, params.constraint);
      if (z_star != st.loads(i)) {
        const OptState snapshot = st;
        rank1_retune(st, i, z_star);
        const double obj = std::norm(st.h);
        if (obj >= verified)
          verified = obj;
        else
          st = snapshot;  // numerically unprofitable update, keep the old state
      }
      res.trace.push_back({step++, sweep, i, verified});
    }
    res.sweeps_used = sweep;
    if (verified - sweep_start <= params.tol * sweep_start) break;
  }

  res.loads = st.loads;
  res.h = st.h;
  res.objective = verified;
  res.rate = achievable_rate(st.h, params.noise_power_ratio);
  return res;
}

double achievable_rate(cplx h, double noise_power_ratio) {
  if (noise_power_ratio < 0.0) throw ConfigError("noise_power_ratio: must be >= 0");
  return std::log2(1.0 + std::norm(h) * noise_power_ratio);
}

double best_random_reactive_objective(const PortNetwork& net, const OptParams& params,
                                      int count, std::uint64_t seed, double x_range) {
  OptState st = partition(net, params.zg, params.zr);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-x_range, x_range);
  double best = -1.0;
  Eigen::VectorXcd loads(st.n());
  for (int c = 0; c < count; ++c) {
    for (int i = 0; i < st.n(); ++i) loads(i) = cplx(0.0, dist(rng));
    set_loads(st, loads);
    best = std::max(best, std::norm(st.h));
  }
  return best;
}

}  // namespace rispeec
