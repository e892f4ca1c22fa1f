#pragma once

// Per-load RIS termination optimizer. The effective Tx-Rx channel after
// eliminating the RIS ports is a linear-fractional (Moebius) function of
// each single load, a structure exposed by the Sherman-Morrison identity
// for the rank-1 change diag(e_n) * delta of (Z_SS + Z_L). Each step
// maximizes |h|^2 exactly along the load's constraint line and applies a
// rank-1 update to the cached inverse; sweeps repeat until the objective
// stalls. The inverse is re-factorized from scratch at every sweep to cap
// rank-1 rounding drift.

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "rispeec/mna.hpp"

namespace rispeec {

enum class LoadConstraint { Reactive, Passive };
enum class LoadInit { Short, Open, Random };

struct OptParams {
  LoadConstraint constraint = LoadConstraint::Reactive;
  int max_sweeps = 20;
  double tol = 1e-6;  // relative objective improvement per sweep
  cplx zg{50.0, 0.0};
  cplx zr{50.0, 0.0};
  double noise_power_ratio = 1.0;  // for rate reporting only
  LoadInit init = LoadInit::Short;
  std::uint64_t init_seed = 0;  // for LoadInit::Random
};

struct OptState {
  // Zsys blocks by role; T/R blocks are scalars (single Tx, single Rx).
  cplx z_tt, z_tr, z_rt, z_rr;
  Eigen::RowVectorXcd z_ts, z_rs;  // 1 x N
  Eigen::VectorXcd z_st, z_sr;     // N x 1
  Eigen::MatrixXcd z_ss;           // N x N
  std::vector<int> ris_port_indices;  // scenario port ids in block order

  Eigen::VectorXcd loads;     // N, ohm
  Eigen::MatrixXcd minv;      // (z_ss + diag(loads))^-1
  Eigen::Matrix2cd z_eff;     // effective [[TT,TR],[RT,RR]] at current loads
  cplx h;                     // cached effective channel
  cplx zg, zr;

  int n() const { return static_cast<int>(loads.size()); }
};

struct TraceEntry {
  long step = 0;
  int sweep = 0;
  int ris_index = 0;
  double objective = 0.0;  // |h|^2 after this step
};

struct OptResult {
  Eigen::VectorXcd loads;
  cplx h;
  double objective = 0.0;          // |h|^2
  double rate = 0.0;               // bit/s/Hz
  double objective_initial = 0.0;  // |h|^2 before optimization
  int sweeps_used = 0;
  std::vector<TraceEntry> trace;
  std::string init_description;
};

/// Split a network with exactly one Tx, one Rx and N >= 1 RIS ports into
/// the optimizer blocks, with all loads initialized to the given vector
/// (zero = shorts when empty).
OptState partition(const PortNetwork& net, cplx zg, cplx zr,
                   const Eigen::VectorXcd& loads0 = {});

/// Fresh factorization of (z_ss + diag(loads)); recomputes z_eff and h.
void refresh(OptState& state);

void set_loads(OptState& state, const Eigen::VectorXcd& loads);

/// Channel recomputed from the cached inverse (full elimination, no
/// incremental shortcuts).
cplx effective_channel(const OptState& state, cplx zg, cplx zr);

/// Sherman-Morrison update of minv, z_eff and h for loads[n] <- z_new.
/// A no-op (bit-for-bit) when z_new equals the current load.
void rank1_retune(OptState& state, int n, cplx z_new);

/// Exact maximizer of |h|^2 over load n along its constraint set. Returns
/// the current load when nothing strictly improves.
cplx best_load(const OptState& state, int n, LoadConstraint constraint);

/// Cyclic coordinate ascent over all RIS loads.
OptResult optimize(const PortNetwork& net, const OptParams& params = {});

double achievable_rate(cplx h, double noise_power_ratio);

/// Best |h|^2 over `count` uniformly random reactive configurations,
/// x_n ~ U[-x_range, x_range]; the reference baseline for the optimizer.
double best_random_reactive_objective(const PortNetwork& net, const OptParams& params,
                                      int count, std::uint64_t seed, double x_range = 500.0);

}  // namespace rispeec
