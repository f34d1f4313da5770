#pragma once

#include "sns/solver.hpp"

namespace sns {

// H-distance between phi(t+s, omega) x and phi(t, theta_s omega) phi(s, omega) x.
// t and s must be multiples of path.dt.
double cocycle_discrepancy(const SpectralField& x, double t, double s, const NoisePath& path,
                           const ModelParams& params, const SolverConfig& config);

struct DependRow {
  int    n;
  double delta;
  double sup_h;  // sup_{[0,T]} |y_n|_H
  double l2_v;   // (int_0^T |y_n|_V^2 dt)^{1/2}
};

// Perturbs z, f and u0 by delta_n = 2^{-n} times fixed smooth fields and
// reports the solution differences against the unperturbed run.
std::vector<DependRow> continuous_dependence(const SpectralField& u0, const NoisePath& path,
                                             const ModelParams& params,
                                             const SolverConfig& config, int n_max,
                                             uint64_t pert_seed);

struct AbsorbingEstimate {
  double              r1 = 0.0;
  double              r2 = 0.0;    // r1 + |z(0)|
  double              z0_h = 0.0;  // |z(0)| used in r2
  double              c_weight = 0.0;  // empirical constant used in the exponent
  std::vector<double> entry_times;     // NaN when not entered by the horizon
  bool                all_entered = true;
};

// Discretizes the pullback absorbing radius over s in [-S, 0] with
// g(s) = alpha z(s) - B(z(s), z(s)), then runs n_samples forward trajectories
// from the rho-sphere and records first entry into |u| <= r2 + entry_tol.
AbsorbingEstimate absorbing_radius(const NoisePath& path, const ModelParams& params,
                                   const SolverConfig& config, double S, double rho,
                                   int n_samples, double horizon, double entry_tol,
                                   double c_weight, int threads = 1);

struct PullbackPlan {
  std::vector<double> times;  // increasing, multiples of path.dt
  double              rho    = 1.0;
  uint64_t            sample_seed = 0;
};

struct PullbackResult {
  std::vector<double> t_n;
  std::vector<double> out_norm;   // |phi(t_n, theta_{-t_n} omega) x_n|
  std::vector<double> succ_dist;  // H-distance between successive outputs (size-1 entries)
};

PullbackResult pullback_compactness(const PullbackPlan& plan, const NoisePath& path,
                                    const ModelParams& params, const SolverConfig& config,
                                    int threads = 1);

}  // namespace sns
