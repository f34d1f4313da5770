#include "sns/rds.hpp"

#include <cmath>
#include <limits>

#include "sns/parallel.hpp"

namespace sns {

namespace {

// u(t_end) = v(t_end) + z(t_end) for a run started at path time t0.
SpectralField terminal_u(const Trajectory& traj, const OuProcess& ou) {
  SpectralField u = *traj.final_v;
  if (ou.active()) u += ou.field(*traj.final_z);
  return u;
}

}  // namespace

double cocycle_discrepancy(const SpectralField& x, double t, double s, const NoisePath& path,
                           const ModelParams& params, const SolverConfig& config) {
  SolverConfig cfg    = config;
  cfg.audit           = false;
  cfg.store_snapshots = false;
  cfg.light_records   = true;
  cfg.record_every    = 1 << 20;

  OuProcess ou(params, path);

  // left side: phi(t+s, omega) x
  SpectralField vA = x;
  if (ou.active()) vA -= ou.field(ou.init(0));
  cfg.t_end          = t + s;
  Trajectory    trajA = integrate(vA, path, 0.0, params, cfg);
  SpectralField uA    = terminal_u(trajA, ou);

  // right side: phi(t, theta_s omega) phi(s, omega) x
  cfg.t_end        = s;
  Trajectory trajB1 = integrate(vA, path, 0.0, params, cfg);
  SpectralField uB1 = terminal_u(trajB1, ou);

  const NoisePath shifted = path_shift(path, s);
  OuProcess       ou2(params, shifted);
  SpectralField   vB = uB1;
  if (ou2.active()) vB -= ou2.field(ou2.init(0));
  cfg.t_end         = t;
  Trajectory trajB2 = integrate(vB, shifted, 0.0, params, cfg);
  SpectralField uB  = terminal_u(trajB2, ou2);

  return h_norm(uA - uB);
}

std::vector<DependRow> continuous_dependence(const SpectralField& u0, const NoisePath& path,
                                             const ModelParams& params,
                                             const SolverConfig& config, int n_max,
                                             uint64_t pert_seed) {
  SolverConfig cfg    = config;
  cfg.audit           = false;
  cfg.store_snapshots = true;

  const TruncationSpec spec(params.L);
  // fixed smooth perturbation directions
  SpectralField zeta  = random_field(spec, derive_seed(pert_seed, 1), 1.0, 2.0, params.L / 2);
  SpectralField phi_f = random_field(spec, derive_seed(pert_seed, 2), 1.0, 1.5);
  SpectralField phi_u = random_field(spec, derive_seed(pert_seed, 3), 1.0, 2.0);

  OuProcess ou(params, path);
  SpectralField z0 = ou.field(ou.init(0));

  auto run = [&](double delta) {
    ModelParams p = params;
    if (delta != 0.0) {
      SpectralField f = params.forcing ? SpectralField(spec, resize_coeffs(params.forcing->psi_hat, params.L))
                                       : SpectralField(spec);
      f.psi_hat += delta * phi_f.psi_hat;
      p.forcing = f;
    }
    SpectralField v0 = u0;
    v0.psi_hat += delta * phi_u.psi_hat;
    SpectralField zoff = zeta;
    zoff *= delta;
    v0 -= z0;
    v0.psi_hat -= delta * zeta.psi_hat;  // u0n - z_n(0)
    return integrate(v0, path, 0.0, p, cfg, delta != 0.0 ? &zoff : nullptr);
  };

  Trajectory base = run(0.0);

  std::vector<DependRow> rows;
  for (int n = 0; n <= n_max; ++n) {
    const double delta = std::pow(2.0, -n);
    Trajectory   pert  = run(delta);
    double       sup = 0.0, l2v = 0.0;
    const size_t nk = std::min(base.snapshots.size(), pert.snapshots.size());
    const double dtr = cfg.dt * cfg.record_every;
    for (size_t k = 0; k < nk; ++k) {
      // y_n = (v_n + z_n) - (v + z) = v_n - v + delta zeta
      SpectralField y = pert.snapshots[k] - base.snapshots[k];
      y.psi_hat += delta * zeta.psi_hat;
      sup = std::max(sup, h_norm(y));
      l2v += dtr * v_norm_sq(y);
    }
    rows.push_back(DependRow{n, delta, sup, std::sqrt(l2v)});
  }
  return rows;
}

AbsorbingEstimate absorbing_radius(const NoisePath& path, const ModelParams& params,
                                   const SolverConfig& config, double S, double rho,
                                   int n_samples, double horizon, double entry_tol,
                                   double c_weight, int threads) {
  if (S <= 0.0) throw std::invalid_argument("absorbing_radius: probe horizon S > 0 required");
  AbsorbingEstimate est;
  est.c_weight = c_weight;

  OuProcess     ou(params, path);
  const double  dtz = path.dt;
  const int64_t n   = std::llround(S / dtz);
  const double  lam1 = params.lam1();

  double f_dual2 = 0.0;
  if (params.forcing)
    f_dual2 = dual_v_seminorm_sq(to_z_basis(
        SpectralField(TruncationSpec(params.L), resize_coeffs(params.forcing->psi_hat, params.L))));

  double z0_h = 0.0;
  if (!ou.active()) {
    // z == 0: only the forcing term contributes
    double integral = 0.0;
    for (int64_t i = 0; i < n; ++i) {
      const double s_i = -S + i * dtz;
      integral += dtz * f_dual2 * std::exp(params.nu * lam1 * s_i);
    }
    est.r1 = std::sqrt(3.0 / params.nu * integral);
  } else {
    OUState zs = ou.init(-n);
    std::vector<double> z_h2(n + 1), z_l42(n + 1), g_dual2(n + 1);
    for (int64_t i = 0; i <= n; ++i) {
      SpectralField z = ou.field(zs);
      z_h2[i]         = zs.z_hat.squaredNorm();
      const double l4 = l4_norm(z);
      z_l42[i]        = l4 * l4;
      SpectralField g = advective_term(z);
      g.psi_hat       = -g.psi_hat;
      g.psi_hat += params.alpha * z.psi_hat;
      g_dual2[i] = dual_v_seminorm_sq(to_z_basis(g));
      if (i < n) ou.step(zs);
    }
    z0_h = std::sqrt(z_h2[n]);
    // cumulative integral of |z|_{L4}^2 from s_i to 0 (left Riemann)
    std::vector<double> tail(n + 1, 0.0);
    for (int64_t i = n - 1; i >= 0; --i) tail[i] = tail[i + 1] + dtz * z_l42[i];
    double sup_term = 0.0, integral = 0.0;
    for (int64_t i = 0; i <= n; ++i) {
      const double s_i = -S + i * dtz;
      const double w   = params.nu * lam1 * s_i +
                       3.0 * c_weight * c_weight / params.nu * tail[i];
      const double ew = std::exp(w);
      sup_term        = std::max(sup_term, 2.0 * z_h2[i] * ew);
      if (i < n) integral += dtz * (g_dual2[i] + f_dual2) * ew;
    }
    est.r1 = std::sqrt(sup_term + 3.0 / params.nu * integral);
  }
  est.z0_h = z0_h;
  est.r2   = est.r1 + z0_h;

  // forward runs from the rho-sphere
  est.entry_times.assign(n_samples, std::numeric_limits<double>::quiet_NaN());
  SolverConfig cfg    = config;
  cfg.t_end           = horizon;
  cfg.audit           = false;
  cfg.store_snapshots = false;
  cfg.light_records   = true;
  cfg.record_every    = 1;
  std::mutex mu;
  parallel_for(n_samples, threads, [&](int k) {
    SpectralField x = random_field(TruncationSpec(params.L),
                                   derive_seed(path.seed ^ 0xABB5ull, uint64_t(k)), 1.0, 1.0);
    x *= rho / h_norm(x);
    OuProcess     ouk(params, path);
    SpectralField v0 = x;
    if (ouk.active()) v0 -= ouk.field(ouk.init(0));
    Trajectory traj = integrate(v0, path, 0.0, params, cfg);
    double     entry = std::numeric_limits<double>::quiet_NaN();
    for (const DiagRecord& r : traj.records) {
      if (r.u_H <= est.r2 + entry_tol) {
        entry = r.t;
        break;
      }
    }
    std::lock_guard<std::mutex> lk(mu);
    est.entry_times[k] = entry;
    if (std::isnan(entry)) est.all_entered = false;
  });
  return est;
}

PullbackResult pullback_compactness(const PullbackPlan& plan, const NoisePath& path,
                                    const ModelParams& params, const SolverConfig& config,
                                    int threads) {
  if (plan.times.empty()) throw std::invalid_argument("pullback_compactness: empty time list");
  for (size_t i = 1; i < plan.times.size(); ++i)
    if (plan.times[i] <= plan.times[i - 1])
      throw std::invalid_argument("pullback_compactness: times must increase");

  const int nt = int(plan.times.size());
  PullbackResult res;
  res.t_n = plan.times;
  res.out_norm.assign(nt, 0.0);
  std::vector<SpectralField> outs(nt, SpectralField(TruncationSpec(params.L)));

  SolverConfig cfg    = config;
  cfg.audit           = false;
  cfg.store_snapshots = false;
  cfg.light_records   = true;
  cfg.record_every    = 1 << 20;

  parallel_for(nt, threads, [&](int i) {
    const double  tn      = plan.times[i];
    const NoisePath shifted = path_shift(path, -tn);
    OuProcess     ou(params, shifted);
    SpectralField x = random_field(TruncationSpec(params.L),
                                   derive_seed(plan.sample_seed, uint64_t(i)), 1.0, 1.0);
    x *= plan.rho / h_norm(x);
    SpectralField v0 = x;
    if (ou.active()) v0 -= ou.field(ou.init(0));
    SolverConfig c = cfg;
    c.t_end        = tn;
    Trajectory traj = integrate(v0, shifted, 0.0, params, c);
    outs[i]         = terminal_u(traj, ou);
    res.out_norm[i] = h_norm(outs[i]);
  });

  for (int i = 0; i + 1 < nt; ++i) res.succ_dist.push_back(h_norm(outs[i + 1] - outs[i]));
  return res;
}

}  // namespace sns
