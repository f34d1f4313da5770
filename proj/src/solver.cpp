#include "sns/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sns {

SpectralField rhs_v(const SpectralField& v, const SpectralField& z, const ModelParams& params) {
  SpectralField u = v;
  u += z;
  SpectralField out = advective_term(u);
  out.psi_hat       = -out.psi_hat;
  out -= params.nu * apply_A(v, params.variant);
  out -= apply_coriolis(v, params.rotation);
  out.psi_hat += params.alpha * z.psi_hat;
  if (params.forcing) out.psi_hat += resize_coeffs(params.forcing->psi_hat, params.L);
  out.psi_hat[0] = 0.0;
  return out;
}

double energy_step_residual(const SpectralField& v0, const SpectralField& v1,
                            const SpectralField& z, double dt, const ModelParams& params) {
  const bool  zon = h_norm_sq(z) > 0.0;
  SpectralField Bz = zon ? advective_term(z) : SpectralField(z.spec);
  auto erhs = [&](const SpectralField& v) {
    const SpectralField Bv   = advective_term(v);
    const double        avv  = a_inner(v, v, params.variant);
    const double        bvzv = zon ? -inner_h(Bv, z).real() : 0.0;
    const double        gv =
        zon ? params.alpha * inner_h(z, v).real() - inner_h(Bz, v).real() : 0.0;
    double fv = 0.0;
    if (params.forcing)
      fv = inner_h(SpectralField(v.spec, resize_coeffs(params.forcing->psi_hat, v.spec.L)), v)
               .real();
    return 2.0 * (-params.nu * avv - bvzv + gv + fv);
  };
  return (h_norm_sq(v1) - h_norm_sq(v0)) / dt - 0.5 * (erhs(v0) + erhs(v1));
}

double gronwall_bound(double v0_h2, const Trajectory& traj, const ModelParams& params,
                      double c_gron) {
  const double psi = std::exp(c_gron / std::pow(params.nu, 3) * traj.int_z_l4_4);
  return psi * (v0_h2 + 2.0 / params.nu * traj.int_F_dual2);
}

Trajectory integrate(const SpectralField& v0, const NoisePath& path, double t0,
                     const ModelParams& params, const SolverConfig& config,
                     const SpectralField* z_offset) {
  if (v0.spec.L != params.L) throw std::invalid_argument("integrate: v0 degree != params.L");
  if (config.dt <= 0.0 || config.t_end < 0.0)
    throw std::invalid_argument("integrate: dt must be positive and t_end nonnegative");
  if (config.record_every < 1 || config.steps_per_z < 1)
    throw std::invalid_argument("integrate: cadence fields must be >= 1");
  if (std::abs(path.dt - config.dt * config.steps_per_z) > 1e-12 * path.dt)
    throw std::invalid_argument("integrate: path.dt must equal dt * steps_per_z");
  if (config.dt * params.nu * sigma_l(params.L, params.variant) > 50.0)
    throw std::invalid_argument("integrate: dt nu sigma_L > 50 (stiffness sanity bound)");
  const double z0d = t0 / path.dt;
  const int64_t z0 = std::llround(z0d);
  if (std::abs(z0d - double(z0)) > 1e-9 * std::max(1.0, std::abs(z0d)))
    throw std::invalid_argument("integrate: t0 must be a multiple of path.dt");

  const int     L       = params.L;
  const Index   n       = coeff_count(L);
  const double  dt      = config.dt;
  const int64_t n_steps = std::llround(config.t_end / dt);

  OuProcess ou(params, path);
  OUState   zs      = ou.init(z0);
  const bool offset = z_offset != nullptr && z_offset->psi_hat.cwiseAbs().maxCoeff() > 0.0;
  const bool zon    = ou.active() || offset;
  SpectralField z   = ou.field(zs);

  // diagonal integrating factors
  VectorXcd E1 = VectorXcd::Ones(n), E2 = VectorXcd::Ones(n);
  for (int l = 1; l <= L; ++l)
    for (int m = -l; m <= l; ++m) {
      const Complex d = Complex(params.nu * sigma_l(l, params.variant), 0.0) +
                        coriolis_symbol(l, m, params.rotation);
      E1[mode_index(l, m)] = std::exp(-d * (dt / 2.0));
      E2[mode_index(l, m)] = std::exp(-d * dt);
    }

  VectorXcd f_hat = VectorXcd::Zero(n);
  if (params.forcing) f_hat = resize_coeffs(params.forcing->psi_hat, L);
  const bool has_f = params.forcing.has_value();

  // per-z-sample quantities
  SpectralField Bz(v0.spec);
  double        z_l4 = 0.0, F_dual2 = 0.0;
  auto refresh_z = [&]() {
    z = ou.field(zs);
    if (offset) z.psi_hat += resize_coeffs(z_offset->psi_hat, L);
    if (zon) {
      Bz   = advective_term(z);
      z_l4 = l4_norm(z);
      VectorXcd Fz = -to_z_basis(Bz) + params.alpha * to_z_basis(z);
      if (has_f) Fz += to_z_basis(SpectralField(v0.spec, f_hat));
      F_dual2 = dual_v_seminorm_sq(Fz);
    } else {
      z_l4 = 0.0;
      F_dual2 =
          has_f ? dual_v_seminorm_sq(to_z_basis(SpectralField(v0.spec, f_hat))) : 0.0;
    }
  };
  refresh_z();

  auto N = [&](const SpectralField& vs) {
    SpectralField u = vs;
    if (zon) u += z;
    SpectralField out = advective_term(u);
    out.psi_hat       = -out.psi_hat;
    if (zon) out.psi_hat += params.alpha * z.psi_hat;
    if (has_f) out.psi_hat += f_hat;
    return out;
  };

  // trapezoidal energy audit with z frozen across the step
  auto erhs = [&](const SpectralField& v, const SpectralField& Bv) {
    const double avv  = a_inner(v, v, params.variant);
    const double bvzv = zon ? -inner_h(Bv, z).real() : 0.0;
    const double gv   = zon ? params.alpha * inner_h(z, v).real() - inner_h(Bz, v).real() : 0.0;
    const double fv   = has_f ? inner_h(SpectralField(v.spec, f_hat), v).real() : 0.0;
    return 2.0 * (-params.nu * avv - bvzv + gv + fv);
  };

  Trajectory traj;
  traj.n_steps  = n_steps;
  traj.v0_h2    = 0.0;  // set below
  SpectralField v = v0;
  v.psi_hat[0]    = 0.0;
  traj.sup_v_h2   = h_norm_sq(v);
  traj.v0_h2      = traj.sup_v_h2;

  SpectralField Bv = config.audit ? advective_term(v) : SpectralField(v.spec);

  const double lam1 = params.lam1();
  auto record = [&](double t, double residual) {
    DiagRecord r;
    r.t               = t;
    const double h2   = h_norm_sq(v);
    r.H               = std::sqrt(h2);
    r.V               = std::sqrt(h2 + v_seminorm_sq(v));
    r.L4              = config.light_records ? 0.0 : l4_norm(v);
    r.bracket2        = params.nu * a_inner(v, v, params.variant) - params.nu * 0.5 * lam1 * h2;
    r.b_vzv           = (zon && config.audit) ? -inner_h(Bv, z).real() : 0.0;
    r.energy_residual = residual;
    r.u_H             = zon ? h_norm(v + z) : r.H;
    traj.records.push_back(r);
    if (config.store_snapshots) {
      traj.times.push_back(t);
      traj.snapshots.push_back(v);
      if (zon) traj.z_snapshots.push_back(z);
    }
  };
  record(t0, 0.0);

  for (int64_t k = 0; k < n_steps; ++k) {
    if (k > 0 && k % config.steps_per_z == 0) {
      ou.step(zs);
      refresh_z();
    }
    traj.int_z_l4_4 += dt * z_l4 * z_l4 * z_l4 * z_l4;
    traj.int_F_dual2 += dt * F_dual2;

    const double erhs0 = config.audit ? erhs(v, Bv) : 0.0;
    const double h2_0  = h_norm_sq(v);

    SpectralField vn(v.spec);
    if (config.scheme == Scheme::IFRK4) {
      const SpectralField k1 = N(v);
      SpectralField       s2(v.spec, E1.cwiseProduct(v.psi_hat + (dt / 2.0) * k1.psi_hat));
      const SpectralField k2 = N(s2);
      SpectralField s3(v.spec, E1.cwiseProduct(v.psi_hat) + (dt / 2.0) * k2.psi_hat);
      const SpectralField k3 = N(s3);
      SpectralField s4(v.spec, E2.cwiseProduct(v.psi_hat) + dt * E1.cwiseProduct(k3.psi_hat));
      const SpectralField k4 = N(s4);
      vn.psi_hat = E2.cwiseProduct(v.psi_hat) +
                   (dt / 6.0) * (E2.cwiseProduct(k1.psi_hat) + 2.0 * E1.cwiseProduct(k2.psi_hat) +
                                 2.0 * E1.cwiseProduct(k3.psi_hat) + k4.psi_hat);
    } else {
      const SpectralField k1 = N(v);
      vn.psi_hat             = E2.cwiseProduct(v.psi_hat + dt * k1.psi_hat);
    }

    const double h2_1 = h_norm_sq(vn);
    if (!std::isfinite(h2_1) || h2_1 > config.blowup_threshold * config.blowup_threshold) {
      traj.blew_up        = true;
      traj.last_good_step = k;
      break;
    }
    v = std::move(vn);
    traj.last_good_step = k + 1;
    traj.sup_v_h2       = std::max(traj.sup_v_h2, h2_1);

    double residual = 0.0;
    if (config.audit) {
      const SpectralField Bv1 = advective_term(v);
      residual                = (h2_1 - h2_0) / dt - 0.5 * (erhs0 + erhs(v, Bv1));
      Bv                      = Bv1;
      traj.max_energy_residual = std::max(traj.max_energy_residual, std::abs(residual));
    }
    if ((k + 1) % config.record_every == 0 || k + 1 == n_steps)
      record(t0 + (k + 1) * dt, residual);
  }

  // advance the OU state to the final time for callers that continue the run
  if ((n_steps % config.steps_per_z) == 0 && !traj.blew_up && n_steps > 0)
    ou.step(zs);
  traj.final_v = v;
  traj.final_z = zs;
  return traj;
}

std::vector<RefineRow> galerkin_refine(const SpectralField& u0, const ModelParams& params,
                                       const std::vector<int>& L_list, const NoisePath& path,
                                       const SolverConfig& config) {
  if (L_list.empty()) throw std::invalid_argument("galerkin_refine: empty L list");
  const int L_max = *std::max_element(L_list.begin(), L_list.end());

  std::vector<RefineRow>  rows;
  std::vector<VectorXcd>  prev;  // u snapshots embedded at L_max
  for (int L : L_list) {
    ModelParams p = params;
    p.L           = L;
    if (params.forcing)
      p.forcing = SpectralField(TruncationSpec(L), resize_coeffs(params.forcing->psi_hat, L));
    SolverConfig c    = config;
    c.store_snapshots = true;

    OuProcess ouL(p, path);
    OUState   z0 = ouL.init(0);
    SpectralField v0(TruncationSpec(L), resize_coeffs(u0.psi_hat, L));
    if (ouL.active()) v0 -= ouL.field(z0);

    Trajectory traj = integrate(v0, path, 0.0, p, c);

    std::vector<VectorXcd> usnap(traj.snapshots.size());
    for (size_t k = 0; k < traj.snapshots.size(); ++k) {
      VectorXcd u = traj.snapshots[k].psi_hat;
      if (!traj.z_snapshots.empty()) u += traj.z_snapshots[k].psi_hat;
      usnap[k] = resize_coeffs(u, L_max);
    }

    RefineRow row;
    row.L        = L;
    row.sup_diff_h = std::numeric_limits<double>::quiet_NaN();
    if (!prev.empty()) {
      double sup = 0.0;
      const size_t nk = std::min(prev.size(), usnap.size());
      for (size_t k = 0; k < nk; ++k) {
        SpectralField d(TruncationSpec(L_max), usnap[k] - prev[k]);
        sup = std::max(sup, h_norm(d));
      }
      row.sup_diff_h = sup;
    }
    rows.push_back(row);
    prev = std::move(usnap);
  }
  return rows;
}

}  // namespace sns
