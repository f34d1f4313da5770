#pragma once

#include <optional>
#include <vector>

#include "sns/noise.hpp"
#include "sns/nonlinear.hpp"

namespace sns {

enum class Scheme { IFRK4, IFEuler };

// Integrating-factor schemes: the diagonal stiff part (viscosity + Coriolis
// phase) is integrated exactly, only the quadratic term is explicit.
struct SolverConfig {
  double dt           = 1e-2;
  double t_end        = 1.0;
  Scheme scheme       = Scheme::IFRK4;
  int    record_every = 1;
  int    steps_per_z  = 1;  // z is sampled every steps_per_z solver steps
  bool   audit        = true;
  bool   store_snapshots = true;
  bool   light_records   = false;  // skip L4 in records (long experiment runs)
  double blowup_threshold = 1e12;
};

struct DiagRecord {
  double t;
  double H;         // |v|
  double V;         // |v|_V
  double L4;        // |v|_{L4}
  double bracket2;  // nu (Av,v) - nu lambda1/2 |v|^2
  double b_vzv;     // b(v, z, v)
  double energy_residual;  // trapezoidal residual of the step ending at t
  double u_H;       // |v + z| (equals H when noise is off)
};

struct Trajectory {
  std::vector<double>        times;  // path times of the snapshots
  std::vector<SpectralField> snapshots;
  std::vector<SpectralField> z_snapshots;  // empty when noise is off
  std::vector<DiagRecord>    records;

  std::optional<SpectralField> final_v;
  std::optional<OUState>       final_z;

  bool    blew_up        = false;
  int64_t last_good_step = 0;
  int64_t n_steps        = 0;

  double max_energy_residual = 0.0;
  double v0_h2               = 0.0;
  double sup_v_h2            = 0.0;
  double int_z_l4_4          = 0.0;  // integral of |z|_{L4}^4 dt
  double int_F_dual2         = 0.0;  // integral of |F|_{V'}^2 dt, F = -B(z) + alpha z + f
};

// Full right-hand side P_L[-nu A v - B(v+z,v+z) - C v + alpha z + f]
// (diagnostics; the integrator treats the diagonal part exactly).
SpectralField rhs_v(const SpectralField& v, const SpectralField& z, const ModelParams& params);

// Advance v from path time t0 for config.t_end; z advances in lockstep and is
// held constant within a step.  t0 must be a multiple of path.dt, and path.dt
// must equal config.dt * config.steps_per_z.  Throws nothing on blow-up: the
// trajectory is returned with blew_up set (the CLI maps it to exit 2).
// z_offset, when given, is a constant-in-time field added to the OU sample
// (perturbation experiments).
Trajectory integrate(const SpectralField& v0, const NoisePath& path, double t0,
                     const ModelParams& params, const SolverConfig& config,
                     const SpectralField* z_offset = nullptr);

// Trapezoidal residual of the energy balance over one step with z frozen:
// d|v|^2/dt = 2[-nu (Av,v) - b(v,z,v) + <g,v> + <f,v>], g = alpha z - B(z,z).
double energy_step_residual(const SpectralField& v0, const SpectralField& v1,
                            const SpectralField& z, double dt, const ModelParams& params);

// Gronwall a-priori bound sup |v|^2 <= Psi_T |v(0)|^2 + integral term, with
// the empirical constant C_g in Psi_T supplied by the caller.
double gronwall_bound(double v0_h2, const Trajectory& traj, const ModelParams& params,
                      double c_gron);

struct RefineRow {
  int    L;
  double sup_diff_h;  // sup_t |u_L - u_prev|_H, NaN for the first row
};

// Identical physical setup at each truncation; shared modes see identical
// noise because increments are keyed by (l, m).
std::vector<RefineRow> galerkin_refine(const SpectralField& u0, const ModelParams& params,
                                       const std::vector<int>& L_list, const NoisePath& path,
                                       const SolverConfig& config);

}  // namespace sns
