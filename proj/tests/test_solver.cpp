#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "sns/diag.hpp"
#include "sns/rng.hpp"
#include "sns/solver.hpp"

using namespace sns;

TEST_CASE("rhs_v basics") {
  ModelParams p;
  p.L = 6;
  TruncationSpec spec(p.L);
  SpectralField  zero(spec);
  CHECK(h_norm(rhs_v(zero, zero, p)) == 0.0);

  // (B(z, v), v) = 0 (the existence-proof identity)
  SpectralField z = random_field(spec, 1, 1.0, 1.0);
  SpectralField v = random_field(spec, 2, 1.0, 1.0);
  CHECK(std::abs(trilinear_b(z, v, v)) <= 1e-10 * h_norm(z) * h_norm(v) * std::sqrt(v_norm_sq(v)));

  // with z = 0 the alpha z term and g vanish: rhs is independent of alpha
  ModelParams pa = p;
  pa.alpha       = 3.5;
  CHECK((rhs_v(v, zero, pa).psi_hat - rhs_v(v, zero, p).psi_hat).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("one IFRK4 step is exact on the diagonal part") {
  ModelParams p;
  p.nu       = 0.3;
  p.rotation = 1.7;
  p.L        = 5;
  TruncationSpec spec(p.L);
  SpectralField  v0(spec);
  v0.psi_hat[mode_index(3, 1)] = Complex(0.4, -0.1);
  v0.enforce_symmetry();
  SolverConfig sc;
  sc.dt    = 0.02;
  sc.t_end = 0.02;  // a single step
  sc.audit = false;
  NoisePath  path{0, sc.dt, 0};
  Trajectory t = integrate(v0, path, 0.0, p, sc);
  const Complex d = Complex(p.nu * 12.0, 0.0) + coriolis_symbol(3, 1, p.rotation);
  const Complex expect = std::exp(-d * sc.dt) * v0.psi_hat[mode_index(3, 1)];
  CHECK(std::abs(t.final_v->psi_hat[mode_index(3, 1)] - expect) < 1e-15);
}

TEST_CASE("single zonal mode decays exactly") {
  ModelParams p;
  p.nu = 0.1;
  p.L  = 8;
  TruncationSpec spec(p.L);
  SpectralField  u0(spec);
  u0.psi_hat[mode_index(1, 0)] = 1.0 / std::sqrt(2.0);
  SolverConfig sc;
  sc.dt    = 1e-2;
  sc.t_end = 1.0;
  NoisePath  path{0, sc.dt, 0};
  Trajectory t = integrate(u0, path, 0.0, p, sc);
  CHECK(std::abs(h_norm(*t.final_v) - std::exp(-0.2)) < 1e-12);
}

TEST_CASE("rossby phase of a free mode") {
  ModelParams p;
  p.nu       = 0.0;
  p.rotation = 1.0;
  p.L        = 6;
  TruncationSpec spec(p.L);
  SpectralField  u0(spec);
  u0.psi_hat[mode_index(3, 1)] = Complex(0.5, 0.0);
  u0.enforce_symmetry();
  SolverConfig sc;
  sc.dt    = 1e-3;
  sc.t_end = 1.0;
  sc.audit = false;
  NoisePath  path{0, sc.dt, 0};
  Trajectory t = integrate(u0, path, 0.0, p, sc);
  // z(t) = z(0) e^{-i w t} with w = -2 Omega m / lambda_l = -1/6
  const Complex ratio = t.final_v->psi_hat[mode_index(3, 1)] / u0.psi_hat[mode_index(3, 1)];
  const double  omega = -std::arg(ratio) / sc.t_end;
  CHECK(std::abs(omega - (-2.0 * p.rotation * 1.0 / 12.0)) < 1e-6);
  CHECK(std::abs(std::abs(ratio) - 1.0) < 1e-12);
}

TEST_CASE("bitwise determinism of noisy trajectories") {
  ModelParams p;
  p.L             = 8;
  p.nu            = 1.0;
  p.rotation      = 0.4;
  p.noise.epsilon = 0.2;
  SpectralField v0 = random_field(TruncationSpec(p.L), 10, 1.0, 1.0);
  SolverConfig  sc;
  sc.dt    = 0.01;
  sc.t_end = 0.5;
  NoisePath  path{77, sc.dt, 0};
  Trajectory a = integrate(v0, path, 0.0, p, sc);
  Trajectory b = integrate(v0, path, 0.0, p, sc);
  CHECK((a.final_v->psi_hat - b.final_v->psi_hat).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(a.records.size() == b.records.size());
  for (size_t k = 0; k < a.records.size(); ++k) CHECK(a.records[k].H == b.records[k].H);
}

TEST_CASE("blow-up detection") {
  ModelParams p;
  p.nu = 0.05;
  p.L  = 12;
  SpectralField u0 = random_field(TruncationSpec(p.L), 3, 80.0, 0.5);
  SolverConfig  sc;
  sc.dt    = 0.5;
  sc.t_end = 50.0;
  sc.audit = false;
  sc.store_snapshots = false;
  NoisePath  path{0, sc.dt, 0};
  Trajectory t = integrate(u0, path, 0.0, p, sc);
  CHECK(t.blew_up);
  CHECK(t.last_good_step < t.n_steps);
}

TEST_CASE("energy audit") {
  SUBCASE("linear-only run: residual at the exact-integrator level") {
    ModelParams p;
    p.nu = 0.1;
    p.L  = 4;
    TruncationSpec spec(p.L);
    SpectralField  v0(spec);
    v0.psi_hat[mode_index(1, 0)] = 1.0;
    v0.psi_hat[mode_index(2, 1)] = Complex(0.2, 0.1);
    v0.enforce_symmetry();
    SolverConfig sc;
    sc.dt    = 2e-5;
    sc.t_end = 0.01;
    NoisePath  path{0, sc.dt, 0};
    Trajectory t = integrate(v0, path, 0.0, p, sc);
    CHECK(t.max_energy_residual < 1e-10);
  }

  SUBCASE("halving dt quarters the residual (deterministic forced run)") {
    ModelParams p;
    p.nu = 1.0;
    p.L  = 10;
    TruncationSpec spec(p.L);
    SpectralField  f = random_field(spec, 21, 0.8, 1.5);
    p.forcing        = f;
    SpectralField v0 = random_field(spec, 22, 1.0, 1.0);
    SolverConfig  sc;
    sc.dt    = 2e-3;
    sc.t_end = 0.5;
    NoisePath  p1{0, sc.dt, 0};
    Trajectory a = integrate(v0, p1, 0.0, p, sc);
    sc.dt        = 1e-3;
    NoisePath  p2{0, sc.dt, 0};
    Trajectory b = integrate(v0, p2, 0.0, p, sc);
    const double ratio = a.max_energy_residual / b.max_energy_residual;
    MESSAGE("audit residual ratio = ", ratio);
    CHECK(ratio >= 3.0);
    CHECK(ratio <= 5.0);
  }

  SUBCASE("standalone residual matches the in-loop audit") {
    ModelParams p;
    p.nu            = 1.0;
    p.L             = 6;
    p.noise.epsilon = 0.1;
    SpectralField v0 = random_field(TruncationSpec(p.L), 30, 1.0, 1.0);
    SolverConfig  sc;
    sc.dt           = 0.01;
    sc.t_end        = 0.05;
    sc.record_every = 1;
    NoisePath  path{9, sc.dt, 0};
    Trajectory t = integrate(v0, path, 0.0, p, sc);
    // recompute the residual of step 0 from the stored snapshots
    const double r = energy_step_residual(t.snapshots[0], t.snapshots[1], t.z_snapshots[1],
                                          sc.dt, p);
    CHECK(r == doctest::Approx(t.records[1].energy_residual).epsilon(1e-10));
  }
}

TEST_CASE("gronwall a-priori bound with the logged constant") {
  ModelParams p;
  p.nu            = 1.0;
  p.L             = 10;
  p.noise.epsilon = 0.3;
  p.noise.seed    = 5;
  SpectralField f = random_field(TruncationSpec(p.L), 40, 0.5, 1.5);
  p.forcing       = f;
  SpectralField v0 = random_field(TruncationSpec(p.L), 41, 1.0, 1.0);
  SolverConfig  sc;
  sc.dt    = 0.005;
  sc.t_end = 2.0;
  NoisePath  path{p.noise.seed, sc.dt, 0};
  Trajectory t = integrate(v0, path, 0.0, p, sc);
  REQUIRE(!t.blew_up);

  EmpiricalConstants ec = empirical_constants(p.L, 200, 99, 4);
  const double       cg = gronwall_constant(ec);
  const double       bound = gronwall_bound(t.v0_h2, t, p, cg);
  MESSAGE("sup |v|^2 = ", t.sup_v_h2, " bound = ", bound, " (C_g = ", cg, ")");
  CHECK(t.sup_v_h2 <= 2.0 * bound);
}

TEST_CASE("scheme agreement (uniqueness surrogate)") {
  ModelParams p;
  p.nu            = 1.0;
  p.L             = 15;
  p.noise.epsilon = 0.05;
  p.noise.seed    = 8;
  SpectralField v0 = random_field(TruncationSpec(p.L), 50, 1.0, 1.0);

  const double dtz = 0.01;
  SolverConfig a;
  a.dt           = dtz;
  a.t_end        = 1.0;
  a.scheme       = Scheme::IFRK4;
  a.record_every = 10;
  a.audit        = false;
  SolverConfig b   = a;
  b.dt             = dtz / 100.0;
  b.scheme         = Scheme::IFEuler;
  b.steps_per_z    = 100;
  b.record_every   = 1000;
  NoisePath path{p.noise.seed, dtz, 0};

  Trajectory ta = integrate(v0, path, 0.0, p, a);
  Trajectory tb = integrate(v0, path, 0.0, p, b);
  REQUIRE(ta.snapshots.size() == tb.snapshots.size());
  double sup = 0.0;
  for (size_t k = 0; k < ta.snapshots.size(); ++k)
    sup = std::max(sup, h_norm(ta.snapshots[k] - tb.snapshots[k]));
  MESSAGE("scheme sup difference = ", sup);
  CHECK(sup <= 5e-4);
}

TEST_CASE("galerkin refinement") {
  SUBCASE("self-convergence on smooth deterministic data") {
    ModelParams p;
    p.nu = 1.0;
    TruncationSpec spec(40);
    SpectralField  u0 = random_field(spec, 60, 1.0, 2.0, 9);
    p.forcing         = random_field(spec, 61, 0.5, 2.5, 7);
    SolverConfig sc;
    sc.dt           = 1e-3;
    sc.t_end        = 1.0;
    sc.record_every = 50;
    sc.audit        = false;
    NoisePath path{0, sc.dt, 0};
    auto rows = galerkin_refine(u0, p, {10, 20, 40}, path, sc);
    REQUIRE(rows.size() == 3);
    MESSAGE("refine diffs: ", rows[1].sup_diff_h, " ", rows[2].sup_diff_h);
    CHECK(rows[1].sup_diff_h / rows[2].sup_diff_h >= 2.0);
  }

  SUBCASE("band-limited exact solution: error limited only by time step") {
    // free Rossby rotation of a single l = 2 pair is an exact solution
    ModelParams p;
    p.nu       = 0.05;
    p.rotation = 1.0;
    TruncationSpec spec(8);
    SpectralField  u0(spec);
    u0.psi_hat[mode_index(2, 1)] = Complex(0.3, 0.2);
    u0.enforce_symmetry();
    SolverConfig sc;
    sc.dt    = 1e-2;
    sc.t_end = 1.0;
    sc.audit = false;
    NoisePath path{0, sc.dt, 0};
    for (int L : {2, 5}) {
      ModelParams pl = p;
      pl.L           = L;
      SpectralField v0(TruncationSpec(L), resize_coeffs(u0.psi_hat, L));
      Trajectory    t = integrate(v0, path, 0.0, pl, sc);
      const Complex d = Complex(p.nu * 6.0, 0.0) + coriolis_symbol(2, 1, p.rotation);
      const Complex expect = std::exp(-d * sc.t_end) * u0.psi_hat[mode_index(2, 1)];
      CHECK(std::abs(t.final_v->psi_hat[mode_index(2, 1)] - expect) < 1e-12);
    }
  }

  SUBCASE("singleton list gives one row without comparison") {
    ModelParams p;
    p.nu = 1.0;
    SpectralField u0 = random_field(TruncationSpec(8), 70, 1.0, 1.0);
    SolverConfig  sc;
    sc.dt    = 0.01;
    sc.t_end = 0.1;
    NoisePath path{0, sc.dt, 0};
    auto rows = galerkin_refine(u0, p, {8}, path, sc);
    REQUIRE(rows.size() == 1);
    CHECK(std::isnan(rows[0].sup_diff_h));
  }
}
