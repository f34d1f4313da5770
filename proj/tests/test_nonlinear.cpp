#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "sns/diag.hpp"
#include "sns/nonlinear.hpp"
#include "sns/rng.hpp"
#include "sns/solver.hpp"

using namespace sns;

TEST_CASE("advective term of zonal flows vanishes") {
  TruncationSpec spec(8);
  SpectralField  f(spec);
  f.psi_hat[mode_index(1, 0)] = 1.0;
  f.psi_hat[mode_index(4, 0)] = -0.6;
  f.psi_hat[mode_index(7, 0)] = 0.2;
  SpectralField b = advective_term(f);
  CHECK(h_norm(b) < 1e-10 * h_norm(f) * std::sqrt(v_norm_sq(f)));

  // grid-evaluation oracle: u . grad(omega) is pointwise zero for zonal flows
  const SphereTransform& tr = transform_for(spec);
  ArrayXXd               Ap, Bp, Aw, Bw;
  tr.synth_grad(f.psi_hat, Ap, Bp);
  tr.synth_grad(vorticity(f), Aw, Bw);
  CHECK((Bp * Aw - Ap * Bw).abs().maxCoeff() < 1e-12);
}

TEST_CASE("energy and enstrophy neutrality of B") {
  TruncationSpec spec(10);
  for (int k = 0; k < 10; ++k) {
    SpectralField u = random_field(spec, derive_seed(101, k), 1.0, 1.0);
    SpectralField b = advective_term(u);
    const double  scale = l4_norm(u) * l4_norm(u) * std::sqrt(v_seminorm_sq(u));
    CHECK(std::abs(inner_h(b, u).real()) <= 1e-10 * scale);
    // (curl B(u,u), omega_u) = 0: 2D advection conserves enstrophy
    Complex flux = 0.0;
    for (int l = 1; l <= spec.L; ++l)
      for (int m = -l; m <= l; ++m) {
        const double lam = laplace_eig(l);
        flux += lam * b.psi_hat[mode_index(l, m)] * lam * std::conj(u.psi_hat[mode_index(l, m)]);
      }
    const double enstrophy_scale = v_seminorm_sq(u) * std::sqrt(v_seminorm_sq(u));
    CHECK(std::abs(flux.real()) <= 1e-9 * enstrophy_scale);
  }
}

TEST_CASE("covariant derivative") {
  TruncationSpec spec(6);
  SpectralField  u = random_field(spec, 201, 1.0, 1.0);
  SpectralField  w = random_field(spec, 202, 1.0, 1.0);

  SUBCASE("zero arguments") {
    SpectralField    zero(spec);
    GridTangentField d = covariant_derivative(u, zero);
    CHECK(d.u_theta.abs().maxCoeff() == 0.0);
    GridTangentField e = covariant_derivative(zero, w);
    CHECK(e.u_phi.abs().maxCoeff() == 0.0);
  }

  SUBCASE("w = u reduces to grad |u|^2/2 - u x curl u") {
    const TruncationSpec   ps = product_spec(spec.L);
    const SphereTransform& tr = transform_for(ps);
    GridTangentField       d  = covariant_derivative(u, u);

    ArrayXXd Au, Bu;
    tr.synth_grad(resize_coeffs(u.psi_hat, ps.L), Au, Bu);
    const ArrayXXd u_th = Bu, u_ph = -Au;
    const ArrayXXd curl = tr.synthesize(resize_coeffs(vorticity(u), ps.L));
    // grad(|u|^2/2) evaluated spectrally on the product grid
    ArrayXXd Ag, Bg;
    tr.synth_grad(tr.analyze(0.5 * (u_th.square() + u_ph.square())), Ag, Bg);
    const ArrayXXd ref_th = Ag - curl * u_ph;
    const ArrayXXd ref_ph = Bg + curl * u_th;
    const double   scale  = ref_th.abs().maxCoeff() + ref_ph.abs().maxCoeff();
    CHECK((d.u_theta - ref_th).abs().maxCoeff() < 1e-9 * scale);
    CHECK((d.u_phi - ref_ph).abs().maxCoeff() < 1e-9 * scale);
  }

  SUBCASE("leray projection of grad_u u equals the advective term") {
    const TruncationSpec ps = product_spec(spec.L);
    GridTangentField     d  = covariant_derivative(u, u);
    SpectralField        p  = leray_project(d, ps);
    SpectralField        a  = advective_term(u);
    // the two independent code paths agree on the retained modes (l <= L);
    // P B(u,u) keeps genuine content up to 2L before the Galerkin truncation
    double dev = 0.0;
    for (int l = 1; l <= spec.L; ++l)
      for (int m = -l; m <= l; ++m)
        dev = std::max(dev, std::abs(p.psi_hat[mode_index(l, m)] - a.psi_hat[mode_index(l, m)]));
    CHECK(dev < 1e-9 * h_norm(a));
  }
}

TEST_CASE("trilinear form: skew symmetry, duality, bilinearity") {
  TruncationSpec spec(6);
  for (int k = 0; k < 8; ++k) {
    SpectralField v = random_field(spec, derive_seed(301, k), 1.0, 1.0);
    SpectralField w = random_field(spec, derive_seed(302, k), 1.0, 1.0);
    SpectralField z = random_field(spec, derive_seed(303, k), 1.0, 1.0);

    CHECK(std::abs(trilinear_b(v, w, w)) <=
          1e-10 * h_norm(v) * h_norm(w) * std::sqrt(v_norm_sq(w)));

    const double bwz = trilinear_b(v, w, z);
    const double bzw = trilinear_b(v, z, w);
    CHECK(std::abs(bwz + bzw) <= 1e-10 * (std::abs(bwz) + std::abs(bzw) + 1e-30) * 0.5 + 1e-12);

    // duality against the projected bilinear term
    const double buu_z = trilinear_b(v, v, z);
    const double dual  = inner_h(advective_term(v), z).real();
    CHECK(std::abs(buu_z - dual) <= 1e-9 * std::abs(dual));
  }

  // bilinearity in each slot
  SpectralField a = random_field(spec, 401, 1.0, 1.0);
  SpectralField b = random_field(spec, 402, 1.0, 1.0);
  SpectralField c = random_field(spec, 403, 1.0, 1.0);
  SpectralField d = random_field(spec, 404, 1.0, 1.0);
  const double  s1 = 0.7, s2 = -1.3;
  SpectralField mix = s1 * a + s2 * d;
  const double  lhs = trilinear_b(mix, b, c);
  const double  rhs = s1 * trilinear_b(a, b, c) + s2 * trilinear_b(d, b, c);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  SpectralField mix2 = s1 * b + s2 * d;
  CHECK(trilinear_b(a, mix2, c) ==
        doctest::Approx(s1 * trilinear_b(a, b, c) + s2 * trilinear_b(a, d, c)).epsilon(1e-10));
}

TEST_CASE("dealiasing") {
  const int     L = 8;
  SpectralField u = random_field(TruncationSpec(L), 500, 1.0, 0.6);
  SpectralField base = advective_term(u);

  // enlarging the grid beyond the 3/2 rule does not change the result
  TruncationSpec big(L, TruncationSpec(L).n_theta + 9, TruncationSpec(L).n_phi + 17);
  SpectralField  u_big(big, u.psi_hat);
  SpectralField  b_big = advective_term(u_big);
  CHECK((b_big.psi_hat - base.psi_hat).cwiseAbs().maxCoeff() < 1e-10 * h_norm(base));

  // the no-dealias grid aliases the quadratic term
  SpectralField aliased = advective_term(u, DealiasPolicy::None);
  CHECK((aliased.psi_hat - base.psi_hat).cwiseAbs().maxCoeff() > 1e-8 * h_norm(base));
}

TEST_CASE("inviscid conservation, short run") {
  ModelParams p;
  p.nu       = 0.0;
  p.rotation = 1.1;
  p.L        = 12;
  SpectralField u0 = random_field(TruncationSpec(p.L), 7, 0.5, 1.5);
  SolverConfig  sc;
  sc.dt    = 1e-3;
  sc.t_end = 0.3;
  sc.audit = false;
  sc.store_snapshots = false;
  NoisePath  path{0, sc.dt, 0};
  Trajectory t = integrate(u0, path, 0.0, p, sc);
  CHECK(std::abs(h_norm_sq(*t.final_v) - h_norm_sq(u0)) / h_norm_sq(u0) < 1e-6);
  CHECK(std::abs(v_seminorm_sq(*t.final_v) - v_seminorm_sq(u0)) / v_seminorm_sq(u0) < 1e-6);
}

TEST_CASE("estimate ratios on special corpora") {
  TruncationSpec spec(6);
  // pure single modes
  SpectralField u(spec), v(spec), w(spec);
  u.psi_hat[mode_index(2, 1)] = 0.4;
  v.psi_hat[mode_index(3, 1)] = 0.7;
  w.psi_hat[mode_index(4, 2)] = 0.3;
  u.enforce_symmetry();
  v.enforce_symmetry();
  w.enforce_symmetry();
  const double r3 = std::abs(trilinear_b(u, v, w)) /
                    (l4_norm(u) * std::sqrt(v_seminorm_sq(v)) * l4_norm(w));
  CHECK(std::isfinite(r3));
  // u = w slot coincidence
  const double ruw = std::abs(trilinear_b(u, v, u)) /
                     (l4_norm(u) * std::sqrt(v_seminorm_sq(v)) * l4_norm(u));
  CHECK(std::isfinite(ruw));
  MESSAGE("single-mode b_estimate3 ratios: ", r3, " ", ruw);
}

TEST_CASE("estimate report: finite ratios, stable maxima") {
  CHECK_THROWS(estimate_report(6, 0, 1));
  auto small = estimate_report(8, 100, 42, 4);
  auto full  = estimate_report(8, 1000, 42, 4);
  REQUIRE(small.size() == full.size());
  for (size_t i = 0; i < small.size(); ++i) {
    CHECK(std::isfinite(small[i].max_ratio));
    CHECK(std::isfinite(full[i].max_ratio));
    CHECK(full[i].max_ratio >= small[i].max_ratio);  // same seed prefix
    CHECK(full[i].max_ratio <= 2.0 * small[i].max_ratio);
    MESSAGE(full[i].name, " max ratio = ", full[i].max_ratio);
  }
}
