#include "sns/nonlinear.hpp"

#include <cmath>

namespace sns {

namespace {

SpectralField advect_on(const SpectralField& u, const SphereTransform& tr);

}  // namespace

SpectralField advective_term(const SpectralField& u, DealiasPolicy policy) {
  if (policy == DealiasPolicy::None) {
    const SphereTransform aliased(u.spec.L, u.spec.L + 1, 2 * u.spec.L + 1);
    return advect_on(u, aliased);
  }
  return advect_on(u, transform_for(u.spec));
}

namespace {

SpectralField advect_on(const SpectralField& u, const SphereTransform& tr) {
  const int L = u.spec.L;
  ArrayXXd Ap, Bp;  // psi derivatives: velocity = (Bp, -Ap)
  tr.synth_grad(u.psi_hat, Ap, Bp);
  ArrayXXd Aw, Bw;  // vorticity gradient
  tr.synth_grad(vorticity(u), Aw, Bw);
  const ArrayXXd N = Bp * Aw - Ap * Bw;  // u . grad omega
  VectorXcd      n = tr.analyze(N, L);
  for (int l = 1; l <= L; ++l)
    for (int m = -l; m <= l; ++m) n[mode_index(l, m)] /= laplace_eig(l);
  n[0] = 0.0;
  return SpectralField(u.spec, std::move(n));
}

}  // namespace

TruncationSpec product_spec(int L) { return TruncationSpec(2 * L); }

GridTangentField covariant_derivative(const SpectralField& u, const SpectralField& w) {
  if (!(u.spec == w.spec)) throw std::invalid_argument("covariant_derivative: spec mismatch");
  const int              L  = u.spec.L;
  const TruncationSpec   ps = product_spec(L);
  const SphereTransform& tr = transform_for(ps);

  const VectorXcd pu = resize_coeffs(u.psi_hat, ps.L);
  const VectorXcd pw = resize_coeffs(w.psi_hat, ps.L);

  ArrayXXd Au, Bu, Aw, Bw;
  tr.synth_grad(pu, Au, Bu);
  tr.synth_grad(pw, Aw, Bw);
  const ArrayXXd u_th = Bu, u_ph = -Au;
  const ArrayXXd w_th = Bw, w_ph = -Aw;
  const ArrayXXd curl_u = tr.synthesize(resize_coeffs(vorticity(u), ps.L));
  const ArrayXXd curl_w = tr.synthesize(resize_coeffs(vorticity(w), ps.L));

  const ArrayXXd s  = u_th * w_ph - u_ph * w_th;  // (u x w) . x_hat
  const ArrayXXd uw = u_th * w_th + u_ph * w_ph;

  ArrayXXd As, Bs;
  tr.synth_grad(tr.analyze(s), As, Bs);  // Curl s = (Bs, -As)
  ArrayXXd Ad, Bd;
  tr.synth_grad(tr.analyze(uw), Ad, Bd);  // grad(u.w) = (Ad, Bd)

  // a x curl b = (curl b) (a_phi, -a_theta)
  GridTangentField out;
  out.u_theta = 0.5 * (-Bs + Ad - curl_u * w_ph - curl_w * u_ph);
  out.u_phi   = 0.5 * (As + Bd + curl_u * w_th + curl_w * u_th);
  return out;
}

double trilinear_b(const SpectralField& u, const SpectralField& w, const SpectralField& z) {
  const TruncationSpec   ps = product_spec(u.spec.L);
  const SphereTransform& tr = transform_for(ps);
  const GridTangentField d  = covariant_derivative(u, w);
  ArrayXXd               Az, Bz;
  tr.synth_grad(resize_coeffs(z.psi_hat, ps.L), Az, Bz);
  return tr.integrate(d.u_theta * Bz + d.u_phi * (-Az));
}

}  // namespace sns
