#include "sns/operators.hpp"

#include <cmath>

namespace sns {

SpectralField apply_A(const SpectralField& f, OperatorVariant v) {
  SpectralField g = f;
  for (int l = 1; l <= f.spec.L; ++l) {
    const double s = sigma_l(l, v);
    for (int m = -l; m <= l; ++m) g.psi_hat[mode_index(l, m)] *= s;
  }
  return g;
}

SpectralField apply_A_power(const SpectralField& f, double s, OperatorVariant v) {
  if (s < 0.0 && v == OperatorVariant::HodgeRicci) {
    for (int m = -1; m <= 1; ++m)
      if (std::abs(f.psi_hat[mode_index(1, m)]) > 1e-14)
        throw NonInvertibleError(
            "apply_A_power: negative power of the Hodge-Ricci operator on an l=1 component");
  }
  SpectralField g = f;
  for (int l = 1; l <= f.spec.L; ++l) {
    const double sig = sigma_l(l, v);
    const double mul = (sig == 0.0 && s < 0.0) ? 0.0 : std::pow(sig, s);
    for (int m = -l; m <= l; ++m) g.psi_hat[mode_index(l, m)] *= mul;
  }
  return g;
}

double a_inner(const SpectralField& f, const SpectralField& g, OperatorVariant v) {
  double s = 0.0;
  for (int l = 1; l <= f.spec.L; ++l) {
    const double w = sigma_l(l, v) * laplace_eig(l);
    for (int m = -l; m <= l; ++m)
      s += w * (f.psi_hat[mode_index(l, m)] * std::conj(g.psi_hat[mode_index(l, m)])).real();
  }
  return s;
}

Complex coriolis_symbol(int l, int m, double Omega) {
  if (l < 1) throw std::invalid_argument("coriolis_symbol: l >= 1 required");
  return Complex(0.0, -2.0 * Omega * m / laplace_eig(l));
}

SpectralField apply_coriolis(const SpectralField& f, double Omega) {
  SpectralField g = f;
  for (int l = 1; l <= f.spec.L; ++l)
    for (int m = -l; m <= l; ++m) g.psi_hat[mode_index(l, m)] *= coriolis_symbol(l, m, Omega);
  return g;
}

SpectralField leray_project(const GridTangentField& F, const TruncationSpec& spec) {
  const SphereTransform& tr = transform_for(spec);
  return SpectralField(spec, tr.project_tangent(F.u_theta, F.u_phi));
}

SpectralField truncate(const SpectralField& f, int L_prime) {
  if (L_prime > f.spec.L) throw std::invalid_argument("truncate: L' <= L required");
  SpectralField g = f;
  for (int l = L_prime + 1; l <= f.spec.L; ++l)
    for (int m = -l; m <= l; ++m) g.psi_hat[mode_index(l, m)] = 0.0;
  return g;
}

MatrixXcd dense_coriolis_matrix(int L, double Omega) {
  const TruncationSpec   spec(L);
  const SphereTransform& tr = transform_for(spec);
  const Index            n  = coeff_count(L) - 1;  // modes with l >= 1
  MatrixXcd              M(n, n);
  const ArrayXXd mu_grid = tr.mu().replicate(1, tr.n_phi()).array();
  for (int lp = 1; lp <= L; ++lp)
    for (int mp = -lp; mp <= lp; ++mp) {
      // column = coefficients of P C1 Z_{lp,mp}
      VectorXcd zc                 = VectorXcd::Zero(coeff_count(L));
      zc[mode_index(lp, mp)]       = 1.0 / std::sqrt(laplace_eig(lp));
      ArrayXXcd A, B;
      tr.synth_grad_c(zc, A, B);  // u = (B, -A)
      // C1 u = 2 Omega mu (x_hat x u) = 2 Omega mu (-u_phi, u_theta)
      const ArrayXXcd f_theta = 2.0 * Omega * mu_grid * A;
      const ArrayXXcd f_phi   = 2.0 * Omega * mu_grid * B;
      VectorXcd psi           = tr.project_tangent_c(f_theta, f_phi);
      for (int l = 1; l <= L; ++l) {
        const double c = std::sqrt(laplace_eig(l));
        for (int m = -l; m <= l; ++m)
          M(mode_index(l, m) - 1, mode_index(lp, mp) - 1) = c * psi[mode_index(l, m)];
      }
    }
  return M;
}

}  // namespace sns
