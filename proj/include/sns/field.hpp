#pragma once

#include <iosfwd>
#include <string>

#include "sns/transform.hpp"
#include "sns/types.hpp"

namespace sns {

// Divergence-free tangent field stored through its streamfunction
// coefficients (l >= 1; the l = 0 slot is kept zero).  Real fields keep the
// conjugate symmetry psi_{l,-m} = (-1)^m conj(psi_{l,m}).
struct SpectralField {
  TruncationSpec spec;
  VectorXcd      psi_hat;

  explicit SpectralField(const TruncationSpec& s)
      : spec(s), psi_hat(VectorXcd::Zero(coeff_count(s.L))) {}
  SpectralField(const TruncationSpec& s, VectorXcd coeffs);

  Complex&       at(int l, int m) { return psi_hat[mode_index(l, m)]; }
  const Complex& at(int l, int m) const { return psi_hat[mode_index(l, m)]; }

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double a);
  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double a, SpectralField f) { return f *= a; }

  // Reflect the m >= 0 coefficients onto m < 0 (real-field closure).
  void enforce_symmetry();
};

struct GridTangentField {
  ArrayXXd u_theta;
  ArrayXXd u_phi;
};

struct NormRecord {
  double H;        // L2 norm of the velocity
  double V;        // (H^2 + sum lambda^2 |psi|^2)^{1/2}
  double L4;       // grid-quadrature L4 norm of the velocity
  double bracket;  // [v] = (nu (Av,v) - nu lambda1/2 (v,v))^{1/2}
};

// u = Curl psi = ((1/sin) dpsi/dphi, -dpsi/dtheta), evaluated spectrally.
GridTangentField velocity(const SpectralField& f);

// omega_{l,m} = lambda_l psi_{l,m}.
VectorXcd vorticity(const SpectralField& f);

double    h_norm_sq(const SpectralField& f);
double    h_norm(const SpectralField& f);
Complex   inner_h(const SpectralField& f, const SpectralField& g);
double    v_norm_sq(const SpectralField& f);           // H^2 + sum lambda^2 |psi|^2
double    v_seminorm_sq(const SpectralField& f);        // sum lambda^2 |psi|^2 == (Au,u), Laplace spectrum
double    l4_norm(const SpectralField& f);
double    dual_v_seminorm_sq(const VectorXcd& z_coeffs); // sum |w|^2 / lambda (Z-basis coefficients)

NormRecord norms(const SpectralField& f, double nu = 1.0, double lambda1 = 2.0);

// Z-basis velocity coefficients v_{l,m} = lambda^{1/2} psi_{l,m} and back.
VectorXcd to_z_basis(const SpectralField& f);
SpectralField from_z_basis(const TruncationSpec& spec, const VectorXcd& z_coeffs);

// Pad or truncate coefficients to another degree.
VectorXcd resize_coeffs(const VectorXcd& c, int L_to);

// Deterministic band-limited test field: coefficients ~ N(0, amp^2
// lambda^{-p}) from the counter RNG, conjugate-symmetric, l >= 1.
SpectralField random_field(const TruncationSpec& spec, uint64_t seed, double amplitude = 1.0,
                           double decay_p = 1.0, int l_max = -1);

// Coefficient table serialization: "# sphere-sns streamfunction v1, L=<L>".
void          write_coeffs(std::ostream& os, const SpectralField& f);
void          write_coeffs_file(const std::string& path, const SpectralField& f);
SpectralField read_coeffs(std::istream& is);
SpectralField read_coeffs_file(const std::string& path);

}  // namespace sns
