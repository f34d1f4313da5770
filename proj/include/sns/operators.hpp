#pragma once

#include <optional>

#include "sns/field.hpp"
#include "sns/types.hpp"

namespace sns {

// The Stokes spectrum l(l+1) and the literal -P(Delta + 2 Ric) spectrum
// l(l+1) - 2 are both offered; they are never mixed within a run.
enum class OperatorVariant { LaplaceSpectrum, HodgeRicci };

inline double sigma_l(int l, OperatorVariant v) {
  return v == OperatorVariant::LaplaceSpectrum ? laplace_eig(l) : laplace_eig(l) - 2.0;
}

inline double lambda1(OperatorVariant v) { return sigma_l(1, v); }

struct NoiseSpec {
  double   epsilon    = 0.0;  // overall amplitude
  double   s_exponent = 1.0;  // G = eps A^{-s}; radonifying threshold s > 1/2
  uint64_t seed       = 0;
  bool     allow_rough_noise = false;
};

struct ModelParams {
  double          nu       = 1.0;
  double          rotation = 0.0;  // Omega
  double          alpha    = 0.0;
  int             L        = 15;
  OperatorVariant variant  = OperatorVariant::LaplaceSpectrum;
  NoiseSpec       noise;
  std::optional<SpectralField> forcing;  // constant-in-time element of V'

  TruncationSpec spec() const { return TruncationSpec(L); }
  double         lam1() const { return lambda1(variant); }
};

SpectralField apply_A(const SpectralField& f, OperatorVariant v);
SpectralField apply_A_power(const SpectralField& f, double s, OperatorVariant v);

// (A f, g) in H under the given variant.
double a_inner(const SpectralField& f, const SpectralField& g, OperatorVariant v);

// Action of C = P C1 on mode (l,m) of either the streamfunction or the
// Z-basis coefficient: a purely imaginary multiplier -2i Omega m / lambda_l.
// Derived from x x Curl psi = grad psi and curl(P C1 u) = -2 Omega dpsi/dphi;
// verified against the dense quadrature matrix in the test suite.
Complex coriolis_symbol(int l, int m, double Omega);

SpectralField apply_coriolis(const SpectralField& f, double Omega);

// Leray projection of an arbitrary tangent field sampled on the grid of
// `spec`: psi_{l,m} = (curl F)_{l,m} / lambda_l, gradients annihilated.
SpectralField leray_project(const GridTangentField& F, const TruncationSpec& spec);

// Galerkin truncation P_{L'}.
SpectralField truncate(const SpectralField& f, int L_prime);

// Dense matrix of P C1 in the orthonormal Z-basis, assembled by quadrature
// (diagnostics; rows/cols ordered by mode_index over l >= 1).
MatrixXcd dense_coriolis_matrix(int L, double Omega);

}  // namespace sns
