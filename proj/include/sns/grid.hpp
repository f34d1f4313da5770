#pragma once

#include <utility>
#include <vector>

#include "sns/types.hpp"

namespace sns {

// Gauss-Legendre nodes (cos theta, increasing) and weights on (-1,1).
struct QuadratureGrid {
  VectorXd mu_nodes;   // roots of P_{n}
  VectorXd weights;    // sum = 2
  VectorXd phi_nodes;  // equispaced longitudes in [0, 2pi)
};

QuadratureGrid gauss_legendre(int n_theta, int n_phi = 0);

// Normalized associated Legendre values at the quadrature nodes.
// val[m] has (L+1-m) rows and n_theta columns; row r holds Pbar_{m+r,m}(mu_i).
// Pbar includes the orthonormalization factor sqrt((2l+1)(l-m)!/(4pi (l+m)!))
// and the Condon-Shortley phase, so that Y_{l,m} = Pbar_{l,m}(cos th) e^{im phi}.
// dth[m] holds d/dtheta Pbar_{l,m}(cos theta) at the same nodes.
struct LegendreTable {
  int                  L;
  std::vector<MatrixXd> val;
  std::vector<MatrixXd> dth;
};

LegendreTable legendre_table(int L, const VectorXd& mu_nodes);

// Single-point evaluation of Pbar_{l,m}(mu) for m >= 0, and of its
// theta-derivative. Same normalization as the tables.
double normalized_plm(int l, int m, double mu);
double normalized_plm_dtheta(int l, int m, double mu);

// Scalar harmonic Y_{l,m}(theta,phi), any m with |m| <= l.
Complex scalar_harmonic(int l, int m, double theta, double phi);

// Vector basis Z_{l,m} = lambda_l^{-1/2} Curl Y_{l,m}; returns (u_theta, u_phi).
// l = 0 has no divergence-free tangent field and is rejected.
std::pair<Complex, Complex> vector_basis_eval(int l, int m, double theta, double phi);

}  // namespace sns
