#pragma once

#include <memory>

#include "sns/grid.hpp"
#include "sns/types.hpp"

namespace sns {

// Forward/inverse spherical-harmonic transforms on a Gauss-Legendre x
// equiangular grid.  Coefficient vectors use the triangular (l,m) packing of
// mode_index(); real-field entry points keep conjugate symmetry exact by
// computing m >= 0 and reflecting.
//
// Immutable after construction; safe to share across threads.
class SphereTransform {
 public:
  explicit SphereTransform(const TruncationSpec& spec);
  // Unchecked grid sizes (dealias-off testing only).
  SphereTransform(int L, int n_theta, int n_phi);

  int L() const { return L_; }
  int n_theta() const { return n_theta_; }
  int n_phi() const { return n_phi_; }

  const VectorXd& mu() const { return grid_.mu_nodes; }
  const VectorXd& weights() const { return grid_.weights; }
  const VectorXd& phi() const { return grid_.phi_nodes; }
  const VectorXd& sin_theta() const { return sin_theta_; }

  // Surface integral of grid samples: sum_i w_i dphi sum_j f(i,j).
  double integrate(const ArrayXXd& f) const;

  // --- real fields -------------------------------------------------------
  // f(i,j) = sum_{l,m} c_{l,m} Y_{l,m}(theta_i, phi_j); c must be
  // conjugate-symmetric.  Coefficients may be truncated at any Lc <= L.
  ArrayXXd synthesize(const VectorXcd& coeffs) const;

  // c_{l,m} = quadrature of f against conj(Y_{l,m}), l <= Lout (default L).
  VectorXcd analyze(const ArrayXXd& f, int Lout = -1) const;

  // A = df/dtheta, B = (1/sin theta) df/dphi.  (Curl psi = (B, -A).)
  void synth_grad(const VectorXcd& coeffs, ArrayXXd& A, ArrayXXd& B) const;

  // Streamfunction coefficients of the Leray projection of a tangent field:
  // psi_{l,m} = (F, Curl Y_{l,m}) / lambda_l.
  VectorXcd project_tangent(const ArrayXXd& F_theta, const ArrayXXd& F_phi,
                            int Lout = -1) const;

  // Scalar coefficients of div F (by parts: -(F, grad Y_{l,m})).
  VectorXcd analyze_divergence(const ArrayXXd& F_theta, const ArrayXXd& F_phi,
                               int Lout = -1) const;

  // --- complex fields (diagnostics: dense operator assembly) -------------
  ArrayXXcd synthesize_c(const VectorXcd& coeffs) const;
  void synth_grad_c(const VectorXcd& coeffs, ArrayXXcd& A, ArrayXXcd& B) const;
  VectorXcd project_tangent_c(const ArrayXXcd& F_theta, const ArrayXXcd& F_phi,
                              int Lout = -1) const;

 private:
  void build();

  int            L_, n_theta_, n_phi_;
  QuadratureGrid grid_;
  VectorXd       sin_theta_;
  LegendreTable  leg_;
  MatrixXd       cos_mphi_;  // (n_phi, L+1)
  MatrixXd       sin_mphi_;
};

// Shared, lazily built transforms keyed by (L, n_theta, n_phi).
const SphereTransform& transform_for(const TruncationSpec& spec);

}  // namespace sns
