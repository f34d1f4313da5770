#pragma once

#include "sns/operators.hpp"

namespace sns {

enum class DealiasPolicy { ThreeHalves, None };

// P B(u,u): vorticity tendency u . grad(omega) evaluated pseudo-spectrally on
// the dealiased grid of u.spec, then divided by lambda (Leray projection is
// diagonal in this representation).
SpectralField advective_term(const SpectralField& u,
                             DealiasPolicy policy = DealiasPolicy::ThreeHalves);

// Quadrature grid on which band-2L products are handled exactly.
TruncationSpec product_spec(int L);

// grad_u w on the product grid, via
//   2 grad_u w = -Curl s + grad(u.w) - w x curl u - u x curl w,
// s = (u x w) . x_hat, divergence terms dropped.
GridTangentField covariant_derivative(const SpectralField& u, const SpectralField& w);

// b(u,w,z) = integral of (grad_u w) . z over the sphere.
double trilinear_b(const SpectralField& u, const SpectralField& w, const SpectralField& z);

}  // namespace sns
