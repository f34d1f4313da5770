#pragma once

#include <string>
#include <vector>

#include "sns/nonlinear.hpp"

namespace sns {

// Empirical ratio monitor for the trilinear/interpolation inequalities.  Each
// row reports max over a random corpus of LHS / RHS-without-constant; the
// values are logged and only finiteness/stability is asserted.
struct EstimateRow {
  std::string name;
  double      max_ratio;
};

std::vector<EstimateRow> estimate_report(int L, int n_samples, uint64_t seed, int threads = 1);

// Logged corpus maxima used wherever the proofs leave an unnamed constant.
// V-quantities here use the seminorm |A^{1/2} u| = (sum lambda^2 |psi|^2)^{1/2}.
struct EmpiricalConstants {
  double c_l4;    // max |u|_{L4} / (|u|^{1/2} |u|_Vs^{1/2})
  double c_b3;    // max |b(u,v,w)| / (|u|_{L4} |v|_Vs |w|_{L4})
  double c_est1;  // max |b(v,v,z)| / (|v|^{1/2} |v|_Vs^{3/2} |z|_{L4})
  double c_bvzv;  // max |b(v,z,v)| / (|v| |v|_Vs |z|_{L4})
};

EmpiricalConstants empirical_constants(int L, int n_samples, uint64_t seed, int threads = 1);

// Gronwall constant from the Young-inequality chain with the nu/2 budget,
// instantiated with the logged empirical constant c_est1.
inline double gronwall_constant(const EmpiricalConstants& c) {
  return 27.0 / 16.0 * std::pow(c.c_est1, 4);
}

}  // namespace sns
