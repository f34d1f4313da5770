#pragma once

#include "sns/operators.hpp"
#include "sns/rng.hpp"

namespace sns {

// Seeded two-sided Wiener increment stream at step granularity dt.  The
// variate for (seed, step, l, m) is a pure function of its arguments, so a
// time shift is an integer offset and negative windows need no stored
// history.
struct NoisePath {
  uint64_t seed   = 0;
  double   dt     = 0.01;
  int64_t  offset = 0;  // absolute index of local step 0
};

// theta_s: s must be a multiple of dt.
NoisePath path_shift(const NoisePath& p, double s);

// g_l = eps * lambda_l^{-s_G}  (G = eps A^{-s_G} on the Laplace spectrum).
double mode_noise_amplitude(int l, const NoiseSpec& spec);

// Per-mode Ornstein-Uhlenbeck state in the orthonormal Z-basis.
struct OUState {
  double    t    = 0.0;  // local path time
  int64_t   step = 0;    // local step index
  VectorXcd z_hat;       // velocity coefficients, conjugate-symmetric
};

// Exact per-mode transition z <- e^{-gamma dt} z + eta with
// gamma = nu sigma_l + alpha + i c_{l,m} and Var eta = g^2 (1 -
// e^{-2 Re gamma dt}) / (2 Re gamma); no time-discretization bias.
//
// The state at step n is a truncated stationary sum over the increments with
// indices [n-K, n): the same computation for the same absolute index, which
// is what makes z(theta_s omega)(t) = z(omega)(t+s) exact bitwise.
class OuProcess {
 public:
  OuProcess(const ModelParams& params, const NoisePath& path);

  OUState init(int64_t local_step = 0) const;  // stationary draw
  void    step(OUState& s) const;

  SpectralField field(const OUState& s) const;
  const NoisePath& path() const { return path_; }
  bool  active() const { return active_; }
  Complex decay(int l, int m) const { return decay_[mode_index(l, m)]; }

 private:
  ModelParams params_;
  NoisePath   path_;
  bool        active_;
  VectorXcd   decay_;    // e^{-gamma dt} per mode
  VectorXd    eta_std_;  // increment standard deviation per mode
  std::vector<int64_t> window_;  // truncation window per l
};

struct ErgodicAverage {
  double h2    = 0.0;  // time average of |z|_H^2
  double l4sq  = 0.0;  // time average of |z|_{L4}^2
  double total = 0.0;  // h2 + l4sq
};

// (1/T) integral over [-T, 0] of |z|^2 + |z|_{L4}^2 along the given path.
ErgodicAverage ergodic_average(const ModelParams& params, const NoisePath& path, double T);

}  // namespace sns
