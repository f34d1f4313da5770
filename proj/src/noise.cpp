#include "sns/noise.hpp"

#include <cmath>

namespace sns {

namespace {
constexpr uint64_t kStreamOu = 0x4F55ull;  // increment stream tag
constexpr double   kTailLog  = 40.0;       // e^{-40} tail cut of the stationary sum
}  // namespace

NoisePath path_shift(const NoisePath& p, double s) {
  const double  steps = s / p.dt;
  const int64_t k     = std::llround(steps);
  if (std::abs(steps - double(k)) > 1e-9 * std::max(1.0, std::abs(steps)))
    throw std::invalid_argument("path_shift: s is not a multiple of dt");
  NoisePath out = p;
  out.offset += k;
  return out;
}

double mode_noise_amplitude(int l, const NoiseSpec& spec) {
  if (l < 1) throw std::invalid_argument("mode_noise_amplitude: l >= 1 required");
  return spec.epsilon * std::pow(laplace_eig(l), -spec.s_exponent);
}

OuProcess::OuProcess(const ModelParams& params, const NoisePath& path)
    : params_(params), path_(path), active_(params.noise.epsilon > 0.0) {
  const int L = params_.L;
  decay_      = VectorXcd::Ones(coeff_count(L));
  eta_std_    = VectorXd::Zero(coeff_count(L));
  window_.assign(L + 1, 0);
  if (!active_) return;
  if (params_.noise.s_exponent <= 0.5 && !params_.noise.allow_rough_noise)
    throw std::invalid_argument(
        "noise s_exponent <= 1/2 is below the radonifying threshold; set allow_rough_noise");
  for (int l = 1; l <= L; ++l) {
    const double re = params_.nu * sigma_l(l, params_.variant) + params_.alpha;
    if (re <= 0.0)
      throw DegenerateDriftError("nu*sigma_l + alpha <= 0 for retained mode l=" +
                                 std::to_string(l));
    const double g = mode_noise_amplitude(l, params_.noise);
    window_[l]     = std::max<int64_t>(1, int64_t(std::ceil(kTailLog / (re * path_.dt))));
    const double var = g * g * (1.0 - std::exp(-2.0 * re * path_.dt)) / (2.0 * re);
    for (int m = -l; m <= l; ++m) {
      const Complex gamma = Complex(re, 0.0) + coriolis_symbol(l, m, params_.rotation);
      decay_[mode_index(l, m)]   = std::exp(-gamma * path_.dt);
      eta_std_[mode_index(l, m)] = std::sqrt(var);
    }
  }
}

namespace {

// Increment for absolute step j, mode (l, m >= 0).  m = 0 increments are
// real; m > 0 are isotropic complex with the same total variance.
inline Complex draw_eta(const NoisePath& p, int64_t j, int l, int m, double std) {
  Complex xi = gaussian_pair(p.seed, kStreamOu, j, mode_key(l, m));
  if (m == 0) return Complex(std * xi.real(), 0.0);
  return (std / std::sqrt(2.0)) * xi;
}

}  // namespace

OUState OuProcess::init(int64_t local_step) const {
  OUState s;
  s.step  = local_step;
  s.t     = local_step * path_.dt;
  s.z_hat = VectorXcd::Zero(coeff_count(params_.L));
  if (!active_) return s;
  const int64_t a = path_.offset + local_step;
  for (int l = 1; l <= params_.L; ++l) {
    for (int m = 0; m <= l; ++m) {
      const Index   idx = mode_index(l, m);
      const Complex dec = decay_[idx];
      const double  std = eta_std_[idx];
      Complex       acc = 0.0;
      for (int64_t j = a - window_[l]; j < a; ++j) acc = dec * acc + draw_eta(path_, j, l, m, std);
      s.z_hat[idx] = acc;
      if (m > 0)
        s.z_hat[mode_index(l, -m)] = (m % 2 ? -std::conj(acc) : std::conj(acc));
    }
  }
  return s;
}

void OuProcess::step(OUState& s) const {
  const int64_t a = path_.offset + s.step;
  if (active_) {
    for (int l = 1; l <= params_.L; ++l) {
      for (int m = 0; m <= l; ++m) {
        const Index   idx = mode_index(l, m);
        const Complex z   = decay_[idx] * s.z_hat[idx] + draw_eta(path_, a, l, m, eta_std_[idx]);
        s.z_hat[idx]      = z;
        if (m > 0) s.z_hat[mode_index(l, -m)] = (m % 2 ? -std::conj(z) : std::conj(z));
      }
    }
  }
  s.step += 1;
  s.t = s.step * path_.dt;
}

SpectralField OuProcess::field(const OUState& s) const {
  return from_z_basis(params_.spec(), s.z_hat);
}

ErgodicAverage ergodic_average(const ModelParams& params, const NoisePath& path, double T) {
  if (T <= 0.0) throw std::invalid_argument("ergodic_average: T > 0 required");
  const int64_t n0 = -std::llround(T / path.dt);
  OuProcess     ou(params, path);
  OUState       s = ou.init(n0);
  ErgodicAverage avg;
  const int64_t  n = -n0;
  for (int64_t k = 0; k < n; ++k) {
    avg.h2 += s.z_hat.squaredNorm();
    const double l4 = l4_norm(ou.field(s));
    avg.l4sq += l4 * l4;
    ou.step(s);
  }
  avg.h2 /= double(n);
  avg.l4sq /= double(n);
  avg.total = avg.h2 + avg.l4sq;
  return avg;
}

}  // namespace sns
