#include "sns/diag.hpp"

#include <cmath>
#include <mutex>

#include "sns/parallel.hpp"
#include "sns/rng.hpp"

namespace sns {

namespace {

struct SampleNorms {
  double h, vs, l4, au, uinf, curlinf;
};

SampleNorms sample_norms(const SpectralField& u) {
  SampleNorms n;
  n.h  = h_norm(u);
  n.vs = std::sqrt(v_seminorm_sq(u));
  n.l4 = l4_norm(u);
  n.au = h_norm(apply_A(u, OperatorVariant::LaplaceSpectrum));
  const SphereTransform& tr = transform_for(u.spec);
  GridTangentField       g  = velocity(u);
  n.uinf    = std::sqrt((g.u_theta.square() + g.u_phi.square()).maxCoeff());
  n.curlinf = tr.synthesize(vorticity(u)).abs().maxCoeff();
  return n;
}

}  // namespace

std::vector<EstimateRow> estimate_report(int L, int n_samples, uint64_t seed, int threads) {
  if (n_samples < 1) throw std::invalid_argument("estimate_report: empty corpus");
  const TruncationSpec spec(L);
  std::vector<EstimateRow> rows = {
      {"L4_interpolation", 0.0}, {"b_estimate_i", 0.0},  {"b_estimate_ii", 0.0},
      {"b_estimate_iii", 0.0},   {"b_estimate1", 0.0},   {"b_estimate2", 0.0},
      {"b_estimate3", 0.0},      {"Bu_dual_L4", 0.0},
  };
  std::mutex mu;
  parallel_for(n_samples, threads, [&](int k) {
    const uint64_t s = derive_seed(seed, uint64_t(k));
    // spectra of varying smoothness
    const double p_u = 1.0 + uniform01(counter_hash(s, 1, 0, 0));
    const double p_v = 1.0 + uniform01(counter_hash(s, 2, 0, 0));
    const double p_w = 1.0 + uniform01(counter_hash(s, 3, 0, 0));
    SpectralField u  = random_field(spec, derive_seed(s, 11), 1.0, p_u);
    SpectralField v  = random_field(spec, derive_seed(s, 12), 1.0, p_v);
    SpectralField w  = random_field(spec, derive_seed(s, 13), 1.0, p_w);
    const SampleNorms nu_ = sample_norms(u), nv = sample_norms(v), nw = sample_norms(w);
    const double b = trilinear_b(u, v, w);
    const double ab = std::abs(b);

    const SpectralField Bu     = advective_term(u);
    const double        bu_dual = std::sqrt(dual_v_seminorm_sq(to_z_basis(Bu)));

    double vals[8];
    vals[0] = nu_.l4 * nu_.l4 / (nu_.h * std::sqrt(nu_.h * nu_.h + nu_.vs * nu_.vs));
    vals[1] = ab / (std::sqrt(nu_.h * nu_.vs) * std::sqrt(nv.vs * nv.au) * nw.h);
    vals[2] = ab / (std::sqrt(nu_.h * nu_.au) * nv.vs * nw.h);
    vals[3] = ab / (std::sqrt(nu_.h * nu_.vs) * nv.vs * std::sqrt(nw.h * nw.vs));
    vals[4] = ab / (nu_.h * nw.h * (nv.curlinf + nv.uinf));
    vals[5] = ab / (nu_.h * nv.vs * std::sqrt(nw.h * nw.au));
    vals[6] = ab / (nu_.l4 * nv.vs * nw.l4);
    vals[7] = bu_dual / (nu_.l4 * nu_.l4);

    std::lock_guard<std::mutex> lk(mu);
    for (int i = 0; i < 8; ++i) rows[i].max_ratio = std::max(rows[i].max_ratio, vals[i]);
  });
  return rows;
}

EmpiricalConstants empirical_constants(int L, int n_samples, uint64_t seed, int threads) {
  const TruncationSpec spec(L);
  EmpiricalConstants   c{0.0, 0.0, 0.0, 0.0};
  std::mutex           mu;
  parallel_for(n_samples, threads, [&](int k) {
    const uint64_t s   = derive_seed(seed ^ 0x434F4E53ull, uint64_t(k));
    const double   p_v = 1.0 + uniform01(counter_hash(s, 1, 0, 0));
    const double   p_z = 1.0 + uniform01(counter_hash(s, 2, 0, 0));
    SpectralField  v   = random_field(spec, derive_seed(s, 21), 1.0, p_v);
    SpectralField  z   = random_field(spec, derive_seed(s, 22), 1.0, p_z);
    const SampleNorms nv = sample_norms(v), nz = sample_norms(z);

    // b(v,v,z) = (B(v), z);  b(v,z,v) = -b(v,v,z)
    const double bvvz = inner_h(advective_term(v), z).real();

    double l4r  = nv.l4 / std::sqrt(nv.h * nv.vs);
    double b3   = std::abs(trilinear_b(v, z, v)) / (nv.l4 * nz.vs * nv.l4);
    double est1 = std::abs(bvvz) / (std::sqrt(nv.h) * std::pow(nv.vs, 1.5) * nz.l4);
    double bvzv = std::abs(bvvz) / (nv.h * nv.vs * nz.l4);

    std::lock_guard<std::mutex> lk(mu);
    c.c_l4   = std::max(c.c_l4, l4r);
    c.c_b3   = std::max(c.c_b3, b3);
    c.c_est1 = std::max(c.c_est1, est1);
    c.c_bvzv = std::max(c.c_bvzv, bvzv);
  });
  return c;
}

}  // namespace sns
