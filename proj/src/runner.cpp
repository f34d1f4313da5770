#include "sns/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "sns/diag.hpp"
#include "sns/parallel.hpp"
#include "sns/rds.hpp"

namespace sns {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "sphere-sns 0.1.0";

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string hex64(uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot open for writing: " + p.string());
  return os;
}

void write_manifest(const fs::path& dir, const RunConfig& cfg, uint64_t seed,
                    const std::string& status, int exit_code, json extra = json::object()) {
  json m;
  m["format"]      = "sphere-sns manifest v1";
  m["version"]     = kVersion;
  m["config"]      = json::parse(serialize_config(cfg));
  m["config_hash"] = hex64(config_hash(cfg));
  m["seed"]        = seed;
  m["status"]      = status;
  m["exit_code"]   = exit_code;
  for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = it.value();
  auto os = open_out(dir / "manifest.json");
  os << m.dump(2) << "\n";
}

void write_snapshot(const fs::path& dir, int64_t step, double t, const SpectralField& u,
                    uint64_t seed, uint64_t params_hash) {
  char name[64];
  std::snprintf(name, sizeof name, "snap_%08lld", static_cast<long long>(step));
  write_coeffs_file((dir / (std::string(name) + ".csv")).string(), u);
  json side;
  side["t"]           = t;
  side["params_hash"] = hex64(params_hash);
  side["seed"]        = seed;
  side["step"]        = step;
  auto os = open_out(dir / (std::string(name) + ".json"));
  os << side.dump(2) << "\n";
}

int run_simulate(const RunConfig& cfg, const RunOptions& opts, const fs::path& dir,
                 uint64_t seed) {
  ModelParams params = cfg.params;
  params.noise.seed  = seed;
  const TruncationSpec spec(params.L);
  NoisePath path{seed, cfg.solver.dt, 0};

  SpectralField u0 = random_field(spec, cfg.experiment.u0_seed, cfg.experiment.u0_amplitude,
                                  cfg.experiment.u0_decay);
  OuProcess     ou(params, path);
  SpectralField v0 = u0;
  if (ou.active()) v0 -= ou.field(ou.init(0));

  Trajectory traj = integrate(v0, path, 0.0, params, cfg.solver);

  const uint64_t phash = config_hash(cfg);
  {
    auto os = open_out(dir / "diagnostics.csv");
    os << "t,H,V,L4,bracket2,b_vzv,energy_residual\n";
    for (const DiagRecord& r : traj.records)
      os << fmt17(r.t) << ',' << fmt17(r.H) << ',' << fmt17(r.V) << ',' << fmt17(r.L4) << ','
         << fmt17(r.bracket2) << ',' << fmt17(r.b_vzv) << ',' << fmt17(r.energy_residual)
         << "\n";
  }
  for (size_t k = 0; k < traj.snapshots.size(); ++k) {
    SpectralField u = traj.snapshots[k];
    if (!traj.z_snapshots.empty()) u += traj.z_snapshots[k];
    const int64_t step = std::llround(traj.times[k] / cfg.solver.dt);
    write_snapshot(dir, step, traj.times[k], u, seed, phash);
  }

  if (traj.blew_up) {
    write_manifest(dir, cfg, seed, "blowup", 2,
                   json{{"last_good_step", traj.last_good_step}, {"n_steps", traj.n_steps}});
    return 2;
  }
  write_manifest(dir, cfg, seed, "ok", 0,
                 json{{"last_good_step", traj.last_good_step}, {"n_steps", traj.n_steps}});
  return 0;
}

int run_ou(const RunConfig& cfg, const RunOptions& opts, const fs::path& dir, uint64_t seed) {
  ModelParams params = cfg.params;
  params.noise.seed  = seed;
  NoisePath path{seed, cfg.solver.dt, 0};
  {
    auto os = open_out(dir / "ou_modes.csv");
    os << "l,m,gamma_re,gamma_im,g,stationary_var\n";
    for (int l = 1; l <= params.L; ++l) {
      const double re = params.nu * sigma_l(l, params.variant) + params.alpha;
      const double g  = mode_noise_amplitude(l, params.noise);
      for (int m = 0; m <= l; ++m) {
        const Complex gamma = Complex(re, 0.0) + coriolis_symbol(l, m, params.rotation);
        os << l << ',' << m << ',' << fmt17(gamma.real()) << ',' << fmt17(gamma.imag()) << ','
           << fmt17(g) << ',' << fmt17(g * g / (2.0 * re)) << "\n";
      }
    }
  }
  ErgodicAverage avg = ergodic_average(params, path, cfg.experiment.t_avg);
  double         expected_h2 = 0.0;
  for (int l = 1; l <= params.L; ++l) {
    const double re = params.nu * sigma_l(l, params.variant) + params.alpha;
    const double g  = mode_noise_amplitude(l, params.noise);
    expected_h2 += (2 * l + 1) * g * g / (2.0 * re);
  }
  json s;
  s["t_avg"]       = cfg.experiment.t_avg;
  s["h2_avg"]      = avg.h2;
  s["l4sq_avg"]    = avg.l4sq;
  s["x_avg"]       = avg.total;
  s["h2_expected"] = expected_h2;
  auto os          = open_out(dir / "ou_summary.json");
  os << s.dump(2) << "\n";
  write_manifest(dir, cfg, seed, "ok", 0);
  (void)opts;
  return 0;
}

int run_depend(const RunConfig& cfg, const RunOptions& opts, const fs::path& dir,
               uint64_t seed) {
  ModelParams params = cfg.params;
  params.noise.seed  = seed;
  NoisePath     path{seed, cfg.solver.dt, 0};
  SolverConfig  sc = cfg.solver;
  sc.t_end         = cfg.experiment.T;
  SpectralField u0 = random_field(TruncationSpec(params.L), cfg.experiment.u0_seed,
                                  cfg.experiment.u0_amplitude, cfg.experiment.u0_decay);
  auto rows = continuous_dependence(u0, path, params, sc, cfg.experiment.n_max,
                                    cfg.experiment.pert_seed);
  auto os   = open_out(dir / "depend.csv");
  os << "n,delta,sup_h,l2_v\n";
  for (const auto& r : rows)
    os << r.n << ',' << fmt17(r.delta) << ',' << fmt17(r.sup_h) << ',' << fmt17(r.l2_v) << "\n";
  write_manifest(dir, cfg, seed, "ok", 0);
  (void)opts;
  return 0;
}

int run_pullback(const RunConfig& cfg, const RunOptions& opts, const fs::path& dir,
                 uint64_t seed) {
  ModelParams params = cfg.params;
  json        seeds  = json::array();
  json        dists  = json::array();
  auto        os     = open_out(dir / "pullback.csv");
  os << "seed_index,t_n,out_norm,succ_dist\n";
  for (int s = 0; s < cfg.experiment.seeds; ++s) {
    const uint64_t ps = derive_seed(seed, uint64_t(s));
    params.noise.seed = ps;
    NoisePath    path{ps, cfg.solver.dt, 0};
    PullbackPlan plan;
    plan.times       = cfg.experiment.times;
    plan.rho         = cfg.experiment.rho;
    plan.sample_seed = derive_seed(ps, 0xBA11ull);
    PullbackResult r = pullback_compactness(plan, path, params, cfg.solver, opts.threads);
    for (size_t i = 0; i < r.t_n.size(); ++i)
      os << s << ',' << fmt17(r.t_n[i]) << ',' << fmt17(r.out_norm[i]) << ','
         << (i == 0 ? std::string("") : fmt17(r.succ_dist[i - 1])) << "\n";
    seeds.push_back(ps);
    dists.push_back(r.succ_dist);
  }
  json sum;
  sum["seeds"]            = seeds;
  sum["times"]            = cfg.experiment.times;
  sum["cauchy_distances"] = dists;
  auto so                 = open_out(dir / "pullback_summary.json");
  so << sum.dump(2) << "\n";
  write_manifest(dir, cfg, seed, "ok", 0);
  return 0;
}

int run_absorb(const RunConfig& cfg, const RunOptions& opts, const fs::path& dir,
               uint64_t seed) {
  ModelParams params = cfg.params;
  // Proof constant C instantiated from the logged empirical corpus maximum
  // max |b(v,z,v)| / (|v| |v|_Vs |z|_{L4}); recorded in the summary header.
  EmpiricalConstants ec =
      empirical_constants(params.L, cfg.experiment.const_samples, seed, opts.threads);
  json seeds = json::array(), r1s = json::array(), r2s = json::array(),
       entries = json::array();
  auto os      = open_out(dir / "absorb.csv");
  os << "seed_index,r1,r2,sample,entry_time\n";
  bool all = true;
  for (int s = 0; s < cfg.experiment.seeds; ++s) {
    const uint64_t ps = derive_seed(seed, uint64_t(s));
    params.noise.seed = ps;
    NoisePath path{ps, cfg.solver.dt, 0};
    AbsorbingEstimate est = absorbing_radius(
        path, params, cfg.solver, cfg.experiment.probe_horizon, cfg.experiment.rho,
        cfg.experiment.samples, cfg.experiment.horizon, cfg.experiment.entry_tol, ec.c_bvzv,
        opts.threads);
    for (size_t k = 0; k < est.entry_times.size(); ++k)
      os << s << ',' << fmt17(est.r1) << ',' << fmt17(est.r2) << ',' << k << ','
         << (std::isnan(est.entry_times[k]) ? std::string("none") : fmt17(est.entry_times[k]))
         << "\n";
    seeds.push_back(ps);
    r1s.push_back(est.r1);
    r2s.push_back(est.r2);
    entries.push_back(est.entry_times);
    all = all && est.all_entered;
  }
  json sum;
  sum["c_weight"]        = ec.c_bvzv;
  sum["c_weight_source"] = "max |b(v,z,v)| / (|v| |v|_Vs |z|_L4) over " +
                           std::to_string(cfg.experiment.const_samples) +
                           " random fields (empirical substitute for the proof constant C)";
  sum["c_l4"]        = ec.c_l4;
  sum["seeds"]       = seeds;
  sum["r1"]          = r1s;
  sum["r2"]          = r2s;
  sum["entry_times"] = entries;
  sum["all_entered"] = all;
  auto so            = open_out(dir / "absorb_summary.json");
  so << sum.dump(2) << "\n";
  write_manifest(dir, cfg, seed, "ok", 0);
  return 0;
}

int run_spectrum(const RunConfig& cfg, const RunOptions& opts, const fs::path& dir,
                 uint64_t seed) {
  auto os = open_out(dir / "spectrum.csv");
  os << "l,lambda,sigma_laplace,sigma_hodge_ricci,g\n";
  for (int l = 1; l <= cfg.params.L; ++l)
    os << l << ',' << fmt17(laplace_eig(l)) << ','
       << fmt17(sigma_l(l, OperatorVariant::LaplaceSpectrum)) << ','
       << fmt17(sigma_l(l, OperatorVariant::HodgeRicci)) << ','
       << fmt17(mode_noise_amplitude(l, cfg.params.noise)) << "\n";
  write_manifest(dir, cfg, seed, "ok", 0);
  (void)opts;
  return 0;
}

struct Check {
  std::string name;
  double      value;
  double      bound;
  bool        pass;
};

int run_selftest(const RunConfig& cfg, const RunOptions& opts, const fs::path& dir,
                 uint64_t seed) {
  std::vector<Check> checks;
  auto add = [&](const std::string& name, double value, double bound) {
    checks.push_back(Check{name, value, bound, value <= bound});
  };

  {  // transform round trip
    TruncationSpec spec(31);
    SpectralField  f = random_field(spec, 11, 1.0, 1.0);
    const auto&    tr = transform_for(spec);
    add("transform round-trip L=31",
        (tr.analyze(tr.synthesize(f.psi_hat)) - f.psi_hat).cwiseAbs().maxCoeff(), 1e-10);
  }
  {  // basis Gram
    TruncationSpec spec(8);
    double         dev = 0.0;
    const auto&    tr  = transform_for(spec);
    for (int l = 1; l <= 8; ++l)
      for (int m = 0; m <= l; ++m) {
        SpectralField z(spec);
        z.psi_hat[mode_index(l, m)] = 1.0;
        z.enforce_symmetry();
        GridTangentField g = velocity(z);
        SpectralField    p = leray_project(g, spec);
        p -= z;
        dev = std::max(dev, p.psi_hat.cwiseAbs().maxCoeff());
      }
    add("vector basis Gram deviation", dev, 1e-10);
  }
  {  // skew identities
    TruncationSpec spec(8);
    double         worst = 0.0, worst2 = 0.0;
    for (int k = 0; k < 10; ++k) {
      SpectralField v = random_field(spec, derive_seed(1, k), 1.0, 1.2);
      SpectralField w = random_field(spec, derive_seed(2, k), 1.0, 1.2);
      SpectralField z = random_field(spec, derive_seed(3, k), 1.0, 1.2);
      const double  bvww = trilinear_b(v, w, w);
      worst = std::max(worst, std::abs(bvww) / (h_norm(v) * h_norm(w) * std::sqrt(v_norm_sq(w))));
      const double bzw = trilinear_b(v, z, w), bwz = trilinear_b(v, w, z);
      worst2           = std::max(worst2, std::abs(bzw + bwz) / (std::abs(bzw) + 1e-30));
    }
    add("b(v,w,w) = 0 relative", worst, 1e-10);
    add("b(v,z,w) = -b(v,w,z) relative", worst2, 1e-10);
  }
  {  // coriolis dense vs symbol
    const int L = 4;
    MatrixXcd M = dense_coriolis_matrix(L, 1.0);
    double    dev = 0.0;
    for (int l = 1; l <= L; ++l)
      for (int m = -l; m <= l; ++m)
        for (int lp = 1; lp <= L; ++lp)
          for (int mp = -lp; mp <= lp; ++mp) {
            const Complex expect = (l == lp && m == mp) ? coriolis_symbol(l, m, 1.0) : 0.0;
            dev = std::max(dev,
                           std::abs(M(mode_index(l, m) - 1, mode_index(lp, mp) - 1) - expect));
          }
    add("dense Coriolis vs diagonal symbol", dev, 1e-10);
  }
  {  // single-mode decay
    ModelParams p;
    p.nu = 0.1;
    p.L  = 5;
    TruncationSpec spec(p.L);
    SpectralField  v0(spec);
    v0.psi_hat[mode_index(1, 0)] = 1.0;
    SolverConfig sc;
    sc.dt    = 1e-2;
    sc.t_end = 1.0;
    NoisePath  path{0, sc.dt, 0};
    Trajectory t = integrate(v0, path, 0.0, p, sc);
    add("single-mode decay error",
        std::abs(h_norm(*t.final_v) / h_norm(v0) - std::exp(-0.2)), 1e-12);
  }
  {  // inviscid conservation (small)
    ModelParams p;
    p.nu       = 0.0;
    p.rotation = 0.7;
    p.L        = 10;
    SpectralField u0 = random_field(TruncationSpec(p.L), 5, 0.4, 1.5);
    SolverConfig  sc;
    sc.dt    = 1e-3;
    sc.t_end = 0.2;
    sc.audit = false;
    NoisePath  path{0, sc.dt, 0};
    Trajectory t  = integrate(u0, path, 0.0, p, sc);
    const double e0 = h_norm_sq(u0), e1 = h_norm_sq(*t.final_v);
    add("inviscid energy drift", std::abs(e1 - e0) / e0, 1e-6);
    add("inviscid enstrophy drift",
        std::abs(v_seminorm_sq(*t.final_v) - v_seminorm_sq(u0)) / v_seminorm_sq(u0), 1e-6);
  }
  {  // cocycle
    ModelParams p;
    p.nu            = 1.0;
    p.L             = 8;
    p.noise.epsilon = 0.05;
    p.noise.seed    = seed;
    SolverConfig sc;
    sc.dt = 0.01;
    NoisePath     path{seed, sc.dt, 0};
    SpectralField x = random_field(TruncationSpec(p.L), 3, 1.0, 1.0);
    add("cocycle identity", cocycle_discrepancy(x, 0.5, 0.5, path, p, sc), 1e-10);
  }
  {  // determinism
    ModelParams p;
    p.nu            = 1.0;
    p.L             = 8;
    p.noise.epsilon = 0.1;
    p.noise.seed    = seed;
    SolverConfig sc;
    sc.dt    = 0.01;
    sc.t_end = 0.5;
    NoisePath     path{seed, sc.dt, 0};
    SpectralField v0 = random_field(TruncationSpec(p.L), 4, 1.0, 1.0);
    Trajectory    a  = integrate(v0, path, 0.0, p, sc);
    Trajectory    b  = integrate(v0, path, 0.0, p, sc);
    add("bitwise determinism",
        (a.final_v->psi_hat - b.final_v->psi_hat).cwiseAbs().maxCoeff(), 0.0);
  }

  bool all = true;
  std::printf("%-40s %14s %12s  %s\n", "check", "value", "bound", "status");
  json rows = json::array();
  for (const Check& c : checks) {
    all = all && c.pass;
    std::printf("%-40s %14.3e %12.1e  %s\n", c.name.c_str(), c.value, c.bound,
                c.pass ? "PASS" : "FAIL");
    rows.push_back(json{{"name", c.name}, {"value", c.value}, {"bound", c.bound},
                        {"pass", c.pass}});
  }
  auto os = open_out(dir / "selftest.json");
  os << rows.dump(2) << "\n";
  write_manifest(dir, cfg, seed, all ? "ok" : "failed", all ? 0 : 1);
  (void)opts;
  return all ? 0 : 1;
}

}  // namespace

int run(const RunConfig& config, const RunOptions& opts) {
  const uint64_t seed = opts.seed.value_or(config.params.noise.seed);
  fs::path       dir  = opts.out_dir.empty() ? fs::path("out") : fs::path(opts.out_dir);
  fs::create_directories(dir);
  switch (config.experiment.kind) {
    case ExperimentKind::Simulate: return run_simulate(config, opts, dir, seed);
    case ExperimentKind::Ou: return run_ou(config, opts, dir, seed);
    case ExperimentKind::Depend: return run_depend(config, opts, dir, seed);
    case ExperimentKind::Pullback: return run_pullback(config, opts, dir, seed);
    case ExperimentKind::Absorb: return run_absorb(config, opts, dir, seed);
    case ExperimentKind::Spectrum: return run_spectrum(config, opts, dir, seed);
    case ExperimentKind::Selftest: return run_selftest(config, opts, dir, seed);
  }
  return 1;
}

}  // namespace sns
