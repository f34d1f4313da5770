#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sns/config.hpp"
#include "sns/runner.hpp"

using namespace sns;
namespace fs = std::filesystem;

namespace {

std::string minimal = R"({
  "params": {"nu": 1.0, "L": 15},
  "solver": {"dt": 0.01, "t_end": 1.0},
  "experiment": {"type": "simulate"}
})";

std::string slurp(const fs::path& p) {
  std::ifstream     is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("minimal config accepted") {
  RunConfig c = parse_config(minimal);
  CHECK(c.params.nu == 1.0);
  CHECK(c.params.L == 15);
  CHECK(c.solver.dt == 0.01);
  CHECK(c.experiment.kind == ExperimentKind::Simulate);
}

TEST_CASE("validation errors carry JSON-pointer locations") {
  SUBCASE("negative viscosity") {
    try {
      parse_config(R"({"params": {"nu": -1, "L": 5}, "experiment": {"type": "simulate"}})");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.pointer == "/params/nu");
    }
  }
  SUBCASE("rough noise without override") {
    try {
      parse_config(R"({"params": {"nu": 1, "L": 5},
                       "noise": {"epsilon": 1.0, "s_exponent": 0.4},
                       "experiment": {"type": "simulate"}})");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.pointer == "/noise/s_exponent");
      CHECK(std::string(e.what()).find("1/2") != std::string::npos);
    }
    CHECK_NOTHROW(parse_config(
        R"({"params": {"nu": 1, "L": 5},
            "noise": {"epsilon": 1.0, "s_exponent": 0.4, "allow_rough_noise": true},
            "experiment": {"type": "simulate"}})"));
  }
  SUBCASE("unknown keys rejected") {
    try {
      parse_config(R"({"params": {"nu": 1, "L": 5, "nuu": 2}, "experiment": {"type": "ou"}})");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.pointer == "/params/nuu");
    }
  }
  SUBCASE("non-finite numbers rejected") {
    CHECK_THROWS_AS(
        parse_config(
            R"({"params": {"nu": 1, "L": 5, "rotation": 1e999}, "experiment": {"type": "ou"}})"),
        ConfigError);
  }
  SUBCASE("unknown experiment") {
    CHECK_THROWS_AS(
        parse_config(R"({"params": {"nu": 1, "L": 5}, "experiment": {"type": "warp"}})"),
        ConfigError);
  }
}

TEST_CASE("serialize/parse round trip") {
  std::string cfg = R"({
    "params": {"nu": 0.5, "rotation": 2.0, "alpha": 1.5, "L": 9, "variant": "hodge_ricci",
               "forcing": {"modes": [[1, 0, 0.25, 0.0], [2, 1, -0.125, 0.0625]]}},
    "noise": {"epsilon": 0.125, "s_exponent": 0.75, "seed": 12345},
    "solver": {"dt": 0.005, "t_end": 2.0, "scheme": "ifeuler", "record_every": 4},
    "experiment": {"type": "absorb", "rho": 6.0, "samples": 3, "seeds": 2},
    "output_dir": "somewhere"
  })";
  RunConfig   a  = parse_config(cfg);
  std::string s1 = serialize_config(a);
  RunConfig   b  = parse_config(s1);
  std::string s2 = serialize_config(b);
  CHECK(s1 == s2);
  CHECK(config_hash(a) == config_hash(b));
  CHECK(b.params.variant == OperatorVariant::HodgeRicci);
  CHECK(b.params.forcing.has_value());
  CHECK(std::abs(b.params.forcing->psi_hat[mode_index(2, 1)] - Complex(-0.125, 0.0625)) == 0.0);
}

TEST_CASE("runner writes reproducible artifacts") {
  const fs::path dir1 = fs::temp_directory_path() / "sns_run_a";
  const fs::path dir2 = fs::temp_directory_path() / "sns_run_b";
  fs::remove_all(dir1);
  fs::remove_all(dir2);

  std::string cfg_text = R"({
    "params": {"nu": 1.0, "L": 8},
    "noise": {"epsilon": 0.1, "seed": 7},
    "solver": {"dt": 0.01, "t_end": 0.2, "record_every": 5},
    "experiment": {"type": "simulate", "u0_seed": 2}
  })";
  RunConfig  cfg = parse_config(cfg_text);
  RunOptions opts;
  opts.out_dir = dir1.string();
  CHECK(run(cfg, opts) == 0);
  opts.out_dir = dir2.string();
  CHECK(run(cfg, opts) == 0);

  CHECK(slurp(dir1 / "diagnostics.csv") == slurp(dir2 / "diagnostics.csv"));
  CHECK(slurp(dir1 / "manifest.json") == slurp(dir2 / "manifest.json"));
  CHECK(fs::exists(dir1 / "snap_00000000.csv"));
  CHECK(fs::exists(dir1 / "snap_00000020.csv"));
  CHECK(fs::exists(dir1 / "snap_00000020.json"));
  CHECK(slurp(dir1 / "snap_00000020.csv") == slurp(dir2 / "snap_00000020.csv"));

  const std::string diag = slurp(dir1 / "diagnostics.csv");
  CHECK(diag.rfind("t,H,V,L4,bracket2,b_vzv,energy_residual", 0) == 0);

  // seed override changes the bytes
  opts.seed    = 1234;
  opts.out_dir = dir2.string();
  CHECK(run(cfg, opts) == 0);
  CHECK(slurp(dir1 / "diagnostics.csv") != slurp(dir2 / "diagnostics.csv"));
  fs::remove_all(dir1);
  fs::remove_all(dir2);
}

TEST_CASE("runner reports blow-up with exit code 2") {
  const fs::path dir = fs::temp_directory_path() / "sns_run_blowup";
  fs::remove_all(dir);
  std::string cfg_text = R"({
    "params": {"nu": 0.05, "L": 12},
    "solver": {"dt": 0.5, "t_end": 40.0, "record_every": 10},
    "experiment": {"type": "simulate", "u0_seed": 3, "u0_amplitude": 80.0, "u0_decay": 0.5}
  })";
  RunConfig  cfg = parse_config(cfg_text);
  RunOptions opts;
  opts.out_dir = dir.string();
  CHECK(run(cfg, opts) == 2);
  const std::string manifest = slurp(dir / "manifest.json");
  CHECK(manifest.find("\"status\": \"blowup\"") != std::string::npos);
  CHECK(manifest.find("last_good_step") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("spectrum experiment") {
  const fs::path dir = fs::temp_directory_path() / "sns_run_spec";
  fs::remove_all(dir);
  RunConfig cfg = parse_config(
      R"({"params": {"nu": 1.0, "L": 4}, "noise": {"epsilon": 1.0},
          "experiment": {"type": "spectrum"}})");
  RunOptions opts;
  opts.out_dir = dir.string();
  CHECK(run(cfg, opts) == 0);
  const std::string csv = slurp(dir / "spectrum.csv");
  CHECK(csv.find("l,lambda,sigma_laplace,sigma_hodge_ricci,g") != std::string::npos);
  CHECK(csv.find("1,2,2,0,0.5") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("experiment runners produce their artifacts") {
  const fs::path dir = fs::temp_directory_path() / "sns_run_exp";

  SUBCASE("ou") {
    fs::remove_all(dir);
    RunConfig cfg = parse_config(
        R"({"params": {"nu": 1.0, "L": 4}, "noise": {"epsilon": 0.5, "seed": 3},
            "solver": {"dt": 0.02}, "experiment": {"type": "ou", "t_avg": 5.0}})");
    RunOptions opts;
    opts.out_dir = dir.string();
    CHECK(run(cfg, opts) == 0);
    CHECK(fs::exists(dir / "ou_modes.csv"));
    const std::string sum = slurp(dir / "ou_summary.json");
    CHECK(sum.find("h2_avg") != std::string::npos);
  }
  SUBCASE("depend") {
    fs::remove_all(dir);
    RunConfig cfg = parse_config(
        R"({"params": {"nu": 1.0, "L": 6}, "noise": {"epsilon": 0.05, "seed": 4},
            "solver": {"dt": 0.02}, "experiment": {"type": "depend", "T": 0.2, "n_max": 2}})");
    RunOptions opts;
    opts.out_dir = dir.string();
    CHECK(run(cfg, opts) == 0);
    const std::string csv = slurp(dir / "depend.csv");
    CHECK(csv.rfind("n,delta,sup_h,l2_v", 0) == 0);
  }
  SUBCASE("pullback") {
    fs::remove_all(dir);
    RunConfig cfg = parse_config(
        R"({"params": {"nu": 1.0, "L": 5}, "noise": {"epsilon": 0.05, "seed": 5},
            "solver": {"dt": 0.02},
            "experiment": {"type": "pullback", "times": [0.5, 1.0], "rho": 1.0, "seeds": 2}})");
    RunOptions opts;
    opts.out_dir = dir.string();
    opts.threads = 2;
    CHECK(run(cfg, opts) == 0);
    CHECK(slurp(dir / "pullback.csv").rfind("seed_index,t_n,out_norm,succ_dist", 0) == 0);
    CHECK(slurp(dir / "pullback_summary.json").find("cauchy_distances") != std::string::npos);
  }
  SUBCASE("absorb") {
    fs::remove_all(dir);
    RunConfig cfg = parse_config(
        R"({"params": {"nu": 1.0, "L": 5}, "noise": {"epsilon": 0.05, "seed": 6},
            "solver": {"dt": 0.02},
            "experiment": {"type": "absorb", "rho": 2.0, "samples": 2, "horizon": 5.0,
                           "probe_horizon": 5.0, "seeds": 1, "const_samples": 20}})");
    RunOptions opts;
    opts.out_dir = dir.string();
    opts.threads = 2;
    CHECK(run(cfg, opts) == 0);
    const std::string sum = slurp(dir / "absorb_summary.json");
    CHECK(sum.find("c_weight_source") != std::string::npos);
    CHECK(sum.find("\"r1\"") != std::string::npos);
  }
  fs::remove_all(dir);
}
