#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sns/runner.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string default_config(const std::string& experiment) {
  return std::string(R"({"params": {"nu": 1.0, "L": 15}, "experiment": {"type": ")") +
         experiment + R"("}})";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral simulator for the stochastic Navier-Stokes equations "
               "on the rotating unit sphere"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  uint64_t    seed      = 0;
  bool        seed_set  = false;
  int         threads   = 1;

  const std::vector<std::string> kinds = {"simulate", "ou",       "depend",  "pullback",
                                          "absorb",   "spectrum", "selftest"};
  for (const std::string& kind : kinds) {
    CLI::App* sub = app.add_subcommand(kind, "run the '" + kind + "' experiment");
    sub->add_option("--config", config_path, "JSON run configuration");
    sub->add_option("--out", out_dir, "output directory (default $SPHERE_SNS_OUT or ./out)");
    sub->add_option("--seed", seed, "override the noise seed")->each([&](const std::string&) {
      seed_set = true;
    });
    sub->add_option("--threads", threads, "worker threads for ensembles");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string kind = app.get_subcommands().front()->get_name();

  try {
    const std::string text =
        config_path.empty() ? default_config(kind) : slurp(config_path);
    sns::RunConfig cfg = sns::parse_config(text);
    if (sns::experiment_name(cfg.experiment.kind) != kind)
      throw sns::ConfigError("/experiment/type",
                             "config experiment '" +
                                 std::string(sns::experiment_name(cfg.experiment.kind)) +
                                 "' does not match subcommand '" + kind + "'");

    sns::RunOptions opts;
    if (seed_set) opts.seed = seed;
    opts.threads = threads;
    if (!out_dir.empty())
      opts.out_dir = out_dir;
    else if (!cfg.output_dir.empty())
      opts.out_dir = cfg.output_dir;
    else if (const char* env = std::getenv("SPHERE_SNS_OUT"))
      opts.out_dir = env;
    else
      opts.out_dir = "out";

    return sns::run(cfg, opts);
  } catch (const sns::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
