#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sns/solver.hpp"

namespace sns {

enum class ExperimentKind { Simulate, Ou, Depend, Pullback, Absorb, Spectrum, Selftest };

const char*    experiment_name(ExperimentKind k);
ExperimentKind experiment_from_name(const std::string& name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Simulate;
  // simulate
  uint64_t u0_seed      = 1;
  double   u0_amplitude = 1.0;
  double   u0_decay     = 1.0;
  // ou
  double t_avg = 100.0;
  // depend
  int      n_max     = 8;
  double   T         = 1.0;
  uint64_t pert_seed = 7;
  // pullback / absorb
  std::vector<double> times = {5.0, 10.0, 20.0, 40.0, 80.0};
  double              rho   = 1.0;
  int                 seeds = 5;
  int                 samples       = 10;
  double              horizon       = 25.0;
  double              probe_horizon = 25.0;
  double              entry_tol     = 0.0;
  int                 const_samples = 200;
};

struct RunConfig {
  ModelParams      params;   // includes noise + forcing
  SolverConfig     solver;
  ExperimentConfig experiment;
  std::string      output_dir;         // empty: resolved by the CLI
  std::string      forcing_file;       // remembered for round-tripping
  std::vector<std::array<double, 4>> forcing_modes;  // inline (l, m, re, im) rows
};

// Strict parse: unknown keys rejected, all numbers finite, physical ranges
// enforced; errors carry a JSON-pointer location.
RunConfig parse_config(const std::string& text);

// Canonical serialization; parse(serialize(c)) == c.
std::string serialize_config(const RunConfig& c);

uint64_t    fnv1a64(const std::string& s);
inline uint64_t config_hash(const RunConfig& c) { return fnv1a64(serialize_config(c)); }

}  // namespace sns
