#include "sns/config.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

namespace sns {

using nlohmann::json;

const char* experiment_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Simulate: return "simulate";
    case ExperimentKind::Ou: return "ou";
    case ExperimentKind::Depend: return "depend";
    case ExperimentKind::Pullback: return "pullback";
    case ExperimentKind::Absorb: return "absorb";
    case ExperimentKind::Spectrum: return "spectrum";
    case ExperimentKind::Selftest: return "selftest";
  }
  return "?";
}

ExperimentKind experiment_from_name(const std::string& name) {
  for (ExperimentKind k :
       {ExperimentKind::Simulate, ExperimentKind::Ou, ExperimentKind::Depend,
        ExperimentKind::Pullback, ExperimentKind::Absorb, ExperimentKind::Spectrum,
        ExperimentKind::Selftest})
    if (name == experiment_name(k)) return k;
  throw ConfigError("/experiment/type", "unknown experiment type '" + name + "'");
}

namespace {

void reject_unknown(const json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError(where + "/" + it.key(), "unknown key");
}

double get_num(const json& obj, const std::string& where, const std::string& key, double dflt,
               bool required = false) {
  if (!obj.contains(key)) {
    if (required) throw ConfigError(where + "/" + key, "missing required value");
    return dflt;
  }
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "/" + key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + "/" + key, "value must be finite");
  return x;
}

int get_int(const json& obj, const std::string& where, const std::string& key, int dflt) {
  const double x = get_num(obj, where, key, dflt);
  if (x != std::floor(x)) throw ConfigError(where + "/" + key, "expected an integer");
  return int(x);
}

uint64_t get_u64(const json& obj, const std::string& where, const std::string& key,
                 uint64_t dflt) {
  if (!obj.contains(key)) return dflt;
  const json& v = obj.at(key);
  if (!v.is_number_unsigned() && !v.is_number_integer())
    throw ConfigError(where + "/" + key, "expected an unsigned integer");
  return v.get<uint64_t>();
}

bool get_bool(const json& obj, const std::string& where, const std::string& key, bool dflt) {
  if (!obj.contains(key)) return dflt;
  const json& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError(where + "/" + key, "expected a boolean");
  return v.get<bool>();
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError("/", std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("/", "top level must be an object");
  reject_unknown(root, "", {"params", "noise", "solver", "experiment", "output_dir"});

  RunConfig c;

  // --- params ---
  if (!root.contains("params")) throw ConfigError("/params", "missing section");
  const json& jp = root.at("params");
  reject_unknown(jp, "/params", {"nu", "rotation", "alpha", "L", "variant", "forcing"});
  c.params.nu = get_num(jp, "/params", "nu", 1.0, true);
  if (c.params.nu <= 0.0) throw ConfigError("/params/nu", "viscosity must be > 0");
  c.params.rotation = get_num(jp, "/params", "rotation", 0.0);
  if (c.params.rotation < 0.0) throw ConfigError("/params/rotation", "rotation must be >= 0");
  c.params.alpha = get_num(jp, "/params", "alpha", 0.0);
  if (c.params.alpha < 0.0) throw ConfigError("/params/alpha", "alpha must be >= 0");
  c.params.L = get_int(jp, "/params", "L", 15);
  if (c.params.L < 1 || c.params.L > kMaxDegree)
    throw ConfigError("/params/L", "L must be in [1, " + std::to_string(kMaxDegree) + "]");
  if (jp.contains("variant")) {
    const std::string v = jp.at("variant").get<std::string>();
    if (v == "laplace")
      c.params.variant = OperatorVariant::LaplaceSpectrum;
    else if (v == "hodge_ricci")
      c.params.variant = OperatorVariant::HodgeRicci;
    else
      throw ConfigError("/params/variant", "expected 'laplace' or 'hodge_ricci'");
  }
  if (jp.contains("forcing")) {
    const json& jf = jp.at("forcing");
    reject_unknown(jf, "/params/forcing", {"file", "modes"});
    if (jf.contains("file") && jf.contains("modes"))
      throw ConfigError("/params/forcing", "give either 'file' or 'modes', not both");
    if (jf.contains("file")) {
      c.forcing_file = jf.at("file").get<std::string>();
      c.params.forcing = read_coeffs_file(c.forcing_file);
    } else if (jf.contains("modes")) {
      SpectralField f(TruncationSpec(c.params.L));
      for (const auto& row : jf.at("modes")) {
        if (!row.is_array() || row.size() != 4)
          throw ConfigError("/params/forcing/modes", "rows must be [l, m, re, im]");
        const int    l  = row[0].get<int>();
        const int    m  = row[1].get<int>();
        const double re = row[2].get<double>();
        const double im = row[3].get<double>();
        if (l < 1 || l > c.params.L || std::abs(m) > l)
          throw ConfigError("/params/forcing/modes", "mode out of range");
        if (!std::isfinite(re) || !std::isfinite(im))
          throw ConfigError("/params/forcing/modes", "value must be finite");
        f.psi_hat[mode_index(l, m)] = Complex(re, im);
        c.forcing_modes.push_back({double(l), double(m), re, im});
      }
      c.params.forcing = f;
    } else {
      throw ConfigError("/params/forcing", "expected 'file' or 'modes'");
    }
  }

  // --- noise ---
  if (root.contains("noise")) {
    const json& jn = root.at("noise");
    reject_unknown(jn, "/noise", {"epsilon", "s_exponent", "seed", "allow_rough_noise"});
    c.params.noise.epsilon = get_num(jn, "/noise", "epsilon", 0.0);
    if (c.params.noise.epsilon < 0.0) throw ConfigError("/noise/epsilon", "epsilon must be >= 0");
    c.params.noise.s_exponent        = get_num(jn, "/noise", "s_exponent", 1.0);
    c.params.noise.seed              = get_u64(jn, "/noise", "seed", 0);
    c.params.noise.allow_rough_noise = get_bool(jn, "/noise", "allow_rough_noise", false);
    if (c.params.noise.s_exponent <= 0.5 && !c.params.noise.allow_rough_noise)
      throw ConfigError("/noise/s_exponent",
                        "regularity exponent must exceed the radonifying threshold 1/2 "
                        "(set allow_rough_noise to override)");
  }

  // --- solver ---
  if (root.contains("solver")) {
    const json& js = root.at("solver");
    reject_unknown(js, "/solver", {"dt", "t_end", "scheme", "record_every"});
    c.solver.dt = get_num(js, "/solver", "dt", 1e-2);
    if (c.solver.dt <= 0.0) throw ConfigError("/solver/dt", "dt must be > 0");
    c.solver.t_end = get_num(js, "/solver", "t_end", 1.0);
    if (c.solver.t_end <= 0.0) throw ConfigError("/solver/t_end", "t_end must be > 0");
    if (js.contains("scheme")) {
      const std::string s = js.at("scheme").get<std::string>();
      if (s == "ifrk4")
        c.solver.scheme = Scheme::IFRK4;
      else if (s == "ifeuler")
        c.solver.scheme = Scheme::IFEuler;
      else
        throw ConfigError("/solver/scheme", "expected 'ifrk4' or 'ifeuler'");
    }
    c.solver.record_every = get_int(js, "/solver", "record_every", 1);
    if (c.solver.record_every < 1)
      throw ConfigError("/solver/record_every", "record_every must be >= 1");
  }
  if (c.solver.dt * c.params.nu * sigma_l(c.params.L, c.params.variant) > 50.0)
    throw ConfigError("/solver/dt", "dt * nu * sigma_L exceeds the sanity bound 50");

  // --- experiment ---
  if (root.contains("experiment")) {
    const json& je = root.at("experiment");
    reject_unknown(je, "/experiment",
                   {"type", "u0_seed", "u0_amplitude", "u0_decay", "t_avg", "n_max", "T",
                    "pert_seed", "times", "rho", "seeds", "samples", "horizon", "probe_horizon",
                    "entry_tol", "const_samples"});
    if (!je.contains("type")) throw ConfigError("/experiment/type", "missing experiment type");
    c.experiment.kind         = experiment_from_name(je.at("type").get<std::string>());
    c.experiment.u0_seed      = get_u64(je, "/experiment", "u0_seed", 1);
    c.experiment.u0_amplitude = get_num(je, "/experiment", "u0_amplitude", 1.0);
    c.experiment.u0_decay     = get_num(je, "/experiment", "u0_decay", 1.0);
    c.experiment.t_avg        = get_num(je, "/experiment", "t_avg", 100.0);
    c.experiment.n_max        = get_int(je, "/experiment", "n_max", 8);
    c.experiment.T            = get_num(je, "/experiment", "T", 1.0);
    c.experiment.pert_seed    = get_u64(je, "/experiment", "pert_seed", 7);
    if (je.contains("times")) {
      c.experiment.times.clear();
      for (const auto& t : je.at("times")) {
        if (!t.is_number() || !std::isfinite(t.get<double>()) || t.get<double>() <= 0.0)
          throw ConfigError("/experiment/times", "times must be positive finite numbers");
        c.experiment.times.push_back(t.get<double>());
      }
    }
    c.experiment.rho           = get_num(je, "/experiment", "rho", 1.0);
    c.experiment.seeds         = get_int(je, "/experiment", "seeds", 5);
    c.experiment.samples       = get_int(je, "/experiment", "samples", 10);
    c.experiment.horizon       = get_num(je, "/experiment", "horizon", 25.0);
    c.experiment.probe_horizon = get_num(je, "/experiment", "probe_horizon", 25.0);
    c.experiment.entry_tol     = get_num(je, "/experiment", "entry_tol", 0.0);
    c.experiment.const_samples = get_int(je, "/experiment", "const_samples", 200);
  }

  if (root.contains("output_dir")) c.output_dir = root.at("output_dir").get<std::string>();
  return c;
}

std::string serialize_config(const RunConfig& c) {
  json jp;
  jp["nu"]       = c.params.nu;
  jp["rotation"] = c.params.rotation;
  jp["alpha"]    = c.params.alpha;
  jp["L"]        = c.params.L;
  jp["variant"]  = c.params.variant == OperatorVariant::LaplaceSpectrum ? "laplace" : "hodge_ricci";
  if (!c.forcing_file.empty())
    jp["forcing"] = json{{"file", c.forcing_file}};
  else if (!c.forcing_modes.empty()) {
    json rows = json::array();
    for (const auto& r : c.forcing_modes) rows.push_back({int(r[0]), int(r[1]), r[2], r[3]});
    jp["forcing"] = json{{"modes", rows}};
  }

  json jn;
  jn["epsilon"]           = c.params.noise.epsilon;
  jn["s_exponent"]        = c.params.noise.s_exponent;
  jn["seed"]              = c.params.noise.seed;
  jn["allow_rough_noise"] = c.params.noise.allow_rough_noise;

  json js;
  js["dt"]           = c.solver.dt;
  js["t_end"]        = c.solver.t_end;
  js["scheme"]       = c.solver.scheme == Scheme::IFRK4 ? "ifrk4" : "ifeuler";
  js["record_every"] = c.solver.record_every;

  json je;
  je["type"] = experiment_name(c.experiment.kind);
  switch (c.experiment.kind) {
    case ExperimentKind::Simulate:
      je["u0_seed"]      = c.experiment.u0_seed;
      je["u0_amplitude"] = c.experiment.u0_amplitude;
      je["u0_decay"]     = c.experiment.u0_decay;
      break;
    case ExperimentKind::Ou:
      je["t_avg"] = c.experiment.t_avg;
      break;
    case ExperimentKind::Depend:
      je["T"]         = c.experiment.T;
      je["n_max"]     = c.experiment.n_max;
      je["pert_seed"] = c.experiment.pert_seed;
      break;
    case ExperimentKind::Pullback:
      je["times"] = c.experiment.times;
      je["rho"]   = c.experiment.rho;
      je["seeds"] = c.experiment.seeds;
      break;
    case ExperimentKind::Absorb:
      je["rho"]           = c.experiment.rho;
      je["samples"]       = c.experiment.samples;
      je["horizon"]       = c.experiment.horizon;
      je["probe_horizon"] = c.experiment.probe_horizon;
      je["entry_tol"]     = c.experiment.entry_tol;
      je["seeds"]         = c.experiment.seeds;
      je["const_samples"] = c.experiment.const_samples;
      break;
    case ExperimentKind::Spectrum:
    case ExperimentKind::Selftest:
      break;
  }

  json root;
  root["params"]     = jp;
  root["noise"]      = jn;
  root["solver"]     = js;
  root["experiment"] = je;
  if (!c.output_dir.empty()) root["output_dir"] = c.output_dir;
  return root.dump(2);
}

uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace sns
