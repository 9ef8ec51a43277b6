#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

#include "adlab/errors.hpp"
#include "adlab/gauge_field.hpp"
#include "adlab/hamiltonian.hpp"
#include "adlab/linalg.hpp"
#include "adlab/propagate.hpp"
#include "adlab/zoo.hpp"

namespace adlab {

using json = nlohmann::json;

struct LoopConfig {
  double radius = 1.0;
  Vec3 center{0.0, 0.0, 0.0};
  int segments = 256;
  std::vector<double> turns{1.0};
};

// One validated record drives every subcommand; the published schema under
// docs/ mirrors the checks below, and keys outside it are rejected.
struct RunConfig {
  std::string family_kind;
  json family_parameters = json::object();
  int level = 0;
  int n_grid = 4097;
  bool has_grid = false;
  EvolutionConfig evolution;
  bool has_evolution = false;
  std::string evolution_method = "rk4";
  std::vector<double> sweep;
  std::string output;
  std::uint64_t seed = 0;
  double probe_s = 0.5;
};

namespace cfgdetail {

inline void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                           const std::string& where) {
  require_config(obj.is_object(), where + " must be a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* a : allowed)
      if (it.key() == a) {
        known = true;
        break;
      }
    require_config(known, where + ": unknown key \"" + it.key() + "\"");
  }
}

inline double get_number(const json& obj, const char* key, const std::string& where) {
  require_config(obj.contains(key), where + ": missing \"" + key + "\"");
  const json& v = obj.at(key);
  require_config(v.is_number(), where + ": \"" + key + "\" must be a number");
  const double x = v.get<double>();
  require_config(std::isfinite(x), where + ": \"" + key + "\" must be finite");
  return x;
}

inline double get_number_or(const json& obj, const char* key, double fallback,
                            const std::string& where) {
  if (!obj.contains(key)) return fallback;
  return get_number(obj, key, where);
}

inline int get_int(const json& obj, const char* key, const std::string& where) {
  require_config(obj.contains(key), where + ": missing \"" + key + "\"");
  const json& v = obj.at(key);
  require_config(v.is_number_integer(), where + ": \"" + key + "\" must be an integer");
  return v.get<int>();
}

inline int get_int_or(const json& obj, const char* key, int fallback,
                      const std::string& where) {
  if (!obj.contains(key)) return fallback;
  return get_int(obj, key, where);
}

inline std::string get_string(const json& obj, const char* key, const std::string& where) {
  require_config(obj.contains(key), where + ": missing \"" + key + "\"");
  const json& v = obj.at(key);
  require_config(v.is_string(), where + ": \"" + key + "\" must be a string");
  return v.get<std::string>();
}

inline std::vector<double> number_list(const json& v, const std::string& where) {
  require_config(v.is_array() && !v.empty(), where + " must be a non-empty array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const json& e : v) {
    require_config(e.is_number(), where + " entries must be numbers");
    const double x = e.get<double>();
    require_config(std::isfinite(x), where + " entries must be finite");
    out.push_back(x);
  }
  return out;
}

inline Vec3 get_vec3(const json& obj, const char* key, const std::string& where) {
  require_config(obj.contains(key), where + ": missing \"" + key + "\"");
  const std::vector<double> v = number_list(obj.at(key), where + "." + key);
  require_config(v.size() == 3, where + ": \"" + key + "\" must have 3 components");
  return Vec3{v[0], v[1], v[2]};
}

inline ComplexMatrix parse_matrix(const json& entries, int dim, const std::string& where) {
  require_config(entries.is_array() &&
                     entries.size() == static_cast<std::size_t>(dim) * dim,
                 where + ": \"entries\" must hold dim*dim [re, im] pairs, row-major");
  ComplexMatrix m(dim);
  std::size_t k = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j, ++k) {
      const json& pair = entries.at(k);
      require_config(pair.is_array() && pair.size() == 2 && pair.at(0).is_number() &&
                         pair.at(1).is_number(),
                     where + ": each entry must be an [re, im] number pair");
      m(i, j) = cplx{pair.at(0).get<double>(), pair.at(1).get<double>()};
      require_config(std::isfinite(m(i, j).real()) && std::isfinite(m(i, j).imag()),
                     where + ": matrix entries must be finite");
    }
  double scale = 0.0;
  double defect = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      scale = std::max(scale, std::abs(m(i, j)));
      defect = std::max(defect, std::abs(m(i, j) - std::conj(m(j, i))));
    }
  require_config(defect <= tol::hermitian_rel * std::max(scale, 1.0),
                 where + ": matrix must be Hermitian");
  return m;
}

inline void validate_family(const std::string& kind, const json& p) {
  const std::string where = "family.parameters (" + kind + ")";
  if (kind == "spin-half") {
    reject_unknown(p, {"mu_b", "theta"}, where);
    const double mu_b = get_number(p, "mu_b", where);
    const double theta = get_number(p, "theta", where);
    require_config(mu_b > 0.0, where + ": mu_b must be positive");
    require_config(theta >= 0.0 && theta <= 0.5 * two_pi,
                   where + ": theta must lie in [0, pi]");
  } else if (kind == "constant") {
    reject_unknown(p, {"dim", "entries"}, where);
    const int dim = get_int(p, "dim", where);
    require_config(dim >= 1 && dim <= max_dim, where + ": dim out of range");
    require_config(p.contains("entries"), where + ": missing \"entries\"");
    parse_matrix(p.at("entries"), dim, where);
  } else if (kind == "sampled-grid") {
    reject_unknown(p, {"dim", "samples"}, where);
    const int dim = get_int(p, "dim", where);
    require_config(dim >= 1 && dim <= max_dim, where + ": dim out of range");
    require_config(p.contains("samples") && p.at("samples").is_array() &&
                       p.at("samples").size() >= 2,
                   where + ": \"samples\" must be an array of at least two matrices");
    for (const json& s : p.at("samples")) parse_matrix(s, dim, where);
  } else if (kind == "random-loop") {
    reject_unknown(p, {}, where);
  } else if (kind == "solenoid") {
    reject_unknown(p, {"flux", "coupling", "loop"}, where);
    get_number(p, "flux", where);
    get_number(p, "coupling", where);
  } else if (kind == "pure-gauge") {
    reject_unknown(p, {"amplitude", "wavevector", "coupling", "loop"}, where);
    get_number(p, "amplitude", where);
    get_number(p, "coupling", where);
    get_vec3(p, "wavevector", where);
  } else if (kind == "monopole") {
    reject_unknown(p, {"pairs", "segments"}, where);
    require_config(p.contains("pairs") && p.at("pairs").is_array() &&
                       !p.at("pairs").empty(),
                   where + ": \"pairs\" must be a non-empty array of [e, g] pairs");
    for (const json& pair : p.at("pairs"))
      require_config(pair.is_array() && pair.size() == 2 && pair.at(0).is_number() &&
                         pair.at(1).is_number(),
                     where + ": each pair must be [e, g]");
    const int segments = get_int_or(p, "segments", 256, where);
    require_config(segments >= 64, where + ": segments must be at least 64");
  } else {
    require_config(false, "family.kind \"" + kind + "\" is not recognized");
  }
}

}  // namespace cfgdetail

inline RunConfig parse_run_config(const json& root) {
  cfgdetail::reject_unknown(
      root, {"family", "level", "grid", "evolution", "sweep", "output", "seed", "probe"},
      "config");
  require_config(root.contains("family"), "config: missing \"family\"");

  RunConfig cfg;
  const json& fam = root.at("family");
  cfgdetail::reject_unknown(fam, {"kind", "parameters"}, "family");
  cfg.family_kind = cfgdetail::get_string(fam, "kind", "family");
  cfg.family_parameters = fam.contains("parameters") ? fam.at("parameters") : json::object();
  cfgdetail::validate_family(cfg.family_kind, cfg.family_parameters);

  cfg.level = cfgdetail::get_int_or(root, "level", 0, "config");
  require_config(cfg.level >= 0 && cfg.level < max_dim, "config: level out of range");

  if (root.contains("grid")) {
    cfg.has_grid = true;
    cfg.n_grid = cfgdetail::get_int(root, "grid", "config");
    require_config(cfg.n_grid >= 2 && cfg.n_grid <= (1 << 20) + 1,
                   "config: grid must lie in [2, 2^20 + 1]");
  }

  if (root.contains("evolution")) {
    cfg.has_evolution = true;
    const json& ev = root.at("evolution");
    cfgdetail::reject_unknown(ev, {"T", "n_steps", "method", "osc_resolution"},
                              "evolution");
    cfg.evolution.T = cfgdetail::get_number(ev, "T", "evolution");
    require_config(cfg.evolution.T >= 0.0, "evolution: T must be nonnegative");
    cfg.evolution.n_steps = cfgdetail::get_int(ev, "n_steps", "evolution");
    require_config(cfg.evolution.n_steps >= 1 && cfg.evolution.n_steps <= (1 << 20),
                   "evolution: n_steps must lie in [1, 2^20]");
    cfg.evolution.osc_resolution =
        cfgdetail::get_number_or(ev, "osc_resolution", cfg.evolution.osc_resolution,
                                 "evolution");
    require_config(cfg.evolution.osc_resolution > 0.0,
                   "evolution: osc_resolution must be positive");
    if (ev.contains("method")) {
      const std::string m = cfgdetail::get_string(ev, "method", "evolution");
      require_config(m == "rk4" || m == "midpoint" || m == "volterra" ||
                         m == "rotating-ode",
                     "evolution: method must be rk4, midpoint, volterra, or "
                     "rotating-ode");
      cfg.evolution_method = m;
      if (m == "rk4") cfg.evolution.method = StepMethod::fixed_step_rk4;
      if (m == "midpoint") cfg.evolution.method = StepMethod::exact_step_midpoint;
    }
  }

  if (root.contains("sweep")) {
    cfg.sweep = cfgdetail::number_list(root.at("sweep"), "sweep");
    for (std::size_t i = 0; i + 1 < cfg.sweep.size(); ++i)
      require_config(cfg.sweep[i] < cfg.sweep[i + 1], "sweep: T list must ascend");
  }

  if (root.contains("output")) cfg.output = cfgdetail::get_string(root, "output", "config");

  if (root.contains("seed")) {
    const json& s = root.at("seed");
    require_config(s.is_number_integer() && s.get<std::int64_t>() >= 0,
                   "config: seed must be a nonnegative integer");
    cfg.seed = s.get<std::uint64_t>();
  }

  if (root.contains("probe")) {
    const json& pr = root.at("probe");
    cfgdetail::reject_unknown(pr, {"s"}, "probe");
    cfg.probe_s = cfgdetail::get_number(pr, "s", "probe");
    require_config(cfg.probe_s > 0.0 && cfg.probe_s < 1.0,
                   "probe: s must lie strictly inside (0, 1)");
  }
  return cfg;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  require_config(f.good(), "config: cannot open " + path.string());
  json root;
  try {
    root = json::parse(f);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_run_config(root);
}

inline HamiltonianFamily family_from_config(const RunConfig& cfg) {
  const json& p = cfg.family_parameters;
  if (cfg.family_kind == "spin-half") {
    SpinHalfParams sp;
    sp.mu_b = p.at("mu_b").get<double>();
    sp.theta = p.at("theta").get<double>();
    return build_spin_half(sp);
  }
  if (cfg.family_kind == "constant") {
    const int dim = p.at("dim").get<int>();
    return build_constant(HermitianMatrix(
        cfgdetail::parse_matrix(p.at("entries"), dim, "family.parameters")));
  }
  if (cfg.family_kind == "sampled-grid") {
    const int dim = p.at("dim").get<int>();
    std::vector<HermitianMatrix> samples;
    for (const json& s : p.at("samples"))
      samples.emplace_back(cfgdetail::parse_matrix(s, dim, "family.parameters"));
    return build_sampled_grid(std::move(samples));
  }
  if (cfg.family_kind == "random-loop") return zoo_random_loop_family(cfg.seed);
  throw config_error("family.kind \"" + cfg.family_kind +
                     "\" does not define a Hamiltonian family");
}

inline LoopConfig loop_from_config(const json& p) {
  LoopConfig loop;
  if (!p.contains("loop")) return loop;
  const json& lp = p.at("loop");
  cfgdetail::reject_unknown(lp, {"radius", "center", "segments", "turns"}, "loop");
  loop.radius = cfgdetail::get_number_or(lp, "radius", loop.radius, "loop");
  require_config(loop.radius > 0.0, "loop: radius must be positive");
  if (lp.contains("center")) loop.center = cfgdetail::get_vec3(lp, "center", "loop");
  loop.segments = cfgdetail::get_int_or(lp, "segments", loop.segments, "loop");
  require_config(loop.segments >= 3, "loop: segments must be at least 3");
  if (lp.contains("turns")) loop.turns = cfgdetail::number_list(lp.at("turns"), "loop.turns");
  return loop;
}

inline VectorPotential potential_from_config(const RunConfig& cfg) {
  const json& p = cfg.family_parameters;
  if (cfg.family_kind == "solenoid")
    return solenoid_potential(p.at("flux").get<double>(), p.at("coupling").get<double>());
  if (cfg.family_kind == "pure-gauge") {
    const Vec3 k = cfgdetail::get_vec3(p, "wavevector", "family.parameters");
    return pure_gauge_potential(p.at("amplitude").get<double>(), k,
                                p.at("coupling").get<double>());
  }
  throw config_error("family.kind \"" + cfg.family_kind +
                     "\" does not define a line-integral potential");
}

}  // namespace adlab
