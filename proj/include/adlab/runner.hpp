#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "adlab/config.hpp"
#include "adlab/eigenframe.hpp"
#include "adlab/gauge_field.hpp"
#include "adlab/io.hpp"
#include "adlab/phases.hpp"
#include "adlab/propagate.hpp"
#include "adlab/verify.hpp"

namespace adlab {

inline constexpr const char* tool_version = "0.1.0";

namespace rundetail {

inline void write_json(const std::filesystem::path& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

// Run metadata lives apart from the data files so reruns of one config stay
// byte-identical where it matters.
inline void write_meta(const std::filesystem::path& out, const std::string& command) {
  json meta;
  meta["command"] = command;
  meta["tool"] = "adiabatic-lab";
  meta["version"] = tool_version;
  const std::time_t now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  char stamp[32];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  meta["generated_at"] = stamp;
  const char* env = std::getenv("ADIABATIC_LAB_THREADS");
  meta["threads_env"] = env ? json(env) : json(nullptr);
  write_json(out / "meta.json", meta);
}

inline std::filesystem::path prepare_out_dir(const std::string& dir) {
  require_config(!dir.empty(),
                 "output directory required: pass --out or set \"output\" in the config");
  const std::filesystem::path out(dir);
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  require_config(!ec, "cannot create output directory " + out.string());
  return out;
}

inline PathPolyline circle_path(const LoopConfig& loop, double turns) {
  PathPolyline path;
  const double whole = std::round(turns);
  const bool closed = std::abs(turns - whole) < 1e-12;
  const int n = loop.segments;
  path.points.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    const double a = two_pi * turns * static_cast<double>(k) / n;
    path.points.push_back(Vec3{loop.center[0] + loop.radius * std::cos(a),
                               loop.center[1] + loop.radius * std::sin(a),
                               loop.center[2]});
  }
  if (closed) path.points.back() = path.points.front();
  path.closed = closed;
  return path;
}

inline json family_summary(const RunConfig& cfg) {
  json fam;
  fam["kind"] = cfg.family_kind;
  if (cfg.family_kind == "spin-half") {
    fam["mu_b"] = cfg.family_parameters.at("mu_b").get<double>();
    fam["theta"] = cfg.family_parameters.at("theta").get<double>();
  }
  return fam;
}

}  // namespace rundetail

inline void cmd_berry(const RunConfig& cfg, const std::filesystem::path& out,
                      bool quiet) {
  const HamiltonianFamily f = family_from_config(cfg);
  const EigenFrame fr = eigenframe(f, cfg.n_grid, preferred_gauge(f));
  const double gamma = berry_phase(fr, cfg.level);

  json j;
  j["command"] = "berry";
  j["family"] = rundetail::family_summary(cfg);
  j["level"] = cfg.level;
  j["n_grid"] = cfg.n_grid;
  j["gamma"] = gamma;
  j["factor_re"] = std::cos(gamma);
  j["factor_im"] = std::sin(gamma);
  rundetail::write_json(out / "berry.json", j);
  rundetail::write_meta(out, "berry");
  if (!quiet) std::cout << "berry: gamma = " << fmt17(gamma) << "\n";
}

inline void cmd_evolve(const RunConfig& cfg, const std::filesystem::path& out,
                       bool quiet) {
  require_config(cfg.has_evolution, "evolve: config needs an \"evolution\" block");
  const HamiltonianFamily f = family_from_config(cfg);
  const FrameGauge gauge = preferred_gauge(f);

  Trajectory tr;
  if (cfg.evolution_method == "volterra" || cfg.evolution_method == "rotating-ode") {
    const EigenFrame fr = eigenframe(f, rotating_frame_points(cfg.evolution), gauge);
    const ComplexVector phi0 = fr.vectors[static_cast<std::size_t>(cfg.level)][0];
    tr = cfg.evolution_method == "volterra"
             ? evolve_rotating_volterra(fr, phi0, cfg.evolution.T, cfg.evolution)
             : evolve_rotating_ode(fr, phi0, cfg.evolution.T, cfg.evolution);
  } else {
    const EigenFrame fr = eigenframe(f, 65, gauge);
    const ComplexVector psi0 = fr.vectors[static_cast<std::size_t>(cfg.level)][0];
    tr = evolve_lab(f, psi0, cfg.evolution);
  }

  CsvTable t;
  t.header = {"s"};
  for (int n = 0; n < f.dim; ++n) {
    t.header.push_back("re_" + std::to_string(n));
    t.header.push_back("im_" + std::to_string(n));
  }
  t.header.push_back("frame");
  t.header.push_back("T");
  for (std::size_t k = 0; k < tr.grid.size(); ++k) {
    std::vector<std::string> row{fmt17(tr.grid[k])};
    for (const cplx& z : tr.states[k]) {
      row.push_back(fmt17(z.real()));
      row.push_back(fmt17(z.imag()));
    }
    row.push_back(tr.frame_tag);
    row.push_back(fmt17(cfg.evolution.T));
    t.rows.push_back(std::move(row));
  }
  write_text_file(out / "trajectory.csv", render_csv(t));
  rundetail::write_meta(out, "evolve");
  if (!quiet)
    std::cout << "evolve: " << tr.grid.size() << " rows (" << tr.frame_tag
              << " frame)\n";
}

inline void cmd_sweep(const RunConfig& cfg, const std::filesystem::path& out,
                      bool quiet) {
  require_config(!cfg.sweep.empty(), "sweep: config needs a \"sweep\" T list");
  const HamiltonianFamily f = family_from_config(cfg);
  const SweepResult res = adiabatic_sweep(f, cfg.level, cfg.sweep);

  CsvTable t;
  t.header = {"T",
              "fidelity_error",
              "transition_prob",
              "peak_transition_prob",
              "geometric_phase_error",
              "ok"};
  json entries = json::array();
  for (const SweepEntry& e : res.entries) {
    t.rows.push_back({fmt17(e.T), fmt17(e.fidelity_error), fmt17(e.transition_prob),
                      fmt17(e.peak_transition_prob), fmt17(e.geometric_phase_error),
                      e.ok ? "1" : "0"});
    json je;
    je["T"] = e.T;
    je["fidelity_error"] = e.fidelity_error;
    je["transition_prob"] = e.transition_prob;
    je["peak_transition_prob"] = e.peak_transition_prob;
    je["geometric_phase_error"] = e.geometric_phase_error;
    je["ok"] = e.ok;
    je["note"] = e.note;
    entries.push_back(je);
  }
  write_text_file(out / "sweep.csv", render_csv(t));
  json j;
  j["command"] = "sweep";
  j["family"] = rundetail::family_summary(cfg);
  j["level"] = cfg.level;
  j["entries"] = entries;
  rundetail::write_json(out / "sweep.json", j);
  rundetail::write_meta(out, "sweep");
  if (!quiet) std::cout << "sweep: " << res.entries.size() << " entries\n";
}

inline void cmd_ms_check(const RunConfig& cfg, const std::filesystem::path& out,
                         bool quiet) {
  const HamiltonianFamily f = family_from_config(cfg);
  const EigenFrame fr = eigenframe(f, cfg.n_grid, preferred_gauge(f));
  const MsReport rep = ms_check(fr, cfg.level);

  CsvTable t;
  t.header = {"s", "lhs_re", "lhs_im", "lhs_abs", "rhs_re", "rhs_im", "rhs_abs", "gap"};
  for (std::size_t k = 0; k < rep.grid.size(); ++k)
    t.rows.push_back({fmt17(rep.grid[k]), fmt17(rep.lhs[k].real()),
                      fmt17(rep.lhs[k].imag()), fmt17(std::abs(rep.lhs[k])),
                      fmt17(rep.rhs[k].real()), fmt17(rep.rhs[k].imag()),
                      fmt17(std::abs(rep.rhs[k])), fmt17(rep.gap[k])});
  write_text_file(out / "ms.csv", render_csv(t));

  json j;
  j["command"] = "ms-check";
  j["family"] = rundetail::family_summary(cfg);
  j["level"] = cfg.level;
  j["n_grid"] = cfg.n_grid;
  j["worst_gap"] = rep.worst_gap();
  rundetail::write_json(out / "ms.json", j);
  rundetail::write_meta(out, "ms-check");
  if (!quiet) std::cout << "ms-check: worst gap = " << fmt17(rep.worst_gap()) << "\n";
}

inline void cmd_probe(const RunConfig& cfg, const std::filesystem::path& out,
                      bool quiet) {
  require_config(!cfg.sweep.empty(), "probe: config needs a \"sweep\" T list");
  const HamiltonianFamily f = family_from_config(cfg);
  const EigenFrame fr = eigenframe(f, cfg.n_grid, preferred_gauge(f));
  const std::vector<ProbeEntry> entries =
      limit_commutation_probe(fr, cfg.probe_s, cfg.sweep, cfg.level);

  CsvTable t;
  t.header = {"T", "state_gap", "derivative_gap"};
  json je = json::array();
  for (const ProbeEntry& e : entries) {
    t.rows.push_back({fmt17(e.T), fmt17(e.state_gap), fmt17(e.derivative_gap)});
    json row;
    row["T"] = e.T;
    row["state_gap"] = e.state_gap;
    row["derivative_gap"] = e.derivative_gap;
    je.push_back(row);
  }
  write_text_file(out / "probe.csv", render_csv(t));

  json j;
  j["command"] = "probe";
  j["family"] = rundetail::family_summary(cfg);
  j["level"] = cfg.level;
  j["s"] = cfg.probe_s;
  j["n_grid"] = cfg.n_grid;
  j["restriction_residual"] = restriction_residual(fr);
  j["entries"] = je;
  rundetail::write_json(out / "probe.json", j);
  rundetail::write_meta(out, "probe");
  if (!quiet) std::cout << "probe: " << entries.size() << " entries\n";
}

inline void cmd_ab(const RunConfig& cfg, const std::filesystem::path& out, bool quiet) {
  const VectorPotential pot = potential_from_config(cfg);
  const LoopConfig loop = loop_from_config(cfg.family_parameters);

  CsvTable t;
  t.header = {"turns", "line_integral", "factor_re", "factor_im"};
  json rows = json::array();
  for (double turns : loop.turns) {
    const PathPolyline path = rundetail::circle_path(loop, turns);
    const double integral = line_integral(pot, path);
    const cplx factor = phase_factor_line_integral(pot, path);
    t.rows.push_back(
        {fmt17(turns), fmt17(integral), fmt17(factor.real()), fmt17(factor.imag())});
    json row;
    row["turns"] = turns;
    row["line_integral"] = integral;
    row["factor_re"] = factor.real();
    row["factor_im"] = factor.imag();
    rows.push_back(row);
  }
  write_text_file(out / "ab.csv", render_csv(t));

  json j;
  j["command"] = "ab";
  j["kind"] = cfg.family_kind;
  j["coupling"] = pot.coupling;
  if (cfg.family_kind == "solenoid") j["flux"] = pot.flux;
  j["rows"] = rows;
  rundetail::write_json(out / "ab.json", j);
  rundetail::write_meta(out, "ab");
  if (!quiet) std::cout << "ab: " << loop.turns.size() << " loops\n";
}

inline void cmd_monopole(const RunConfig& cfg, const std::filesystem::path& out,
                         bool quiet) {
  require_config(cfg.family_kind == "monopole",
                 "monopole: config family.kind must be \"monopole\"");
  const json& p = cfg.family_parameters;
  const int segments = cfgdetail::get_int_or(p, "segments", 256, "family.parameters");

  CsvTable t;
  t.header = {"e", "g", "flux", "quantized"};
  json results = json::array();
  for (const json& pair : p.at("pairs")) {
    const double e = pair.at(0).get<double>();
    const double g = pair.at(1).get<double>();
    const MonopoleReport rep = monopole_quantization_check(g, e, segments);
    t.rows.push_back(
        {fmt17(e), fmt17(g), fmt17(rep.flux), rep.quantized ? "1" : "0"});
    json row;
    row["e"] = e;
    row["g"] = g;
    row["flux"] = rep.flux;
    row["quantized"] = rep.quantized;
    results.push_back(row);
  }
  write_text_file(out / "monopole.csv", render_csv(t));

  json j;
  j["command"] = "monopole";
  j["segments"] = segments;
  j["results"] = results;
  if (results.size() == 1) {
    j["flux"] = results.at(0).at("flux");
    j["quantized"] = results.at(0).at("quantized");
  }
  rundetail::write_json(out / "monopole.json", j);
  rundetail::write_meta(out, "monopole");
  if (!quiet) std::cout << "monopole: " << results.size() << " pairs\n";
}

inline int guarded(const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const precondition_error& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return 4;
  } catch (const numeric_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace adlab
