#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "adlab/config.hpp"
#include "adlab/eigenframe.hpp"
#include "adlab/gauge_field.hpp"
#include "adlab/hamiltonian.hpp"
#include "adlab/io.hpp"
#include "adlab/phases.hpp"
#include "adlab/propagate.hpp"
#include "adlab/runner.hpp"
#include "adlab/verify.hpp"
#include "adlab/zoo.hpp"

#include "oracles.hpp"

namespace adlab::acceptance {

inline constexpr double pi = 0.5 * two_pi;

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = true;
  std::string detail;
};

namespace detail {

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

struct Check {
  bool pass = true;
  std::string detail;

  void expect(bool cond, const std::string& msg) {
    if (cond) return;
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += msg;
  }

  CriterionResult done(int id, const std::string& name) const {
    CriterionResult r;
    r.id = id;
    r.name = name;
    r.pass = pass;
    r.detail = pass ? "ok" : detail;
    return r;
  }
};

inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline HamiltonianFamily spin(double theta) {
  SpinHalfParams p;
  p.mu_b = 1.0;
  p.theta = theta;
  return build_spin_half(p);
}

inline PathPolyline circle(double radius, double cx, double cy, int segments,
                           double turn_begin, double turn_end) {
  PathPolyline path;
  path.points.reserve(static_cast<std::size_t>(segments) + 1);
  for (int k = 0; k <= segments; ++k) {
    const double a =
        two_pi * (turn_begin + (turn_end - turn_begin) * static_cast<double>(k) / segments);
    path.points.push_back(Vec3{cx + radius * std::cos(a), cy + radius * std::sin(a), 0.0});
  }
  const double span = std::abs(turn_end - turn_begin);
  path.closed = std::abs(span - std::round(span)) < 1e-12 && span > 0.0;
  if (path.closed) path.points.back() = path.points.front();
  return path;
}

}  // namespace detail

inline CriterionResult c1_berry_closed_form() {
  detail::Check c;
  for (double theta : {0.0, pi / 6.0, pi / 4.0, pi / 2.0, 2.0 * pi / 3.0, pi}) {
    const EigenFrame fr =
        eigenframe(detail::spin(theta), 4097, FrameGauge::analytic_spin_half);
    const double got = berry_phase(fr, 1);
    const double want = -pi * (1.0 - std::cos(theta));
    c.expect(std::abs(got - want) <= 1e-8,
             "theta=" + detail::num(theta) + ": gamma=" + detail::num(got) +
                 " want " + detail::num(want));
  }
  return c.done(1, "berry closed form");
}

inline CriterionResult c2_theorem3_poles() {
  detail::Check c;
  const std::vector<double> thetas{0.0, pi / 6.0, pi / 4.0, pi / 2.0,
                                   2.0 * pi / 3.0, pi};
  const std::vector<Theorem3Row> rows = theorem3_demo(1.0, thetas);
  for (const Theorem3Row& r : rows) {
    const bool pole = r.theta == 0.0 || r.theta == pi;
    c.expect(r.zero_residual == pole,
             "theta=" + detail::num(r.theta) + ": zero_residual=" +
                 (r.zero_residual ? "true" : "false"));
    if (!pole) continue;
    const double want_gamma = r.theta == 0.0 ? 0.0 : -two_pi;
    c.expect(std::abs(r.gamma - want_gamma) <= 1e-10,
             "theta=" + detail::num(r.theta) + ": gamma=" + detail::num(r.gamma));
    c.expect(std::abs(r.factor - cplx{1.0, 0.0}) <= 1e-10,
             "theta=" + detail::num(r.theta) +
                 ": |factor-1|=" + detail::num(std::abs(r.factor - cplx{1.0, 0.0})));
  }
  return c.done(2, "theorem3 poles");
}

inline CriterionResult c3_ms_contrast() {
  detail::Check c;
  const EigenFrame fr =
      eigenframe(detail::spin(pi / 2.0), 4097, FrameGauge::analytic_spin_half);
  const MsReport rep = ms_check(fr, 1);
  const std::size_t mid = 2048;
  c.expect(std::abs(rep.grid[mid] - 0.5) < 1e-15, "midpoint node missing");
  c.expect(std::abs(rep.lhs[mid]) <= 1e-10,
           "|lhs|=" + detail::num(std::abs(rep.lhs[mid])));
  c.expect(std::abs(std::abs(rep.rhs[mid]) - 1.0) <= 1e-10,
           "|rhs|=" + detail::num(std::abs(rep.rhs[mid])));
  c.expect(rep.gap[mid] >= 0.99, "gap=" + detail::num(rep.gap[mid]));

  const EigenFrame po = phase_only_frame(32769);
  for (int n = 0; n < po.dim; ++n) {
    const double worst = ms_check(po, n).worst_gap();
    c.expect(worst <= 1e-8,
             "phase-only level " + std::to_string(n) + ": gap=" + detail::num(worst));
  }
  return c.done(3, "ms contrast");
}

inline CriterionResult c4_zoo_equivalence() {
  detail::Check c;
  for (const ZooMember& member : family_zoo(4097)) {
    const AppendixAReport rep = appendix_a_harness(member.frame);
    const bool a_small = rep.residual_a1 <= 1e-8;
    const bool e_small = rep.eq12_residual <= 1e-8;
    c.expect(a_small == e_small,
             member.name + ": a1=" + detail::num(rep.residual_a1) +
                 " eq12=" + detail::num(rep.eq12_residual));
  }
  return c.done(4, "zoo equivalence");
}

inline CriterionResult c5_propagator_agreement() {
  detail::Check c;
  for (double T : {1.0, 10.0, 50.0}) {
    for (double theta : {pi / 4.0, pi / 2.0}) {
      const HamiltonianFamily f = detail::spin(theta);
      EvolutionConfig cfg;
      cfg.T = T;
      cfg.n_steps = 1 << 14;
      while (cfg.n_steps < 2048.0 * T) cfg.n_steps *= 2;
      const EigenFrame fr = eigenframe(f, rotating_frame_points(cfg),
                                       FrameGauge::analytic_spin_half);
      const ComplexVector psi0 = fr.vectors[1][0];

      const Trajectory lab = evolve_lab(f, psi0, cfg);
      const Trajectory ode = evolve_rotating_ode(fr, psi0, T, cfg);
      const Trajectory vol = evolve_rotating_volterra(fr, psi0, T, cfg);

      double align_gap = 0.0, direct_gap = 0.0, norm_gap = 0.0;
      const std::size_t stride = lab.grid.size() / 16;
      for (std::size_t k = 0; k < lab.grid.size(); k += stride) {
        const ComplexMatrix u = adiabatic_map(fr, T, lab.grid[k]);
        align_gap = std::max(
            align_gap, norm(sub(lab.states[k], matvec(u, ode.states[k]))));
        align_gap = std::max(
            align_gap, norm(sub(lab.states[k], matvec(u, vol.states[k]))));
        direct_gap = std::max(direct_gap, norm(sub(ode.states[k], vol.states[k])));
        for (const Trajectory* tr : {&lab, &ode, &vol})
          norm_gap = std::max(norm_gap, std::abs(adlab::norm(tr->states[k]) - 1.0));
      }
      const std::string tag = "T=" + detail::num(T) + " theta=" + detail::num(theta);
      c.expect(align_gap <= 1e-6, tag + ": aligned gap=" + detail::num(align_gap));
      c.expect(direct_gap <= 1e-6, tag + ": rotating gap=" + detail::num(direct_gap));
      c.expect(norm_gap <= 1e-8, tag + ": norm drift=" + detail::num(norm_gap));
    }
  }
  return c.done(5, "propagator agreement");
}

inline CriterionResult c6_oracle_match() {
  detail::Check c;
  const double theta = pi / 2.0;
  const HamiltonianFamily f = detail::spin(theta);
  EvolutionConfig cfg;
  cfg.T = 10.0;
  cfg.n_steps = 1 << 14;
  const EigenFrame fr = eigenframe(f, 65, FrameGauge::analytic_spin_half);
  const ComplexVector psi0 = fr.vectors[1][0];
  const Trajectory lab = evolve_lab(f, psi0, cfg);
  double worst = 0.0;
  for (std::size_t k = 0; k < lab.grid.size(); k += 256)
    worst = std::max(worst, norm(sub(lab.states[k],
                                     oracle::rabi_state(1.0, theta, cfg.T, psi0,
                                                        lab.grid[k]))));
  worst = std::max(worst, norm(sub(lab.states.back(),
                                   oracle::rabi_state(1.0, theta, cfg.T, psi0, 1.0))));
  c.expect(worst <= 1e-8, "worst oracle gap=" + detail::num(worst));
  return c.done(6, "closed-form oracle match");
}

inline CriterionResult c7_sweep_convergence() {
  detail::Check c;
  const std::vector<double> T_list{25.0, 50.0, 100.0, 200.0, 400.0};
  const SweepResult res = adiabatic_sweep(detail::spin(pi / 2.0), 1, T_list);
  std::vector<double> ts, peaks;
  for (std::size_t i = 0; i < 4; ++i) {
    c.expect(res.entries[i].ok, "entry T=" + detail::num(T_list[i]) + " not ok");
    ts.push_back(res.entries[i].T);
    peaks.push_back(res.entries[i].peak_transition_prob);
  }
  const double slope = detail::loglog_slope(ts, peaks);
  c.expect(slope <= -1.5, "transition slope=" + detail::num(slope));
  const SweepEntry& back = res.entries.back();
  c.expect(back.ok, "entry T=400 not ok");
  c.expect(std::isfinite(back.geometric_phase_error) &&
               back.geometric_phase_error <= 0.05,
           "geometric phase error=" + detail::num(back.geometric_phase_error));
  return c.done(7, "adiabatic sweep convergence");
}

inline CriterionResult c8_probe_dichotomy() {
  detail::Check c;
  const std::vector<double> T_list{50.0, 100.0, 200.0, 400.0};
  const EigenFrame fr =
      eigenframe(detail::spin(pi / 2.0), 65537, FrameGauge::analytic_spin_half);
  const std::vector<ProbeEntry> entries = limit_commutation_probe(fr, 0.5, T_list, 1);
  for (std::size_t i = 0; i + 1 < entries.size(); ++i)
    c.expect(entries[i + 1].state_gap <= 1.10 * entries[i].state_gap + 1e-12,
             "state gap not decreasing at T=" + detail::num(entries[i + 1].T));
  for (const ProbeEntry& e : entries)
    c.expect(e.derivative_gap >= 0.5 * pi && e.derivative_gap <= 1.5 * pi,
             "T=" + detail::num(e.T) +
                 ": derivative gap=" + detail::num(e.derivative_gap));

  const EigenFrame fr0 =
      eigenframe(detail::spin(0.0), 8193, FrameGauge::analytic_spin_half);
  for (const ProbeEntry& e : limit_commutation_probe(fr0, 0.5, T_list, 1)) {
    c.expect(e.state_gap <= 1e-8,
             "theta=0 T=" + detail::num(e.T) + ": state gap=" + detail::num(e.state_gap));
    c.expect(e.derivative_gap <= 1e-8,
             "theta=0 T=" + detail::num(e.T) +
                 ": derivative gap=" + detail::num(e.derivative_gap));
  }
  return c.done(8, "limit-commutation dichotomy");
}

inline CriterionResult c9_solenoid_loops() {
  detail::Check c;
  for (double flux : {0.0, 1.0, pi}) {
    const VectorPotential pot = solenoid_potential(flux, 1.0);
    const cplx want{std::cos(flux), std::sin(flux)};
    const std::string tag = "flux=" + detail::num(flux);

    const cplx around =
        phase_factor_line_integral(pot, detail::circle(1.0, 0.0, 0.0, 256, 0.0, 1.0));
    c.expect(std::abs(around - want) <= 1e-6,
             tag + ": winding-1 gap=" + detail::num(std::abs(around - want)));

    const cplx outside =
        phase_factor_line_integral(pot, detail::circle(1.0, 3.0, 0.0, 256, 0.0, 1.0));
    c.expect(std::abs(outside - cplx{1.0, 0.0}) <= 1e-6,
             tag + ": non-encircling gap=" +
                 detail::num(std::abs(outside - cplx{1.0, 0.0})));

    const cplx upper =
        phase_factor_line_integral(pot, detail::circle(1.0, 0.0, 0.0, 128, 0.0, 0.5));
    const cplx lower =
        phase_factor_line_integral(pot, detail::circle(1.0, 0.0, 0.0, 128, 0.0, -0.5));
    const cplx rel = upper * std::conj(lower);
    c.expect(std::abs(rel - want) <= 1e-6,
             tag + ": path-dependence gap=" + detail::num(std::abs(rel - want)));
  }
  return c.done(9, "solenoid loop phases");
}

inline CriterionResult c10_monopole_quantization() {
  detail::Check c;
  const std::vector<std::array<double, 2>> pairs{{1.0, 0.0},  {1.0, 0.3}, {1.0, 0.5},
                                                 {1.0, 1.0},  {2.0, 0.25}, {0.5, 1.0},
                                                 {1.3, 0.5}};
  for (const auto& [e, g] : pairs) {
    const MonopoleReport rep = monopole_quantization_check(g, e, 256);
    const double want = 2.0 * two_pi * g;
    const double err = want == 0.0 ? std::abs(rep.flux)
                                   : std::abs(rep.flux - want) / std::abs(want);
    const std::string tag = "e=" + detail::num(e) + " g=" + detail::num(g);
    c.expect(err <= 1e-6, tag + ": flux error=" + detail::num(err));
    const double two_eg = 2.0 * e * g;
    const bool integer = std::abs(two_eg - std::round(two_eg)) <= 1e-9;
    c.expect(rep.quantized == integer,
             tag + ": quantized=" + (rep.quantized ? "true" : "false"));
  }
  return c.done(10, "monopole quantization");
}

inline CriterionResult c11_aa_limit() {
  detail::Check c;
  const HamiltonianFamily f = detail::spin(pi / 2.0);
  const EigenFrame seed = eigenframe(f, 65, FrameGauge::analytic_spin_half);
  const ComplexVector psi0 = seed.vectors[1][0];
  const std::vector<double> T_list{50.0, 100.0, 200.0, 400.0};
  const std::vector<int> steps{1 << 12, 1 << 14, 1 << 16, 1 << 18};
  std::vector<double> dist;
  for (std::size_t i = 0; i < T_list.size(); ++i) {
    EvolutionConfig cfg;
    cfg.T = T_list[i];
    cfg.n_steps = steps[i];
    const Trajectory lab = evolve_lab(f, psi0, cfg);
    const double gamma = aa_phase(lab, f, cfg.T);
    dist.push_back(std::abs(std::remainder(gamma + pi, two_pi)));
  }
  for (std::size_t i = 0; i + 1 < dist.size(); ++i)
    c.expect(dist[i + 1] < dist[i],
             "distance not decreasing at T=" + detail::num(T_list[i + 1]) + " (" +
                 detail::num(dist[i]) + " -> " + detail::num(dist[i + 1]) + ")");
  c.expect(dist.back() <= 0.05, "distance at T=400: " + detail::num(dist.back()));
  return c.done(11, "aa phase adiabatic limit");
}

namespace detail {

inline RunConfig cfg_from(const std::string& text) {
  return parse_run_config(json::parse(text));
}

inline void emit_all(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::string spin_head =
      R"({"family":{"kind":"spin-half","parameters":{"mu_b":1.0,"theta":1.5707963267948966}})";
  cmd_berry(cfg_from(spin_head + R"(,"level":1,"grid":4097})"), dir, true);
  cmd_evolve(cfg_from(spin_head +
                      R"(,"level":0,"evolution":{"T":10.0,"n_steps":1024,"method":"rk4"}})"),
             dir, true);
  cmd_sweep(cfg_from(spin_head + R"(,"level":1,"sweep":[10.0,25.0]})"), dir, true);
  cmd_ms_check(cfg_from(spin_head + R"(,"level":1,"grid":4097})"), dir, true);
  cmd_probe(cfg_from(spin_head +
                     R"(,"level":1,"grid":4097,"probe":{"s":0.5},"sweep":[10.0,25.0]})"),
            dir, true);
  cmd_ab(cfg_from(R"({"family":{"kind":"solenoid","parameters":{"flux":3.141592653589793,)"
                  R"("coupling":1.0,"loop":{"radius":1.0,"segments":256,"turns":[1.0]}}}})"),
         dir, true);
  cmd_monopole(cfg_from(R"({"family":{"kind":"monopole","parameters":)"
                        R"({"pairs":[[1.0,0.5]],"segments":256}}})"),
               dir, true);
}

inline std::map<std::string, std::string> dir_bytes(const std::filesystem::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().filename() == "meta.json") continue;
    files[std::filesystem::relative(entry.path(), dir).generic_string()] =
        read_text_file(entry.path());
  }
  return files;
}

}  // namespace detail

inline CriterionResult c12_determinism(const std::filesystem::path& scratch) {
  detail::Check c;
  const std::filesystem::path a = scratch / "a";
  const std::filesystem::path b = scratch / "b";
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
  detail::emit_all(a);
  detail::emit_all(b);

  const auto files_a = detail::dir_bytes(a);
  const auto files_b = detail::dir_bytes(b);
  c.expect(!files_a.empty(), "no data files emitted");
  c.expect(files_a.size() == files_b.size(), "file sets differ between runs");
  for (const auto& [name, bytes] : files_a) {
    const auto it = files_b.find(name);
    if (it == files_b.end()) {
      c.expect(false, name + " missing from second run");
      continue;
    }
    c.expect(it->second == bytes, name + " differs between runs");
  }
  return c.done(12, "byte-stable reruns");
}

inline std::vector<CriterionResult> run_all(const std::filesystem::path& scratch) {
  std::vector<CriterionResult> results;
  results.push_back(c1_berry_closed_form());
  results.push_back(c2_theorem3_poles());
  results.push_back(c3_ms_contrast());
  results.push_back(c4_zoo_equivalence());
  results.push_back(c5_propagator_agreement());
  results.push_back(c6_oracle_match());
  results.push_back(c7_sweep_convergence());
  results.push_back(c8_probe_dichotomy());
  results.push_back(c9_solenoid_loops());
  results.push_back(c10_monopole_quantization());
  results.push_back(c11_aa_limit());
  results.push_back(c12_determinism(scratch));
  return results;
}

}  // namespace adlab::acceptance
