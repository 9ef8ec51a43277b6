#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "adlab/eigenframe.hpp"
#include "adlab/errors.hpp"
#include "adlab/hamiltonian.hpp"
#include "adlab/linalg.hpp"
#include "adlab/phases.hpp"
#include "adlab/propagate.hpp"
#include "adlab/tolerances.hpp"
#include "adlab/zoo.hpp"

namespace adlab {

namespace detail {

inline int thread_cap_from_env(int n_tasks) {
  int cap = static_cast<int>(std::thread::hardware_concurrency());
  if (cap < 1) cap = 1;
  if (const char* env = std::getenv("ADIABATIC_LAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    require_config(end != env && *end == '\0' && v >= 1 && v <= 4096,
                   "ADIABATIC_LAB_THREADS must be a positive integer");
    cap = static_cast<int>(v);
  }
  return std::min(cap, n_tasks);
}

// Runs body(0..n_tasks-1), possibly across worker threads. Results must be
// written to caller-owned slots indexed by task so the outcome does not
// depend on scheduling.
template <class Fn>
void run_indexed(int n_tasks, Fn&& body) {
  if (n_tasks <= 0) return;
  const int n_threads = thread_cap_from_env(n_tasks);
  if (n_threads <= 1) {
    for (int i = 0; i < n_tasks; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_lock;
  const auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n_tasks) return;
      try {
        body(i);
      } catch (...) {
        const std::lock_guard<std::mutex> hold(error_lock);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n_threads));
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

struct MsReport {
  std::vector<double> grid;
  std::vector<cplx> lhs;
  std::vector<cplx> rhs;
  std::vector<double> gap;

  double worst_gap() const {
    double w = 0.0;
    for (double g : gap) w = std::max(w, g);
    return w;
  }
};

// Both sides of the overlap identity <m(0)|m(s)> =? exp[int_0^s <m|dm>]:
// the left side is an eigenvector overlap, the right side exponentiates the
// accumulated connection and always has unit modulus.
inline MsReport ms_check(const EigenFrame& fr, int m) {
  require_pre(m >= 0 && m < fr.dim, "ms_check: level out of range");
  const std::vector<cplx> connection = berry_connection(fr, m);
  const std::vector<cplx> accumulated = cumulative_trapezoid(fr, connection);

  MsReport rep;
  rep.grid = fr.grid;
  rep.lhs.resize(fr.grid.size());
  rep.rhs.resize(fr.grid.size());
  rep.gap.resize(fr.grid.size());
  const ComplexVector& start = fr.vectors[static_cast<std::size_t>(m)][0];
  for (std::size_t k = 0; k < fr.grid.size(); ++k) {
    const double angle = accumulated[k].imag();
    rep.lhs[k] = inner(start, fr.vectors[static_cast<std::size_t>(m)][k]);
    rep.rhs[k] = cplx{std::cos(angle), std::sin(angle)};
    rep.gap[k] = std::abs(rep.lhs[k] - rep.rhs[k]);
  }
  return rep;
}

inline double restriction_residual(const EigenFrame& fr) {
  double worst = 0.0;
  for (int n = 0; n < fr.dim; ++n)
    for (int m = 0; m < fr.dim; ++m) {
      if (n == m) continue;
      for (const cplx& c : offdiag_coupling(fr, n, m))
        worst = std::max(worst, std::abs(c));
    }
  return worst;
}

struct AppendixAReport {
  double residual_a1 = 0.0;
  double eq12_residual = 0.0;
  double eq13_gap = 0.0;
};

// residual_a1 measures how far each eigenvector derivative sticks out of its
// own ray; eq12_residual is the worst off-diagonal coupling; eq13_gap is the
// worst failure of the overlap identity. The first two vanish together, and
// either vanishing forces the third to vanish.
inline AppendixAReport appendix_a_harness(const EigenFrame& fr) {
  AppendixAReport rep;
  for (int m = 0; m < fr.dim; ++m) {
    const auto& vs = fr.vectors[static_cast<std::size_t>(m)];
    for (std::size_t k = 0; k < fr.grid.size(); ++k) {
      const ComplexVector d = frame_derivative(fr, m, k);
      const cplx a = inner(vs[k], d);
      rep.residual_a1 = std::max(rep.residual_a1, norm(sub(d, scaled(vs[k], a))));
    }
    rep.eq13_gap = std::max(rep.eq13_gap, ms_check(fr, m).worst_gap());
  }
  rep.eq12_residual = restriction_residual(fr);
  return rep;
}

inline ComplexVector adiabatic_reference_state(const EigenFrame& fr, int m, double T,
                                               std::size_t k) {
  require_pre(m >= 0 && m < fr.dim, "adiabatic_reference_state: level out of range");
  require_pre(k < fr.grid.size(), "adiabatic_reference_state: index out of range");
  const cplx geometric = limit_coefficient(fr, m, k);
  const double angle = T * fr.energy_integral[static_cast<std::size_t>(m)][k];
  const cplx dynamical{std::cos(angle), -std::sin(angle)};
  return scaled(fr.vectors[static_cast<std::size_t>(m)][k], dynamical * geometric);
}

struct ProbeEntry {
  double T = 0.0;
  double state_gap = 0.0;
  double derivative_gap = 0.0;
};

// Compares the finite-T rotating-frame solution against its T -> infinity
// limit at one interior point: the states converge, while the derivative of
// the finite-T solution keeps the full off-diagonal drive that the limit
// lacks, so the two derivative fields need not approach each other.
inline std::vector<ProbeEntry> limit_commutation_probe(const EigenFrame& fr,
                                                       double s_probe,
                                                       const std::vector<double>& T_list,
                                                       int m = 0) {
  require_pre(m >= 0 && m < fr.dim, "limit_commutation_probe: level out of range");
  require_pre(!T_list.empty(), "limit_commutation_probe: empty T list");
  for (std::size_t i = 0; i + 1 < T_list.size(); ++i)
    require_pre(T_list[i] < T_list[i + 1], "limit_commutation_probe: T list must ascend");
  for (double T : T_list)
    require_config(std::isfinite(T) && T >= 0.0,
                   "limit_commutation_probe: T must be finite and nonnegative");
  require_pre(fr.n_points() % 2 == 1,
              "limit_commutation_probe: frame must hold midpoints (odd point count)");

  const std::size_t fk = grid_index(fr, s_probe);
  require_pre(fk > 0 && fk + 1 < fr.grid.size(),
              "limit_commutation_probe: probe point must be interior");
  require_pre(fk % 2 == 0, "limit_commutation_probe: probe point must be a step node");
  const int n_steps = (fr.n_points() - 1) / 2;
  const std::size_t coarse = fk / 2;

  const ComplexVector phi0 = fr.vectors[static_cast<std::size_t>(m)][0];
  const cplx limit_coeff = limit_coefficient(fr, m, fk);
  const ComplexVector d_probe = frame_derivative(fr, m, fk);
  const cplx connection{0.0,
                        inner(fr.vectors[static_cast<std::size_t>(m)][fk], d_probe).imag()};

  std::vector<ProbeEntry> entries(T_list.size());
  detail::run_indexed(static_cast<int>(T_list.size()), [&](int i) {
    const double T = T_list[static_cast<std::size_t>(i)];
    EvolutionConfig cfg;
    cfg.T = T;
    cfg.n_steps = n_steps;
    const Trajectory tr = evolve_rotating_volterra(fr, phi0, T, cfg);

    ComplexVector coeff(static_cast<std::size_t>(fr.dim));
    for (int n = 0; n < fr.dim; ++n)
      coeff[static_cast<std::size_t>(n)] =
          inner(fr.vectors[static_cast<std::size_t>(n)][0], tr.states[coarse]);

    ComplexVector limit_vec(static_cast<std::size_t>(fr.dim));
    limit_vec[static_cast<std::size_t>(m)] = limit_coeff;

    const ComplexMatrix kernel = kernel_KT(fr, T, s_probe).matrix;
    const ComplexVector d_finite = matvec(kernel, coeff);
    ComplexVector d_limit(static_cast<std::size_t>(fr.dim));
    d_limit[static_cast<std::size_t>(m)] = connection * limit_coeff;

    ProbeEntry& e = entries[static_cast<std::size_t>(i)];
    e.T = T;
    e.state_gap = norm(sub(coeff, limit_vec));
    e.derivative_gap = norm(sub(d_finite, d_limit));
  });
  return entries;
}

struct SweepEntry {
  double T = 0.0;
  double fidelity_error = std::numeric_limits<double>::quiet_NaN();
  double transition_prob = std::numeric_limits<double>::quiet_NaN();
  double peak_transition_prob = std::numeric_limits<double>::quiet_NaN();
  double geometric_phase_error = std::numeric_limits<double>::quiet_NaN();
  bool ok = false;
  std::string note;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
};

namespace detail {

inline int sweep_steps(double T, double spread, double osc_resolution) {
  const double need = osc_resolution * T * spread / two_pi;
  // The integrator's per-step amplitude defect is O((h T E)^6), so holding the
  // accumulated norm decay under ~1e-9 needs n to grow a bit faster than T.
  const double norm_floor = 16.0 * std::pow(std::max(T * spread, 1.0), 1.2);
  const double want = std::max({4096.0, 8.0 * need, norm_floor});
  int n = 4096;
  while (static_cast<double>(n) < want && n < (1 << 20)) n *= 2;
  return n;
}

}  // namespace detail

inline SweepResult adiabatic_sweep(const HamiltonianFamily& f, int m,
                                   const std::vector<double>& T_list) {
  require_pre(m >= 0 && m < f.dim, "adiabatic_sweep: level out of range");
  require_pre(!T_list.empty(), "adiabatic_sweep: empty T list");
  for (std::size_t i = 0; i + 1 < T_list.size(); ++i)
    require_pre(T_list[i] < T_list[i + 1], "adiabatic_sweep: T list must ascend");
  for (double T : T_list)
    require_config(std::isfinite(T) && T > 0.0,
                   "adiabatic_sweep: T must be finite and positive");

  const double spread = detail::sampled_spread(f, 65);
  SweepResult res;
  res.entries.resize(T_list.size());
  detail::run_indexed(static_cast<int>(T_list.size()), [&](int i) {
    SweepEntry& entry = res.entries[static_cast<std::size_t>(i)];
    entry.T = T_list[static_cast<std::size_t>(i)];
    try {
      EvolutionConfig cfg;
      cfg.T = entry.T;
      cfg.n_steps = detail::sweep_steps(entry.T, spread, cfg.osc_resolution);
      const EigenFrame fr = eigenframe(f, cfg.n_steps + 1, preferred_gauge(f));
      const Trajectory tr = evolve_lab(f, fr.vectors[static_cast<std::size_t>(m)][0], cfg);

      const ComplexVector& end = tr.states.back();
      const std::size_t last = fr.grid.size() - 1;
      const ComplexVector ref = adiabatic_reference_state(fr, m, entry.T, last);
      entry.fidelity_error = std::max(0.0, 1.0 - std::abs(inner(ref, end)));

      double peak = 0.0;
      for (std::size_t k = 0; k < tr.states.size(); ++k) {
        double leak = 0.0;
        for (int n = 0; n < fr.dim; ++n) {
          if (n == m) continue;
          leak += std::norm(inner(fr.vectors[static_cast<std::size_t>(n)][k],
                                  tr.states[k]));
        }
        peak = std::max(peak, leak);
        if (k == tr.states.size() - 1) entry.transition_prob = leak;
      }
      entry.peak_transition_prob = peak;
      entry.ok = true;

      // Extraction needs a nearly cyclic run; entries too fast for that still
      // report their fidelity and leakage.
      try {
        const PhaseReport rep = extract_geometric_phase(tr, fr, m, entry.T);
        entry.geometric_phase_error = std::abs(rep.geometric_phase - berry_phase(fr, m));
      } catch (const precondition_error&) {
        entry.geometric_phase_error = std::numeric_limits<double>::quiet_NaN();
      }
    } catch (const std::exception& err) {
      entry.ok = false;
      entry.note = err.what();
    }
  });
  return res;
}

struct Theorem3Row {
  double theta = 0.0;
  double residual = 0.0;
  bool zero_residual = false;
  double gamma = 0.0;
  cplx factor{1.0, 0.0};
};

// Scans the polar angle: wherever the cross coupling <up|d/ds down> vanishes
// the Berry phase lands on a multiple of 2 pi, so its exponential factor is 1.
inline std::vector<Theorem3Row> theorem3_demo(double mu_b,
                                              const std::vector<double>& theta_grid) {
  require_config(std::isfinite(mu_b) && mu_b > 0.0, "theorem3_demo: mu_b must be positive");
  require_pre(!theta_grid.empty(), "theorem3_demo: empty theta grid");

  std::vector<Theorem3Row> rows(theta_grid.size());
  detail::run_indexed(static_cast<int>(theta_grid.size()), [&](int i) {
    const double theta = theta_grid[static_cast<std::size_t>(i)];
    SpinHalfParams p;
    p.mu_b = mu_b;
    p.theta = theta;
    const EigenFrame fr =
        eigenframe(build_spin_half(p), 4097, FrameGauge::analytic_spin_half);

    Theorem3Row& row = rows[static_cast<std::size_t>(i)];
    row.theta = theta;
    for (const cplx& c : offdiag_coupling(fr, 1, 0))
      row.residual = std::max(row.residual, std::abs(c));
    row.zero_residual = row.residual <= tol::residual_gate_abs;
    row.gamma = berry_phase(fr, 1);
    row.factor = cplx{std::cos(row.gamma), std::sin(row.gamma)};
  });
  return rows;
}

}  // namespace adlab
