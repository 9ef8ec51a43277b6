#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "adlab/eigenframe.hpp"
#include "adlab/errors.hpp"
#include "adlab/hamiltonian.hpp"
#include "adlab/linalg.hpp"
#include "adlab/propagate.hpp"
#include "adlab/tolerances.hpp"

namespace adlab {

struct PhaseReport {
  double total_phase = 0.0;
  double dynamical_phase = 0.0;
  double geometric_phase = 0.0;
  double residual_overlap = 0.0;
};

inline double dynamical_phase(const EigenFrame& fr, int n, double T, double s_end) {
  require_pre(n >= 0 && n < fr.dim, "dynamical_phase: level out of range");
  require_config(std::isfinite(T), "dynamical_phase: T must be finite");
  const std::size_t k = grid_index(fr, s_end);
  return -T * fr.energy_integral[static_cast<std::size_t>(n)][k];
}

inline double berry_phase(const EigenFrame& fr, int n) {
  require_pre(fr.cyclic, "berry_phase: family is not cyclic");
  const std::vector<cplx> a = berry_connection(fr, n);
  const double h = fr.step();
  double line = 0.0;
  for (std::size_t k = 0; k + 1 < a.size(); ++k)
    line += 0.5 * h * (a[k].imag() + a[k + 1].imag());
  return -line + holonomy_angle(fr, n);
}

namespace detail {

inline double principal_angle(double x) {
  const double y = std::remainder(x, two_pi);
  return y;
}

// Nearest-branch continuation of arg(z_k) along a grid; assumes the true
// phase moves by less than pi per step, which step control guarantees.
inline double unwrap_step(double prev, cplx z) {
  const double raw = std::arg(z);
  return prev + principal_angle(raw - prev);
}

inline std::size_t frame_stride(const EigenFrame& fr, const Trajectory& traj) {
  const std::size_t fn = fr.grid.size() - 1;
  const std::size_t tn = traj.grid.size() - 1;
  require_pre(tn >= 1 && fn >= tn && fn % tn == 0,
              "phase extraction: frame grid does not refine the trajectory grid");
  return fn / tn;
}

}  // namespace detail

inline PhaseReport extract_geometric_phase(const Trajectory& traj, const EigenFrame& fr,
                                           int n, double T,
                                           double eps_cyc = tol::eps_cyclic) {
  require_pre(traj.frame_tag == "lab", "extract_geometric_phase: need a lab trajectory");
  require_pre(n >= 0 && n < fr.dim, "extract_geometric_phase: level out of range");
  require_pre(!traj.states.empty(), "extract_geometric_phase: empty trajectory");
  const std::size_t stride = detail::frame_stride(fr, traj);

  PhaseReport rep;
  rep.residual_overlap = std::abs(inner(traj.states.front(), traj.states.back()));
  require_pre(rep.residual_overlap >= 1.0 - eps_cyc,
              "extract_geometric_phase: evolution is not cyclic within tolerance");

  const auto& vs = fr.vectors[static_cast<std::size_t>(n)];
  double phase = 0.0;
  bool first = true;
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const cplx z = inner(vs[k * stride], traj.states[k]);
    require_num(std::abs(z) > 1e-9,
                "extract_geometric_phase: tracking overlap vanished at s = " +
                    std::to_string(traj.grid[k]));
    phase = first ? std::arg(z) : detail::unwrap_step(phase, z);
    first = false;
  }
  // Close the frame loop: against a transported gauge whose end vector is a
  // rephasing of the start vector, the end-point comparison must be taken
  // against the closed frame, so the holonomy angle is restored here. For
  // frames that return to their start vector exactly this adds zero.
  if (fr.cyclic) phase += holonomy_angle(fr, n);
  rep.total_phase = phase;
  rep.dynamical_phase = dynamical_phase(fr, n, T, traj.grid.back());
  rep.geometric_phase = rep.total_phase - rep.dynamical_phase;
  return rep;
}

inline double aa_phase(const Trajectory& traj, const HamiltonianFamily& f, double T,
                       double eps_cyc = tol::eps_cyclic) {
  require_pre(traj.frame_tag == "lab", "aa_phase: need a lab trajectory");
  require_pre(!traj.states.empty(), "aa_phase: empty trajectory");
  require_pre(static_cast<int>(traj.states.front().size()) == f.dim,
              "aa_phase: trajectory dimension does not match the family");

  const double overlap_end = std::abs(inner(traj.states.front(), traj.states.back()));
  require_pre(overlap_end >= 1.0 - eps_cyc,
              "aa_phase: evolution is not cyclic within tolerance");

  double phase = 0.0;
  std::vector<double> energy(traj.grid.size());
  for (std::size_t k = 0; k < traj.grid.size(); ++k) {
    const cplx z = inner(traj.states.front(), traj.states[k]);
    if (k > 0) phase = detail::unwrap_step(phase, z);
    const HermitianMatrix h = f.evaluate(traj.grid[k]);
    energy[k] = inner(traj.states[k], matvec(h.matrix(), traj.states[k])).real();
  }
  double mean_energy_integral = 0.0;
  for (std::size_t k = 0; k + 1 < energy.size(); ++k)
    mean_energy_integral +=
        0.5 * (traj.grid[k + 1] - traj.grid[k]) * (energy[k] + energy[k + 1]);
  return phase + T * mean_energy_integral;
}

}  // namespace adlab
