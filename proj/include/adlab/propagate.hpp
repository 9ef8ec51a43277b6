#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "adlab/eigenframe.hpp"
#include "adlab/errors.hpp"
#include "adlab/hamiltonian.hpp"
#include "adlab/linalg.hpp"
#include "adlab/tolerances.hpp"

namespace adlab {

enum class StepMethod { fixed_step_rk4, exact_step_midpoint };

inline const char* method_name(StepMethod m) {
  return m == StepMethod::fixed_step_rk4 ? "fixed-step-rk4" : "exact-step-midpoint";
}

/// T is the total physical duration; the equations are integrated in the
/// scaled variable s = t/T on a uniform grid of n_steps intervals.
/// osc_resolution is the minimum number of steps per oscillation period of
/// the fastest level-gap frequency T(E_j - E_k); runs below it are refused,
/// because an under-resolved phase factor mimics decoherence.
struct EvolutionConfig {
  double T = 1.0;
  int n_steps = 0;
  StepMethod method = StepMethod::fixed_step_rk4;
  double osc_resolution = 20.0;
};

struct Trajectory {
  std::string frame_tag;  // "lab" or "rotating"
  std::vector<double> grid;
  std::vector<ComplexVector> states;
  EvolutionConfig config;
};

namespace detail {

inline void validate_config(const EvolutionConfig& cfg) {
  require_config(std::isfinite(cfg.T) && cfg.T >= 0.0,
                 "EvolutionConfig: T must be finite and non-negative");
  require_config(cfg.n_steps >= 1, "EvolutionConfig: need at least one step");
  require_config(std::isfinite(cfg.osc_resolution) && cfg.osc_resolution > 0.0,
                 "EvolutionConfig: osc_resolution must be positive");
}

inline void check_step_control(const EvolutionConfig& cfg, double omega_max) {
  const double needed = cfg.osc_resolution * cfg.T * omega_max / two_pi;
  require_pre(static_cast<double>(cfg.n_steps) >= needed,
              "step control: n_steps = " + std::to_string(cfg.n_steps) +
                  " under-resolves the fastest oscillation; need at least " +
                  std::to_string(needed));
}

/// Largest instantaneous spectral spread, sampled across [0, 1].
inline double sampled_spread(const HamiltonianFamily& f, int n_samples = 65) {
  double w = 0.0;
  for (int k = 0; k < n_samples; ++k) {
    const double s = static_cast<double>(k) / (n_samples - 1);
    const EigResult eg = eig_hermitian(f.evaluate(s));
    w = std::max(w, eg.values.back() - eg.values.front());
  }
  return w;
}

inline double frame_spread(const EigenFrame& fr) {
  double w = 0.0;
  for (std::size_t k = 0; k < fr.grid.size(); ++k)
    w = std::max(w, fr.energies[static_cast<std::size_t>(fr.dim - 1)][k] -
                        fr.energies[0][k]);
  return w;
}

inline std::vector<double> uniform_grid(int n_steps) {
  std::vector<double> g(static_cast<std::size_t>(n_steps) + 1);
  for (int j = 0; j <= n_steps; ++j)
    g[static_cast<std::size_t>(j)] = static_cast<double>(j) / n_steps;
  g.back() = 1.0;
  return g;
}

inline void check_state(const ComplexVector& v, double s) {
  require_num(all_finite(v),
              "evolution blew up: non-finite state at s = " + std::to_string(s));
  require_num(std::abs(norm(v) - 1.0) <= tol::norm_drift_abs,
              "evolution lost unitarity at s = " + std::to_string(s) +
                  "; refine the grid");
}

inline ComplexVector axpy(const ComplexVector& x, cplx a, const ComplexVector& y) {
  ComplexVector r(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += a * y[i];
  return r;
}

}  // namespace detail

/// Lab-frame propagation of i d/ds Psi = T H(s) Psi.
inline Trajectory evolve_lab(const HamiltonianFamily& f, const ComplexVector& psi0,
                             const EvolutionConfig& cfg) {
  detail::validate_config(cfg);
  require_pre(static_cast<int>(psi0.size()) == f.dim, "evolve_lab: state size mismatch");
  require_pre(std::abs(norm(psi0) - 1.0) <= 1e-10, "evolve_lab: psi0 must be normalized");
  detail::check_step_control(cfg, detail::sampled_spread(f));

  Trajectory tr;
  tr.frame_tag = "lab";
  tr.config = cfg;
  tr.grid = detail::uniform_grid(cfg.n_steps);
  tr.states.reserve(tr.grid.size());
  tr.states.push_back(psi0);

  const double h = 1.0 / cfg.n_steps;
  const cplx mi_t{0.0, -cfg.T};

  if (cfg.method == StepMethod::exact_step_midpoint) {
    ComplexVector psi = psi0;
    for (int j = 0; j < cfg.n_steps; ++j) {
      const double mid = (static_cast<double>(j) + 0.5) * h;
      psi = matvec(expm_step(f.evaluate(mid), cfg.T * h), psi);
      detail::check_state(psi, tr.grid[static_cast<std::size_t>(j) + 1]);
      tr.states.push_back(psi);
    }
    return tr;
  }

  ComplexVector psi = psi0;
  ComplexMatrix h_lo = f.evaluate(0.0).matrix();
  for (int j = 0; j < cfg.n_steps; ++j) {
    const double s_lo = tr.grid[static_cast<std::size_t>(j)];
    const ComplexMatrix h_mid = f.evaluate(s_lo + 0.5 * h).matrix();
    const ComplexMatrix h_hi = f.evaluate(tr.grid[static_cast<std::size_t>(j) + 1]).matrix();

    ComplexVector k1 = matvec(h_lo, psi);
    for (cplx& c : k1) c *= mi_t;
    ComplexVector k2 = matvec(h_mid, detail::axpy(psi, 0.5 * h, k1));
    for (cplx& c : k2) c *= mi_t;
    ComplexVector k3 = matvec(h_mid, detail::axpy(psi, 0.5 * h, k2));
    for (cplx& c : k3) c *= mi_t;
    ComplexVector k4 = matvec(h_hi, detail::axpy(psi, h, k3));
    for (cplx& c : k4) c *= mi_t;

    for (std::size_t i = 0; i < psi.size(); ++i)
      psi[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

    detail::check_state(psi, tr.grid[static_cast<std::size_t>(j) + 1]);
    tr.states.push_back(psi);
    h_lo = h_hi;
  }
  return tr;
}

/// Index of s on the frame grid; rejects values that are not grid points.
inline std::size_t grid_index(const EigenFrame& fr, double s) {
  check_s_range(s, "grid_index");
  const double x = s * static_cast<double>(fr.n_points() - 1);
  const auto k = static_cast<std::size_t>(std::llround(x));
  require_pre(k < fr.grid.size() && std::abs(fr.grid[k] - s) <= 1e-12,
              "s = " + std::to_string(s) + " is not a frame grid point");
  return k;
}

/// The adiabatic transformation: sum_n exp(-iT int_0^s E_n) |n(s)><n(0)|.
inline ComplexMatrix adiabatic_map(const EigenFrame& fr, double T, double s) {
  const std::size_t k = grid_index(fr, s);
  const int d = fr.dim;
  ComplexMatrix u(d);
  for (int n = 0; n < d; ++n) {
    const std::size_t un = static_cast<std::size_t>(n);
    const double f = T * fr.energy_integral[un][k];
    const cplx phase{std::cos(f), -std::sin(f)};
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c)
        u(r, c) += phase * fr.vectors[un][k][static_cast<std::size_t>(r)] *
                   std::conj(fr.vectors[un][0][static_cast<std::size_t>(c)]);
  }
  require_num(unitarity_defect(u) <= tol::frame_unitary_abs,
              "adiabatic_map: transformation drifted off the unitary group");
  return u;
}

/// Rotating-representation kernel in the frozen basis {|n(0)>}: entry (j,k)
/// is exp[iT int_0^s (E_j - E_k)] <j(s)|d_s k(s)>.  Only the upper triangle
/// is estimated; the lower is its negative conjugate, so the matrix is
/// anti-Hermitian to rounding and a unitary step exponential exists.
struct KernelSample {
  double s = 0.0;
  ComplexMatrix matrix;
};

namespace detail {

inline ComplexMatrix kernel_at(const EigenFrame& fr, double T, std::size_t k) {
  const int d = fr.dim;
  std::vector<ComplexVector> dv(static_cast<std::size_t>(d));
  for (int m = 0; m < d; ++m)
    dv[static_cast<std::size_t>(m)] = frame_derivative(fr, m, k);

  ComplexMatrix out(d);
  for (int j = 0; j < d; ++j) {
    const std::size_t uj = static_cast<std::size_t>(j);
    const cplx raw = inner(fr.vectors[uj][k], dv[uj]);
    require_num(std::abs(raw.real()) <= 1e-3,
                "kernel: diagonal connection has a non-noise real part");
    out(j, j) = cplx{0.0, raw.imag()};
    for (int l = j + 1; l < d; ++l) {
      const std::size_t ul = static_cast<std::size_t>(l);
      const double f = T * (fr.energy_integral[uj][k] - fr.energy_integral[ul][k]);
      const cplx phase{std::cos(f), std::sin(f)};
      out(j, l) = phase * inner(fr.vectors[uj][k], dv[ul]);
      out(l, j) = -std::conj(out(j, l));
    }
  }
  return out;
}

}  // namespace detail

inline KernelSample kernel_KT(const EigenFrame& fr, double T, double s) {
  KernelSample ks;
  ks.s = s;
  ks.matrix = detail::kernel_at(fr, T, grid_index(fr, s));
  return ks;
}

/// The number of frame points the rotating-frame evolvers expect: nodes plus
/// midpoints of the cfg grid, so the kernel is available at half steps.
inline int rotating_frame_points(const EvolutionConfig& cfg) {
  return 2 * cfg.n_steps + 1;
}

namespace detail {

struct RotatingSetup {
  std::vector<cplx> c;                    // coefficients in the frozen basis
  std::vector<double> grid;
  double h = 0.0;
};

inline RotatingSetup rotating_preamble(const EigenFrame& fr, const ComplexVector& phi0,
                                       double T, const EvolutionConfig& cfg,
                                       const char* who) {
  validate_config(cfg);
  require_config(cfg.T == T, std::string(who) +
                                 ": T argument and cfg.T disagree; pass one duration");
  require_pre(fr.n_points() == rotating_frame_points(cfg),
              std::string(who) + ": frame must carry 2*n_steps+1 points");
  require_pre(static_cast<int>(phi0.size()) == fr.dim,
              std::string(who) + ": state size mismatch");
  require_pre(std::abs(norm(phi0) - 1.0) <= 1e-10,
              std::string(who) + ": phi0 must be normalized");
  check_step_control(cfg, frame_spread(fr));

  RotatingSetup st;
  st.grid = uniform_grid(cfg.n_steps);
  st.h = 1.0 / cfg.n_steps;
  st.c.resize(static_cast<std::size_t>(fr.dim));
  for (int m = 0; m < fr.dim; ++m)
    st.c[static_cast<std::size_t>(m)] =
        inner(fr.vectors[static_cast<std::size_t>(m)][0], phi0);
  double n2 = 0.0;
  for (const cplx& z : st.c) n2 += std::norm(z);
  require_pre(std::abs(std::sqrt(n2) - 1.0) <= 1e-10,
              std::string(who) + ": phi0 does not lie in the span of the frame");
  return st;
}

inline ComplexVector from_frozen_basis(const EigenFrame& fr, const std::vector<cplx>& c) {
  ComplexVector v(static_cast<std::size_t>(fr.dim), cplx{0.0, 0.0});
  for (int m = 0; m < fr.dim; ++m)
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] += c[static_cast<std::size_t>(m)] * fr.vectors[static_cast<std::size_t>(m)][0][i];
  return v;
}

inline ComplexVector kernel_apply(const ComplexMatrix& k, const ComplexVector& c) {
  return matvec(k, c);
}

}  // namespace detail

/// Rotating-frame ODE d/ds phi = -K_T(s) phi, marched on the frozen-basis
/// coefficients.  Midpoint kernels come from the odd frame indices.
inline Trajectory evolve_rotating_ode(const EigenFrame& fr, const ComplexVector& phi0,
                                      double T, const EvolutionConfig& cfg) {
  detail::RotatingSetup st = detail::rotating_preamble(fr, phi0, T, cfg,
                                                       "evolve_rotating_ode");
  Trajectory tr;
  tr.frame_tag = "rotating";
  tr.config = cfg;
  tr.grid = st.grid;
  tr.states.reserve(tr.grid.size());
  tr.states.push_back(detail::from_frozen_basis(fr, st.c));

  std::vector<cplx> c = st.c;
  const double h = st.h;

  if (cfg.method == StepMethod::exact_step_midpoint) {
    for (int j = 0; j < cfg.n_steps; ++j) {
      const ComplexMatrix k = detail::kernel_at(fr, T, 2 * static_cast<std::size_t>(j) + 1);
      ComplexMatrix m(fr.dim);
      for (int r = 0; r < fr.dim; ++r)
        for (int cix = 0; cix < fr.dim; ++cix)
          m(r, cix) = cplx{0.0, -1.0} * k(r, cix);
      c = matvec(expm_step(HermitianMatrix(std::move(m)), h), c);
      ComplexVector phi = detail::from_frozen_basis(fr, c);
      detail::check_state(phi, tr.grid[static_cast<std::size_t>(j) + 1]);
      tr.states.push_back(std::move(phi));
    }
    return tr;
  }

  ComplexMatrix k_lo = detail::kernel_at(fr, T, 0);
  for (int j = 0; j < cfg.n_steps; ++j) {
    const std::size_t q = 2 * static_cast<std::size_t>(j);
    const ComplexMatrix k_mid = detail::kernel_at(fr, T, q + 1);
    const ComplexMatrix k_hi = detail::kernel_at(fr, T, q + 2);

    ComplexVector k1 = detail::kernel_apply(k_lo, c);
    for (cplx& z : k1) z = -z;
    ComplexVector k2 = detail::kernel_apply(k_mid, detail::axpy(c, 0.5 * h, k1));
    for (cplx& z : k2) z = -z;
    ComplexVector k3 = detail::kernel_apply(k_mid, detail::axpy(c, 0.5 * h, k2));
    for (cplx& z : k3) z = -z;
    ComplexVector k4 = detail::kernel_apply(k_hi, detail::axpy(c, h, k3));
    for (cplx& z : k4) z = -z;

    for (std::size_t i = 0; i < c.size(); ++i)
      c[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

    ComplexVector phi = detail::from_frozen_basis(fr, c);
    detail::check_state(phi, tr.grid[static_cast<std::size_t>(j) + 1]);
    tr.states.push_back(std::move(phi));
    k_lo = k_hi;
  }
  return tr;
}

/// Integral form phi(s) = phi(0) - int_0^s K_T phi, marched by trapezoidal
/// quadrature with the implicit end-point term solved directly at each step.
inline Trajectory evolve_rotating_volterra(const EigenFrame& fr, const ComplexVector& phi0,
                                           double T, const EvolutionConfig& cfg) {
  detail::RotatingSetup st = detail::rotating_preamble(fr, phi0, T, cfg,
                                                       "evolve_rotating_volterra");
  Trajectory tr;
  tr.frame_tag = "rotating";
  tr.config = cfg;
  tr.grid = st.grid;
  tr.states.reserve(tr.grid.size());
  tr.states.push_back(detail::from_frozen_basis(fr, st.c));

  const double h = st.h;
  const std::vector<cplx> c0 = st.c;
  const int d = fr.dim;

  std::vector<cplx> partial(static_cast<std::size_t>(d), cplx{0.0, 0.0});
  {
    const ComplexMatrix k0 = detail::kernel_at(fr, T, 0);
    const ComplexVector k0c0 = matvec(k0, c0);
    for (std::size_t i = 0; i < partial.size(); ++i) partial[i] = 0.5 * h * k0c0[i];
  }

  for (int j = 1; j <= cfg.n_steps; ++j) {
    const ComplexMatrix kj = detail::kernel_at(fr, T, 2 * static_cast<std::size_t>(j));
    ComplexMatrix a = ComplexMatrix::identity(d);
    for (int r = 0; r < d; ++r)
      for (int cix = 0; cix < d; ++cix) a(r, cix) += 0.5 * h * kj(r, cix);
    ComplexVector rhs(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = c0[i] - partial[i];
    const ComplexVector cj = solve(a, rhs);

    ComplexVector phi = detail::from_frozen_basis(fr, cj);
    detail::check_state(phi, tr.grid[static_cast<std::size_t>(j)]);
    tr.states.push_back(std::move(phi));

    if (j < cfg.n_steps) {
      const ComplexVector kc = matvec(kj, cj);
      for (std::size_t i = 0; i < partial.size(); ++i) partial[i] += h * kc[i];
    }
  }
  return tr;
}

/// Frozen-basis coefficients C_m(s_k) = <m(0)|phi(s_k)> of a rotating
/// trajectory.
inline std::vector<std::vector<cplx>> coefficients(const Trajectory& tr,
                                                   const EigenFrame& fr) {
  require_pre(tr.frame_tag == "rotating",
              "coefficients: trajectory is not in the rotating frame");
  require_pre(!tr.states.empty() && static_cast<int>(tr.states.front().size()) == fr.dim,
              "coefficients: frame dimension mismatch");
  std::vector<std::vector<cplx>> c(static_cast<std::size_t>(fr.dim),
                                   std::vector<cplx>(tr.states.size()));
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    double n2 = 0.0;
    for (int m = 0; m < fr.dim; ++m) {
      const cplx z = inner(fr.vectors[static_cast<std::size_t>(m)][0], tr.states[k]);
      c[static_cast<std::size_t>(m)][k] = z;
      n2 += std::norm(z);
    }
    require_num(std::abs(n2 - 1.0) <= tol::norm_drift_abs,
                "coefficients: probability not conserved at grid index " +
                    std::to_string(k));
  }
  return c;
}

/// The infinite-T limit state in closed form: the level-m frozen vector
/// carrying only the accumulated diagonal connection phase.
inline cplx limit_coefficient(const EigenFrame& fr, int m, std::size_t k) {
  require_pre(m >= 0 && m < fr.dim, "limit_coefficient: level out of range");
  require_pre(k < fr.grid.size(), "limit_coefficient: index out of range");
  const std::vector<cplx> a = berry_connection(fr, m);
  const std::vector<cplx> integral = cumulative_trapezoid(fr, a);
  return std::exp(-integral[k]);
}

inline ComplexVector adiabatic_limit_state(const EigenFrame& fr, int m, std::size_t k) {
  const cplx c = limit_coefficient(fr, m, k);
  ComplexVector v = fr.vectors[static_cast<std::size_t>(m)][0];
  for (cplx& z : v) z *= c;
  return v;
}

}  // namespace adlab
