#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "adlab/errors.hpp"
#include "adlab/hamiltonian.hpp"
#include "adlab/linalg.hpp"

namespace adlab {

/// Instantaneous eigensystem tracked over a uniform s-grid with a smooth
/// gauge: consecutive vectors of each level overlap with real positive
/// phase.  The end-point is NOT forced back onto the start vector; whatever
/// phase mismatch survives at s = 1 is the loop holonomy and is read off
/// where needed.  Frames carrying closed-form vectors keep their natural
/// gauge instead and expose the exact derivative.
struct EigenFrame {
  std::vector<double> grid;
  int dim = 0;
  bool analytic = false;
  bool cyclic = false;
  std::vector<std::vector<double>> energies;         // [level][k]
  std::vector<std::vector<ComplexVector>> vectors;   // [level][k]
  std::vector<std::vector<double>> energy_integral;  // [level][k], cumulative trapezoid
  std::function<ComplexVector(int, double)> vector_derivative;  // analytic frames only

  int n_points() const { return static_cast<int>(grid.size()); }
  int n_levels() const { return dim; }
  double step() const { return grid[1] - grid[0]; }
};

enum class FrameGauge { numeric_continuous, analytic_spin_half };

namespace detail {

inline void fill_energy_integrals(EigenFrame& fr) {
  fr.energy_integral.assign(static_cast<std::size_t>(fr.dim),
                            std::vector<double>(fr.grid.size(), 0.0));
  for (int n = 0; n < fr.dim; ++n) {
    double acc = 0.0;
    for (std::size_t k = 1; k < fr.grid.size(); ++k) {
      const double h = fr.grid[k] - fr.grid[k - 1];
      acc += 0.5 * h *
             (fr.energies[static_cast<std::size_t>(n)][k - 1] +
              fr.energies[static_cast<std::size_t>(n)][k]);
      fr.energy_integral[static_cast<std::size_t>(n)][k] = acc;
    }
  }
}

}  // namespace detail

/// Diagonalizes the family on a uniform n_points grid over [0, 1].
inline EigenFrame eigenframe(const HamiltonianFamily& f, int n_points,
                             FrameGauge mode = FrameGauge::numeric_continuous) {
  require_pre(n_points >= 16, "eigenframe: need at least 16 grid points");
  require_pre(f.dim >= 1 && f.dim <= max_dim, "eigenframe: bad family dimension");

  EigenFrame fr;
  fr.dim = f.dim;
  fr.cyclic = f.cyclic;
  fr.grid.resize(static_cast<std::size_t>(n_points));
  for (int k = 0; k < n_points; ++k)
    fr.grid[static_cast<std::size_t>(k)] =
        static_cast<double>(k) / static_cast<double>(n_points - 1);
  fr.grid.front() = 0.0;
  fr.grid.back() = 1.0;

  if (mode == FrameGauge::analytic_spin_half) {
    require_pre(f.spin_half.has_value(),
                "eigenframe: analytic gauge is only defined for the spin-half family");
    const SpinHalfParams p = *f.spin_half;
    const double c = std::cos(0.5 * p.theta), s2 = std::sin(0.5 * p.theta);
    fr.analytic = true;
    fr.energies.assign(2, std::vector<double>(fr.grid.size()));
    fr.vectors.assign(2, std::vector<ComplexVector>(fr.grid.size()));
    for (std::size_t k = 0; k < fr.grid.size(); ++k) {
      const double phi = two_pi * fr.grid[k];
      const cplx e_plus{std::cos(phi), std::sin(phi)};
      fr.energies[0][k] = -p.mu_b;
      fr.energies[1][k] = p.mu_b;
      fr.vectors[0][k] = ComplexVector{-s2 * std::conj(e_plus), c};
      fr.vectors[1][k] = ComplexVector{c, s2 * e_plus};
    }
    fr.vector_derivative = [c, s2](int level, double s) {
      const double phi = two_pi * s;
      const cplx e_plus{std::cos(phi), std::sin(phi)};
      const cplx i2pi{0.0, two_pi};
      if (level == 0) return ComplexVector{i2pi * s2 * std::conj(e_plus), 0.0};
      if (level == 1) return ComplexVector{0.0, i2pi * s2 * e_plus};
      throw precondition_error("vector_derivative: level out of range");
    };
    detail::fill_energy_integrals(fr);
    return fr;
  }

  fr.energies.assign(static_cast<std::size_t>(f.dim), std::vector<double>(fr.grid.size()));
  fr.vectors.assign(static_cast<std::size_t>(f.dim),
                    std::vector<ComplexVector>(fr.grid.size()));
  for (std::size_t k = 0; k < fr.grid.size(); ++k) {
    const EigResult eg = eig_hermitian(f.evaluate(fr.grid[k]));
    require_pre(!eg.degenerate, "eigenframe: degenerate spectrum at s = " +
                                    std::to_string(fr.grid[k]));
    for (int n = 0; n < f.dim; ++n) {
      fr.energies[static_cast<std::size_t>(n)][k] = eg.values[static_cast<std::size_t>(n)];
      fr.vectors[static_cast<std::size_t>(n)][k] =
          std::move(eg.vectors[static_cast<std::size_t>(n)]);
    }
  }
  for (int n = 0; n < f.dim; ++n) {
    auto& vs = fr.vectors[static_cast<std::size_t>(n)];
    for (std::size_t k = 1; k < vs.size(); ++k) {
      const cplx z = inner(vs[k - 1], vs[k]);
      require_pre(std::abs(z) >= tol::tracking_min_overlap,
                  "eigenframe: lost track of level " + std::to_string(n) +
                      " near s = " + std::to_string(fr.grid[k]) + "; refine the grid");
      const cplx phase = std::conj(z) / std::abs(z);
      for (cplx& c : vs[k]) c *= phase;
    }
  }
  detail::fill_energy_integrals(fr);
  return fr;
}

/// d/ds of the level-n frame vector at grid index k: the closed form on
/// analytic frames, second-order finite differences otherwise (central in
/// the interior, one-sided at the boundaries).
inline ComplexVector frame_derivative(const EigenFrame& fr, int n, std::size_t k) {
  require_pre(n >= 0 && n < fr.dim, "frame_derivative: level out of range");
  require_pre(k < fr.grid.size(), "frame_derivative: index out of range");
  if (fr.analytic) return fr.vector_derivative(n, fr.grid[k]);

  const auto& vs = fr.vectors[static_cast<std::size_t>(n)];
  const double h = fr.step();
  const std::size_t last = vs.size() - 1;
  for (std::size_t j = (k == 0 ? 0 : k - 1); j < std::min(k + 1, last); ++j)
    require_pre(norm(sub(vs[j + 1], vs[j])) <= tol::coarse_step_vec_jump,
                "frame_derivative: neighbouring vectors rotate by more than pi/2; "
                "refine the grid");

  ComplexVector d(vs.front().size());
  if (k == 0) {
    for (std::size_t i = 0; i < d.size(); ++i)
      d[i] = (-3.0 * vs[0][i] + 4.0 * vs[1][i] - vs[2][i]) / (2.0 * h);
  } else if (k == last) {
    for (std::size_t i = 0; i < d.size(); ++i)
      d[i] = (3.0 * vs[last][i] - 4.0 * vs[last - 1][i] + vs[last - 2][i]) / (2.0 * h);
  } else {
    for (std::size_t i = 0; i < d.size(); ++i)
      d[i] = (vs[k + 1][i] - vs[k - 1][i]) / (2.0 * h);
  }
  return d;
}

/// Diagonal connection samples <n(s_k)|d_s n(s_k)>.  Normalization makes the
/// exact value purely imaginary, so the real part of the raw estimate (pure
/// discretization noise, O(h^2)) is projected out; a large real part means
/// the frame or the grid is broken and is rejected.
inline std::vector<cplx> berry_connection(const EigenFrame& fr, int n) {
  require_pre(n >= 0 && n < fr.dim, "berry_connection: level out of range");
  std::vector<cplx> a(fr.grid.size());
  for (std::size_t k = 0; k < fr.grid.size(); ++k) {
    const cplx raw = inner(fr.vectors[static_cast<std::size_t>(n)][k], frame_derivative(fr, n, k));
    require_num(std::abs(raw.real()) <= 1e-3,
                "berry_connection: real part of the connection is not noise-sized");
    a[k] = cplx{0.0, raw.imag()};
  }
  return a;
}

/// Off-diagonal coupling samples <n(s_k)|d_s m(s_k)>, n != m.
inline std::vector<cplx> offdiag_coupling(const EigenFrame& fr, int n, int m) {
  require_pre(n >= 0 && n < fr.dim && m >= 0 && m < fr.dim && n != m,
              "offdiag_coupling: need two distinct levels in range");
  std::vector<cplx> a(fr.grid.size());
  for (std::size_t k = 0; k < fr.grid.size(); ++k)
    a[k] = inner(fr.vectors[static_cast<std::size_t>(n)][k], frame_derivative(fr, m, k));
  return a;
}

/// Loop phase left at the end of the grid: arg<n(0)|n(1)>.
inline double holonomy_angle(const EigenFrame& fr, int n) {
  require_pre(n >= 0 && n < fr.dim, "holonomy_angle: level out of range");
  const cplx o = inner(fr.vectors[static_cast<std::size_t>(n)].front(),
                       fr.vectors[static_cast<std::size_t>(n)].back());
  require_num(std::abs(o) > 0.1, "holonomy_angle: end-point overlap too small");
  return std::arg(o);
}

/// Cumulative trapezoid of arbitrary samples over the frame grid.
inline std::vector<cplx> cumulative_trapezoid(const EigenFrame& fr,
                                              const std::vector<cplx>& samples) {
  require_pre(samples.size() == fr.grid.size(), "cumulative_trapezoid: size mismatch");
  std::vector<cplx> out(samples.size(), cplx{0.0, 0.0});
  for (std::size_t k = 1; k < samples.size(); ++k)
    out[k] = out[k - 1] + 0.5 * (fr.grid[k] - fr.grid[k - 1]) * (samples[k - 1] + samples[k]);
  return out;
}

}  // namespace adlab
