#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "adlab/eigenframe.hpp"
#include "adlab/errors.hpp"
#include "adlab/hamiltonian.hpp"
#include "adlab/linalg.hpp"

namespace adlab {

struct ZooMember {
  std::string name;
  EigenFrame frame;
  std::optional<HamiltonianFamily> family;
};

// Frame whose vectors differ from their starting values by a pure phase,
// |m(s)> = exp(i beta_m(s)) |m(0)>. No Hamiltonian generates it here; the
// energies are fixture constants so dynamical-phase plumbing stays exercised.
inline EigenFrame phase_only_frame(int n_points) {
  require_pre(n_points >= 16, "phase_only_frame: need at least 16 grid points");
  const auto beta = [](int n, double s) {
    const double b = std::sin(two_pi * s);
    return n == 0 ? b : -0.5 * b;
  };
  const auto beta_rate = [](int n, double s) {
    const double r = two_pi * std::cos(two_pi * s);
    return n == 0 ? r : -0.5 * r;
  };

  EigenFrame fr;
  fr.dim = 2;
  fr.analytic = true;
  fr.cyclic = true;
  fr.grid.resize(static_cast<std::size_t>(n_points));
  for (int k = 0; k < n_points; ++k)
    fr.grid[static_cast<std::size_t>(k)] =
        static_cast<double>(k) / static_cast<double>(n_points - 1);
  fr.grid.front() = 0.0;
  fr.grid.back() = 1.0;

  fr.energies.assign(2, std::vector<double>(fr.grid.size()));
  fr.vectors.assign(2, std::vector<ComplexVector>(fr.grid.size()));
  for (std::size_t k = 0; k < fr.grid.size(); ++k) {
    const double s = fr.grid[k];
    for (int n = 0; n < 2; ++n) {
      const double b = beta(n, s);
      ComplexVector v(2);
      v[static_cast<std::size_t>(n)] = cplx{std::cos(b), std::sin(b)};
      fr.vectors[static_cast<std::size_t>(n)][k] = std::move(v);
    }
  }
  for (std::size_t k = 0; k < fr.grid.size(); ++k) {
    fr.energies[0][k] = -1.0;
    fr.energies[1][k] = 1.0;
  }
  fr.vector_derivative = [beta, beta_rate](int n, double s) {
    const double b = beta(n, s);
    const double r = beta_rate(n, s);
    ComplexVector d(2);
    d[static_cast<std::size_t>(n)] = cplx{0.0, r} * cplx{std::cos(b), std::sin(b)};
    return d;
  };
  detail::fill_energy_integrals(fr);
  return fr;
}

namespace detail {

inline HermitianMatrix seeded_hermitian(std::mt19937_64& rng, int dim, double scale,
                                        const std::vector<double>& diag_base) {
  const auto u = [&rng] {
    return static_cast<double>(rng() >> 11) * 0x1p-53 - 0.5;
  };
  ComplexMatrix m(dim);
  for (int i = 0; i < dim; ++i) {
    double base = diag_base.empty() ? 0.0 : diag_base[static_cast<std::size_t>(i)];
    m(i, i) = base + 2.0 * scale * u();
    for (int j = i + 1; j < dim; ++j) {
      const cplx z{scale * u(), scale * u()};
      m(i, j) = z;
      m(j, i) = std::conj(z);
    }
  }
  return HermitianMatrix(std::move(m));
}

inline HamiltonianFamily random_loop_family(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const HermitianMatrix ha =
      seeded_hermitian(rng, 4, 0.3, std::vector<double>{-3.0, -1.0, 1.0, 3.0});
  const HermitianMatrix hb = seeded_hermitian(rng, 4, 0.25, {});
  const HermitianMatrix hc = seeded_hermitian(rng, 4, 0.25, {});

  const auto combine = [ha, hb, hc](double cb, double cc) {
    ComplexMatrix m = ha.matrix();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        m(i, j) += cb * hb.matrix()(i, j) + cc * hc.matrix()(i, j);
    return HermitianMatrix(std::move(m));
  };

  HamiltonianFamily f;
  f.dim = 4;
  f.cyclic = true;
  f.label = "random-loop-4d";
  f.evaluate = [combine, label = f.label](double s) {
    check_s_range(s, label.c_str());
    return combine(std::cos(two_pi * s), std::sin(two_pi * s));
  };
  f.derivative = [combine, label = f.label](double s) {
    check_s_range(s, label.c_str());
    return combine(-two_pi * std::sin(two_pi * s), two_pi * std::cos(two_pi * s));
  };
  return f;
}

}  // namespace detail

inline HamiltonianFamily zoo_random_loop_family(std::uint64_t seed) {
  return detail::random_loop_family(seed);
}

inline FrameGauge preferred_gauge(const HamiltonianFamily& f) {
  return f.spin_half ? FrameGauge::analytic_spin_half : FrameGauge::numeric_continuous;
}

// Fixed corpus of families used by the theorem harnesses and property
// suites. Names and construction order are stable so emitted reports are
// reproducible; the random member is fully determined by the seed.
inline std::vector<ZooMember> family_zoo(int n_points,
                                         std::uint64_t seed = 0x5eedULL) {
  std::vector<ZooMember> zoo;

  {
    ComplexMatrix m(3);
    m(0, 0) = -1.5;
    m(1, 1) = 0.25;
    m(2, 2) = 1.75;
    m(0, 1) = cplx{0.4, -0.2};
    m(1, 0) = std::conj(m(0, 1));
    m(1, 2) = cplx{0.1, 0.3};
    m(2, 1) = std::conj(m(1, 2));
    HamiltonianFamily f = build_constant(HermitianMatrix(std::move(m)), "constant-3d");
    EigenFrame fr = eigenframe(f, n_points);
    zoo.push_back(ZooMember{"constant-3d", std::move(fr), std::move(f)});
  }

  {
    HamiltonianFamily f = detail::random_loop_family(seed);
    EigenFrame fr = eigenframe(f, n_points);
    zoo.push_back(ZooMember{"random-loop-4d", std::move(fr), std::move(f)});
  }

  zoo.push_back(ZooMember{"phase-only", phase_only_frame(n_points), std::nullopt});

  const double half_turn = 0.5 * two_pi;
  const std::vector<std::pair<std::string, double>> angles{
      {"spin-half-theta-0", 0.0},
      {"spin-half-theta-pi-6", half_turn / 6.0},
      {"spin-half-theta-pi-4", half_turn / 4.0},
      {"spin-half-theta-pi-2", half_turn / 2.0},
      {"spin-half-theta-2pi-3", 2.0 * half_turn / 3.0},
      {"spin-half-theta-5pi-6", 5.0 * half_turn / 6.0},
      {"spin-half-theta-pi", half_turn}};
  for (const auto& [name, theta] : angles) {
    SpinHalfParams p;
    p.mu_b = 1.0;
    p.theta = theta;
    HamiltonianFamily f = build_spin_half(p);
    EigenFrame fr = eigenframe(f, n_points, FrameGauge::analytic_spin_half);
    zoo.push_back(ZooMember{name, std::move(fr), std::move(f)});
  }

  {
    SpinHalfParams p;
    p.mu_b = 1.0;
    p.theta = half_turn / 2.0;
    HamiltonianFamily f = build_spin_half(p);
    EigenFrame fr = eigenframe(f, n_points, FrameGauge::numeric_continuous);
    zoo.push_back(ZooMember{"spin-half-numeric-pi-2", std::move(fr), std::move(f)});
  }

  return zoo;
}

}  // namespace adlab
