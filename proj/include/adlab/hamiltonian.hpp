#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adlab/errors.hpp"
#include "adlab/linalg.hpp"

namespace adlab {

/// Parameters of the rotating-field two-level family: field magnitude
/// mu_b > 0 and cone angle theta in [0, pi].
struct SpinHalfParams {
  double mu_b = 1.0;
  double theta = 0.0;
};

/// A time-periodic Hamiltonian curve H(s), s in [0, 1] (scaled time).
/// `derivative` may be empty when no closed form is available.
struct HamiltonianFamily {
  int dim = 0;
  bool cyclic = false;
  std::string label;
  std::function<HermitianMatrix(double)> evaluate;
  std::function<HermitianMatrix(double)> derivative;
  std::optional<SpinHalfParams> spin_half;
};

inline void check_s_range(double s, const char* who) {
  require_pre(std::isfinite(s) && s >= 0.0 && s <= 1.0,
              std::string(who) + ": s must lie in [0, 1]");
}

/// H(s) = mu_b [sin(theta)cos(2 pi s) sx + sin(theta)sin(2 pi s) sy + cos(theta) sz].
inline HamiltonianFamily build_spin_half(const SpinHalfParams& p) {
  require_config(p.mu_b > 0.0, "build_spin_half: mu_b must be positive");
  require_config(p.theta >= 0.0 && p.theta <= M_PI,
                 "build_spin_half: theta must lie in [0, pi]");
  HamiltonianFamily f;
  f.dim = 2;
  f.cyclic = true;
  f.label = "spin-half";
  f.spin_half = p;
  f.evaluate = [p](double s) {
    check_s_range(s, "spin-half evaluate");
    const double st = std::sin(p.theta), ct = std::cos(p.theta);
    const double phi = two_pi * s;
    ComplexMatrix m(2);
    m(0, 0) = p.mu_b * ct;
    m(1, 1) = -p.mu_b * ct;
    m(0, 1) = p.mu_b * st * cplx{std::cos(phi), -std::sin(phi)};
    m(1, 0) = std::conj(m(0, 1));
    return HermitianMatrix(std::move(m));
  };
  f.derivative = [p](double s) {
    check_s_range(s, "spin-half derivative");
    const double st = std::sin(p.theta);
    const double phi = two_pi * s;
    ComplexMatrix m(2);
    m(0, 1) = p.mu_b * st * two_pi * cplx{-std::sin(phi), -std::cos(phi)};
    m(1, 0) = std::conj(m(0, 1));
    return HermitianMatrix(std::move(m));
  };
  return f;
}

/// Frozen curve H(s) = H0.
inline HamiltonianFamily build_constant(const HermitianMatrix& h0,
                                        std::string label = "constant") {
  HamiltonianFamily f;
  f.dim = h0.dim();
  f.cyclic = true;
  f.label = std::move(label);
  f.evaluate = [h0](double s) {
    check_s_range(s, "constant evaluate");
    return h0;
  };
  f.derivative = [n = h0.dim()](double s) {
    check_s_range(s, "constant derivative");
    return HermitianMatrix(ComplexMatrix(n));
  };
  return f;
}

/// Uniformly sampled curve with entry-wise linear interpolation; every
/// interpolated matrix is re-symmetrized before use.
inline HamiltonianFamily build_sampled_grid(std::vector<HermitianMatrix> samples,
                                            std::string label = "sampled-grid") {
  require_config(samples.size() >= 2, "build_sampled_grid: need at least two samples");
  const int dim = samples.front().dim();
  double scale = 1.0;
  for (const HermitianMatrix& h : samples) {
    require_config(h.dim() == dim, "build_sampled_grid: inconsistent dimensions");
    scale = std::max(scale, norm_max(h.matrix()));
  }
  ComplexMatrix closure(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      closure(i, j) = samples.back()(i, j) - samples.front()(i, j);
  const bool cyc = norm_max(closure) <= tol::cyclic_closure_rel * scale;

  HamiltonianFamily f;
  f.dim = dim;
  f.cyclic = cyc;
  f.label = std::move(label);
  f.evaluate = [samples = std::move(samples), dim](double s) {
    check_s_range(s, "sampled-grid evaluate");
    const std::size_t nseg = samples.size() - 1;
    const double x = s * static_cast<double>(nseg);
    std::size_t k = std::min(static_cast<std::size_t>(x), nseg - 1);
    const double w = x - static_cast<double>(k);
    ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        m(i, j) = (1.0 - w) * samples[k](i, j) + w * samples[k + 1](i, j);
    return symmetrized(m);
  };
  return f;
}

}  // namespace adlab
