#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "adlab/errors.hpp"
#include "adlab/linalg.hpp"
#include "adlab/tolerances.hpp"

namespace adlab {

using Vec3 = std::array<double, 3>;

inline double dot3(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline Vec3 cross3(const Vec3& a, const Vec3& b) {
  return Vec3{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
              a[0] * b[1] - a[1] * b[0]};
}

inline double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }

enum class PotentialKind { solenoid, monopole, pure_gauge };

struct VectorPotential {
  PotentialKind kind = PotentialKind::solenoid;
  double coupling = 1.0;
  double flux = 0.0;
  double strength = 0.0;
  Vec3 string_axis{0.0, 0.0, -1.0};
  double gauge_amplitude = 0.0;
  Vec3 gauge_wavevector{0.0, 0.0, 0.0};
};

inline VectorPotential solenoid_potential(double flux, double coupling) {
  require_config(std::isfinite(flux) && std::isfinite(coupling),
                 "solenoid_potential: flux and coupling must be finite");
  VectorPotential a;
  a.kind = PotentialKind::solenoid;
  a.flux = flux;
  a.coupling = coupling;
  return a;
}

inline VectorPotential monopole_potential(double strength, double coupling,
                                          Vec3 string_axis = Vec3{0.0, 0.0, -1.0}) {
  require_config(std::isfinite(strength) && std::isfinite(coupling),
                 "monopole_potential: strength and coupling must be finite");
  const double len = norm3(string_axis);
  require_config(len > 0.0, "monopole_potential: string axis must be nonzero");
  VectorPotential a;
  a.kind = PotentialKind::monopole;
  a.strength = strength;
  a.coupling = coupling;
  for (int i = 0; i < 3; ++i) a.string_axis[i] = string_axis[i] / len;
  return a;
}

inline VectorPotential pure_gauge_potential(double amplitude, Vec3 wavevector,
                                            double coupling) {
  require_config(std::isfinite(amplitude) && std::isfinite(coupling),
                 "pure_gauge_potential: amplitude and coupling must be finite");
  VectorPotential a;
  a.kind = PotentialKind::pure_gauge;
  a.gauge_amplitude = amplitude;
  a.gauge_wavevector = wavevector;
  a.coupling = coupling;
  return a;
}

// Distance from x to the potential's singular set: the z axis for the
// solenoid, the string ray {t*d : t >= 0} for the monopole. The pure-gauge
// field is regular everywhere.
inline double singular_distance(const VectorPotential& a, const Vec3& x) {
  switch (a.kind) {
    case PotentialKind::solenoid:
      return std::hypot(x[0], x[1]);
    case PotentialKind::monopole: {
      const double along = dot3(a.string_axis, x);
      if (along <= 0.0) return norm3(x);
      Vec3 perp = x;
      for (int i = 0; i < 3; ++i) perp[i] -= along * a.string_axis[i];
      return norm3(perp);
    }
    case PotentialKind::pure_gauge:
      return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

inline Vec3 evaluate_potential(const VectorPotential& a, const Vec3& x) {
  require_pre(singular_distance(a, x) >= tol::min_singular_dist,
              "vector potential: point too close to the singular set");
  switch (a.kind) {
    case PotentialKind::solenoid: {
      const double rho2 = x[0] * x[0] + x[1] * x[1];
      const double c = a.flux / (two_pi * rho2);
      return Vec3{-c * x[1], c * x[0], 0.0};
    }
    case PotentialKind::monopole: {
      const double r = norm3(x);
      const Vec3 num = cross3(x, a.string_axis);
      const double denom = r * (r - dot3(a.string_axis, x));
      return Vec3{a.strength * num[0] / denom, a.strength * num[1] / denom,
                  a.strength * num[2] / denom};
    }
    case PotentialKind::pure_gauge: {
      const double c = a.gauge_amplitude * std::cos(dot3(a.gauge_wavevector, x));
      return Vec3{c * a.gauge_wavevector[0], c * a.gauge_wavevector[1],
                  c * a.gauge_wavevector[2]};
    }
  }
  return Vec3{0.0, 0.0, 0.0};
}

struct PathPolyline {
  std::vector<Vec3> points;
  bool closed = false;
};

inline void validate_path(const PathPolyline& path) {
  require_config(path.points.size() >= 2, "path: need at least two points");
  if (path.closed) {
    const Vec3& a = path.points.front();
    const Vec3& b = path.points.back();
    require_config(a[0] == b[0] && a[1] == b[1] && a[2] == b[2],
                   "path: closed path must end where it starts");
  }
  for (const Vec3& p : path.points)
    require_config(std::isfinite(p[0]) && std::isfinite(p[1]) && std::isfinite(p[2]),
                   "path: points must be finite");
}

namespace detail {

inline constexpr std::array<double, 5> gauss5_nodes{
    -0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
    0.9061798459386640};
inline constexpr std::array<double, 5> gauss5_weights{
    0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
    0.4786286704993665, 0.2369268850561891};

inline double clamp01(double u) { return u < 0.0 ? 0.0 : (u > 1.0 ? 1.0 : u); }

// Exact minimum of singular_distance over the segment [p, q]. Sampling at
// quadrature nodes is not enough: a segment can cross the singular set
// between nodes and every sampled point would still look safe.
inline double segment_clearance(const VectorPotential& a, const Vec3& p, const Vec3& q) {
  if (a.kind == PotentialKind::pure_gauge)
    return std::numeric_limits<double>::infinity();
  const Vec3 w{q[0] - p[0], q[1] - p[1], q[2] - p[2]};
  if (a.kind == PotentialKind::solenoid) {
    const double aq = w[0] * w[0] + w[1] * w[1];
    const double bq = p[0] * w[0] + p[1] * w[1];
    const double u = aq > 0.0 ? clamp01(-bq / aq) : 0.0;
    return std::hypot(p[0] + u * w[0], p[1] + u * w[1]);
  }
  // Distance to the string ray is piecewise quadratic in the segment
  // parameter; the minimum sits at an endpoint, at a stationary point of
  // either regime, or at the regime boundary.
  const Vec3& d = a.string_axis;
  const double dw = dot3(d, w);
  const double dp = dot3(d, p);
  Vec3 wp = w;
  Vec3 pp = p;
  for (int i = 0; i < 3; ++i) {
    wp[i] -= dw * d[i];
    pp[i] -= dp * d[i];
  }
  std::array<double, 5> cand{0.0, 1.0, 0.0, 0.0, 0.0};
  const double aw = dot3(wp, wp);
  if (aw > 0.0) cand[2] = clamp01(-dot3(pp, wp) / aw);
  const double ww = dot3(w, w);
  if (ww > 0.0) cand[3] = clamp01(-dot3(p, w) / ww);
  if (dw != 0.0) cand[4] = clamp01(-dp / dw);
  double best = std::numeric_limits<double>::infinity();
  for (double u : cand) {
    const Vec3 x{p[0] + u * w[0], p[1] + u * w[1], p[2] + u * w[2]};
    best = std::min(best, singular_distance(a, x));
  }
  return best;
}

inline double segment_integral(const VectorPotential& a, const Vec3& p0, const Vec3& p1) {
  require_pre(segment_clearance(a, p0, p1) >= tol::min_singular_dist,
              "path: segment passes too close to the singular set");
  const Vec3 d{p1[0] - p0[0], p1[1] - p0[1], p1[2] - p0[2]};
  double acc = 0.0;
  for (std::size_t q = 0; q < gauss5_nodes.size(); ++q) {
    const double t = 0.5 * (gauss5_nodes[q] + 1.0);
    const Vec3 x{p0[0] + t * d[0], p0[1] + t * d[1], p0[2] + t * d[2]};
    acc += gauss5_weights[q] * dot3(evaluate_potential(a, x), d);
  }
  return 0.5 * acc;
}

}  // namespace detail

inline double line_integral(const VectorPotential& a, const PathPolyline& path) {
  validate_path(path);
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < path.points.size(); ++k)
    acc += detail::segment_integral(a, path.points[k], path.points[k + 1]);
  return acc;
}

inline cplx phase_factor_line_integral(const VectorPotential& a,
                                       const PathPolyline& path) {
  validate_path(path);
  cplx factor{1.0, 0.0};
  for (std::size_t k = 0; k + 1 < path.points.size(); ++k) {
    const double seg = a.coupling * detail::segment_integral(a, path.points[k],
                                                             path.points[k + 1]);
    factor *= cplx{std::cos(seg), std::sin(seg)};
  }
  return factor / std::abs(factor);
}

struct MonopoleReport {
  double flux = 0.0;
  bool quantized = false;
};

// Two-patch construction: the equator loop is integrated in the north gauge
// (string through the south pole) and in the south gauge (string through the
// north pole); the difference of the two circulations is the total flux.
inline MonopoleReport monopole_quantization_check(double g, double e,
                                                  int n_patch_grid) {
  require_pre(n_patch_grid >= 64, "monopole_quantization_check: grid too coarse");
  require_config(std::isfinite(g) && std::isfinite(e),
                 "monopole_quantization_check: g and e must be finite");

  PathPolyline equator;
  equator.closed = true;
  equator.points.resize(static_cast<std::size_t>(n_patch_grid) + 1);
  for (int k = 0; k < n_patch_grid; ++k) {
    const double phi = two_pi * static_cast<double>(k) / n_patch_grid;
    equator.points[static_cast<std::size_t>(k)] = Vec3{std::cos(phi), std::sin(phi), 0.0};
  }
  equator.points.back() = equator.points.front();

  const VectorPotential north = monopole_potential(g, e, Vec3{0.0, 0.0, -1.0});
  const VectorPotential south = monopole_potential(g, e, Vec3{0.0, 0.0, 1.0});
  MonopoleReport rep;
  rep.flux = line_integral(north, equator) - line_integral(south, equator);
  const double winding_charge = 2.0 * e * g;
  rep.quantized =
      std::abs(winding_charge - std::round(winding_charge)) <= tol::quantization_abs;
  return rep;
}

}  // namespace adlab
