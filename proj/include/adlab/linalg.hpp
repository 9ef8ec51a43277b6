#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "adlab/errors.hpp"
#include "adlab/tolerances.hpp"

namespace adlab {

using cplx = std::complex<double>;

inline constexpr double two_pi = 6.283185307179586476925286766559;

/// Dense complex state vector; everything here targets small Hilbert spaces.
using ComplexVector = std::vector<cplx>;

inline constexpr int max_dim = 16;

inline void check_dim(std::size_t n, const char* who) {
  require_pre(n >= 1 && n <= static_cast<std::size_t>(max_dim),
              std::string(who) + ": dimension must be in [1, 16]");
}

/// <a|b>, conjugate-linear in the first argument.
inline cplx inner(const ComplexVector& a, const ComplexVector& b) {
  require_pre(a.size() == b.size() && !a.empty(), "inner: dimension mismatch");
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

inline double norm(const ComplexVector& a) {
  double acc = 0.0;
  for (const cplx& z : a) acc += std::norm(z);
  return std::sqrt(acc);
}

inline ComplexVector scaled(const ComplexVector& a, cplx z) {
  ComplexVector r(a);
  for (cplx& v : r) v *= z;
  return r;
}

inline ComplexVector sub(const ComplexVector& a, const ComplexVector& b) {
  require_pre(a.size() == b.size(), "sub: dimension mismatch");
  ComplexVector r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

inline bool all_finite(const ComplexVector& a) {
  for (const cplx& z : a)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

/// Square row-major complex matrix.
struct ComplexMatrix {
  int n = 0;
  std::vector<cplx> a;

  ComplexMatrix() = default;
  explicit ComplexMatrix(int dim)
      : n(dim), a(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim)) {
    check_dim(static_cast<std::size_t>(dim), "ComplexMatrix");
  }

  cplx& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  const cplx& operator()(int i, int j) const {
    return a[static_cast<std::size_t>(i) * n + j];
  }

  static ComplexMatrix identity(int dim) {
    ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }
};

inline double norm_max(const ComplexMatrix& m) {
  double acc = 0.0;
  for (const cplx& z : m.a) acc = std::max(acc, std::abs(z));
  return acc;
}

inline ComplexMatrix adjoint(const ComplexMatrix& m) {
  ComplexMatrix r(m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) r(i, j) = std::conj(m(j, i));
  return r;
}

inline ComplexVector matvec(const ComplexMatrix& m, const ComplexVector& v) {
  require_pre(static_cast<std::size_t>(m.n) == v.size(), "matvec: dimension mismatch");
  ComplexVector r(v.size(), cplx{0.0, 0.0});
  for (int i = 0; i < m.n; ++i) {
    cplx acc{0.0, 0.0};
    for (int j = 0; j < m.n; ++j) acc += m(i, j) * v[j];
    r[static_cast<std::size_t>(i)] = acc;
  }
  return r;
}

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_pre(a.n == b.n, "matmul: dimension mismatch");
  ComplexMatrix r(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int k = 0; k < a.n; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{0.0, 0.0}) continue;
      for (int j = 0; j < a.n; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

inline double unitarity_defect(const ComplexMatrix& u) {
  ComplexMatrix p = matmul(adjoint(u), u);
  for (int i = 0; i < p.n; ++i) p(i, i) -= 1.0;
  return norm_max(p);
}

/// Hermitian matrix validated on construction; never silently symmetrized.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(ComplexMatrix m) : m_(std::move(m)) {
    check_dim(static_cast<std::size_t>(m_.n), "HermitianMatrix");
    const double scale = norm_max(m_);
    double defect = 0.0;
    for (int i = 0; i < m_.n; ++i)
      for (int j = i; j < m_.n; ++j)
        defect = std::max(defect, std::abs(m_(i, j) - std::conj(m_(j, i))));
    require_pre(defect <= tol::hermitian_rel * scale,
                "HermitianMatrix: hermiticity defect " + std::to_string(defect));
  }

  int dim() const { return m_.n; }
  const ComplexMatrix& matrix() const { return m_; }
  const cplx& operator()(int i, int j) const { return m_(i, j); }

 private:
  ComplexMatrix m_;
};

/// Averages a matrix with its adjoint; the explicit repair step used after
/// entry-wise interpolation of sampled families.
inline HermitianMatrix symmetrized(const ComplexMatrix& m) {
  ComplexMatrix r(m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) r(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  return HermitianMatrix(std::move(r));
}

namespace detail {

inline Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  Eigen::MatrixXcd e(m.n, m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) e(i, j) = m(i, j);
  return e;
}

}  // namespace detail

struct EigResult {
  std::vector<double> values;          // ascending
  std::vector<ComplexVector> vectors;  // vectors[k] pairs with values[k]
  bool degenerate = false;
};

/// Full eigendecomposition of a Hermitian matrix.  Eigenvalues ascend,
/// vectors come back orthonormal, and each vector's global phase is fixed by
/// making its largest-magnitude component real positive (ties: lowest index).
/// That choice is only an initial gauge; frame construction re-fixes phases
/// by continuity along the grid.
inline EigResult eig_hermitian(const HermitianMatrix& M) {
  const int n = M.dim();
  const double scale = norm_max(M.matrix());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(detail::to_eigen(M.matrix()));
  require_num(es.info() == Eigen::Success, "eig_hermitian: decomposition failed");

  EigResult r;
  r.values.resize(static_cast<std::size_t>(n));
  r.vectors.assign(static_cast<std::size_t>(n), ComplexVector(static_cast<std::size_t>(n)));
  for (int k = 0; k < n; ++k) {
    r.values[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
    for (int i = 0; i < n; ++i)
      r.vectors[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] =
          es.eigenvectors()(i, k);
  }

  for (ComplexVector& v : r.vectors) {
    std::size_t imax = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double m = std::abs(v[i]);
      if (m > best) {
        best = m;
        imax = i;
      }
    }
    const cplx z = v[imax];
    if (best > 0.0) {
      const cplx phase = std::conj(z) / best;
      for (cplx& c : v) c *= phase;
    }
  }

  for (int k = 0; k < n; ++k) {
    ComplexVector mv = matvec(M.matrix(), r.vectors[static_cast<std::size_t>(k)]);
    ComplexVector lv =
        scaled(r.vectors[static_cast<std::size_t>(k)], r.values[static_cast<std::size_t>(k)]);
    require_num(norm(sub(mv, lv)) <= tol::eig_residual_rel * scale,
                "eig_hermitian: residual out of tolerance");
  }
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const cplx o = inner(r.vectors[static_cast<std::size_t>(j)],
                           r.vectors[static_cast<std::size_t>(k)]);
      const double want = (j == k) ? 1.0 : 0.0;
      require_num(std::abs(o - want) <= tol::orthonormal_abs,
                  "eig_hermitian: eigenvectors not orthonormal");
    }

  for (int k = 0; k + 1 < n; ++k) {
    const double gap =
        r.values[static_cast<std::size_t>(k) + 1] - r.values[static_cast<std::size_t>(k)];
    if (gap <= tol::gap_rel * scale) r.degenerate = true;
  }
  return r;
}

/// exp(-i M dt) through the eigendecomposition; exactly the identity at dt = 0.
inline ComplexMatrix expm_step(const HermitianMatrix& M, double dt) {
  require_pre(std::isfinite(dt), "expm_step: dt must be finite");
  const int n = M.dim();
  if (dt == 0.0) return ComplexMatrix::identity(n);

  const EigResult eg = eig_hermitian(M);
  ComplexMatrix u(n);
  for (int k = 0; k < n; ++k) {
    const double phi = -eg.values[static_cast<std::size_t>(k)] * dt;
    const cplx w{std::cos(phi), std::sin(phi)};
    const ComplexVector& v = eg.vectors[static_cast<std::size_t>(k)];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        u(i, j) += w * v[static_cast<std::size_t>(i)] * std::conj(v[static_cast<std::size_t>(j)]);
  }
  require_num(unitarity_defect(u) <= tol::unitary_abs, "expm_step: lost unitarity");
  return u;
}

/// Solves A x = b by partial-pivot LU; used for the implicit end-point step
/// of the integral-equation march.
inline ComplexVector solve(const ComplexMatrix& A, const ComplexVector& b) {
  require_pre(static_cast<std::size_t>(A.n) == b.size(), "solve: dimension mismatch");
  Eigen::VectorXcd eb(A.n);
  for (int i = 0; i < A.n; ++i) eb(i) = b[static_cast<std::size_t>(i)];
  Eigen::VectorXcd x = detail::to_eigen(A).partialPivLu().solve(eb);
  ComplexVector r(b.size());
  for (int i = 0; i < A.n; ++i) r[static_cast<std::size_t>(i)] = x(i);
  require_num(all_finite(r), "solve: non-finite solution");
  return r;
}

}  // namespace adlab
