#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "adlab/linalg.hpp"
#include "adlab/tolerances.hpp"
#include "test_util.hpp"

using namespace adlab;

TEST_CASE("inner is conjugate-linear in the first slot") {
  std::mt19937 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 1 + static_cast<int>(rng() % 16);
    const ComplexVector a = testutil::random_state(rng, n);
    const ComplexVector b = testutil::random_state(rng, n);
    const cplx ab = inner(a, b);
    const cplx ba = inner(b, a);
    REQUIRE(std::abs(ab - std::conj(ba)) < 1e-14);
  }
  REQUIRE_THROWS_AS(inner(ComplexVector{1.0}, ComplexVector{1.0, 2.0}), precondition_error);
}

TEST_CASE("pauli-x eigensystem") {
  const EigResult r = eig_hermitian(testutil::pauli_x());
  REQUIRE(r.values[0] == Catch::Approx(-1.0).margin(1e-14));
  REQUIRE(r.values[1] == Catch::Approx(1.0).margin(1e-14));
  REQUIRE_FALSE(r.degenerate);
  const double s = 1.0 / std::sqrt(2.0);
  // tie on component magnitude resolves to the lowest index, made real positive
  REQUIRE(std::abs(r.vectors[1][0] - cplx{s, 0.0}) < 1e-12);
  REQUIRE(std::abs(r.vectors[1][1] - cplx{s, 0.0}) < 1e-12);
  REQUIRE(std::abs(r.vectors[0][0] - cplx{s, 0.0}) < 1e-12);
  REQUIRE(std::abs(r.vectors[0][1] + cplx{s, 0.0}) < 1e-12);
}

TEST_CASE("identity matrix is flagged degenerate") {
  const EigResult r = eig_hermitian(HermitianMatrix(ComplexMatrix::identity(2)));
  REQUIRE(r.values[0] == Catch::Approx(1.0).margin(1e-14));
  REQUIRE(r.values[1] == Catch::Approx(1.0).margin(1e-14));
  REQUIRE(r.degenerate);
}

TEST_CASE("eigen quality on random hermitian matrices") {
  std::mt19937 rng(7);
  for (int n : {1, 2, 3, 5, 8, 16}) {
    const HermitianMatrix M = testutil::random_hermitian(rng, n);
    const EigResult r = eig_hermitian(M);
    const double scale = norm_max(M.matrix());

    for (std::size_t k = 0; k + 1 < r.values.size(); ++k)
      REQUIRE(r.values[k] <= r.values[k + 1]);

    for (int k = 0; k < n; ++k) {
      const ComplexVector mv = matvec(M.matrix(), r.vectors[k]);
      const ComplexVector lv = scaled(r.vectors[k], r.values[k]);
      REQUIRE(norm(sub(mv, lv)) <= tol::eig_residual_rel * scale);
      // gauge: largest-magnitude component is real positive
      std::size_t imax = 0;
      double best = -1.0;
      for (std::size_t i = 0; i < r.vectors[k].size(); ++i)
        if (std::abs(r.vectors[k][i]) > best) {
          best = std::abs(r.vectors[k][i]);
          imax = i;
        }
      REQUIRE(r.vectors[k][imax].real() > 0.0);
      REQUIRE(std::abs(r.vectors[k][imax].imag()) <= 1e-12);
    }

    // orthonormality and completeness
    ComplexMatrix sum(n);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const cplx o = inner(r.vectors[j], r.vectors[k]);
        REQUIRE(std::abs(o - (j == k ? 1.0 : 0.0)) <= tol::orthonormal_abs);
      }
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) sum(p, q) += r.vectors[j][p] * std::conj(r.vectors[j][q]);
    }
    for (int p = 0; p < n; ++p) sum(p, p) -= 1.0;
    REQUIRE(norm_max(sum) <= 1e-12);
  }
}

TEST_CASE("hermiticity is validated, not repaired") {
  ComplexMatrix bad(2);
  bad(0, 1) = cplx{0.0, 1.0};
  bad(1, 0) = cplx{0.0, 1.0};  // conj would be -i
  REQUIRE_THROWS_AS(HermitianMatrix(std::move(bad)), precondition_error);

  ComplexMatrix fixable(2);
  fixable(0, 1) = cplx{0.0, 1.0};
  fixable(1, 0) = cplx{0.0, 1.0};
  const HermitianMatrix h = symmetrized(fixable);
  REQUIRE(std::abs(h(0, 1)) < 1e-15);  // averaged away
}

TEST_CASE("dimension gate") {
  REQUIRE_THROWS_AS(ComplexMatrix(17), precondition_error);
  REQUIRE_NOTHROW(ComplexMatrix(16));
}

TEST_CASE("expm_step basics") {
  const ComplexMatrix mz = expm_step(testutil::pauli_z(), M_PI);
  // exp(-i pi sigma_z) = -1
  REQUIRE(std::abs(mz(0, 0) + 1.0) < tol::unitary_abs);
  REQUIRE(std::abs(mz(1, 1) + 1.0) < tol::unitary_abs);
  REQUIRE(std::abs(mz(0, 1)) < tol::unitary_abs);

  const ComplexMatrix id = expm_step(testutil::pauli_z(), 0.0);
  REQUIRE(id(0, 0) == cplx{1.0, 0.0});
  REQUIRE(id(0, 1) == cplx{0.0, 0.0});
}

TEST_CASE("expm_step stays unitary, including degenerate spectra") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> dt(-3.0, 3.0);
  for (int n : {2, 4, 9}) {
    for (int rep = 0; rep < 10; ++rep) {
      const HermitianMatrix M = testutil::random_hermitian(rng, n);
      const ComplexMatrix u = expm_step(M, dt(rng));
      REQUIRE(unitarity_defect(u) <= tol::unitary_abs);
    }
  }
  ComplexMatrix deg(3);
  deg(0, 0) = 1.0;
  deg(1, 1) = 1.0;
  deg(2, 2) = 2.0;
  const ComplexMatrix u = expm_step(HermitianMatrix(std::move(deg)), 0.7);
  REQUIRE(unitarity_defect(u) <= tol::unitary_abs);
  for (const cplx& z : u.a) REQUIRE(std::isfinite(std::abs(z)));
}

TEST_CASE("small linear solve") {
  std::mt19937 rng(31);
  const int n = 4;
  ComplexMatrix A(n);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (cplx& z : A.a) z = cplx{u(rng), u(rng)};
  for (int i = 0; i < n; ++i) A(i, i) += 4.0;  // keep it well conditioned
  const ComplexVector x = testutil::random_state(rng, n);
  const ComplexVector b = matvec(A, x);
  const ComplexVector got = solve(A, b);
  REQUIRE(norm(sub(got, x)) < 1e-12);
}
