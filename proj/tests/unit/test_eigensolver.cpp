#include <doctest.h>

#include <random>

#include "bf/eigensolver.hpp"
#include "bf/operator_assembly.hpp"
#include "oracles.hpp"

using namespace bf;

namespace {
CMatrix random_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}
}  // namespace

TEST_CASE("diagonal input returns its entries exactly") {
  CVector d(5);
  d << cplx(1, 2), cplx(-3, 0), cplx(0, 0.5), cplx(7, -1), cplx(0, 0);
  const auto r = eig(CMatrix(d.asDiagonal()));
  std::vector<cplx> want(d.data(), d.data() + 5);
  CHECK(oracle::multiset_distance(r.eigenvalues, want) == 0.0);
}

TEST_CASE("2x2 Hamiltonian matrices pair lambda with -conj lambda") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  CMatrix2 j;
  j << 0, 1, -1, 0;
  for (int t = 0; t < 50; ++t) {
    const double a = g(rng), d = g(rng);
    const cplx b(g(rng), g(rng));
    CMatrix2 h;
    h << a, b, std::conj(b), d;
    const CMatrix2 m = j * h;
    // brute force characteristic polynomial
    const cplx tr = m.trace(), det = m.determinant();
    const cplx disc = std::sqrt(tr * tr - 4.0 * det);
    const std::vector<cplx> roots{(tr + disc) / 2.0, (tr - disc) / 2.0};
    const auto r = eig(CMatrix(m));
    CHECK(oracle::multiset_distance(r.eigenvalues, roots) < 1e-12);
    std::vector<cplx> mirrored;
    for (const cplx z : r.eigenvalues) mirrored.push_back(-std::conj(z));
    CHECK(oracle::multiset_distance(r.eigenvalues, mirrored) < 1e-12);
  }
}

TEST_CASE("random matrices: eigenvalues agree with a library solver, residuals small") {
  std::mt19937_64 rng(9);
  for (int n : {1, 3, 10, 40}) {
    const CMatrix a = random_matrix(n, rng);
    EigOptions opt;
    opt.vectors = true;
    const auto r = eig(a, opt);
    Eigen::ComplexEigenSolver<CMatrix> ref(a, false);
    const auto v = ref.eigenvalues();
    CHECK(oracle::multiset_distance(r.eigenvalues, {v.data(), v.data() + n}) < 1e-10);
    CHECK(r.max_residual() < 1e-12);
    CHECK(r.residuals.size() == std::size_t(n));
  }
}

TEST_CASE("Schur form reproduces the matrix") {
  std::mt19937_64 rng(1);
  const CMatrix a = random_matrix(12, rng);
  const auto s = schur(a);
  CHECK((s.z * s.t * s.z.adjoint() - a).norm() < 1e-12 * a.norm());
  CHECK((s.z.adjoint() * s.z - CMatrix::Identity(12, 12)).norm() < 1e-13);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < i; ++j) CHECK(s.t(i, j) == cplx{});
}

TEST_CASE("flat operator spectrum matches the closed forms") {
  const CapillaryParam kap(0.3);
  const int band = 16;
  const auto op = assemble_flat(kap, 0.1, band);
  const auto r = eig(op.matrix);
  std::vector<cplx> want;
  for (int k = -band; k <= band; ++k) {
    want.push_back(flat_eigenvalue(kap, k, Branch::Plus, 0.1));
    want.push_back(flat_eigenvalue(kap, -k, Branch::Minus, 0.1));
  }
  CHECK(oracle::multiset_distance(r.eigenvalues, want) < 1e-10);
}

TEST_CASE("spectral norm") {
  CMatrix m = CMatrix::Zero(3, 3);
  m(0, 0) = 3;
  m(1, 2) = cplx(0, -5);
  CHECK(spectral_norm(m) == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("eigenvectors on demand match stored ones up to phase") {
  std::mt19937_64 rng(4);
  const CMatrix a = random_matrix(8, rng);
  const auto r = eig(a);
  for (std::size_t k = 0; k < r.eigenvalues.size(); ++k) {
    const CVector v = r.vector(k);
    CHECK(std::abs(v.norm() - 1.0) < 1e-13);
    CHECK((a * v - r.eigenvalues[k] * v).norm() < 1e-11 * spectral_norm(a));
  }
}
