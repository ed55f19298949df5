#include <doctest.h>

#include <cmath>

#include "bf/error.hpp"
#include "bf/reduction.hpp"
#include "bf/spectral_engine.hpp"
#include "oracles.hpp"

using namespace bf;

namespace {
CapillaryParam K(double k) { return CapillaryParam(k, 1e-6, kModelResonanceOrder); }

std::vector<cplx> eigenvalues4(const CMatrix4& m) {
  Eigen::ComplexEigenSolver<CMatrix4> es(m, false);
  return {es.eigenvalues().data(), es.eigenvalues().data() + 4};
}

std::vector<cplx> as_vec(const std::array<cplx, 4>& a) { return {a.begin(), a.end()}; }
}  // namespace

TEST_CASE("eps 0 quadruple equals the flat closed forms") {
  for (double kap : {0.0, 0.05, 0.3, 0.8})
    for (double mu : {0.01, 0.05, 0.1, 0.2}) {
      const FloquetFamily fam(K(kap), 0.0, 24);
      const auto spec = eig(fam.at(mu), true);
      QuadrupleOptions opt;
      opt.gap_factor = 0.0;  // only the labels are under test here
      const auto q = near_zero_quadruple(spec, K(kap), mu, opt);
      const auto want = oracle::flat_quadruple(kap, mu);
      CHECK(q.labeled);
      for (int i = 0; i < 4; ++i) CHECK(std::abs(q.values[i] - want[i]) < 1e-10);
      const auto closed = flat_quadruple(K(kap), mu);
      for (int i = 0; i < 4; ++i) CHECK(std::abs(closed[i] - want[i]) < 1e-14);
    }
}

TEST_CASE("quadruple collapses to 0 as mu -> 0") {
  const FloquetFamily fam(K(0.3), 0.0, 16);
  const auto q = near_zero_quadruple(eig(fam.at(1e-6), true), K(0.3), 1e-6);
  CHECK(!q.labeled);
  for (const cplx z : q.values) CHECK(std::abs(z) < 2e-3);
}

TEST_CASE("Benjamin-Feir pair leaves the imaginary axis") {
  const double mu = 0.5 * mu_bar_leading(K(0.05), 0.01);
  const FloquetFamily fam(K(0.05), 0.01, 32);
  const auto q = near_zero_quadruple(eig(fam.at(mu), true), K(0.05), mu);
  CHECK(q.lambda1_plus().real() > 1e-6);
  CHECK(q.lambda1_minus().real() < -1e-6);
  CHECK(std::abs(q.lambda0_plus().real()) < 1e-12);
}

TEST_CASE("reversible real form agrees with the complex solver") {
  const FloquetFamily fam(K(0.05), 0.01, 16);
  const auto op = fam.at(0.02);
  const auto a = eig(op, false, true);
  const auto b = eig(op, false, false);
  CHECK(oracle::multiset_distance(a.eigenvalues, b.eigenvalues) < 1e-11);
  CHECK(hamiltonian_pairing_defect(a.eigenvalues) < 1e-12);
}

TEST_CASE("Riesz projector on the flat operator") {
  const double kap = 0.3, mu = 0.1;
  const FloquetFamily fam(K(kap), 0.0, 16);
  const auto op = fam.at(mu);
  const auto spec = eig(op, true);
  QuadrupleOptions qo;
  qo.gap_factor = 0.0;
  const auto q = near_zero_quadruple(spec, K(kap), mu, qo);
  const auto plan = plan_contour(spec, q);
  const CMatrix p = riesz_projector(op, plan);
  CHECK(std::abs(p.trace() - 4.0) < 1e-6);
  CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("Riesz projector, compression and basis invariance at eps > 0") {
  const double kap = 0.05, eps = 0.01, mu = 0.01;
  const FloquetFamily fam(K(kap), eps, 32);
  const auto op = fam.at(mu);
  const auto spec = eig(op, true);
  const auto q = near_zero_quadruple(spec, K(kap), mu);
  const auto plan = plan_contour(spec, q);
  const CMatrix p = riesz_projector(op, plan);
  CHECK(std::abs(p.trace() - 4.0) < 1e-9);
  CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((p * op.matrix - op.matrix * p).norm() < 1e-10 * op.matrix.norm());

  const auto c = compress(op, p);
  CHECK(c.rank == 4);
  CHECK(oracle::multiset_distance(eigenvalues4(c.matrix), as_vec(q.values)) < 1e-8);
  const auto c1 = compress(op, p, 1u), c2 = compress(op, p, 2u);
  CHECK(oracle::multiset_distance(eigenvalues4(c1.matrix), eigenvalues4(c2.matrix)) < 1e-10);
  CHECK(((c1.basis.adjoint() * c1.basis) - CMatrix::Identity(4, 4)).norm() < 1e-13);

  const auto sc = symplectic_compression(op, p);
  CHECK(sc.symplectic_defect < 1e-12);
  CHECK(sc.factor_defect < 1e-12);
  CHECK(sc.invariance_residual < 1e-10);
  CHECK(oracle::multiset_distance(eigenvalues4(sc.matrix), as_vec(q.values)) < 1e-8);
}

TEST_CASE("kernel direction of the zero mode is kept by the projector at mu = 0") {
  // 0.8 has no integer resonance, so nothing else sits near 0
  const int band = 24;
  const FloquetFamily fam(K(0.8), 0.01, band);
  const auto op = fam.at(0.0);
  const CMatrix p = riesz_projector(op, 0.05, 128);
  CVector e = CVector::Zero(op.dim());
  e(mode_index(1, 0, band)) = 1.0;
  CHECK((p * e - e).norm() < 1e-10);
  CHECK(std::abs(p.trace() - 4.0) < 1e-9);
}

TEST_CASE("stable kappa keeps the cluster on the imaginary axis") {
  // mode 2 sits inside the cluster at 0.4, so no gap test; holes take care of it
  const double kap = 0.4, eps = 0.01, mu = 0.05;
  const FloquetFamily fam(K(kap), eps, 32);
  const auto op = fam.at(mu);
  const auto spec = eig(op, true);
  QuadrupleOptions qo;
  qo.gap_factor = 0.0;
  const auto q = near_zero_quadruple(spec, K(kap), mu, qo);
  const auto c = compress(op, riesz_projector(op, plan_contour(spec, q)));
  for (const cplx z : eigenvalues4(c.matrix)) CHECK(std::abs(z.real()) <= 5 * eps * eps * eps + 1e-9);
}

TEST_CASE("flat kernel basis is symplectic and spans the flat kernel") {
  const int band = 8;
  const CMatrix f = flat_kernel_basis(K(0.3), band);
  const CMatrix j = structure_matrices(band).J;
  CHECK((f.adjoint() * j * f - CMatrix(j4())).cwiseAbs().maxCoeff() < 1e-14);
  const CMatrix p0 = flat_kernel_projector(K(0.3), band);
  CHECK((p0 * f - f).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(std::abs(p0.trace() - 4.0) < 1e-13);
  const auto l0 = assemble_flat(K(0.3), 0.0, band);
  CHECK((l0.matrix * p0 - p0 * l0.matrix).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("error paths") {
  CHECK_THROWS_AS(check_contour({cplx(0.1, 0)}, Circle{0.0, 0.105}), Error);
  check_contour({cplx(0.1, 0)}, Circle{0.0, 0.2});
  const auto op = assemble_flat(K(0.3), 0.1, 8);
  try {
    compress(op, CMatrix::Zero(op.dim(), op.dim()));
    FAIL("expected RankFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RankFailure);
  }
}

TEST_CASE("small helpers") {
  const int band = 6;
  CVector v = CVector::Zero(operator_dim(band));
  v(mode_index(0, 0, band)) = 1;
  CHECK(low_mode_weight(v, band) == 1.0);
  v.setZero();
  v(mode_index(1, 5, band)) = 1;
  CHECK(low_mode_weight(v, band) == 0.0);
  CHECK(hamiltonian_pairing_defect({cplx(1, 1), cplx(-1, 1)}) == 0.0);
  CHECK(hamiltonian_pairing_defect({cplx(1, 0)}) == doctest::Approx(2.0));
}
