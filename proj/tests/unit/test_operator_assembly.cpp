#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <vector>

#include "bf/error.hpp"
#include "bf/operator_assembly.hpp"
#include "oracles.hpp"

using namespace bf;

namespace {
CapillaryParam K(double k) { return CapillaryParam(k, 1e-6, kModelResonanceOrder); }

std::vector<cplx> spectrum(const CMatrix& m) {
  Eigen::ComplexEigenSolver<CMatrix> es(m, false);
  const auto v = es.eigenvalues();
  return {v.data(), v.data() + v.size()};
}
}  // namespace

TEST_CASE("flat operator blocks carry the dispersion relation") {
  for (double kap : {0.0, 0.3, 0.8})
    for (double mu : {0.0, 0.1, 0.37}) {
      const int band = 6;
      const auto op = assemble_flat(K(kap), mu, band);
      for (int k = -band; k <= band; ++k) {
        const Eigen::Index i = mode_index(0, k, band), j = mode_index(1, k, band);
        CMatrix2 blk;
        blk << op.matrix(i, i), op.matrix(i, j), op.matrix(j, i), op.matrix(j, j);
        const auto [r1, r2] = oracle::flat_block_roots(kap, k + mu);
        Eigen::ComplexEigenSolver<CMatrix2> es(blk, false);
        CHECK(oracle::multiset_distance({es.eigenvalues()(0), es.eigenvalues()(1)}, {r1, r2}) < 1e-13);
        const cplx p = flat_eigenvalue(K(kap), k, Branch::Plus, mu);
        const cplx q = flat_eigenvalue(K(kap), -k, Branch::Minus, mu);
        CHECK(oracle::multiset_distance({p, q}, {r1, r2}) < 1e-13);
      }
      // no coupling between modes
      for (int k = -band; k <= band; ++k)
        for (int m = -band; m <= band; ++m)
          if (k != m) CHECK(op.matrix(mode_index(0, k, band), mode_index(1, m, band)) == cplx{});
    }
}

TEST_CASE("zero has multiplicity four at mu = 0") {
  const auto op = assemble_flat(K(0.3), 0.0, 8);
  int zeros = 0;
  for (const cplx z : spectrum(op.matrix)) zeros += std::abs(z) < 1e-6;
  CHECK(zeros == 4);
}

TEST_CASE("stable flat spectrum is imaginary") {
  const auto op = assemble_flat(K(0.3), 0.1, 16);
  for (const cplx z : spectrum(op.matrix)) CHECK(std::abs(z.real()) < 1e-12);
}

TEST_CASE("Sigma at eps 0 and its Hermiticity") {
  const auto s = expand(K(0.2 + 0.01));
  const int band = 8;
  const CMatrix sig0 = sigma_matrix(s, frakp_profile(s, 0.0), 0.1, 0.0, band);
  for (int k = -band; k <= band; ++k)
    for (int m = -band; m <= band; ++m) {
      const cplx expect = k == m ? cplx(-(k + 0.1) * (k + 0.1)) : cplx{};
      CHECK(std::abs(sig0(k + band, m + band) - expect) < 1e-14);
    }
  const CMatrix sig = sigma_matrix(s, frakp_profile(s, 0.01), 0.1, 0.01, band);
  CHECK(hermiticity_defect(sig) <= 1e-12 * sig.norm());
  // mu = 0: real symmetric in the cosine basis, i.e. M(k,m) = conj M(-k,-m)
  const CMatrix s00 = sigma_matrix(s, frakp_profile(s, 0.01), 0.0, 0.01, band);
  double defect = 0;
  for (int k = -band; k <= band; ++k)
    for (int m = -band; m <= band; ++m)
      defect = std::max(defect, std::abs(s00(k + band, m + band) - std::conj(s00(-k + band, -m + band))));
  CHECK(defect < 1e-15 * s00.norm());
}

TEST_CASE("eps 0 assembly equals the flat operator bit for bit") {
  const auto s = expand(K(0.3));
  const auto a = assemble(s, frakp_profile(s, 0.0), 0.17, 0.0, 10);
  const auto f = assemble_flat(K(0.3), 0.17, 10);
  CHECK((a.matrix - f.matrix).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("factorization, Hermiticity, reversibility") {
  const int band = 12;
  const auto st = structure_matrices(band);
  for (auto [kap, eps, mu] : {std::tuple{0.05, 0.01, 0.02}, {0.2, 0.01, 0.1}, {0.8, 0.02, 0.3}}) {
    const FloquetFamily fam(K(kap), eps, band);
    const auto op = fam.at(mu);
    const CMatrix b = fam.b_at(mu);
    CHECK((op.matrix - st.J * b).cwiseAbs().maxCoeff() <= 1e-13 * b.norm());
    CHECK(hermiticity_defect(b) <= 1e-12 * b.norm());
    CHECK(reversibility_defect(op.matrix, st) <= 1e-13 * op.matrix.norm());
    CHECK(reversibility_preserving_defect(b, st) <= 1e-13 * b.norm());
  }
}

TEST_CASE("B at eps 0, mu 0 and the zero-mode entry") {
  const double kap = 0.3, c = std::sqrt(1.3);
  const int band = 5;
  const auto s = expand(K(kap));
  const CMatrix b = assemble_B(s, frakp_profile(s, 0.0), 0.0, 0.0, band);
  for (int k = -band; k <= band; ++k) {
    const Eigen::Index i = mode_index(0, k, band), j = mode_index(1, k, band);
    CHECK(std::abs(b(i, i) - (1 + kap * k * k)) < 1e-14);
    CHECK(std::abs(b(i, j) - cplx(0, -c * k)) < 1e-14);
    CHECK(std::abs(b(j, i) - cplx(0, c * k)) < 1e-14);
    CHECK(std::abs(b(j, j) - double(std::abs(k))) < 1e-14);
  }
  const double mu = 0.23;
  const CMatrix bm = assemble_B(s, frakp_profile(s, 0.0), mu, 0.0, band);
  const Eigen::Index z = mode_index(1, 0, band);
  CHECK(std::abs(bm(z, z) - mu) < 1e-15);

  const auto sh = expand(K(0.05));
  const CMatrix b2 = assemble_B(sh, frakp_profile(sh, 0.01), 0.02, 0.01, 16);
  CHECK(hermiticity_defect(b2) <= 1e-12 * b2.norm());
}

TEST_CASE("|D + mu| written two ways") {
  for (double mu : {0.0, 0.1, 0.25, 0.49}) {
    const CVector a = abs_d_mu(mu, 10), b = abs_d_mu_split(mu, 10);
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("Hamiltonian pairing of the assembled spectrum") {
  const FloquetFamily fam(K(0.05), 0.01, 12);
  const auto op = fam.at(0.02);
  const auto ev = spectrum(op.matrix);
  std::vector<cplx> mirrored;
  for (const cplx z : ev) mirrored.push_back(-std::conj(z));
  CHECK(oracle::multiset_distance(ev, mirrored) <= 1e-8 * op.matrix.norm());
}

TEST_CASE("zero-mode column vanishes at mu = 0") {
  const FloquetFamily fam(K(0.05), 0.01, 12);
  const auto op = fam.at(0.0);
  CHECK(op.matrix.col(mode_index(1, 0, 12)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("matrix dump round trip") {
  const FloquetFamily fam(K(0.05), 0.01, 8);
  const auto op = fam.at(0.03);
  const std::string path = "bf_dump_test.bin";
  write_matrix_dump(path, op);
  const auto back = read_matrix_dump(path);
  std::remove(path.c_str());
  CHECK(back.band == 8);
  CHECK(back.mu == op.mu);
  CHECK(back.eps == op.eps);
  CHECK(back.kappa == op.kappa);
  CHECK((back.matrix - op.matrix).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(read_matrix_dump("/nonexistent/dir/x.bin"), Error);
}
