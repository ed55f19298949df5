#include <doctest.h>

#include <cmath>
#include <random>

#include "bf/closed_form.hpp"
#include "bf/error.hpp"
#include "oracles.hpp"

using namespace bf;

namespace {
CapillaryParam K(double k) { return CapillaryParam(k); }

bool throws_code(auto&& f, ErrorCode code) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}
}  // namespace

TEST_CASE("phase speed") {
  CHECK(phase_speed(K(0)) == 1.0);
  CHECK(phase_speed(K(3)) == 2.0);
  const double c = phase_speed(K(0.5));
  CHECK(c == doctest::Approx(1.2247448713915890).epsilon(1e-15));
  CHECK(std::abs(c * c - 1.5) < 1e-15);
}

TEST_CASE("coefficient triple at kappa 0 and kappa_c") {
  const auto e = coeffs_e(K(0));
  CHECK(e.e11 == 1.0);
  CHECK(e.e22 == 1.0);
  CHECK(e.e12 == 1.0);
  const double kc = 2.0 * std::sqrt(3.0) / 3.0 - 1.0;
  CHECK(std::abs(-3 * kc * kc - 6 * kc + 1) < 1e-15);  // root of the numerator
  CHECK(std::abs(coeffs_e(K(kc)).e22) <= 1e-14);
  CHECK(throws_code([] { coeffs_e(K(0.5 - 1e-6)); }, ErrorCode::SingularKappa));
}

TEST_CASE("coefficients match the written-out formulas on random kappa") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int i = 0; i < 300; ++i) {
    const double k = u(rng);
    if (std::abs(k - 0.5) < 1e-3) continue;
    const auto e = coeffs_e(K(k));
    CHECK(e.e11 == doctest::Approx(oracle::e11(k)).epsilon(1e-13));
    CHECK(e.e22 == doctest::Approx(oracle::e22(k)).epsilon(1e-12).scale(1e-3));
    CHECK(e.e12 == doctest::Approx(oracle::e12(k)).epsilon(1e-13));
    CHECK(whitham_benjamin(K(k)) == doctest::Approx(oracle::e_wb(k)).epsilon(1e-12).scale(1e-3));
  }
}

TEST_CASE("whitham-benjamin special values") {
  CHECK(whitham_benjamin(K(0)) == 1.0);
  CHECK(std::abs(whitham_benjamin(K(kKappaCritical))) < 1e-13);
  CHECK(whitham_benjamin(K(1)) == doctest::Approx(88.0 / 32.0).epsilon(1e-15));
}

TEST_CASE("product identity on 500 points of [0, 3]") {
  for (int i = 0; i < 500; ++i) {
    const double k = 3.0 * (i + 0.5) / 500.0;
    if (std::abs(k - 0.5) < 1e-6) continue;
    const auto e = coeffs_e(K(k));
    const double wb = whitham_benjamin(K(k));
    CHECK(std::abs(wb - e.e11 * e.e22) <= 1e-12 * (1 + std::abs(wb)));
  }
}

TEST_CASE("sign of e_WB follows the region") {
  for (int i = 0; i < 300; ++i) {
    const double k = 2.0 * (i + 0.5) / 300.0;
    const CapillaryParam p(k, 1e-6, kModelResonanceOrder);
    const RegionLabel r = classify(p);
    if (r == RegionLabel::Unstable) CHECK(whitham_benjamin(p) > 0);
    if (r == RegionLabel::Stable) CHECK(whitham_benjamin(p) < 0);
  }
}

TEST_CASE("classification") {
  CHECK(classify(CapillaryParam(0.05, 1e-6, kModelResonanceOrder)) == RegionLabel::Unstable);
  CHECK(classify(K(0.3)) == RegionLabel::Stable);
  CHECK(classify(K(1.0 / 3.0)) == RegionLabel::Resonant);
  CHECK(classify(K(0.5)) == RegionLabel::Singular);
  CHECK(classify(K(0.1547005)) == RegionLabel::Critical);
  CHECK(classify(K(0.8)) == RegionLabel::Unstable);
  CHECK(classify(K(0)) == RegionLabel::Unstable);
  // singular wins over resonant at 1/2
  CHECK(K(0.5).resonant_order() == 2);
  CHECK(K(0.25 + 5e-7).resonant_order() == 4);
  CHECK(!K(0.26).resonant_order());
  // the model cap lets high-order resonances through
  CHECK(classify(CapillaryParam(0.05, 1e-6, kModelResonanceOrder)) == RegionLabel::Unstable);
  CHECK(classify(CapillaryParam(0.05)) == RegionLabel::Resonant);
  CHECK(throws_code([] { CapillaryParam(-1.0); }, ErrorCode::InvalidArgument));
  CHECK(throws_code([] { CapillaryParam(std::nan("")); }, ErrorCode::InvalidArgument));
  CHECK(throws_code([] { K(1.0 / 3.0).require_regular(); }, ErrorCode::ResonantKappa));
}

TEST_CASE("mu_bar_leading") {
  CHECK(mu_bar_leading(K(0), 0.01) == doctest::Approx(0.01 * std::sqrt(8.0)).epsilon(1e-15));
  CHECK(throws_code([] { mu_bar_leading(K(0.3), 0.01); }, ErrorCode::NotUnstable));
  const double k = 0.05;
  const CapillaryParam p(k, 1e-6, kModelResonanceOrder);
  CHECK(mu_bar_leading(p, 0.01) ==
        doctest::Approx(0.01 * std::sqrt(8 * oracle::e11(k) / oracle::e22(k))).epsilon(1e-13));
}

TEST_CASE("discriminant") {
  const CapillaryParam p(0.05, 1e-6, kModelResonanceOrder);
  CHECK(delta_bf_leading(p, 0.0, 0.01) ==
        doctest::Approx(8 * oracle::e_wb(0.05) * 1e-4).epsilon(1e-13));
  const double mb = mu_bar_leading(p, 0.01);
  CHECK(std::abs(delta_bf_leading(p, mb, 0.01)) < 1e-16);
  for (double mu : {1e-3, 0.05, 0.2}) CHECK(delta_bf_leading(K(0.3), mu, 0.01) < 0);
}

TEST_CASE("lambda1_leading") {
  const auto flat = lambda1_leading(K(0.2 + 0.01), 0.05, 0.0);
  CHECK(flat.regime == SplitRegime::ImaginarySplit);
  CHECK(flat.value_plus.real() == 0.0);
  CHECK(flat.value_minus.real() == 0.0);

  const auto zero = lambda1_leading(K(0), 0.0, 0.01);
  CHECK(std::abs(zero.value_plus) == 0.0);
  CHECK(std::abs(zero.value_minus) == 0.0);

  const auto p = lambda1_leading(K(0), 0.01, 0.01);
  const double re = 0.125 * 0.01 * std::sqrt(8e-4 - 1e-4);
  CHECK(p.regime == SplitRegime::RealSplit);
  CHECK(p.value_plus.real() == doctest::Approx(re).epsilon(1e-13));
  CHECK(p.value_minus.real() == doctest::Approx(-re).epsilon(1e-13));
  CHECK(p.value_plus.imag() == doctest::Approx(0.005).epsilon(1e-13));
}

TEST_CASE("lambda1_leading at eps 0 tracks the flat k=1 pair to O(mu^3)") {
  // Slope of the defect between mu = 0.04 and 0.01.
  for (double kap : {0.0, 0.3, 0.8}) {
  auto defect = [&](double mu) {
    const auto l = lambda1_leading(K(kap), mu, 0.0);
    const auto q = oracle::flat_quadruple(kap, mu);
    return std::max(std::abs(l.value_plus - q[0]), std::abs(l.value_minus - q[1]));
  };
  const double s1 = std::log(defect(0.04) / defect(0.02)) / std::log(2.0);
  const double s2 = std::log(defect(0.02) / defect(0.01)) / std::log(2.0);
  CHECK(s1 >= 2.9);
  CHECK(s2 >= 2.9);
  }
}

TEST_CASE("lambda0_leading and flat eigenvalues") {
  const auto z = lambda0_leading(K(0.4), 0.0);
  CHECK(z.first == cplx{});
  CHECK(z.second == cplx{});
  // i mu c -/+ i sqrt(mu) = 0.25i -/+ 0.5i
  const auto l = lambda0_leading(K(0), 0.25);
  CHECK(std::abs(l.first - cplx(0, -0.25)) < 1e-16);
  CHECK(std::abs(l.second - cplx(0, 0.75)) < 1e-16);
  CHECK(std::abs(l.first - flat_eigenvalue(K(0), 0, Branch::Plus, 0.25)) < 1e-16);
  CHECK(flat_eigenvalue(K(0), 0, Branch::Plus, 0.25) == cplx(0, -0.25));
  CHECK(std::abs(flat_eigenvalue(K(0.3), 1, Branch::Plus, 0.0)) < 1e-16);

  const double k = 0.3;
  const cplx l2 = flat_eigenvalue(K(k), 2, Branch::Plus, 0.0);
  CHECK(std::abs(l2 - oracle::I * (2 * oracle::c_kappa(k) - std::sqrt(2 * (1 + 4 * k)))) < 1e-15);
  CHECK(std::abs(l2) > 1e-3);

  for (double kap : {0.0, 0.3, 0.8, 2.0})
    for (int m = -4; m <= 4; ++m)
      for (double mu : {0.0, 0.1, 0.37}) {
        for (Branch b : {Branch::Plus, Branch::Minus}) CHECK(flat_eigenvalue(K(kap), m, b, mu).real() == 0.0);
        // both roots of the mode-(m) block appear among the two branches
        const auto [r1, r2] = oracle::flat_block_roots(kap, m + mu);
        const cplx p = flat_eigenvalue(K(kap), m, Branch::Plus, mu);
        const cplx q = flat_eigenvalue(K(kap), -m, Branch::Minus, mu);
        CHECK(oracle::multiset_distance({p, q}, {r1, r2}) < 1e-13);
      }
  CHECK(lambda0_leading(K(0.7), 0.13).first.real() == 0.0);
}
