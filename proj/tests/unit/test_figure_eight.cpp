#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "bf/error.hpp"
#include "bf/figure_eight.hpp"

using namespace bf;

namespace {
CapillaryParam K(double k) { return CapillaryParam(k, 1e-6, kModelResonanceOrder); }

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}
}  // namespace

TEST_CASE("pure gravity threshold") {
  const FloquetFamily fam(K(0), 0.01, 32);
  const auto mb = locate_mu_bar(fam);
  CHECK(std::abs(mb.mu_bar / 0.0282843 - 1) < 0.15);
  CHECK(mb.lo <= mb.mu_bar);
  CHECK(mb.mu_bar <= mb.hi);
}

TEST_CASE("figure-eight trace at kappa 0") {
  const auto br = trace_figure_eight(K(0), 0.01, 1.2 * 0.0282843, 16, 32);
  CHECK(br.mu_bar_numeric.has_value());
  CHECK(std::is_sorted(br.mu_grid.begin(), br.mu_grid.end()));
  double max_re = 0;
  for (std::size_t i = 0; i < br.mu_grid.size(); ++i) {
    max_re = std::max(max_re, br.lambda1_plus[i].real());
    // the pair is symmetric about the imaginary axis
    CHECK(std::abs(br.lambda1_plus[i].real() + br.lambda1_minus[i].real()) < 1e-12);
  }
  CHECK(max_re == doctest::Approx(5e-5).epsilon(0.1));
}

TEST_CASE("growth rate and its eps^2 law") {
  const auto g1 = max_growth_rate(K(0), 0.01, 32);
  CHECK(g1.rate == doctest::Approx(0.5e-4).epsilon(0.1));
  const auto g2 = max_growth_rate(K(0), 0.005, 32);
  CHECK(g1.rate / g2.rate == doctest::Approx(4.0).epsilon(0.1));
  CHECK(g2.mu_star < g1.mu_star);
}

TEST_CASE("stable kappa is refused") {
  CHECK(code_of([] { max_growth_rate(K(0.3), 0.01, 32); }) == ErrorCode::NotUnstable);
  CHECK(code_of([] { trace_figure_eight(K(0.3), 0.01, 0.05, 10, 32); }) == ErrorCode::NotUnstable);
  CHECK(code_of([] { trace_figure_eight(K(0), 0.03, 0.05, 10, 32); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("orientation of the figure-eight") {
  // breve c = (1 - kappa) / c_kappa
  for (auto [kap, sign] : {std::pair{0.8, 1.0}, {1.5, -1.0}}) {
    const double mb = mu_bar_leading(K(kap), 0.01);
    const FloquetFamily fam(K(kap), 0.01, 32);
    for (double f : {0.1, 0.25, 0.5}) {
      const auto s = sample_quadruple(fam, f * mb);
      const auto& q = s.quadruple;
      CHECK(q.lambda1_plus().real() > 0);
      CHECK(sign * (q.lambda1_plus().imag() + q.lambda1_minus().imag()) > 0);
    }
  }
}

TEST_CASE("leading-order curve") {
  const double mu = 0.01, eps = 0.01;
  const cplx z = figure_eight_leading(K(0), mu, eps);
  CHECK(z.real() == doctest::Approx(mu / 8 * std::sqrt(8e-4 - 1e-4)).epsilon(1e-13));
  CHECK(z.imag() == doctest::Approx(mu / 2).epsilon(1e-13));
  CHECK(figure_eight_leading(K(0), 0.05, eps).real() == 0.0);
}
