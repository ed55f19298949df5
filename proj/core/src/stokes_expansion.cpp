#include "bf/stokes_expansion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bf/error.hpp"

namespace bf {

StokesExpansion expand(const CapillaryParam& kappa) {
  kappa.require_regular();
  const double k = kappa.kappa();
  const double c = phase_speed(kappa);
  const double m = 1.0 - 2.0 * k;

  StokesExpansion s{.kappa = kappa,
                    .c_kappa = c,
                    .eta2_2 = c * c / (2.0 * m),
                    .psi2_2 = c * c * c / (2.0 * m),
                    .c2 = (2.0 * k * k + k + 8.0) / (16.0 * c * m),
                    .p1_1 = -2.0 * c,
                    .p2_0 = (-30.0 * k * k - 15.0 * k + 24.0) / (16.0 * c * m),
                    .p2_2 = -2.0 * c * c * c / m,
                    .a1_1 = -(2.0 + k),
                    .a2_0 = (4.0 + 3.0 * k) / 2.0,
                    .a2_2 = -(10.0 * k * k + 11.0 * k + 4.0) / (2.0 * m),
                    .g1_1 = -1.0,
                    .g2_0 = -0.25,
                    .g2_2 = -(6.0 * k + 3.0) / (4.0 * m),
                    .sigma1 = {},
                    .sigma2 = {.d2_0 = 9.0 / 4.0,
                               .d2_2 = -(9.0 + 18.0 * k) / (4.0 * m),
                               .e2_2 = (18.0 * k + 9.0) / (2.0 * m),
                               .h2_0 = -0.5,
                               .h2_2 = (9.0 + 6.0 * k) / (2.0 * m)},
                    .frakp1_1 = 1.0,
                    .frakp2_2 = (2.0 - k) / (2.0 * m)};
  return s;
}

WaveProfiles wave_profiles(const StokesExpansion& s, double eps, int band) {
  if (band < 2) throw Error(ErrorCode::InvalidArgument, "wave profiles need band >= 2");
  PeriodicProfile eta(band, Parity::Even);
  eta.add_cos(1, eps);
  eta.add_cos(2, eps * eps * s.eta2_2);
  PeriodicProfile psi(band, Parity::Odd);
  psi.add_sin(1, eps * s.c_kappa);
  psi.add_sin(2, eps * eps * s.psi2_2);
  return {eta, psi, s.c_kappa + eps * eps * s.c2};
}

namespace {

PeriodicProfile cos_profile(double mean, double c1, double c2, Parity parity = Parity::Even) {
  PeriodicProfile p(2, parity);
  p.add_cos(0, mean);
  p.add_cos(1, c1);
  p.add_cos(2, c2);
  return p;
}

}  // namespace

PeriodicProfile transport_profile(const StokesExpansion& s, double eps) {
  return cos_profile(eps * eps * s.p2_0, eps * s.p1_1, eps * eps * s.p2_2);
}

PeriodicProfile amplitude_profile(const StokesExpansion& s, double eps) {
  return cos_profile(eps * eps * s.a2_0, eps * s.a1_1, eps * eps * s.a2_2);
}

PeriodicProfile metric_profile(const StokesExpansion& s, double eps) {
  return cos_profile(1.0 + eps * eps * s.g2_0, eps * s.g1_1, eps * eps * s.g2_2);
}

PeriodicProfile frakp_profile(const StokesExpansion& s, double eps) {
  PeriodicProfile p(2, Parity::Odd);
  p.add_sin(1, eps * s.frakp1_1);
  p.add_sin(2, eps * eps * s.frakp2_2);
  return p;
}

PeriodicProfile solve_frakp(const PeriodicProfile& eta, double tol, int max_iter, int band) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  if (band < 0) band = std::max(eta.band(), 2);
  const int n = 8 * (band + 1);
  const double h = 2.0 * kPi / n;
  const Parity parity = eta.parity() == Parity::Even ? Parity::Odd : Parity::None;

  PeriodicProfile p(band, parity);
  std::vector<double> shifted(static_cast<std::size_t>(n));
  for (int it = 0; it < max_iter; ++it) {
    for (int j = 0; j < n; ++j) {
      const double x = h * j;
      shifted[static_cast<std::size_t>(j)] = eta(x + p(x).real()).real();
    }
    PeriodicProfile next = PeriodicProfile::from_samples(std::span<const double>(shifted), band).hilbert();
    next.set_parity(parity);
    const double change = (next - p).sup_norm(n);
    p = next;
    p.set_parity(parity);
    if (change <= tol) return p;
  }
  throw Error(ErrorCode::NoConvergence,
              "conformal shift iteration did not settle in " + std::to_string(max_iter) + " steps");
}

PeriodicProfile dirichlet_neumann_taylor(const PeriodicProfile& eta, const PeriodicProfile& psi,
                                         int order, int band) {
  if (order < 0 || order > 2) throw Error(ErrorCode::InvalidArgument, "order must be 0, 1 or 2");
  const PeriodicProfile d_psi = psi.abs_d();
  PeriodicProfile out = d_psi;
  if (order >= 1) {
    // D eta D psi with D = -i d/dx is -(eta psi_x)_x.
    const PeriodicProfile g1 = -(eta * psi.derivative()).derivative() - (eta * d_psi).abs_d();
    out = out + g1;
  }
  if (order >= 2) {
    const PeriodicProfile eta2 = eta * eta;
    const PeriodicProfile t1 = (eta2 * d_psi.abs_d()).abs_d();
    const PeriodicProfile t2 = (eta2 * d_psi).abs_d().abs_d();
    const PeriodicProfile t3 = (eta * (eta * d_psi).abs_d()).abs_d();
    out = out + (t1 + t2 - t3 * 2.0) * -0.5;
  }
  PeriodicProfile r = out.truncated(band);
  r.set_parity(parity_product(eta.parity(), psi.parity()) == Parity::None ? Parity::None
                                                                         : psi.parity());
  return r;
}

StokesResidual stokes_residual(const CapillaryParam& kappa, double eps, int band) {
  if (band < 8) throw Error(ErrorCode::InvalidArgument, "residual check needs band >= 8");
  if (!(eps >= 0.0) || eps > 0.05) {
    throw Error(ErrorCode::InvalidArgument, "residual check is calibrated for 0 <= eps <= 0.05");
  }
  const StokesExpansion s = expand(kappa);
  const WaveProfiles w = wave_profiles(s, eps, band);
  const double k = kappa.kappa();
  const double c = w.c;

  const PeriodicProfile eta_x = w.eta.derivative();
  const PeriodicProfile eta_xx = w.eta.derivative(2);
  const PeriodicProfile psi_x = w.psi.derivative();
  const PeriodicProfile gpsi = dirichlet_neumann_taylor(w.eta, w.psi, 2, band);

  const int n = 8 * (band + 1);
  const auto eta = w.eta.real_samples(n);
  const auto ex = eta_x.real_samples(n);
  const auto exx = eta_xx.real_samples(n);
  const auto px = psi_x.real_samples(n);
  const auto gp = gpsi.real_samples(n);

  std::vector<double> r1(static_cast<std::size_t>(n)), r2(static_cast<std::size_t>(n));
  double res1 = 0.0, res2 = 0.0;
  for (std::size_t j = 0; j < r1.size(); ++j) {
    const double s2 = 1.0 + ex[j] * ex[j];
    const double curvature_x = exx[j] / (s2 * std::sqrt(s2));
    const double u = c - px[j];
    r1[j] = -c * px[j] + eta[j] + 0.5 * px[j] * px[j] - ex[j] * ex[j] * u * u / (2.0 * s2) -
            k * curvature_x;
    r2[j] = c * ex[j] + gp[j];
    res1 = std::max(res1, std::abs(r1[j]));
    res2 = std::max(res2, std::abs(r2[j]));
  }
  return {res1, res2, PeriodicProfile::from_samples(std::span<const double>(r1), band, Parity::Even),
          PeriodicProfile::from_samples(std::span<const double>(r2), band, Parity::Odd)};
}

}  // namespace bf
