#pragma once

// Second-order expansion of the Stokes wave, its speed, the conformal shift p
// (written frakp below to keep it apart from the transport coefficient p) and
// the symbols of the flattened linearized operator. Nothing beyond eps^2 is
// carried, so downstream quantities are accurate to O(eps^3).

#include "bf/closed_form.hpp"
#include "bf/periodic_profile.hpp"

namespace bf {

struct SigmaFirstOrder {
  double d1_1 = -3.0;
  double e1_1 = 3.0;
  double h1_1 = 1.0;
};

struct SigmaSecondOrder {
  double d2_0;
  double d2_2;
  double e2_2;
  double h2_0;
  double h2_2;
};

struct StokesExpansion {
  CapillaryParam kappa;
  double c_kappa;
  double eta2_2, psi2_2, c2;
  double p1_1, p2_0, p2_2;
  double a1_1, a2_0, a2_2;
  double g1_1, g2_0, g2_2;
  SigmaFirstOrder sigma1;
  SigmaSecondOrder sigma2;
  double frakp1_1, frakp2_2;
};

/// Throws SingularKappa / ResonantKappa.
StokesExpansion expand(const CapillaryParam& kappa);

struct WaveProfiles {
  PeriodicProfile eta;  // Even
  PeriodicProfile psi;  // Odd
  double c;
};

WaveProfiles wave_profiles(const StokesExpansion& s, double eps, int band);

/// eps p1 + eps^2 p2, eps a1 + eps^2 a2, 1 + eps g1 + eps^2 g2 and
/// eps frakp1 + eps^2 frakp2, all in band 2.
PeriodicProfile transport_profile(const StokesExpansion& s, double eps);
PeriodicProfile amplitude_profile(const StokesExpansion& s, double eps);
PeriodicProfile metric_profile(const StokesExpansion& s, double eps);
PeriodicProfile frakp_profile(const StokesExpansion& s, double eps);

/// Picard iteration for frakp = H[eta(x + frakp(x))] on a grid of 8 (K + 1)
/// points; the composition is exact trigonometric interpolation of eta.
/// Stops when successive iterates differ by at most tol in sup norm.
PeriodicProfile solve_frakp(const PeriodicProfile& eta, double tol = 1e-14, int max_iter = 200,
                            int band = -1);

/// (G0 + G1(eta) + G2(eta)) psi up to `order`, truncated to `band`.
PeriodicProfile dirichlet_neumann_taylor(const PeriodicProfile& eta, const PeriodicProfile& psi,
                                         int order, int band);

struct StokesResidual {
  double res1;
  double res2;
  PeriodicProfile r1;  // dynamic equation, band K
  PeriodicProfile r2;  // kinematic equation, band K
};

/// Sup-norm residuals of the traveling-wave system on the expansion profiles.
StokesResidual stokes_residual(const CapillaryParam& kappa, double eps, int band = 16);

}  // namespace bf
