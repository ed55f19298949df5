#pragma once

// Tracing the Benjamin-Feir eigenvalue pair in mu, the numerical instability
// threshold and the peak growth rate.

#include <optional>
#include <vector>

#include "bf/spectral_engine.hpp"

namespace bf {

struct QuadrupleSample {
  double mu = 0.0;
  Quadruple quadruple;
  double norm = 0.0;  // |L| (2-norm)
  double max_residual = 0.0;
};

QuadrupleSample sample_quadruple(const FloquetFamily& family, double mu,
                                 const QuadrupleOptions& opt = {});

struct SpectralBranch {
  double kappa = 0.0;
  double eps = 0.0;
  std::vector<double> mu_grid;
  std::vector<cplx> lambda1_plus;
  std::vector<cplx> lambda1_minus;
  std::vector<cplx> lambda0_plus;
  std::vector<cplx> lambda0_minus;
  std::vector<double> norms;
  std::optional<double> mu_bar_numeric;
};

struct TraceOptions {
  QuadrupleOptions quadruple;
  /// Intervals whose largest branch slope exceeds jump_factor times the median
  /// slope are bisected, at most max_refine_depth times.
  double jump_factor = 4.0;
  int max_refine_depth = 3;
  bool locate_mu_bar = true;
  FrakpSource frakp = FrakpSource::Expansion;
};

/// n_samples equispaced mu in (0, mu_max], refined where a branch jumps.
/// NotUnstable unless kappa is in the unstable region; eps must be <= 0.02.
SpectralBranch trace_figure_eight(const CapillaryParam& kappa, double eps, double mu_max,
                                  int n_samples, int band, const TraceOptions& opt = {});

struct MuBarSearch {
  double mu_bar = 0.0;
  double lo = 0.0;  // last mu with Re lambda1+ above threshold
  double hi = 0.0;  // first mu without
  double leading = 0.0;
  int evaluations = 0;
};

/// Bisection on Re lambda1+ > 1e-12 max(1, |L|); stops at a bracket of
/// 1e-3 mu_bar_leading (never below 1e-4 mu_bar_leading).
MuBarSearch locate_mu_bar(const FloquetFamily& family, const QuadrupleOptions& opt = {});

struct GrowthRate {
  double mu_star = 0.0;
  double rate = 0.0;
};

/// Coarse scan of Re lambda1+ over (0, 1.5 mu_bar_leading], then golden-section.
GrowthRate max_growth_rate(const FloquetFamily& family, const QuadrupleOptions& opt = {});
GrowthRate max_growth_rate(const CapillaryParam& kappa, double eps, int band);

/// Leading-order curve (mu / 8) sqrt(8 e_WB eps^2 - e22^2 mu^2) for the real
/// part (zero past the threshold) and i breve_c mu / 2 for the center.
cplx figure_eight_leading(const CapillaryParam& kappa, double mu, double eps);

}  // namespace bf
