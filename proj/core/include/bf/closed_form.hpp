#pragma once

// Closed-form stability coefficients of small-amplitude gravity-capillary
// Stokes waves in deep water (gravity normalized to 1, wavenumber 1).
//
// Every "leading" function below drops the analytic remainder terms; their
// size is documented per function so callers can budget tolerances.

#include <optional>
#include <string_view>
#include <utility>

#include "bf/types.hpp"

namespace bf {

inline constexpr double kDefaultGuard = 1e-6;

/// Largest n tested against 1/n by default.
inline constexpr int kResonanceOrderCap = 1000000;

/// Resonance 1/n couples the fundamental to mode n only at order eps^(n-1), so
/// orders n >= 5 stay below the eps^3 accuracy of the second-order model.
/// Runs that opt into this cap accept e.g. kappa = 1/5 or 1/20.
inline constexpr int kModelResonanceOrder = 4;

/// Boundary between the unstable and stable regions: 2/sqrt(3) - 1.
inline const double kKappaCritical = 2.0 * std::sqrt(3.0) / 3.0 - 1.0;

/// Dimensionless surface-tension coefficient.
///
/// Construction only rejects negative or non-finite values; proximity to the
/// resonant set {1/n : n >= 2}, to the pole at 1/2 and to the critical value is
/// queried through the predicates so that sweeps can classify instead of abort.
/// Only resonances 1/n with n <= max_resonance_order are considered.
class CapillaryParam {
 public:
  explicit CapillaryParam(double kappa, double guard = kDefaultGuard,
                          int max_resonance_order = kResonanceOrderCap);

  double kappa() const noexcept { return kappa_; }
  double guard() const noexcept { return guard_; }
  int max_resonance_order() const noexcept { return max_order_; }

  bool is_singular() const noexcept;
  bool is_critical() const noexcept;
  /// Smallest n >= 2 with |kappa - 1/n| <= guard, if any.
  std::optional<int> resonant_order() const noexcept;
  bool is_resonant() const noexcept { return resonant_order().has_value(); }

  /// Throws SingularKappa / ResonantKappa.
  void require_regular() const;
  /// Throws SingularKappa only.
  void require_nonsingular() const;

 private:
  double kappa_;
  double guard_;
  int max_order_;
};

enum class RegionLabel { Unstable, Stable, Critical, Resonant, Singular };

std::string_view to_string(RegionLabel label) noexcept;

struct CoefficientTriple {
  double e11;
  double e22;
  double e12;
};

enum class SplitRegime { RealSplit, Collision, ImaginarySplit };

std::string_view to_string(SplitRegime regime) noexcept;

struct LeadingEigenPair {
  cplx value_plus;
  cplx value_minus;
  SplitRegime regime;
};

/// c_kappa = sqrt(1 + kappa).
double phase_speed(const CapillaryParam& kappa);

/// (e11, e22, e12); throws SingularKappa within guard of 1/2.
CoefficientTriple coeffs_e(const CapillaryParam& kappa);

/// Whitham-Benjamin function; equals e11 * e22. Throws SingularKappa.
double whitham_benjamin(const CapillaryParam& kappa);

/// 2 c_kappa - e12 = (1 - kappa) / c_kappa; sets the half-plane of the figure-eight.
double breve_c(const CapillaryParam& kappa);

/// Guard checks take precedence: Singular, then Resonant, then Critical.
RegionLabel classify(const CapillaryParam& kappa);

/// eps * sqrt(8 e11 / e22); the (1 + O(eps)) factor is dropped.
/// Throws NotUnstable outside the unstable region.
double mu_bar_leading(const CapillaryParam& kappa, double eps);

/// 8 e_WB eps^2 - e22^2 mu^2. Drops the O(eps^3, mu eps^4) and relative
/// O(eps, mu) remainders.
double delta_bf_leading(const CapillaryParam& kappa, double mu, double eps);

/// i (breve_c / 2) mu  +/-  (mu / 8) sqrt(delta_bf). The imaginary remainder is
/// O(mu eps^2, mu^2 eps, mu^3) and the splitting carries a relative O(eps, mu)
/// error. value_plus has the larger real part (real split); for an imaginary
/// split it is centre + sign(e22) i |split|, the continuation of the mode +1
/// flat eigenvalue.
LeadingEigenPair lambda1_leading(const CapillaryParam& kappa, double mu, double eps);

/// (lambda0^+, lambda0^-) = i mu c_kappa -/+ i sqrt(mu); remainders of order
/// eps^2, mu eps, mu^2 inside the square root are dropped. Purely imaginary.
std::pair<cplx, cplx> lambda0_leading(const CapillaryParam& kappa, double mu);

enum class Branch { Plus, Minus };

/// Eigenvalue lambda_k^{+/-}(mu) of the flat-surface Floquet operator. The
/// Plus branch lives on Fourier mode +k, the Minus branch on mode -k.
/// Always has an exactly zero real part.
cplx flat_eigenvalue(const CapillaryParam& kappa, int k, Branch sign, double mu);

}  // namespace bf
