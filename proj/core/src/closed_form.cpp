#include "bf/closed_form.hpp"

#include <cmath>
#include <sstream>

#include "bf/error.hpp"

namespace bf {

namespace {

std::string kappa_text(double kappa) {
  std::ostringstream os;
  os.precision(17);
  os << "kappa=" << kappa;
  return os.str();
}

}  // namespace

CapillaryParam::CapillaryParam(double kappa, double guard, int max_resonance_order)
    : kappa_(kappa), guard_(guard), max_order_(max_resonance_order) {
  if (!std::isfinite(kappa) || kappa < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "capillarity must be finite and nonnegative, got " +
                                                kappa_text(kappa));
  }
  if (!std::isfinite(guard) || guard < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "guard tolerance must be finite and nonnegative");
  }
  if (max_resonance_order < 1 || max_resonance_order > kResonanceOrderCap) {
    throw Error(ErrorCode::InvalidArgument, "resonance order cap must lie in [1, 1e6]");
  }
}

bool CapillaryParam::is_singular() const noexcept { return std::abs(kappa_ - 0.5) <= guard_; }

bool CapillaryParam::is_critical() const noexcept {
  return std::abs(kappa_ - kKappaCritical) <= guard_;
}

std::optional<int> CapillaryParam::resonant_order() const noexcept {
  // Pure gravity waves are the kappa -> 0 limit and never resonate.
  if (kappa_ <= 0.0) return std::nullopt;
  const double span = 1.0 / (kappa_ * (1.0 - guard_));
  const long limit = max_order_;
  const long cap = span >= static_cast<double>(limit)
                       ? limit
                       : std::min<long>(static_cast<long>(std::ceil(span)) + 1, limit);
  // 1/n decreases in n, so the first n with 1/n <= kappa + guard is the only
  // candidate for the smallest resonant order; one step back absorbs rounding.
  long n = static_cast<long>(std::ceil(1.0 / (kappa_ + guard_)));
  n = std::max<long>(2, n - 1);
  for (; n <= cap; ++n) {
    const double r = 1.0 / static_cast<double>(n);
    if (std::abs(kappa_ - r) <= guard_) return static_cast<int>(n);
    if (r < kappa_ - guard_) break;
  }
  return std::nullopt;
}

void CapillaryParam::require_nonsingular() const {
  if (is_singular()) {
    throw Error(ErrorCode::SingularKappa, kappa_text(kappa_) + " is within guard of 1/2");
  }
}

void CapillaryParam::require_regular() const {
  require_nonsingular();
  if (auto n = resonant_order()) {
    throw Error(ErrorCode::ResonantKappa,
                kappa_text(kappa_) + " is within guard of 1/" + std::to_string(*n));
  }
}

std::string_view to_string(RegionLabel label) noexcept {
  switch (label) {
    case RegionLabel::Unstable: return "Unstable";
    case RegionLabel::Stable: return "Stable";
    case RegionLabel::Critical: return "Critical";
    case RegionLabel::Resonant: return "Resonant";
    case RegionLabel::Singular: return "Singular";
  }
  return "Unknown";
}

std::string_view to_string(SplitRegime regime) noexcept {
  switch (regime) {
    case SplitRegime::RealSplit: return "RealSplit";
    case SplitRegime::Collision: return "Collision";
    case SplitRegime::ImaginarySplit: return "ImaginarySplit";
  }
  return "Unknown";
}

double phase_speed(const CapillaryParam& kappa) { return std::sqrt(1.0 + kappa.kappa()); }

CoefficientTriple coeffs_e(const CapillaryParam& kappa) {
  kappa.require_nonsingular();
  const double k = kappa.kappa();
  const double c = phase_speed(kappa);
  CoefficientTriple t{};
  t.e11 = (2.0 * k * k + k + 8.0) / (8.0 * (1.0 - 2.0 * k) * c);
  t.e22 = (-3.0 * k * k - 6.0 * k + 1.0) / (c * c * c);
  t.e12 = (1.0 + 3.0 * k) / c;
  return t;
}

double whitham_benjamin(const CapillaryParam& kappa) {
  kappa.require_nonsingular();
  const double k = kappa.kappa();
  const double num = (((6.0 * k + 15.0) * k + 28.0) * k + 47.0) * k - 8.0;
  const double kp1 = k + 1.0;
  return num / (8.0 * (2.0 * k - 1.0) * kp1 * kp1);
}

double breve_c(const CapillaryParam& kappa) {
  return (1.0 - kappa.kappa()) / phase_speed(kappa);
}

RegionLabel classify(const CapillaryParam& kappa) {
  if (kappa.is_singular()) return RegionLabel::Singular;
  if (kappa.is_resonant()) return RegionLabel::Resonant;
  if (kappa.is_critical()) return RegionLabel::Critical;
  const double k = kappa.kappa();
  if (k < kKappaCritical || k > 0.5) return RegionLabel::Unstable;
  return RegionLabel::Stable;
}

double mu_bar_leading(const CapillaryParam& kappa, double eps) {
  if (!(eps >= 0.0)) throw Error(ErrorCode::InvalidArgument, "amplitude must be nonnegative");
  const RegionLabel region = classify(kappa);
  if (region != RegionLabel::Unstable) {
    throw Error(ErrorCode::NotUnstable,
                kappa_text(kappa.kappa()) + " is " + std::string(to_string(region)));
  }
  const auto e = coeffs_e(kappa);
  const double ratio = 8.0 * e.e11 / e.e22;
  if (!(ratio > 0.0)) {
    throw Error(ErrorCode::NotUnstable, "8 e11 / e22 is not positive at " + kappa_text(kappa.kappa()));
  }
  return eps * std::sqrt(ratio);
}

double delta_bf_leading(const CapillaryParam& kappa, double mu, double eps) {
  const double ewb = whitham_benjamin(kappa);
  const double e22 = coeffs_e(kappa).e22;
  return 8.0 * ewb * eps * eps - e22 * e22 * mu * mu;
}

LeadingEigenPair lambda1_leading(const CapillaryParam& kappa, double mu, double eps) {
  const double ewb = whitham_benjamin(kappa);
  const double e22 = coeffs_e(kappa).e22;
  const double a = 8.0 * ewb * eps * eps;
  const double b = e22 * e22 * mu * mu;
  const double delta = a - b;
  const double centre = 0.5 * breve_c(kappa) * mu;
  const double scale = std::abs(a) + b;

  LeadingEigenPair out{};
  if (std::abs(delta) <= 1e-13 * scale) {
    out.regime = SplitRegime::Collision;
    out.value_plus = out.value_minus = cplx(0.0, centre);
  } else if (delta > 0.0) {
    const double split = 0.125 * mu * std::sqrt(delta);
    out.regime = SplitRegime::RealSplit;
    out.value_plus = cplx(split, centre);
    out.value_minus = cplx(-split, centre);
  } else {
    const double split = 0.125 * mu * std::sqrt(-delta);
    // sign(e22) keeps value_plus on the branch that is mode +1 at eps = 0
    const double s = e22 >= 0.0 ? split : -split;
    out.regime = SplitRegime::ImaginarySplit;
    out.value_plus = cplx(0.0, centre + s);
    out.value_minus = cplx(0.0, centre - s);
  }
  return out;
}

std::pair<cplx, cplx> lambda0_leading(const CapillaryParam& kappa, double mu) {
  if (!(mu >= 0.0)) throw Error(ErrorCode::InvalidArgument, "Floquet exponent must be nonnegative");
  const double drift = mu * phase_speed(kappa);
  const double root = std::sqrt(mu);
  return {cplx(0.0, drift - root), cplx(0.0, drift + root)};
}

cplx flat_eigenvalue(const CapillaryParam& kappa, int k, Branch sign, double mu) {
  const double c = phase_speed(kappa);
  const double kap = kappa.kappa();
  const double j = (sign == Branch::Plus ? k : -k) + mu;
  const double root = std::sqrt((1.0 + kap * j * j) * std::abs(j));
  return sign == Branch::Plus ? cplx(0.0, c * j - root) : cplx(0.0, c * j + root);
}

}  // namespace bf
