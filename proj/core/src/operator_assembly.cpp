#include "bf/operator_assembly.hpp"

#include <algorithm>
#include <cmath>

#include "bf/error.hpp"

namespace bf {

namespace {

constexpr int kInverseBand = 40;

// 1 / (1 + frakp_x), trimmed to the coefficients that still matter.
PeriodicProfile inverse_jacobian(const PeriodicProfile& frakp) {
  if (frakp.max_abs_coeff() == 0.0) return PeriodicProfile::constant(1.0);
  const PeriodicProfile px = frakp.derivative();
  const int n = 8 * (kInverseBand + 1);
  std::vector<double> v = px.real_samples(n);
  for (double& x : v) {
    if (!(1.0 + x > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "conformal shift is not a diffeomorphism");
    }
    x = 1.0 / (1.0 + x);
  }
  PeriodicProfile q =
      PeriodicProfile::from_samples(std::span<const double>(v), kInverseBand, Parity::Even);
  int keep = 0;
  for (int k = 1; k <= kInverseBand; ++k) {
    if (std::abs(q.coeff(k)) > 1e-18) keep = k;
  }
  return q.truncated(keep);
}

// Rectangular Toeplitz block: rows [-rb, rb], columns [-cb, cb].
CMatrix toeplitz_rect(const PeriodicProfile& f, int rb, int cb) {
  CMatrix t = CMatrix::Zero(2 * rb + 1, 2 * cb + 1);
  const int fb = f.band();
  for (int j = -rb; j <= rb; ++j) {
    const int lo = std::max(-cb, j - fb), hi = std::min(cb, j + fb);
    for (int k = lo; k <= hi; ++k) t(j + rb, k + cb) = f.coeff(j - k);
  }
  return t;
}

CVector d_mu(double mu, int band) {
  CVector d(2 * band + 1);
  for (int k = -band; k <= band; ++k) d[k + band] = cplx(0.0, k + mu);
  return d;
}

struct Blocks {
  CMatrix tcp;    // c + p
  CMatrix tamp;   // 1 + a
  CMatrix sigma;
  CVector dmu;
};

Blocks make_blocks(const StokesExpansion& s, const PeriodicProfile& frakp, double mu, double eps,
                   int band) {
  PeriodicProfile cp = transport_profile(s, eps);
  cp.coeff_ref(0) += s.c_kappa;
  PeriodicProfile amp = amplitude_profile(s, eps);
  amp.coeff_ref(0) += 1.0;
  return {toeplitz(cp, band), toeplitz(amp, band), sigma_matrix(s, frakp, mu, eps, band),
          d_mu(mu, band)};
}

void check_mu(double mu) {
  if (!std::isfinite(mu) || mu < 0.0 || mu >= 0.5) {
    throw Error(ErrorCode::InvalidArgument, "Floquet exponent must lie in [0, 1/2)");
  }
}

void check_band(int band) {
  if (band < 1) throw Error(ErrorCode::InvalidArgument, "Fourier band must be positive");
}

}  // namespace

CMatrix toeplitz(const PeriodicProfile& f, int band) { return toeplitz_rect(f, band, band); }

CVector abs_d_mu(double mu, int band) {
  CVector d(2 * band + 1);
  for (int k = -band; k <= band; ++k) d[k + band] = std::abs(k + mu);
  return d;
}

CVector abs_d_mu_split(double mu, int band) {
  CVector d(2 * band + 1);
  for (int k = -band; k <= band; ++k) {
    const double sgn = k > 0 ? 1.0 : (k < 0 ? -1.0 : 0.0);
    const double pi0 = k == 0 ? 1.0 : 0.0;
    d[k + band] = std::abs(k) + mu * (sgn + pi0);
  }
  return d;
}

TruncatedOperator assemble_flat(const CapillaryParam& kappa, double mu, int band) {
  check_mu(mu);
  check_band(band);
  const double c = phase_speed(kappa);
  const double kap = kappa.kappa();
  const Eigen::Index n = scalar_dim(band);
  TruncatedOperator op{CMatrix::Zero(2 * n, 2 * n), mu, 0.0, kap, band};
  for (int k = -band; k <= band; ++k) {
    const double j = k + mu;
    const Eigen::Index a = mode_index(0, k, band), b = mode_index(1, k, band);
    op.matrix(a, a) = cplx(0.0, j * c);
    op.matrix(a, b) = std::abs(j);
    op.matrix(b, a) = -1.0 + kap * -(j * j);
    op.matrix(b, b) = cplx(0.0, j * c);
  }
  return op;
}

CMatrix sigma_matrix(const StokesExpansion& s, const PeriodicProfile& frakp, double mu, double eps,
                     int band) {
  const PeriodicProfile q = inverse_jacobian(frakp);
  const PeriodicProfile g = metric_profile(s, eps);
  const int r1 = band + q.band();
  const int r2 = r1 + g.band();

  // q d_mu g d_mu q, each factor exact on the widened index ranges.
  const CMatrix right = d_mu(mu, r1).asDiagonal() * toeplitz_rect(q, r1, band);
  const CMatrix middle = d_mu(mu, r2).asDiagonal() * (toeplitz_rect(g, r2, r1) * right);
  CMatrix sigma = toeplitz_rect(q, band, r2) * middle;
  // Symmetrize away rounding; the operator is self-adjoint.
  const CMatrix adj = sigma.adjoint();
  sigma = 0.5 * (sigma + adj);
  return sigma;
}

TruncatedOperator assemble(const StokesExpansion& s, const PeriodicProfile& frakp, double mu,
                           double eps, int band) {
  check_mu(mu);
  check_band(band);
  const Blocks b = make_blocks(s, frakp, mu, eps, band);
  const Eigen::Index n = scalar_dim(band);
  const double kap = s.kappa.kappa();
  TruncatedOperator op{CMatrix::Zero(2 * n, 2 * n), mu, eps, kap, band};
  op.matrix.topLeftCorner(n, n) = b.dmu.asDiagonal() * b.tcp;
  op.matrix.topRightCorner(n, n) = abs_d_mu(mu, band).asDiagonal();
  op.matrix.bottomLeftCorner(n, n) = -b.tamp + kap * b.sigma;
  op.matrix.bottomRightCorner(n, n) = b.tcp * b.dmu.asDiagonal();
  return op;
}

CMatrix assemble_B(const StokesExpansion& s, const PeriodicProfile& frakp, double mu, double eps,
                   int band, BForm form) {
  check_mu(mu);
  check_band(band);
  const Blocks b = make_blocks(s, frakp, mu, eps, band);
  const Eigen::Index n = scalar_dim(band);
  const double kap = s.kappa.kappa();
  CMatrix m = CMatrix::Zero(2 * n, 2 * n);
  m.topLeftCorner(n, n) = b.tamp - kap * b.sigma;
  m.topRightCorner(n, n) = -(b.tcp * b.dmu.asDiagonal());
  m.bottomLeftCorner(n, n) = b.dmu.asDiagonal() * b.tcp;
  m.bottomRightCorner(n, n) = abs_d_mu_split(mu, band).asDiagonal();
  if (form == BForm::Shifted) {
    const cplx shift(0.0, s.c_kappa * mu);
    m.topRightCorner(n, n).diagonal().array() += shift;
    m.bottomLeftCorner(n, n).diagonal().array() -= shift;
  }
  return m;
}

StructureMatrices structure_matrices(int band) {
  const Eigen::Index n = scalar_dim(band);
  StructureMatrices st{CMatrix::Zero(2 * n, 2 * n), CMatrix::Zero(2 * n, 2 * n), true};
  st.J.topRightCorner(n, n).setIdentity();
  st.J.bottomLeftCorner(n, n) = -CMatrix::Identity(n, n);
  st.S.topLeftCorner(n, n).setIdentity();
  st.S.bottomRightCorner(n, n) = -CMatrix::Identity(n, n);
  return st;
}

double reversibility_defect(const CMatrix& l, const StructureMatrices& st) {
  return (l * st.S + st.S * l.conjugate()).cwiseAbs().maxCoeff();
}

double reversibility_preserving_defect(const CMatrix& b, const StructureMatrices& st) {
  return (b * st.S - st.S * b.conjugate()).cwiseAbs().maxCoeff();
}

double hermiticity_defect(const CMatrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

FloquetFamily::FloquetFamily(const CapillaryParam& kappa, double eps, int band, FrakpSource source)
    : expansion_(expand(kappa)), eps_(eps), band_(band) {
  if (!std::isfinite(eps) || eps < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "amplitude must be finite and nonnegative");
  }
  check_band(band);
  if (source == FrakpSource::Expansion || eps == 0.0) {
    frakp_ = frakp_profile(expansion_, eps);
  } else {
    const WaveProfiles w = wave_profiles(expansion_, eps, 2);
    frakp_ = solve_frakp(w.eta, 1e-15, 200, 16);
  }
}

TruncatedOperator FloquetFamily::at(double mu) const {
  return assemble(expansion_, frakp_, mu, eps_, band_);
}

CMatrix FloquetFamily::b_at(double mu, BForm form) const {
  return assemble_B(expansion_, frakp_, mu, eps_, band_, form);
}

}  // namespace bf
