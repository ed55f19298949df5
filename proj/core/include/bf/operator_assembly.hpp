#pragma once

// Fourier-truncated Bloch-Floquet operators on 2(2K+1) unknowns.
// Index layout: component * (2K+1) + (k + K), component 0 = eta, 1 = psi.

#include <string>

#include "bf/stokes_expansion.hpp"

namespace bf {

struct TruncatedOperator {
  CMatrix matrix;
  double mu = 0.0;
  double eps = 0.0;
  double kappa = 0.0;
  int band = 0;

  Eigen::Index dim() const noexcept { return matrix.rows(); }
};

inline Eigen::Index scalar_dim(int band) noexcept { return 2 * band + 1; }
inline Eigen::Index operator_dim(int band) noexcept { return 2 * scalar_dim(band); }
inline Eigen::Index mode_index(int component, int k, int band) noexcept {
  return component * scalar_dim(band) + (k + band);
}

/// Per-mode blocks [[i c (k+mu), |k+mu|], [-1 - kappa (k+mu)^2, i c (k+mu)]].
TruncatedOperator assemble_flat(const CapillaryParam& kappa, double mu, int band);

/// Galerkin matrix of q (d + i mu) g (d + i mu) q with q = 1 / (1 + frakp_x) and
/// g the eps^2 metric profile; exactly Hermitian up to rounding.
CMatrix sigma_matrix(const StokesExpansion& s, const PeriodicProfile& frakp, double mu, double eps,
                     int band);

TruncatedOperator assemble(const StokesExpansion& s, const PeriodicProfile& frakp, double mu,
                           double eps, int band);

/// Floquet: the factor with L = J B. Shifted: B + i c mu J, the factor of L - i c mu.
enum class BForm { Floquet, Shifted };

/// Self-adjoint factor; the psi-psi block is written as |D| + mu (sgn D + Pi_0).
CMatrix assemble_B(const StokesExpansion& s, const PeriodicProfile& frakp, double mu, double eps,
                   int band, BForm form = BForm::Floquet);

/// Toeplitz (multiplication) matrix of a profile on modes [-band, band].
CMatrix toeplitz(const PeriodicProfile& f, int band);
/// Diagonal of |k + mu| on modes [-band, band].
CVector abs_d_mu(double mu, int band);
/// |k| + mu (sgn k + [k == 0]).
CVector abs_d_mu_split(double mu, int band);

struct StructureMatrices {
  CMatrix J;  // [[0, I], [-I, 0]]
  CMatrix S;  // diag(I, -I); reversibility is S composed with complex conjugation
  bool conjugate = true;
};

StructureMatrices structure_matrices(int band);

/// max |L S + S conj(L)|: zero for a reversible operator.
double reversibility_defect(const CMatrix& l, const StructureMatrices& st);
/// max |B S - S conj(B)|: zero for a reversibility-preserving factor.
double reversibility_preserving_defect(const CMatrix& b, const StructureMatrices& st);
double hermiticity_defect(const CMatrix& m);

/// Where the conformal shift comes from: its eps^2 expansion or the Picard solve.
enum class FrakpSource { Expansion, FixedPoint };

/// Everything needed to assemble L at any mu for one (kappa, eps, K).
class FloquetFamily {
 public:
  FloquetFamily(const CapillaryParam& kappa, double eps, int band,
                FrakpSource source = FrakpSource::Expansion);

  TruncatedOperator at(double mu) const;
  CMatrix b_at(double mu, BForm form = BForm::Floquet) const;

  const StokesExpansion& expansion() const noexcept { return expansion_; }
  const PeriodicProfile& frakp() const noexcept { return frakp_; }
  double eps() const noexcept { return eps_; }
  int band() const noexcept { return band_; }
  const CapillaryParam& kappa() const noexcept { return expansion_.kappa; }

 private:
  StokesExpansion expansion_;
  PeriodicProfile frakp_;
  double eps_;
  int band_;
};

/// Binary dump: 8 little-endian doubles (magic, version, 2K+1, mu, eps, kappa,
/// layout, reserved) followed by the column-major (re, im) pairs.
void write_matrix_dump(const std::string& path, const TruncatedOperator& op);
TruncatedOperator read_matrix_dump(const std::string& path);

inline constexpr double kDumpMagic = 1112427844.0;  // 0x42464D44, "BFMD"

}  // namespace bf
