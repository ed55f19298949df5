#pragma once

// Spectra of truncated Floquet operators near the origin: the four-eigenvalue
// cluster, Riesz projectors onto it and 4x4 compressions.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "bf/eigensolver.hpp"
#include "bf/operator_assembly.hpp"

namespace bf {

/// Full spectrum of op.matrix. With `reversible`, the operator is first mapped
/// to the real matrix -i T^-1 L T, T = diag(I, i I), so eigenvalues come out in
/// exact pairs lambda, -conj(lambda) and simple imaginary ones stay imaginary.
SpectrumResult eig(const TruncatedOperator& op, bool vectors = false, bool reversible = true);

/// Fraction of |v|^2 carried by Fourier modes |k| <= max_mode (both components).
double low_mode_weight(const CVector& v, int band, int max_mode = 1);

struct QuadrupleOptions {
  /// Nearest coupled eigenvalue outside must be this many times farther out
  /// than the largest member.
  double gap_factor = 1.5;
  /// Smallest-modulus eigenvalues examined.
  int candidates = 24;
  /// Members must carry at least this share of |v|^2 on modes -1, 0, 1.
  double member_weight = 0.5;
  /// Eigenvectors with less low-mode weight count as decoupled.
  double coupled_weight = 1e-6;
  /// Below this mu the members are returned unlabeled.
  double label_floor = 1e-4;
};

struct Quadruple {
  /// lambda1+, lambda1-, lambda0+, lambda0- when labeled; by modulus otherwise.
  std::array<cplx, 4> values{};
  std::array<std::size_t, 4> indices{};
  bool labeled = false;
  /// Largest member modulus and smallest modulus of an excluded coupled eigenvalue.
  double inner_radius = 0.0;
  double outer_radius = 0.0;
  /// Decoupled eigenvalues (other Fourier modes) with modulus below outer_radius.
  std::vector<cplx> decoupled;

  cplx lambda1_plus() const { return values[0]; }
  cplx lambda1_minus() const { return values[1]; }
  cplx lambda0_plus() const { return values[2]; }
  cplx lambda0_minus() const { return values[3]; }
};

/// Picks the four smallest-modulus eigenvalues whose eigenvectors live mostly
/// on modes -1, 0, 1 and labels them: lambda0+ closest to
/// i (c mu - sqrt mu), lambda0- closest to i (c mu + sqrt mu); of the rest
/// lambda1+ has the larger real part (mostly real split) or the larger
/// sign(e22) Im (mostly imaginary split), matching the flat mode +1 branch.
/// GapFailure when the separation check fails.
Quadruple near_zero_quadruple(const SpectrumResult& spec, const CapillaryParam& kappa, double mu,
                              const QuadrupleOptions& opt = {});

/// The same four labels at eps = 0 from the closed forms.
std::array<cplx, 4> flat_quadruple(const CapillaryParam& kappa, double mu);

struct Circle {
  cplx center;
  double radius = 0.0;
};

struct ContourPlan {
  Circle outer;
  /// Circles around decoupled eigenvalues inside `outer`; their projectors are subtracted.
  std::vector<Circle> holes;
  int n_nodes = 64;
};

/// Outer radius near the geometric mean of the quadruple and excluded moduli,
/// nudged away from decoupled eigenvalues; node count raised (up to 1024) until
/// the predicted trapezoid error is below 1e-14. ContourTooTight if an
/// eigenvalue sits within 10% of a radius.
ContourPlan plan_contour(const SpectrumResult& spec, const Quadruple& q, int min_nodes = 64);

/// -(1 / 2 pi i) of the resolvent integral over one circle (trapezoid rule).
CMatrix riesz_projector(const TruncatedOperator& op, const Circle& circle, int n_nodes = 64);
/// Circle centered at 0.
CMatrix riesz_projector(const TruncatedOperator& op, double radius, int n_nodes = 64);
/// Outer circle minus the holes.
CMatrix riesz_projector(const TruncatedOperator& op, const ContourPlan& plan);

/// Throws ContourTooTight when an eigenvalue lies within 10% of the radius.
void check_contour(const std::vector<cplx>& eigenvalues, const Circle& circle);

struct Compression {
  CMatrix basis;  // n x 4, orthonormal columns
  CMatrix4 matrix;
  int rank = 0;
};

/// Orthonormal basis of range(P) by column-pivoted QR and the 4x4 matrix
/// basis^* L basis. A seed mixes the basis with a random 4x4 unitary.
/// RankFailure unless the numerical rank is exactly 4.
Compression compress(const TruncatedOperator& op, const CMatrix& p,
                     std::optional<std::uint64_t> seed = std::nullopt);

/// Spectral projector onto the generalized kernel of the flat operator at mu = 0:
/// all of mode 0 and the zero eigenvectors on modes +-1.
CMatrix flat_kernel_projector(const CapillaryParam& kappa, int band);

/// Columns (cos / sqrt c, sqrt c sin), (-sin / sqrt c, sqrt c cos), (1, 0), (0, 1)
/// as Fourier coefficient vectors. Gram matrix with J equals J4.
CMatrix flat_kernel_basis(const CapillaryParam& kappa, int band);

struct SymplecticCompression {
  CMatrix basis;     // n x 4, transported flat basis
  CMatrix4 matrix;   // representation of L on the basis
  CMatrix4 b;        // basis^* B basis, B = -J L
  /// |basis^* J basis - J4| and |matrix - J4 b|, max abs entries.
  double symplectic_defect = 0.0;
  double factor_defect = 0.0;
  /// |L basis - basis matrix| / |L|.
  double invariance_residual = 0.0;
};

/// Transports the flat kernel basis onto range(P) with Kato's operator
/// (I - (P - P0)^2)^-1/2 P and represents L on it.
SymplecticCompression symplectic_compression(const TruncatedOperator& op, const CMatrix& p);

/// max over the spectrum of the distance from -conj(lambda) to the spectrum.
double hamiltonian_pairing_defect(const std::vector<cplx>& eigenvalues);

}  // namespace bf
