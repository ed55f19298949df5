#pragma once

// Algebra of 4x4 Hamiltonian, reversible matrices L = J4 B with
// B = [[E, F], [F^*, G]] Hermitian and entry (i, j) of B real iff i + j is even.
// The first two coordinates carry the Benjamin-Feir pair, the last two the
// pair born from the zero mode.

#include <utility>

#include "bf/types.hpp"

namespace bf {

/// [[0, 1], [-1, 0]].
CMatrix2 j2();
/// diag(J2, J2).
CMatrix4 j4();

struct HamiltonianBlocks4 {
  CMatrix2 E = CMatrix2::Zero();
  CMatrix2 F = CMatrix2::Zero();
  CMatrix2 G = CMatrix2::Zero();

  CMatrix4 b() const;
  /// J4 b().
  CMatrix4 l() const;

  /// Largest Hermiticity or real/imaginary pattern error removed when the
  /// blocks were extracted, relative to |B|.
  double structure_defect = 0.0;
};

/// Factors m = J4 B, checks B against the Hermitian and alternation pattern
/// with relative tolerance tol and returns B projected onto that pattern.
/// Throws StructureViolationError listing the offending (row, col) of B.
HamiltonianBlocks4 check_structure(const CMatrix4& m, double tol = 1e-12);

/// Same pattern test without throwing; returns the relative defect.
double structure_defect(const CMatrix4& m);

/// Id4 + m [[0, -P], [Q, 0]], Q = diag(1, 0), P = diag(0, 1).
CMatrix4 first_decoupling_transform(double m);

struct FirstDecoupling {
  HamiltonianBlocks4 blocks;
  double m = 0.0;
  /// New L = transform^-1 L transform.
  CMatrix4 transform = CMatrix4::Identity();
};

/// Removes F11 with m = -F11 / G11. Throws DegenerateG if |G11| < 1e-12 |B|.
FirstDecoupling first_decoupling_step(const HamiltonianBlocks4& blocks);
inline HamiltonianBlocks4 first_decoupling(const HamiltonianBlocks4& blocks) {
  return first_decoupling_step(blocks).blocks;
}

struct SylvesterCoeffs {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double e = 0.0;
};

/// a = G12 - E12, b = G11, c = E22, d = G22, e = E11, where E12 and G12
/// are the imaginary parts of the (0, 1) entries.
SylvesterCoeffs sylvester_coeffs(const CMatrix2& e, const CMatrix2& g);

/// [[a, b, c, 0], [d, a, 0, -c], [e, 0, a, -b], [0, -e, -d, a]].
RMatrix4 sylvester_matrix(const SylvesterCoeffs& s);

/// (bd - a^2)^2 - 2ce (a^2 + bd - ce / 2).
double sylvester_det(const SylvesterCoeffs& s);

/// Closed-form inverse; SingularSystem when |det| <= 1e-14 |A|^4 (max row sum).
RMatrix4 sylvester_inverse(const SylvesterCoeffs& s);

/// X with D1 X - X D0 = -J2 F, for D1 = J2 E and D0 = J2 G. X has the
/// pattern [[x11, i x12], [i x21, x22]] with real x.
CMatrix2 solve_homological(const CMatrix2& d1, const CMatrix2& d0, const CMatrix2& f);

/// exp(a) by Taylor series, stopped once a term drops below 1e-18 of the sum;
/// scaled and squared when |a| > 1/2.
CMatrix4 expm_series(const CMatrix4& a);

struct BlockDiagonalization {
  /// J2 E and J2 G of the final blocks.
  CMatrix2 U2;
  CMatrix2 S2;
  /// Final L = transform^-1 L0 transform.
  CMatrix4 transform = CMatrix4::Identity();
  HamiltonianBlocks4 blocks;
  int iterations = 0;
  /// |F| / |B| at exit.
  double off_diagonal = 0.0;
};

/// One first-decoupling step, then Picard sweeps L <- exp(S) L exp(-S),
/// S = J4 [[0, M], [M^*, 0]], M = J2 X, X from solve_homological, until
/// |F| <= tol |B|. GapFailure if the coupling is not below the gap between the
/// diagonal spectra; NoConvergence after max_iter sweeps.
BlockDiagonalization block_diagonalize(const HamiltonianBlocks4& blocks, double tol = 1e-12,
                                       int max_iter = 30);

/// Eigenvalues of a 2x2 block: mean of the diagonal +/- sqrt(half difference
/// squared + product of off-diagonals). First entry has the larger real part
/// when the split is mostly real, the larger imaginary part otherwise.
std::pair<cplx, cplx> eigenpair_of_U(const CMatrix2& u);

/// |T^* J4 T - J4| (max abs entry).
double symplectic_defect(const CMatrix4& t);

}  // namespace bf
