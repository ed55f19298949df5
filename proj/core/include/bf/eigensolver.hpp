#pragma once

// Dense complex non-Hermitian eigensolver: balancing, Householder reduction to
// Hessenberg form, then single-shift implicit QR with Wilkinson shifts.

#include <memory>
#include <optional>
#include <vector>

#include "bf/types.hpp"

namespace bf {

struct EigOptions {
  bool vectors = false;
  bool balance = true;
  /// NoConvergence once the QR sweeps exceed this many times the dimension.
  int sweeps_per_dim = 50;
};

struct SchurForm;

struct SpectrumResult {
  std::vector<cplx> eigenvalues;
  /// Unit columns, one per eigenvalue, present when requested.
  std::optional<CMatrix> vectors;
  /// ||A v - lambda v|| / ||A|| per pair; empty without vectors.
  std::vector<double> residuals;
  double norm = 0.0;
  int sweeps = 0;

  double max_residual() const;
  /// Unit eigenvector for eigenvalue k, computed on demand from the Schur form.
  CVector vector(std::size_t k) const;

  std::shared_ptr<const SchurForm> schur_form;
  Eigen::VectorXd balance;
};

SpectrumResult eig(const CMatrix& a, const EigOptions& opt = {});

/// Largest singular value.
double spectral_norm(const CMatrix& a);

/// Complex Schur form a = z t z^*, t upper triangular. Exposed for tests.
struct SchurForm {
  CMatrix t;
  CMatrix z;
  int sweeps = 0;
};

/// Eigenvector of t(k, k) by back substitution plus one inverse-iteration
/// step, mapped back through z and the balancing scale d.
CVector schur_eigenvector(const SchurForm& s, const Eigen::VectorXd& d, Eigen::Index k);

SchurForm schur(const CMatrix& a, int sweeps_per_dim = 50);

}  // namespace bf
