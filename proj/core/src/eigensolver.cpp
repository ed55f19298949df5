#include "bf/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bf/error.hpp"

namespace bf {

namespace {

constexpr double kUlp = std::numeric_limits<double>::epsilon();

double abs1(cplx z) { return std::abs(z.real()) + std::abs(z.imag()); }

struct Rotation {
  double c;
  cplx s;
};

// G = [[c, s], [-conj(s), c]] with G [a; b] = [r; 0].
Rotation make_rotation(cplx a, cplx b) {
  const double na = std::abs(a), nb = std::abs(b);
  if (nb == 0.0) return {1.0, cplx{}};
  if (na == 0.0) return {0.0, std::conj(b) / nb};
  const double r = std::hypot(na, nb);
  const cplx phase = a / na;
  return {na / r, phase * std::conj(b) / r};
}

void rotate_rows(CMatrix& m, Eigen::Index i, const Rotation& g, Eigen::Index c0, Eigen::Index c1) {
  for (Eigen::Index j = c0; j < c1; ++j) {
    const cplx x = m(i, j), y = m(i + 1, j);
    m(i, j) = g.c * x + g.s * y;
    m(i + 1, j) = -std::conj(g.s) * x + g.c * y;
  }
}

void rotate_cols(CMatrix& m, Eigen::Index i, const Rotation& g, Eigen::Index r0, Eigen::Index r1) {
  for (Eigen::Index j = r0; j < r1; ++j) {
    const cplx x = m(j, i), y = m(j, i + 1);
    m(j, i) = g.c * x + std::conj(g.s) * y;
    m(j, i + 1) = -g.s * x + g.c * y;
  }
}

// Householder reduction; returns h and accumulates the unitary factor in z.
void hessenberg(CMatrix& h, CMatrix& z) {
  const Eigen::Index n = h.rows();
  z.setIdentity(n, n);
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index m = n - k - 1;
    CVector x = h.col(k).tail(m);
    const double xn = x.norm();
    if (xn == 0.0) continue;
    const cplx x0 = x[0];
    const cplx alpha = -(x0 == cplx{} ? cplx(1.0) : x0 / std::abs(x0)) * xn;
    CVector v = x;
    v[0] -= alpha;
    const double vn = v.norm();
    if (vn == 0.0) continue;
    v /= vn;
    // H <- (I - 2 v v^*) H (I - 2 v v^*)
    h.bottomRows(m) -= 2.0 * v * (v.adjoint() * h.bottomRows(m));
    h.rightCols(m) -= 2.0 * (h.rightCols(m) * v) * v.adjoint();
    z.rightCols(m) -= 2.0 * (z.rightCols(m) * v) * v.adjoint();
    h.col(k).tail(m - 1).setZero();
    h(k + 1, k) = alpha;
  }
}

// Eigenvalue of the trailing 2x2 block closer to its (1,1) entry d.
cplx wilkinson_shift(cplx a, cplx b, cplx c, cplx d) {
  const cplx tr = 0.5 * (a - d);
  const cplx disc = std::sqrt(tr * tr + b * c);
  const cplx s1 = d - (b * c) / (tr + disc);
  const cplx s2 = d - (b * c) / (tr - disc);
  const cplx den1 = tr + disc, den2 = tr - disc;
  if (den1 == cplx{} && den2 == cplx{}) return d;
  if (den1 == cplx{}) return s2;
  if (den2 == cplx{}) return s1;
  return std::abs(den1) >= std::abs(den2) ? s1 : s2;
}

}  // namespace

double SpectrumResult::max_residual() const {
  return residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
}

CVector SpectrumResult::vector(std::size_t k) const {
  if (vectors) return vectors->col(static_cast<Eigen::Index>(k));
  if (!schur_form) throw Error(ErrorCode::InvalidArgument, "spectrum carries no Schur form");
  return schur_eigenvector(*schur_form, balance, static_cast<Eigen::Index>(k));
}

CVector schur_eigenvector(const SchurForm& s, const Eigen::VectorXd& d, Eigen::Index k) {
  const CMatrix& t = s.t;
  const Eigen::Index n = t.rows();
  const double small = kUlp * std::max(t.norm(), std::numeric_limits<double>::min());
  const cplx lambda = t(k, k);
  // Solves (t - lambda) y = rhs on the leading k+1 block; with skip_tip the
  // entry y[k] is held fixed (the null-vector case).
  auto back_substitute = [&](CVector y, bool skip_tip) {
    for (Eigen::Index i = skip_tip ? k - 1 : k; i >= 0; --i) {
      cplx acc = skip_tip ? cplx{} : y[i];
      for (Eigen::Index j = i + 1; j <= k; ++j) acc -= t(i, j) * y[j];
      cplx den = t(i, i) - lambda;
      if (std::abs(den) < small) den = small;
      y[i] = acc / den;
    }
    return y;
  };
  CVector y = CVector::Zero(n);
  y[k] = 1.0;
  y = back_substitute(y, true);
  y.normalize();
  // One inverse-iteration step in Schur coordinates.
  CVector z = back_substitute(y, false);
  if (z.allFinite() && z.norm() > 0.0) y = z / z.norm();
  CVector v = d.size() == n ? CVector(d.cast<cplx>().asDiagonal() * (s.z * y)) : CVector(s.z * y);
  return v / v.norm();
}

double spectral_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<CMatrix> svd(a);
  return svd.singularValues()[0];
}

SchurForm schur(const CMatrix& a, int sweeps_per_dim) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw Error(ErrorCode::InvalidArgument, "eigensolver needs a square matrix");
  if (!a.allFinite()) throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");
  SchurForm s{a, CMatrix(), 0};
  CMatrix& t = s.t;
  hessenberg(t, s.z);
  if (n <= 1) return s;

  const double hnorm = t.norm();
  const long budget = static_cast<long>(sweeps_per_dim) * n;
  Eigen::Index hi = n - 1;
  int stall = 0;
  while (hi > 0) {
    // Find the start of the unreduced block ending at hi.
    Eigen::Index lo = hi;
    while (lo > 0) {
      const double local = abs1(t(lo, lo)) + abs1(t(lo - 1, lo - 1));
      const double tol = local > 0.0 ? kUlp * local : kUlp * hnorm;
      if (abs1(t(lo, lo - 1)) <= tol) {
        t(lo, lo - 1) = cplx{};
        break;
      }
      --lo;
    }
    if (lo == hi) {
      --hi;
      stall = 0;
      continue;
    }
    if (++s.sweeps > budget) {
      throw Error(ErrorCode::NoConvergence,
                  "QR iteration exceeded " + std::to_string(budget) + " sweeps");
    }
    ++stall;
    cplx shift;
    if (stall % 11 == 0) {
      // Exceptional shift to break cycles.
      shift = t(hi, hi) + cplx(0.75 * abs1(t(hi, hi - 1)), 0.4375 * abs1(t(hi, hi - 1)));
    } else {
      shift = wilkinson_shift(t(hi - 1, hi - 1), t(hi - 1, hi), t(hi, hi - 1), t(hi, hi));
    }

    Rotation g = make_rotation(t(lo, lo) - shift, t(lo + 1, lo));
    for (Eigen::Index k = lo; k < hi; ++k) {
      if (k > lo) {
        g = make_rotation(t(k, k - 1), t(k + 1, k - 1));
      }
      rotate_rows(t, k, g, k > lo ? k - 1 : lo, n);
      if (k > lo) t(k + 1, k - 1) = cplx{};
      rotate_cols(t, k, g, 0, std::min(k + 3, hi + 1));
      rotate_cols(s.z, k, g, 0, n);
    }
  }
  for (Eigen::Index i = 1; i < n; ++i) t.row(i).head(i).setZero();
  return s;
}

SpectrumResult eig(const CMatrix& a_in, const EigOptions& opt) {
  const Eigen::Index n = a_in.rows();
  if (a_in.cols() != n) throw Error(ErrorCode::InvalidArgument, "eigensolver needs a square matrix");

  // Diagonal balancing by powers of two: a = d b d^{-1}.
  Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
  CMatrix b = a_in;
  if (opt.balance && n > 1) {
    bool changed = true;
    for (int pass = 0; changed && pass < 100; ++pass) {
      changed = false;
      for (Eigen::Index i = 0; i < n; ++i) {
        double r = 0.0, c = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
          if (j == i) continue;
          c += abs1(b(j, i));
          r += abs1(b(i, j));
        }
        if (c == 0.0 || r == 0.0) continue;
        double f = 1.0;
        const double sum = c + r;
        while (c < r / 2.0) { c *= 2.0; r /= 2.0; f *= 2.0; }
        while (c >= r * 2.0) { c /= 2.0; r *= 2.0; f /= 2.0; }
        if ((c + r) < 0.95 * sum) {
          changed = true;
          d[i] *= f;
          b.row(i) /= f;
          b.col(i) *= f;
        }
      }
    }
  }

  auto s = std::make_shared<SchurForm>(schur(b, opt.sweeps_per_dim));
  SpectrumResult out;
  out.sweeps = s->sweeps;
  out.norm = spectral_norm(a_in);
  out.eigenvalues.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out.eigenvalues[static_cast<std::size_t>(i)] = s->t(i, i);
  out.schur_form = s;
  out.balance = d;
  if (!opt.vectors) return out;

  CMatrix vecs(n, n);
  for (Eigen::Index k = 0; k < n; ++k) vecs.col(k) = out.vector(static_cast<std::size_t>(k));
  out.residuals.resize(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    const CVector r = a_in * vecs.col(k) - out.eigenvalues[static_cast<std::size_t>(k)] * vecs.col(k);
    out.residuals[static_cast<std::size_t>(k)] = r.norm() / std::max(out.norm, 1e-300);
  }
  out.vectors = std::move(vecs);
  return out;
}

}  // namespace bf
