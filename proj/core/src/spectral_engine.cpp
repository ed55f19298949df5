#include "bf/spectral_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "bf/error.hpp"
#include "bf/parallel.hpp"

namespace bf {

namespace {

int band_of(Eigen::Index n) { return static_cast<int>((n / 2 - 1) / 2); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// -i T^-1 L T with T = diag(I, i I); real exactly when L is reversible.
bool reversible_real_form(const CMatrix& l, Eigen::MatrixXd& out) {
  const Eigen::Index m = l.rows() / 2;
  CMatrix a(l.rows(), l.cols());
  a.topLeftCorner(m, m) = -kI * l.topLeftCorner(m, m);
  a.topRightCorner(m, m) = l.topRightCorner(m, m);
  a.bottomLeftCorner(m, m) = -l.bottomLeftCorner(m, m);
  a.bottomRightCorner(m, m) = -kI * l.bottomRightCorner(m, m);
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  if (a.imag().cwiseAbs().maxCoeff() > 1e-13 * scale) return false;
  out = a.real();
  return true;
}

SpectrumResult eig_reversible(const CMatrix& l, const Eigen::MatrixXd& ar, bool vectors) {
  const Eigen::Index n = l.rows();
  const Eigen::Index m = n / 2;
  Eigen::EigenSolver<Eigen::MatrixXd> es(ar, vectors);
  if (es.info() != Eigen::Success)
    throw Error(ErrorCode::NoConvergence, "real Schur iteration did not converge");
  SpectrumResult out;
  out.norm = spectral_norm(l);
  const Eigen::VectorXcd nu = es.eigenvalues();
  out.eigenvalues.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    // lambda = i nu; written out so that real nu gives an exactly zero real part.
    out.eigenvalues[static_cast<std::size_t>(i)] = cplx(-nu[i].imag(), nu[i].real());
  }
  if (!vectors) return out;
  CMatrix v = es.eigenvectors();
  v.bottomRows(m) *= kI;
  for (Eigen::Index k = 0; k < n; ++k) v.col(k).normalize();
  out.residuals.resize(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    const CVector r = l * v.col(k) - out.eigenvalues[static_cast<std::size_t>(k)] * v.col(k);
    out.residuals[static_cast<std::size_t>(k)] = r.norm() / std::max(out.norm, 1e-300);
  }
  out.vectors = std::move(v);
  return out;
}

}  // namespace

SpectrumResult eig(const TruncatedOperator& op, bool vectors, bool reversible) {
  if (!op.matrix.allFinite())
    throw Error(ErrorCode::InvalidArgument, "operator has non-finite entries");
  if (reversible) {
    Eigen::MatrixXd ar;
    if (reversible_real_form(op.matrix, ar)) return eig_reversible(op.matrix, ar, vectors);
  }
  EigOptions opt;
  opt.vectors = vectors;
  return eig(op.matrix, opt);
}

double low_mode_weight(const CVector& v, int band, int max_mode) {
  const double total = v.squaredNorm();
  if (total == 0.0) return 0.0;
  double low = 0.0;
  for (int comp = 0; comp < 2; ++comp)
    for (int k = -std::min(max_mode, band); k <= std::min(max_mode, band); ++k)
      low += std::norm(v[mode_index(comp, k, band)]);
  return low / total;
}

std::array<cplx, 4> flat_quadruple(const CapillaryParam& kappa, double mu) {
  return {flat_eigenvalue(kappa, 1, Branch::Plus, mu), flat_eigenvalue(kappa, 1, Branch::Minus, mu),
          flat_eigenvalue(kappa, 0, Branch::Plus, mu), flat_eigenvalue(kappa, 0, Branch::Minus, mu)};
}

Quadruple near_zero_quadruple(const SpectrumResult& spec, const CapillaryParam& kappa, double mu,
                              const QuadrupleOptions& opt) {
  const std::size_t n = spec.eigenvalues.size();
  if (n < 4) throw Error(ErrorCode::InvalidArgument, "spectrum has fewer than 4 eigenvalues");
  const int band = band_of(static_cast<Eigen::Index>(n));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(spec.eigenvalues[a]) < std::abs(spec.eigenvalues[b]);
  });
  const std::size_t m = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(opt.candidates, 4)));

  std::vector<double> weight(m);
  for (std::size_t i = 0; i < m; ++i) weight[i] = low_mode_weight(spec.vector(order[i]), band);

  Quadruple q;
  std::vector<bool> chosen(m, false);
  int found = 0;
  for (std::size_t i = 0; i < m && found < 4; ++i) {
    if (weight[i] >= opt.member_weight) {
      chosen[i] = true;
      ++found;
    }
  }
  if (found < 4)
    throw Error(ErrorCode::GapFailure, "only " + std::to_string(found) +
                                           " low-mode eigenvectors among the smallest eigenvalues");
  for (std::size_t i = 0; i < m; ++i)
    if (chosen[i]) q.inner_radius = std::max(q.inner_radius, std::abs(spec.eigenvalues[order[i]]));

  q.outer_radius = m < n ? std::abs(spec.eigenvalues[order[m]]) : std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    if (chosen[i] || weight[i] <= opt.coupled_weight) continue;
    q.outer_radius = std::min(q.outer_radius, std::abs(spec.eigenvalues[order[i]]));
  }
  if (!(q.outer_radius >= opt.gap_factor * q.inner_radius))
    throw Error(ErrorCode::GapFailure, "near-zero cluster radius " + fmt(q.inner_radius) +
                                           " is not separated from the next coupled eigenvalue at " +
                                           fmt(q.outer_radius));
  for (std::size_t i = 0; i < m; ++i) {
    const cplx z = spec.eigenvalues[order[i]];
    if (!chosen[i] && weight[i] <= opt.coupled_weight && std::abs(z) < q.outer_radius)
      q.decoupled.push_back(z);
  }

  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < m; ++i)
    if (chosen[i]) members.push_back(order[i]);  // modulus order

  if (mu < opt.label_floor) {
    for (int i = 0; i < 4; ++i) {
      q.indices[static_cast<std::size_t>(i)] = members[static_cast<std::size_t>(i)];
      q.values[static_cast<std::size_t>(i)] = spec.eigenvalues[members[static_cast<std::size_t>(i)]];
    }
    return q;
  }

  const double c = std::sqrt(1.0 + kappa.kappa());
  const cplx t_plus(0.0, c * mu - std::sqrt(mu));
  const cplx t_minus(0.0, c * mu + std::sqrt(mu));
  auto take_closest = [&](cplx target) {
    auto it = std::min_element(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(spec.eigenvalues[a] - target) < std::abs(spec.eigenvalues[b] - target);
    });
    const std::size_t idx = *it;
    members.erase(it);
    return idx;
  };
  const std::size_t i0p = take_closest(t_plus);
  const std::size_t i0m = take_closest(t_minus);
  std::size_t i1p = members[0], i1m = members[1];
  // Imaginary splits follow the flat branches: lambda1+ lives on mode +1, whose
  // mu^2 coefficient is e22 / 8, so it is the upper one iff e22 >= 0.
  const double orient = kappa.is_singular() || coeffs_e(kappa).e22 >= 0.0 ? 1.0 : -1.0;
  const cplx diff = spec.eigenvalues[i1p] - spec.eigenvalues[i1m];
  const bool swap = std::abs(diff.real()) > std::abs(diff.imag()) ? diff.real() < 0.0
                                                                    : orient * diff.imag() < 0.0;
  if (swap) std::swap(i1p, i1m);
  q.indices = {i1p, i1m, i0p, i0m};
  for (std::size_t i = 0; i < 4; ++i) q.values[i] = spec.eigenvalues[q.indices[i]];
  q.labeled = true;
  return q;
}

void check_contour(const std::vector<cplx>& eigenvalues, const Circle& circle) {
  for (const cplx z : eigenvalues) {
    const double d = std::abs(std::abs(z - circle.center) - circle.radius);
    if (d < 0.1 * circle.radius)
      throw Error(ErrorCode::ContourTooTight,
                  "eigenvalue (" + fmt(z.real()) + ", " + fmt(z.imag()) + ") within 10% of circle radius " +
                      fmt(circle.radius));
  }
}

ContourPlan plan_contour(const SpectrumResult& spec, const Quadruple& q, int min_nodes) {
  const auto& ev = spec.eigenvalues;
  const double inner = q.inner_radius;

  // Candidate radii: geometric means of consecutive moduli between the cluster
  // and the first coupled eigenvalue. The first gap wide enough wins, which
  // keeps the number of holes small.
  // With no gap test a coupled eigenvalue may sit inside the cluster; then
  // scan outward past everything and let the holes handle the intruders.
  const double upper =
      q.outer_radius > inner ? q.outer_radius : std::numeric_limits<double>::infinity();
  std::vector<double> moduli;
  for (const cplx z : ev) {
    const double r = std::abs(z);
    if (r > inner && r < upper) moduli.push_back(r);
  }
  std::sort(moduli.begin(), moduli.end());
  std::vector<double> edges{inner};
  edges.insert(edges.end(), moduli.begin(), moduli.end());
  edges.push_back(upper);

  double radius = 0.0;
  double best_ratio = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double lo = edges[i];
    const double hi = edges[i + 1];
    const double ratio = std::isfinite(hi) ? hi / std::max(lo, 1e-300) : 4.0;
    const double r = std::isfinite(hi) ? std::sqrt(lo * hi) : 2.0 * std::max(lo, 1e-300);
    if (ratio > best_ratio) {
      best_ratio = ratio;
      radius = r;
    }
    if (ratio >= 1.5) break;
  }
  if (inner == 0.0) radius = std::max(radius, 1e-12);

  ContourPlan plan;
  plan.outer = {0.0, radius};
  check_contour(ev, plan.outer);

  std::vector<std::size_t> member(q.indices.begin(), q.indices.end());
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (std::find(member.begin(), member.end(), i) != member.end()) continue;
    if (std::abs(ev[i]) >= radius) continue;
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < ev.size(); ++j)
      if (j != i) nearest = std::min(nearest, std::abs(ev[j] - ev[i]));
    double r = 0.5 * nearest;
    r = std::min(r, 0.5 * (radius - std::abs(ev[i])));
    plan.holes.push_back({ev[i], r});
  }

  // Trapezoid error for a pole at distance d from the center of a circle of
  // radius r decays like (min(d, r) / max(d, r))^n.
  double worst = 0.0;
  auto account = [&](const Circle& c) {
    for (const cplx z : ev) {
      const double d = std::abs(z - c.center);
      const double ratio = std::min(d, c.radius) / std::max(d, c.radius);
      if (d > 0.0) worst = std::max(worst, ratio);
    }
  };
  account(plan.outer);
  for (const Circle& h : plan.holes) {
    check_contour(ev, h);
    account(h);
  }
  int n = std::max(min_nodes, 8);
  while (n < 1024 && std::pow(worst, n) > 1e-14) n *= 2;
  plan.n_nodes = n;
  return plan;
}

CMatrix riesz_projector(const TruncatedOperator& op, const Circle& circle, int n_nodes) {
  if (n_nodes < 4 || n_nodes % 2 != 0)
    throw Error(ErrorCode::InvalidArgument, "node count must be even and at least 4");
  if (!(circle.radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  const Eigen::Index n = op.dim();
  // Half-step offset makes the node set symmetric under lambda -> -conj(lambda).
  const auto parts = parallel_map<CMatrix>(static_cast<std::size_t>(n_nodes), [&](std::size_t j) {
    const double theta = 2.0 * kPi * (static_cast<double>(j) + 0.5) / n_nodes;
    const cplx w = circle.radius * std::exp(kI * theta);
    CMatrix shifted = -op.matrix;
    shifted.diagonal().array() += circle.center + w;
    Eigen::PartialPivLU<CMatrix> lu(shifted);
    return CMatrix(w * lu.inverse());
  });
  CMatrix p = CMatrix::Zero(n, n);
  for (const CMatrix& part : parts) p += part;
  return p / static_cast<double>(n_nodes);
}

CMatrix riesz_projector(const TruncatedOperator& op, double radius, int n_nodes) {
  return riesz_projector(op, Circle{0.0, radius}, n_nodes);
}

CMatrix riesz_projector(const TruncatedOperator& op, const ContourPlan& plan) {
  CMatrix p = riesz_projector(op, plan.outer, plan.n_nodes);
  for (const Circle& h : plan.holes) p -= riesz_projector(op, h, plan.n_nodes);
  return p;
}

Compression compress(const TruncatedOperator& op, const CMatrix& p,
                     std::optional<std::uint64_t> seed) {
  Eigen::ColPivHouseholderQR<CMatrix> qr(p);
  const auto& r = qr.matrixR();
  const double top = std::abs(r(0, 0));
  int rank = 0;
  for (Eigen::Index i = 0; i < std::min(r.rows(), r.cols()); ++i)
    if (std::abs(r(i, i)) > 1e-6 * top) ++rank;
  if (rank != 4)
    throw Error(ErrorCode::RankFailure, "projector has numerical rank " + std::to_string(rank));
  CMatrix q = CMatrix(qr.householderQ()).leftCols(4);
  if (seed) {
    std::mt19937_64 gen(*seed);
    std::normal_distribution<double> nd;
    CMatrix4 g;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) g(i, j) = cplx(nd(gen), nd(gen));
    Eigen::HouseholderQR<CMatrix4> gq(g);
    q = q * CMatrix4(gq.householderQ());
  }
  Compression out;
  out.basis = q;
  out.matrix = q.adjoint() * op.matrix * q;
  out.rank = rank;
  return out;
}

CMatrix flat_kernel_projector(const CapillaryParam& kappa, int band) {
  if (band < 1) throw Error(ErrorCode::InvalidArgument, "band must be at least 1");
  const double c = std::sqrt(1.0 + kappa.kappa());
  const Eigen::Index n = operator_dim(band);
  CMatrix p = CMatrix::Zero(n, n);
  p(mode_index(0, 0, band), mode_index(0, 0, band)) = 1.0;
  p(mode_index(1, 0, band), mode_index(1, 0, band)) = 1.0;
  for (int k : {-1, 1}) {
    // Block [[i c k, 1], [-(1 + kappa), i c k]] has eigenvalues 0 and 2 i c k;
    // (lambda2 - M) / lambda2 projects onto the kernel along the other one.
    CMatrix2 mblk;
    mblk << cplx(0.0, c * k), 1.0, -(1.0 + kappa.kappa()), cplx(0.0, c * k);
    const cplx l2(0.0, 2.0 * c * k);
    const CMatrix2 proj = (l2 * CMatrix2::Identity() - mblk) / l2;
    const Eigen::Index e = mode_index(0, k, band);
    const Eigen::Index s = mode_index(1, k, band);
    p(e, e) = proj(0, 0);
    p(e, s) = proj(0, 1);
    p(s, e) = proj(1, 0);
    p(s, s) = proj(1, 1);
  }
  return p;
}

CMatrix flat_kernel_basis(const CapillaryParam& kappa, int band) {
  if (band < 1) throw Error(ErrorCode::InvalidArgument, "band must be at least 1");
  const double c = std::sqrt(1.0 + kappa.kappa());
  const double rc = std::sqrt(c);
  CMatrix f = CMatrix::Zero(operator_dim(band), 4);
  // cos x = (e^{ix} + e^{-ix}) / 2, sin x = (e^{ix} - e^{-ix}) / (2 i).
  f(mode_index(0, 1, band), 0) = 0.5 / rc;
  f(mode_index(0, -1, band), 0) = 0.5 / rc;
  f(mode_index(1, 1, band), 0) = cplx(0.0, -0.5 * rc);
  f(mode_index(1, -1, band), 0) = cplx(0.0, 0.5 * rc);
  f(mode_index(0, 1, band), 1) = cplx(0.0, 0.5 / rc);
  f(mode_index(0, -1, band), 1) = cplx(0.0, -0.5 / rc);
  f(mode_index(1, 1, band), 1) = 0.5 * rc;
  f(mode_index(1, -1, band), 1) = 0.5 * rc;
  f(mode_index(0, 0, band), 2) = 1.0;
  f(mode_index(1, 0, band), 3) = 1.0;
  return f;
}

SymplecticCompression symplectic_compression(const TruncatedOperator& op, const CMatrix& p) {
  const int band = op.band;
  const CapillaryParam kappa(op.kappa, kDefaultGuard, 1);
  const CMatrix p0 = flat_kernel_projector(kappa, band);
  const CMatrix d = p - p0;

  // (I - D^2)^-1/2 = sum a_n D^{2n}, a_n = a_{n-1} (2n - 1) / (2n); it commutes with P.
  CMatrix term = p * flat_kernel_basis(kappa, band);
  CMatrix basis = term;
  bool converged = false;
  for (int k = 1; k <= 2000; ++k) {
    term = (d * (d * term)) * ((2.0 * k - 1.0) / (2.0 * k));
    basis += term;
    if (term.norm() <= 1e-17 * basis.norm()) {
      converged = true;
      break;
    }
    if (!term.allFinite()) break;
  }
  if (!converged)
    throw Error(ErrorCode::NoConvergence, "Kato transport series diverges: |P - P0| too large");

  SymplecticCompression out;
  out.basis = basis;
  const CMatrix lf = op.matrix * basis;
  const Eigen::Index m = scalar_dim(band);
  CMatrix bf(lf.rows(), 4);  // B basis = -J L basis
  bf.topRows(m) = -lf.bottomRows(m);
  bf.bottomRows(m) = lf.topRows(m);
  out.matrix = (basis.adjoint() * basis).ldlt().solve(basis.adjoint() * lf);
  out.b = basis.adjoint() * bf;

  CMatrix jf(basis.rows(), 4);
  jf.topRows(m) = basis.bottomRows(m);
  jf.bottomRows(m) = -basis.topRows(m);
  CMatrix4 j4m = CMatrix4::Zero();
  j4m(0, 1) = 1.0;
  j4m(1, 0) = -1.0;
  j4m(2, 3) = 1.0;
  j4m(3, 2) = -1.0;
  out.symplectic_defect = (CMatrix4(basis.adjoint() * jf) - j4m).cwiseAbs().maxCoeff();
  out.factor_defect = (out.matrix - j4m * out.b).cwiseAbs().maxCoeff();
  out.invariance_residual =
      (lf - basis * out.matrix).norm() / std::max(op.matrix.norm() * basis.norm(), 1e-300);
  return out;
}

double hamiltonian_pairing_defect(const std::vector<cplx>& eigenvalues) {
  double worst = 0.0;
  for (const cplx z : eigenvalues) {
    const cplx mirror = -std::conj(z);
    double best = std::numeric_limits<double>::infinity();
    for (const cplx w : eigenvalues) best = std::min(best, std::abs(w - mirror));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace bf
