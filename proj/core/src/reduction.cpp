#include "bf/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bf/error.hpp"

namespace bf {

namespace {

double rel_scale(const CMatrix4& m) { return std::max(m.norm(), 1e-300); }

HamiltonianBlocks4 split(const CMatrix4& b) {
  HamiltonianBlocks4 out;
  out.E = b.block<2, 2>(0, 0);
  out.F = b.block<2, 2>(0, 2);
  out.G = b.block<2, 2>(2, 2);
  return out;
}

// Hermitian part with the alternation pattern imposed.
CMatrix4 snap(const CMatrix4& b) {
  CMatrix4 h = 0.5 * (b + b.adjoint());
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      h(i, j) = ((i + j) % 2 == 0) ? cplx(h(i, j).real(), 0.0) : cplx(0.0, h(i, j).imag());
    }
  }
  return h;
}

double pattern_error(const CMatrix4& b, int i, int j) {
  const double herm = std::abs(b(i, j) - std::conj(b(j, i)));
  const double alt = ((i + j) % 2 == 0) ? std::abs(b(i, j).imag()) : std::abs(b(i, j).real());
  return std::max(herm, alt);
}

}  // namespace

CMatrix2 j2() {
  CMatrix2 j;
  j << 0.0, 1.0, -1.0, 0.0;
  return j;
}

CMatrix4 j4() {
  CMatrix4 j = CMatrix4::Zero();
  j.block<2, 2>(0, 0) = j2();
  j.block<2, 2>(2, 2) = j2();
  return j;
}

CMatrix4 HamiltonianBlocks4::b() const {
  CMatrix4 m;
  m.block<2, 2>(0, 0) = E;
  m.block<2, 2>(0, 2) = F;
  m.block<2, 2>(2, 0) = F.adjoint();
  m.block<2, 2>(2, 2) = G;
  return m;
}

CMatrix4 HamiltonianBlocks4::l() const { return j4() * b(); }

double structure_defect(const CMatrix4& m) {
  const CMatrix4 b = -j4() * m;  // J4^-1 = -J4
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) worst = std::max(worst, pattern_error(b, i, j));
  return worst / rel_scale(b);
}

HamiltonianBlocks4 check_structure(const CMatrix4& m, double tol) {
  if (!m.allFinite()) throw Error(ErrorCode::InvalidArgument, "non-finite 4x4 matrix");
  const CMatrix4 b = -j4() * m;
  const double scale = rel_scale(b);
  std::vector<std::pair<int, int>> bad;
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double err = pattern_error(b, i, j) / scale;
      worst = std::max(worst, err);
      if (err > tol) bad.emplace_back(i, j);
    }
  }
  if (!bad.empty()) {
    std::string where;
    for (auto [i, j] : bad) where += " (" + std::to_string(i) + "," + std::to_string(j) + ")";
    throw StructureViolationError("B breaks the Hermitian/alternation pattern at" + where +
                                      ", relative defect " + std::to_string(worst),
                                  std::move(bad));
  }
  HamiltonianBlocks4 out = split(snap(b));
  out.structure_defect = worst;
  return out;
}

CMatrix4 first_decoupling_transform(double m) {
  CMatrix4 y = CMatrix4::Identity();
  y(1, 3) = -m;  // -P in the upper right block
  y(2, 0) = m;   // Q in the lower left block
  return y;
}

FirstDecoupling first_decoupling_step(const HamiltonianBlocks4& blocks) {
  const CMatrix4 b = blocks.b();
  const double g11 = blocks.G(0, 0).real();
  if (std::abs(g11) < 1e-12 * rel_scale(b))
    throw Error(ErrorCode::DegenerateG, "G11 vanishes relative to |B|");
  FirstDecoupling out;
  out.m = -blocks.F(0, 0).real() / g11;
  out.transform = first_decoupling_transform(out.m);
  out.blocks = split(snap(out.transform.adjoint() * b * out.transform));
  out.blocks.F(0, 0) = 0.0;
  out.blocks.structure_defect = blocks.structure_defect;
  return out;
}

SylvesterCoeffs sylvester_coeffs(const CMatrix2& e, const CMatrix2& g) {
  SylvesterCoeffs s;
  s.a = g(0, 1).imag() - e(0, 1).imag();
  s.b = g(0, 0).real();
  s.c = e(1, 1).real();
  s.d = g(1, 1).real();
  s.e = e(0, 0).real();
  return s;
}

RMatrix4 sylvester_matrix(const SylvesterCoeffs& s) {
  RMatrix4 m;
  m << s.a, s.b, s.c, 0.0,
       s.d, s.a, 0.0, -s.c,
       s.e, 0.0, s.a, -s.b,
       0.0, -s.e, -s.d, s.a;
  return m;
}

double sylvester_det(const SylvesterCoeffs& s) {
  const double bd = s.b * s.d;
  const double a2 = s.a * s.a;
  const double ce = s.c * s.e;
  return (bd - a2) * (bd - a2) - 2.0 * ce * (a2 + bd - 0.5 * ce);
}

RMatrix4 sylvester_inverse(const SylvesterCoeffs& s) {
  const double det = sylvester_det(s);
  const double norm = sylvester_matrix(s).cwiseAbs().rowwise().sum().maxCoeff();
  if (!std::isfinite(det) || std::abs(det) <= 1e-14 * std::pow(norm, 4))
    throw Error(ErrorCode::SingularSystem,
                "Sylvester determinant " + std::to_string(det) + " is numerically zero");
  const double a = s.a, b = s.b, c = s.c, d = s.d, e = s.e;
  const double a2 = a * a, bd = b * d, ce = c * e;
  RMatrix4 m;
  m << a * (a2 - bd - ce), b * (-a2 + bd - ce), -c * (a2 + bd - ce), -2.0 * a * b * c,
       d * (-a2 + bd - ce), a * (a2 - bd - ce), 2.0 * a * c * d, -c * (-a2 - bd + ce),
       -e * (a2 + bd - ce), 2.0 * a * b * e, a * (a2 - bd - ce), b * (a2 - bd + ce),
       -2.0 * a * d * e, -e * (-a2 - bd + ce), d * (a2 - bd + ce), a * (a2 - bd - ce);
  return m / det;
}

CMatrix2 solve_homological(const CMatrix2& d1, const CMatrix2& d0, const CMatrix2& f) {
  // J2^-1 = -J2 recovers the Hermitian blocks.
  const CMatrix2 e = -j2() * d1;
  const CMatrix2 g = -j2() * d0;
  const SylvesterCoeffs s = sylvester_coeffs(e, g);
  Eigen::Vector4d rhs(-f(1, 0).imag(), f(1, 1).real(), -f(0, 0).real(), f(0, 1).imag());
  if (rhs.isZero(0.0)) return CMatrix2::Zero();
  const Eigen::Vector4d x = sylvester_inverse(s) * rhs;
  CMatrix2 out;
  out << x(0), cplx(0.0, x(1)), cplx(0.0, x(2)), x(3);
  return out;
}

CMatrix4 expm_series(const CMatrix4& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const CMatrix4 scaled = a / std::ldexp(1.0, squarings);
  CMatrix4 sum = CMatrix4::Identity();
  CMatrix4 term = CMatrix4::Identity();
  for (int k = 1; k < 60; ++k) {
    term = term * scaled / static_cast<double>(k);
    sum += term;
    if (term.norm() <= 1e-18 * sum.norm()) break;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

double symplectic_defect(const CMatrix4& t) {
  return (t.adjoint() * j4() * t - j4()).cwiseAbs().maxCoeff();
}

std::pair<cplx, cplx> eigenpair_of_U(const CMatrix2& u) {
  const cplx mean = 0.5 * (u(0, 0) + u(1, 1));
  const cplx half = 0.5 * (u(0, 0) - u(1, 1));
  const cplx root = std::sqrt(half * half + u(0, 1) * u(1, 0));
  cplx p = mean + root;
  cplx m = mean - root;
  const bool mostly_real = std::abs(root.real()) > std::abs(root.imag());
  if (mostly_real ? p.real() < m.real() : p.imag() < m.imag()) std::swap(p, m);
  return {p, m};
}

BlockDiagonalization block_diagonalize(const HamiltonianBlocks4& blocks, double tol,
                                       int max_iter) {
  BlockDiagonalization out;
  const double scale = rel_scale(blocks.b());

  auto finish = [&](const HamiltonianBlocks4& hb) {
    out.blocks = hb;
    out.U2 = j2() * hb.E;
    out.S2 = j2() * hb.G;
    out.off_diagonal = hb.F.norm() / scale;
    return out;
  };

  if (blocks.F.norm() <= tol * scale) return finish(blocks);

  // The coupling has to be small against the separation of the two pairs.
  {
    const auto [u1, u2] = eigenpair_of_U(j2() * blocks.E);
    const auto [s1, s2] = eigenpair_of_U(j2() * blocks.G);
    const double gap = std::min({std::abs(u1 - s1), std::abs(u1 - s2), std::abs(u2 - s1),
                                 std::abs(u2 - s2)});
    if (!(blocks.F.norm() < gap))
      throw Error(ErrorCode::GapFailure, "off-diagonal coupling " +
                                             std::to_string(blocks.F.norm()) +
                                             " is not below the block gap " + std::to_string(gap));
  }

  const FirstDecoupling first = first_decoupling_step(blocks);
  HamiltonianBlocks4 hb = first.blocks;
  out.transform = first.transform;

  const CMatrix4 j = j4();
  for (int it = 1; it <= max_iter; ++it) {
    if (hb.F.norm() <= tol * scale) {
      out.iterations = it - 1;
      return finish(hb);
    }
    const CMatrix2 x = solve_homological(j2() * hb.E, j2() * hb.G, hb.F);
    const CMatrix2 mm = j2() * x;
    CMatrix4 off = CMatrix4::Zero();
    off.block<2, 2>(0, 2) = mm;
    off.block<2, 2>(2, 0) = mm.adjoint();
    const CMatrix4 s = j * off;
    const CMatrix4 l = expm_series(s) * hb.l() * expm_series(-s);
    const CMatrix4 b = -j * l;
    double worst = 0.0;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) worst = std::max(worst, pattern_error(b, r, c));
    if (worst > 1e-9 * scale)
      throw StructureViolationError("conjugation step lost the Hamiltonian pattern", {});
    hb = split(snap(b));
    out.transform = out.transform * expm_series(-s);
  }
  if (hb.F.norm() <= tol * scale) {
    out.iterations = max_iter;
    return finish(hb);
  }
  throw Error(ErrorCode::NoConvergence, "block diagonalization stalled at |F|/|B| = " +
                                            std::to_string(hb.F.norm() / scale));
}

}  // namespace bf
