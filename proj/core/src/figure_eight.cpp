#include "bf/figure_eight.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bf/error.hpp"
#include "bf/parallel.hpp"

namespace bf {

namespace {

void require_unstable(const CapillaryParam& kappa) {
  const RegionLabel region = classify(kappa);
  if (region == RegionLabel::Singular) kappa.require_nonsingular();
  if (region == RegionLabel::Resonant) kappa.require_regular();
  if (region != RegionLabel::Unstable)
    throw Error(ErrorCode::NotUnstable,
                "kappa=" + std::to_string(kappa.kappa()) + " is " + std::string(to_string(region)));
}

double growth_threshold(double norm) { return 1e-12 * std::max(1.0, norm); }

double max_jump(const SpectralBranch& b, std::size_t i) {
  const double dmu = b.mu_grid[i + 1] - b.mu_grid[i];
  double j = std::abs(b.lambda1_plus[i + 1] - b.lambda1_plus[i]);
  j = std::max(j, std::abs(b.lambda1_minus[i + 1] - b.lambda1_minus[i]));
  j = std::max(j, std::abs(b.lambda0_plus[i + 1] - b.lambda0_plus[i]));
  j = std::max(j, std::abs(b.lambda0_minus[i + 1] - b.lambda0_minus[i]));
  return j / dmu;
}

}  // namespace

QuadrupleSample sample_quadruple(const FloquetFamily& family, double mu,
                                 const QuadrupleOptions& opt) {
  const TruncatedOperator op = family.at(mu);
  const SpectrumResult spec = eig(op, true);
  QuadrupleSample s;
  s.mu = mu;
  s.quadruple = near_zero_quadruple(spec, family.kappa(), mu, opt);
  s.norm = spec.norm;
  s.max_residual = spec.max_residual();
  return s;
}

cplx figure_eight_leading(const CapillaryParam& kappa, double mu, double eps) {
  const double delta = delta_bf_leading(kappa, mu, eps);
  const double re = delta > 0.0 ? (mu / 8.0) * std::sqrt(delta) : 0.0;
  return {re, 0.5 * breve_c(kappa) * mu};
}

SpectralBranch trace_figure_eight(const CapillaryParam& kappa, double eps, double mu_max,
                                  int n_samples, int band, const TraceOptions& opt) {
  require_unstable(kappa);
  if (!(eps > 0.0 && eps <= 0.02))
    throw Error(ErrorCode::InvalidArgument, "figure-eight tracing needs 0 < eps <= 0.02");
  if (!(mu_max > 0.0 && mu_max < 0.5) || n_samples < 2)
    throw Error(ErrorCode::InvalidArgument, "need 0 < mu_max < 1/2 and at least 2 samples");
  const FloquetFamily family(kappa, eps, band, opt.frakp);

  std::vector<double> grid(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) grid[static_cast<std::size_t>(i)] = mu_max * (i + 1) / n_samples;

  SpectralBranch br;
  br.kappa = kappa.kappa();
  br.eps = eps;
  auto fill = [&](const std::vector<double>& mus) {
    const auto samples = parallel_map<QuadrupleSample>(
        mus.size(), [&](std::size_t i) { return sample_quadruple(family, mus[i], opt.quadruple); });
    SpectralBranch b;
    b.kappa = br.kappa;
    b.eps = eps;
    for (const auto& s : samples) {
      b.mu_grid.push_back(s.mu);
      b.lambda1_plus.push_back(s.quadruple.lambda1_plus());
      b.lambda1_minus.push_back(s.quadruple.lambda1_minus());
      b.lambda0_plus.push_back(s.quadruple.lambda0_plus());
      b.lambda0_minus.push_back(s.quadruple.lambda0_minus());
      b.norms.push_back(s.norm);
    }
    return b;
  };

  br = fill(grid);
  for (int depth = 0; depth < opt.max_refine_depth; ++depth) {
    const std::size_t n = br.mu_grid.size();
    std::vector<double> slopes(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) slopes[i] = max_jump(br, i);
    std::vector<double> sorted = slopes;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(sorted.size() / 2), sorted.end());
    const double median = sorted[sorted.size() / 2];
    std::vector<double> extra;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double mid = 0.5 * (br.mu_grid[i] + br.mu_grid[i + 1]);
      if (slopes[i] > opt.jump_factor * median && mid > 2.0 * opt.quadruple.label_floor)
        extra.push_back(mid);
    }
    if (extra.empty()) break;
    grid = br.mu_grid;
    grid.insert(grid.end(), extra.begin(), extra.end());
    std::sort(grid.begin(), grid.end());
    br = fill(grid);
  }

  if (opt.locate_mu_bar) br.mu_bar_numeric = locate_mu_bar(family, opt.quadruple).mu_bar;
  return br;
}

MuBarSearch locate_mu_bar(const FloquetFamily& family, const QuadrupleOptions& opt) {
  require_unstable(family.kappa());
  MuBarSearch out;
  out.leading = mu_bar_leading(family.kappa(), family.eps());
  if (out.leading == 0.0) throw Error(ErrorCode::NotUnstable, "zero amplitude has no unstable band");
  auto unstable = [&](double mu) {
    ++out.evaluations;
    const QuadrupleSample s = sample_quadruple(family, mu, opt);
    return s.quadruple.lambda1_plus().real() > growth_threshold(s.norm);
  };

  double lo = 0.5 * out.leading;
  int tries = 0;
  while (!unstable(lo)) {
    lo *= 0.5;
    if (++tries > 8 || lo < 2.0 * opt.label_floor)
      throw Error(ErrorCode::NotUnstable, "no growing mode found below the leading threshold");
  }
  double hi = 1.5 * out.leading;
  tries = 0;
  while (unstable(hi)) {
    lo = hi;
    hi *= 1.5;
    if (++tries > 8 || hi >= 0.5)
      throw Error(ErrorCode::NoConvergence, "instability band does not close");
  }
  const double tol = std::max(1e-3 * out.leading, 1e-4 * out.leading);
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (unstable(mid) ? lo : hi) = mid;
  }
  out.lo = lo;
  out.hi = hi;
  out.mu_bar = 0.5 * (lo + hi);
  return out;
}

GrowthRate max_growth_rate(const FloquetFamily& family, const QuadrupleOptions& opt) {
  require_unstable(family.kappa());
  const double mb = mu_bar_leading(family.kappa(), family.eps());
  if (mb == 0.0) return {};
  auto rate = [&](double mu) {
    return std::max(0.0, sample_quadruple(family, mu, opt).quadruple.lambda1_plus().real());
  };
  const int n = 24;
  const auto coarse = parallel_map<double>(static_cast<std::size_t>(n), [&](std::size_t i) {
    return rate(1.5 * mb * static_cast<double>(i + 1) / n);
  });
  const auto best = static_cast<int>(std::max_element(coarse.begin(), coarse.end()) - coarse.begin());
  double a = 1.5 * mb * std::max(best, 1) / n - 1.5 * mb / n;
  double b = 1.5 * mb * (best + 2) / n;
  a = std::max(a, 1.5 * mb / (4.0 * n));
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = rate(x1), f2 = rate(x2);
  while (b - a > 1e-4 * mb) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = rate(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = rate(x1);
    }
  }
  GrowthRate g;
  g.mu_star = f1 > f2 ? x1 : x2;
  g.rate = std::max(f1, f2);
  if (coarse[static_cast<std::size_t>(best)] > g.rate) {
    g.rate = coarse[static_cast<std::size_t>(best)];
    g.mu_star = 1.5 * mb * (best + 1) / n;
  }
  return g;
}

GrowthRate max_growth_rate(const CapillaryParam& kappa, double eps, int band) {
  require_unstable(kappa);
  return max_growth_rate(FloquetFamily(kappa, eps, band));
}

}  // namespace bf
