#include "bf/periodic_profile.hpp"

#include <algorithm>
#include <cmath>

#include "bf/error.hpp"

namespace bf {

namespace {

Parity flip(Parity p) noexcept {
  switch (p) {
    case Parity::Even: return Parity::Odd;
    case Parity::Odd: return Parity::Even;
    default: return Parity::None;
  }
}

}  // namespace

Parity parity_product(Parity a, Parity b) noexcept {
  if (a == Parity::None || b == Parity::None) return Parity::None;
  return a == b ? Parity::Even : Parity::Odd;
}

PeriodicProfile::PeriodicProfile(int band, Parity parity)
    : band_(band), parity_(parity), c_(CVector::Zero(2 * band + 1)) {
  if (band < 0) throw Error(ErrorCode::InvalidArgument, "negative Fourier band");
}

PeriodicProfile PeriodicProfile::from_cos_sin(double mean, std::span<const double> cos,
                                              std::span<const double> sin, Parity parity) {
  const int band = static_cast<int>(std::max(cos.size(), sin.size())) - 1;
  PeriodicProfile p(std::max(band, 0), parity);
  p.coeff_ref(0) = mean;
  for (std::size_t k = 1; k < cos.size(); ++k) p.add_cos(static_cast<int>(k), cos[k]);
  for (std::size_t k = 1; k < sin.size(); ++k) p.add_sin(static_cast<int>(k), sin[k]);
  return p;
}

PeriodicProfile PeriodicProfile::constant(double value, int band) {
  PeriodicProfile p(band, Parity::Even);
  p.coeff_ref(0) = value;
  return p;
}

PeriodicProfile PeriodicProfile::from_samples(std::span<const cplx> values, int band,
                                              Parity parity) {
  const int n = static_cast<int>(values.size());
  if (n <= 2 * band) {
    throw Error(ErrorCode::InvalidArgument, "grid too coarse for the requested band");
  }
  PeriodicProfile p(band, parity);
  const double h = 2.0 * kPi / n;
  for (int k = -band; k <= band; ++k) {
    cplx acc{};
    for (int j = 0; j < n; ++j) {
      // Reduce k*j mod n first so the angle stays small and exact.
      const long m = (static_cast<long>(k) * j) % n;
      acc += values[static_cast<std::size_t>(j)] * std::polar(1.0, -h * static_cast<double>(m));
    }
    p.coeff_ref(k) = acc / static_cast<double>(n);
  }
  return p;
}

PeriodicProfile PeriodicProfile::from_samples(std::span<const double> values, int band,
                                              Parity parity) {
  std::vector<cplx> z(values.begin(), values.end());
  PeriodicProfile p = from_samples(std::span<const cplx>(z), band, parity);
  // Enforce exact conjugate symmetry for real data.
  for (int k = 1; k <= band; ++k) {
    const cplx avg = 0.5 * (p.coeff(k) + std::conj(p.coeff(-k)));
    p.coeff_ref(k) = avg;
    p.coeff_ref(-k) = std::conj(avg);
  }
  p.coeff_ref(0) = p.coeff(0).real();
  return p;
}

double PeriodicProfile::cos_coeff(int k) const noexcept {
  if (k == 0) return coeff(0).real();
  return (coeff(k) + coeff(-k)).real();
}

double PeriodicProfile::sin_coeff(int k) const noexcept {
  if (k == 0) return 0.0;
  return (kI * (coeff(k) - coeff(-k))).real();
}

void PeriodicProfile::add_cos(int k, double a) {
  if (k == 0) {
    coeff_ref(0) += a;
    return;
  }
  coeff_ref(k) += 0.5 * a;
  coeff_ref(-k) += 0.5 * a;
}

void PeriodicProfile::add_sin(int k, double b) {
  if (k == 0) return;
  coeff_ref(k) += cplx(0.0, -0.5 * b);
  coeff_ref(-k) += cplx(0.0, 0.5 * b);
}

PeriodicProfile PeriodicProfile::derivative(int order) const {
  PeriodicProfile d(band_, order % 2 ? flip(parity_) : parity_);
  for (int k = -band_; k <= band_; ++k) {
    d.coeff_ref(k) = coeff(k) * std::pow(cplx(0.0, k), order);
  }
  return d;
}

PeriodicProfile PeriodicProfile::hilbert() const {
  PeriodicProfile h(band_, flip(parity_));
  for (int k = 1; k <= band_; ++k) {
    h.coeff_ref(k) = cplx(0.0, -1.0) * coeff(k);
    h.coeff_ref(-k) = cplx(0.0, 1.0) * coeff(-k);
  }
  return h;
}

PeriodicProfile PeriodicProfile::abs_d() const {
  PeriodicProfile a(band_, parity_);
  for (int k = -band_; k <= band_; ++k) a.coeff_ref(k) = coeff(k) * static_cast<double>(std::abs(k));
  return a;
}

PeriodicProfile PeriodicProfile::truncated(int band) const {
  PeriodicProfile t(band, parity_);
  const int m = std::min(band, band_);
  for (int k = -m; k <= m; ++k) t.coeff_ref(k) = coeff(k);
  return t;
}

PeriodicProfile PeriodicProfile::operator+(const PeriodicProfile& o) const {
  PeriodicProfile r(std::max(band_, o.band_), parity_ == o.parity_ ? parity_ : Parity::None);
  for (int k = -r.band_; k <= r.band_; ++k) r.coeff_ref(k) = coeff(k) + o.coeff(k);
  return r;
}

PeriodicProfile PeriodicProfile::operator-(const PeriodicProfile& o) const { return *this + o * -1.0; }

PeriodicProfile PeriodicProfile::operator*(double s) const {
  PeriodicProfile r = *this;
  r.c_ *= s;
  return r;
}

PeriodicProfile PeriodicProfile::operator*(const PeriodicProfile& o) const {
  PeriodicProfile r(band_ + o.band_, parity_product(parity_, o.parity_));
  for (int j = -band_; j <= band_; ++j) {
    const cplx a = coeff(j);
    if (a == cplx{}) continue;
    for (int k = -o.band_; k <= o.band_; ++k) r.coeff_ref(j + k) += a * o.coeff(k);
  }
  return r;
}

cplx PeriodicProfile::operator()(double x) const {
  cplx acc = coeff(0);
  for (int k = 1; k <= band_; ++k) {
    const cplx e = std::polar(1.0, k * x);
    acc += coeff(k) * e + coeff(-k) * std::conj(e);
  }
  return acc;
}

std::vector<cplx> PeriodicProfile::samples(int n) const {
  std::vector<cplx> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = (*this)(2.0 * kPi * j / n);
  return out;
}

std::vector<double> PeriodicProfile::real_samples(int n) const {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = (*this)(2.0 * kPi * j / n).real();
  return out;
}

double PeriodicProfile::sup_norm(int n) const {
  if (n <= 0) n = 8 * (band_ + 1);
  double m = 0.0;
  for (const cplx& v : samples(n)) m = std::max(m, std::abs(v));
  return m;
}

double PeriodicProfile::max_abs_coeff() const { return c_.size() ? c_.cwiseAbs().maxCoeff() : 0.0; }

double PeriodicProfile::reality_defect() const {
  double d = std::abs(coeff(0).imag());
  for (int k = 1; k <= band_; ++k) d = std::max(d, std::abs(coeff(-k) - std::conj(coeff(k))));
  return d;
}

double PeriodicProfile::parity_defect() const {
  if (parity_ == Parity::None) return 0.0;
  double d = parity_ == Parity::Odd ? std::abs(coeff(0)) : 0.0;
  for (int k = 1; k <= band_; ++k) {
    const cplx s = parity_ == Parity::Even ? coeff(k) - coeff(-k) : coeff(k) + coeff(-k);
    d = std::max(d, std::abs(s));
  }
  return d;
}

}  // namespace bf
