#pragma once

// 2*pi-periodic functions stored by Fourier coefficients c_k, |k| <= K:
//   f(x) = sum_k c_k exp(i k x).
// Products are exact convolutions (the band grows), so nothing aliases unless
// a caller truncates on purpose.

#include <span>
#include <vector>

#include "bf/types.hpp"

namespace bf {

enum class Parity { Even, Odd, None };

class PeriodicProfile {
 public:
  PeriodicProfile() : PeriodicProfile(0) {}
  explicit PeriodicProfile(int band, Parity parity = Parity::None);

  /// Real profile a0 + sum a_k cos(kx) + b_k sin(kx); `cos` and `sin` are indexed by k,
  /// entry 0 of `sin` is ignored.
  static PeriodicProfile from_cos_sin(double mean, std::span<const double> cos,
                                      std::span<const double> sin, Parity parity = Parity::None);
  static PeriodicProfile constant(double value, int band = 0);

  /// Coefficients from samples on the uniform grid x_j = 2 pi j / n, truncated to `band`.
  static PeriodicProfile from_samples(std::span<const double> values, int band,
                                      Parity parity = Parity::None);
  static PeriodicProfile from_samples(std::span<const cplx> values, int band,
                                      Parity parity = Parity::None);

  int band() const noexcept { return band_; }
  Parity parity() const noexcept { return parity_; }
  void set_parity(Parity p) noexcept { parity_ = p; }

  cplx coeff(int k) const noexcept {
    return (k < -band_ || k > band_) ? cplx{} : c_[static_cast<Eigen::Index>(k + band_)];
  }
  cplx& coeff_ref(int k) { return c_[static_cast<Eigen::Index>(k + band_)]; }
  const CVector& coeffs() const noexcept { return c_; }

  /// a_k = c_k + c_{-k}; for k = 0 the mean c_0.
  double cos_coeff(int k) const noexcept;
  /// b_k = i (c_k - c_{-k}).
  double sin_coeff(int k) const noexcept;

  void add_cos(int k, double a);
  void add_sin(int k, double b);

  PeriodicProfile derivative(int order = 1) const;
  /// -i sign(k) multiplier; kills the mean.
  PeriodicProfile hilbert() const;
  /// |D| multiplier.
  PeriodicProfile abs_d() const;
  PeriodicProfile truncated(int band) const;

  PeriodicProfile operator+(const PeriodicProfile& o) const;
  PeriodicProfile operator-(const PeriodicProfile& o) const;
  PeriodicProfile operator*(double s) const;
  PeriodicProfile operator-() const { return *this * -1.0; }
  /// Exact product; band is the sum of both bands.
  PeriodicProfile operator*(const PeriodicProfile& o) const;

  cplx operator()(double x) const;
  std::vector<cplx> samples(int n) const;
  /// Real part of samples(n).
  std::vector<double> real_samples(int n) const;

  /// Max over a grid of n points of |f|; n defaults to 8 (K + 1).
  double sup_norm(int n = 0) const;
  double max_abs_coeff() const;
  /// Largest |c_{-k} - conj(c_k)|.
  double reality_defect() const;
  /// Defect of the tagged symmetry: |c_k - c_{-k}| (Even) or |c_k + c_{-k}| (Odd);
  /// zero for None.
  double parity_defect() const;

 private:
  int band_;
  Parity parity_;
  CVector c_;
};

inline PeriodicProfile operator*(double s, const PeriodicProfile& p) { return p * s; }

/// Parity of a product, derivative and so on.
Parity parity_product(Parity a, Parity b) noexcept;

}  // namespace bf
