#pragma once

#include <memory>

#include "gmhd/types.hpp"

namespace gmhd {

/// Periodic square box [0, L)^2 sampled with n points per axis.
///
/// Mode (i1, i2) in FFT ordering carries the integer frequency k_a in the
/// centered range (-n/2, n/2] and the physical wavenumber xi_a = (2 pi / L) k_a.
/// Two wavenumber tables are kept: `xi` is the true frequency (used by every
/// even multiplier such as |xi|^s), `dxi` zeroes the Nyquist row/column so
/// that odd multipliers (i xi) map real fields to real fields.
class Grid2D {
 public:
  Grid2D(int n, Real box_length);

  static std::shared_ptr<const Grid2D> create(int n, Real box_length = kTwoPi) {
    return std::make_shared<const Grid2D>(n, box_length);
  }

  int n() const { return n_; }
  Real box_length() const { return box_length_; }
  Real spacing() const { return box_length_ / n_; }
  Real cell_area() const { return spacing() * spacing(); }
  /// Wavenumber quantum 2 pi / L.
  Real dk() const { return kTwoPi / box_length_; }

  /// Centered integer frequency of FFT index i.
  int frequency(int i) const { return i <= n_ / 2 ? i : i - n_; }
  /// FFT index of integer frequency k (taken modulo n).
  int index(int k) const { return ((k % n_) + n_) % n_; }

  const Eigen::ArrayXXd& xi1() const { return xi1_; }
  const Eigen::ArrayXXd& xi2() const { return xi2_; }
  const Eigen::ArrayXXd& dxi1() const { return dxi1_; }
  const Eigen::ArrayXXd& dxi2() const { return dxi2_; }
  const Eigen::ArrayXXd& xi_abs() const { return xi_abs_; }
  const Eigen::ArrayXXd& xi_sq() const { return xi_sq_; }
  /// |dxi|^2 with the zero mode and Nyquist-only modes mapped to 1 (safe divisor).
  const Eigen::ArrayXXd& inverse_laplacian_divisor() const { return inv_div_; }
  /// 1 where the mode survives the two-thirds rule, 0 elsewhere.
  const Eigen::ArrayXXd& dealias_mask() const { return mask_; }
  bool kept(int i1, int i2) const { return mask_(i1, i2) != 0.0; }

  /// Physical coordinate of grid index i along either axis.
  Real coordinate(int i) const { return i * spacing(); }

 private:
  int n_;
  Real box_length_;
  Eigen::ArrayXXd xi1_, xi2_, dxi1_, dxi2_, xi_abs_, xi_sq_, inv_div_, mask_;
};

using GridPtr = std::shared_ptr<const Grid2D>;

}  // namespace gmhd
