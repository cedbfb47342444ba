#pragma once

#include <cmath>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "gmhd/spectral.hpp"

namespace gmhd {

/// Raised when the radial quadrature misses its error target.
class QuadratureFailure : public Error {
 public:
  QuadratureFailure(const std::string& what, Real worst_radius)
      : Error(what), worst_radius_(worst_radius) {}
  Real worst_radius() const { return worst_radius_; }

 private:
  Real worst_radius_;
};

/// Coefficients a_k of the large-r expansion h(r) ~ sum_k a_k r^{-2-2 beta k},
/// k = 1..terms. a_k vanishes when beta k is an integer.
std::vector<Real> kernel_asymptotic_coefficients(Real beta, int terms);

/// Evaluates the expansion above, truncated where its terms stop decreasing.
Real kernel_asymptotic(Real beta, Real r);
Real kernel_asymptotic(const std::vector<Real>& coefficients, Real beta, Real r);

/// h(r) and h'(r) by direct quadrature of the radial inverse transform.
struct KernelSample {
  Real value = 0.0;
  Real derivative = 0.0;
  Real error = 0.0;
};
KernelSample kernel_value(Real beta, Real r);

/// Radial samples of h = inverse transform of exp(-|xi|^{2 beta}).
struct KernelTable {
  Real beta = 1.0;
  std::vector<Real> radii;
  std::vector<Real> values;
  std::vector<Real> derivative_values;
  /// Expansion coefficients used beyond the last radius.
  std::vector<Real> tail_coefficients;

  Real r_max() const { return radii.back(); }

  /// Cubic Hermite interpolation inside the table, asymptotic expansion beyond.
  Real evaluate(Real r) const;

  /// 2 pi int_0^inf h(r) r dr: the table part by Gauss-Legendre on the
  /// interpolant, the tail from the expansion.
  Real mass() const;

  /// Sign changes among samples with |h| above 1e-12 h(0).
  int sign_changes() const;

  /// Radii increasing from 0, finite values, and a tail that is either below
  /// 1e-10 or already described by the asymptotic expansion.
  void validate() const;
};

/// n_samples uniform radii on [0, r_max], relative error target 1e-8 per sample.
/// Throws QuadratureFailure naming the worst radius.
KernelTable kernel_profile(Real beta, Real r_max, int n_samples);

/// Columns r,h,dh_dr with %.17g values.
void write_kernel_csv(const KernelTable& table, std::ostream& os);
void write_kernel_csv(const KernelTable& table, const std::string& path);

struct L1Estimate {
  /// l for gradient rows, eta for fractional rows.
  Real order = 0.0;
  Real value = 0.0;
  /// Same quantity at the doubled resolution.
  Real refined = 0.0;
  /// |refined - value|.
  Real error_bar = 0.0;

  Real relative_change() const { return refined != 0.0 ? error_bar / std::abs(refined) : 0.0; }
  bool finite() const { return std::isfinite(value) && std::isfinite(refined); }
};

struct KernelL1Report {
  Real beta = 1.0;
  /// ||grad^l h||_{L^1}, l = 0..l_max, with the Frobenius norm of the tensor.
  std::vector<L1Estimate> gradient;
  /// ||Lambda^eta h||_{L^1} per requested eta (periodic-box surrogate).
  std::vector<L1Estimate> fractional;
};

struct L1BoundsOptions {
  /// Gradient norms integrate the exact profile derivatives on [0, radius]
  /// and the large-r expansion beyond; the refined value doubles the radius
  /// and halves the panel width.
  Real radius = 15.0;
  /// Surrogate box and grid; the refined value doubles n at fixed box.
  Real box_length = 64.0;
  int n = 4096;
};

/// l_max <= 4, every eta >= 0.
KernelL1Report kernel_l1_bounds(Real beta, int l_max, const std::vector<Real>& eta_list,
                                const L1BoundsOptions& options = {});

/// Time-indexed forcing f_hat(s).
using Forcing = std::function<SpectralField(Real)>;

struct DuhamelOptions {
  /// Gauss-Legendre nodes per panel.
  int order = 8;
  int panels = 8;
};

/// exp(-kappa |xi|^{2 beta} t) v0 + int_0^t exp(-kappa |xi|^{2 beta} (t-s)) f(s) ds,
/// the time integral by composite Gauss-Legendre. An empty forcing means f = 0.
SpectralField mild_solution(const SpectralField& v0, const Forcing& forcing, Real t, Real beta,
                            Real kappa, const DuhamelOptions& options = {});

/// Homogeneous mild solution evaluated in physical space: the periodized
/// kernel (kappa t)^{-1/beta} h(x / (kappa t)^{1/(2 beta)}) sampled from the
/// table (images with |m|_inf <= images, the rest as a constant from the
/// expansion), then a discrete circular convolution with v0.
SpectralField mild_solution_convolution(const SpectralField& v0, const KernelTable& table, Real t,
                                        Real kappa, int images = 8);

}  // namespace gmhd
