#pragma once

#include "gmhd/fields.hpp"

namespace gmhd {

/// Coefficients of the generalized MHD system
///   u_t + u.grad u = -grad p + b.grad b - nu Lambda^{2 alpha} u
///   b_t + u.grad b = b.grad u - kappa Lambda^{2 beta} b
struct PhysicsParams {
  Real nu = 0.0;
  Real alpha = 0.0;
  Real kappa = 1.0;
  Real beta = 1.25;

  /// No velocity dissipation, unit magnetic diffusivity.
  static PhysicsParams standard(Real beta) { return {0.0, 0.0, 1.0, beta}; }
  static PhysicsParams ideal() { return {0.0, 0.0, 0.0, 0.0}; }

  /// Throws naming the first field that is negative or non-finite.
  void validate() const;
};

struct PrimitiveRhs {
  SpectralVector du;
  SpectralVector db;
};

struct VorticityCurrentRhs {
  SpectralField domega;
  SpectralField dj;
};

/// Velocity/magnetic tendencies. Nonlinear products are formed on the grid and
/// dealiased; the pressure gradient is removed by Leray projection.
/// Rejects inputs whose divergence exceeds 1e-8 of the field scale.
PrimitiveRhs primitive_rhs(const SpectralVector& u, const SpectralVector& b,
                           const PhysicsParams& params);

/// Induction tendency written as sum_i d_i(b_i u - u_i b) - kappa Lambda^{2 beta} b.
SpectralVector div_form_magnetic_rhs(const SpectralVector& u, const SpectralVector& b,
                                     const PhysicsParams& params);

/// T(grad u, grad b) = 2 d1b1 (d1u2 + d2u1) + 2 d2u2 (d1b2 + d2b1), dealiased.
SpectralField stress_term(const SpectralVector& u, const SpectralVector& b);

/// Nonlinear part only:
///   omega: -u.grad omega + b.grad j
///   j:     -u.grad j + b.grad omega + T(grad u, grad b)
VorticityCurrentRhs vorticity_current_nonlinear(const FlowState& state);

/// Full tendency, nonlinear part plus -nu Lambda^{2 alpha} omega and
/// -kappa Lambda^{2 beta} j.
VorticityCurrentRhs vorticity_current_rhs(const FlowState& state, const PhysicsParams& params);

/// max(||curl du - domega||_inf, ||curl db - dj||_inf) / scale, where the
/// scale is the largest of the compared grid maxima. Zero for zero inputs.
Real formulation_consistency(const SpectralVector& u, const SpectralVector& b,
                             const PhysicsParams& params);

}  // namespace gmhd
