#include "gmhd/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "fft.hpp"

namespace gmhd {

using detail::to_physical_pair;
using detail::to_spectral_pair;

void PhysicsParams::validate() const {
  const std::pair<const char*, Real> entries[] = {
      {"nu", nu}, {"alpha", alpha}, {"kappa", kappa}, {"beta", beta}};
  for (const auto& [name, value] : entries) {
    if (!std::isfinite(value) || value < 0.0) {
      std::ostringstream os;
      os << "physics parameter '" << name << "' must be finite and >= 0 (got " << value << ")";
      throw Error(os.str());
    }
  }
}

namespace {

Eigen::ArrayXXcd as_complex(const Eigen::ArrayXXd& a) { return a.cast<Complex>(); }

// Spectral divergence relative to the largest |xi||v_hat|.
Real relative_divergence(const SpectralVector& v) {
  const Grid2D& g = *v.c1.grid;
  const Real div = (g.dxi1().cast<Complex>() * v.c1.coeffs + g.dxi2().cast<Complex>() * v.c2.coeffs)
                       .abs()
                       .maxCoeff();
  const Real scale =
      (g.xi_abs() * (v.c1.coeffs.abs2() + v.c2.coeffs.abs2()).sqrt()).maxCoeff();
  return scale > 0.0 ? div / scale : 0.0;
}

void require_divergence_free(const SpectralVector& v, const char* what) {
  const Real d = relative_divergence(v);
  if (d > 1e-8) {
    std::ostringstream os;
    os << what << ": input divergence " << d << " exceeds 1e-8 (relative)";
    throw Error(os.str());
  }
}

// Multiplier -c |xi|^{2s}; zero mode unchanged for s == 0.
Eigen::ArrayXXd dissipation_symbol(const Grid2D& g, Real c, Real s) {
  if (c == 0.0) return Eigen::ArrayXXd::Zero(g.n(), g.n());
  return -c * g.xi_abs().pow(2.0 * s);
}

// Velocity gradient tensor and field values on the grid.
struct GridVector {
  PhysicalField v1, v2;
  PhysicalField d1v1, d2v1, d1v2, d2v2;
};

GridVector sample_with_gradient(const SpectralVector& v) {
  const Grid2D& g = *v.c1.grid;
  const Eigen::ArrayXXcd ik1 = Complex(0.0, 1.0) * as_complex(g.dxi1());
  const Eigen::ArrayXXcd ik2 = Complex(0.0, 1.0) * as_complex(g.dxi2());
  GridVector out;
  to_physical_pair(v.c1.coeffs, v.c2.coeffs, g, out.v1, out.v2);
  to_physical_pair(ik1 * v.c1.coeffs, ik2 * v.c1.coeffs, g, out.d1v1, out.d2v1);
  to_physical_pair(ik1 * v.c2.coeffs, ik2 * v.c2.coeffs, g, out.d1v2, out.d2v2);
  return out;
}

}  // namespace

PrimitiveRhs primitive_rhs(const SpectralVector& u, const SpectralVector& b,
                           const PhysicsParams& params) {
  params.validate();
  require_divergence_free(u, "primitive_rhs(u)");
  require_divergence_free(b, "primitive_rhs(b)");
  const GridPtr& grid = u.c1.grid;
  const Grid2D& g = *grid;

  const GridVector U = sample_with_gradient(u);
  const GridVector B = sample_with_gradient(b);

  // -u.grad u + b.grad b and -u.grad b + b.grad u, componentwise
  const PhysicalField mom1 = -(U.v1 * U.d1v1 + U.v2 * U.d2v1) + (B.v1 * B.d1v1 + B.v2 * B.d2v1);
  const PhysicalField mom2 = -(U.v1 * U.d1v2 + U.v2 * U.d2v2) + (B.v1 * B.d1v2 + B.v2 * B.d2v2);
  const PhysicalField ind1 = -(U.v1 * B.d1v1 + U.v2 * B.d2v1) + (B.v1 * U.d1v1 + B.v2 * U.d2v1);
  const PhysicalField ind2 = -(U.v1 * B.d1v2 + U.v2 * B.d2v2) + (B.v1 * U.d1v2 + B.v2 * U.d2v2);

  Coefficients m1, m2, i1, i2;
  to_spectral_pair(mom1, mom2, g, m1, m2);
  to_spectral_pair(ind1, ind2, g, i1, i2);
  for (Coefficients* c : {&m1, &m2, &i1, &i2}) dealias_in_place(*c, g);

  PrimitiveRhs out;
  out.du = leray_project({SpectralField(grid, m1), SpectralField(grid, m2)});
  out.db = {SpectralField(grid, i1), SpectralField(grid, i2)};

  const Eigen::ArrayXXd Lu = dissipation_symbol(g, params.nu, params.alpha);
  const Eigen::ArrayXXd Lb = dissipation_symbol(g, params.kappa, params.beta);
  out.du.c1.coeffs += Lu * u.c1.coeffs;
  out.du.c2.coeffs += Lu * u.c2.coeffs;
  out.db.c1.coeffs += Lb * b.c1.coeffs;
  out.db.c2.coeffs += Lb * b.c2.coeffs;
  return out;
}

SpectralVector div_form_magnetic_rhs(const SpectralVector& u, const SpectralVector& b,
                                     const PhysicsParams& params) {
  params.validate();
  require_divergence_free(u, "div_form_magnetic_rhs(u)");
  require_divergence_free(b, "div_form_magnetic_rhs(b)");
  const GridPtr& grid = u.c1.grid;
  const Grid2D& g = *grid;

  // The flux F_im = b_i u_m - u_i b_m is antisymmetric, so in 2D its only
  // independent entry is E = F_21 = u1 b2 - u2 b1 and
  // sum_i d_i F_im = (d2 E, -d1 E).
  PhysicalField u1, u2, b1, b2;
  to_physical_pair(u.c1.coeffs, u.c2.coeffs, g, u1, u2);
  to_physical_pair(b.c1.coeffs, b.c2.coeffs, g, b1, b2);
  const PhysicalField E = u1 * b2 - u2 * b1;
  SpectralField Ehat(grid, detail::to_spectral(E, g));
  dealias_in_place(Ehat.coeffs, g);

  SpectralVector out{spectral_derivative(Ehat, 2), -spectral_derivative(Ehat, 1)};
  const Eigen::ArrayXXd Lb = dissipation_symbol(g, params.kappa, params.beta);
  out.c1.coeffs += Lb * b.c1.coeffs;
  out.c2.coeffs += Lb * b.c2.coeffs;
  return out;
}

SpectralField stress_term(const SpectralVector& u, const SpectralVector& b) {
  const GridPtr& grid = u.c1.grid;
  const Grid2D& g = *grid;
  const Eigen::ArrayXXcd ik1 = Complex(0.0, 1.0) * as_complex(g.dxi1());
  const Eigen::ArrayXXcd ik2 = Complex(0.0, 1.0) * as_complex(g.dxi2());

  PhysicalField d1b1, d2u2, su, sb;
  to_physical_pair(ik1 * b.c1.coeffs, ik2 * u.c2.coeffs, g, d1b1, d2u2);
  to_physical_pair(ik1 * u.c2.coeffs + ik2 * u.c1.coeffs, ik1 * b.c2.coeffs + ik2 * b.c1.coeffs, g,
                   su, sb);
  const PhysicalField T = 2.0 * d1b1 * su + 2.0 * d2u2 * sb;
  SpectralField out(grid, detail::to_spectral(T, g));
  dealias_in_place(out.coeffs, g);
  return out;
}

VorticityCurrentRhs vorticity_current_nonlinear(const FlowState& state) {
  const GridPtr& grid = state.grid();
  const Grid2D& g = *grid;
  const Coefficients& w = state.omega_hat.coeffs;
  const Coefficients& j = state.j_hat.coeffs;

  const Eigen::ArrayXXcd k1 = as_complex(g.dxi1());
  const Eigen::ArrayXXcd k2 = as_complex(g.dxi2());
  const Eigen::ArrayXXcd inv = as_complex(g.inverse_laplacian_divisor().inverse());
  const Complex I(0.0, 1.0);

  // Stream functions psi = -w / |k|^2, phi = -j / |k|^2 and u = i(-k2, k1) psi.
  // The zero mode of w and j is zero by invariant, so the safe divisor does
  // not matter there.
  const Eigen::ArrayXXcd psi = -w * inv;
  const Eigen::ArrayXXcd phi = -j * inv;

  PhysicalField u1, u2, b1, b2, wx, wy, jx, jy, d1b1, d2u2, su, sb;
  to_physical_pair(-I * k2 * psi, I * k1 * psi, g, u1, u2);
  to_physical_pair(-I * k2 * phi, I * k1 * phi, g, b1, b2);
  to_physical_pair(I * k1 * w, I * k2 * w, g, wx, wy);
  to_physical_pair(I * k1 * j, I * k2 * j, g, jx, jy);
  // d1 b1 = k1 k2 phi, d2 u2 = -k1 k2 psi, d1u2 + d2u1 = (k2^2 - k1^2) psi
  to_physical_pair(k1 * k2 * phi, -k1 * k2 * psi, g, d1b1, d2u2);
  to_physical_pair((k2 * k2 - k1 * k1) * psi, (k2 * k2 - k1 * k1) * phi, g, su, sb);

  const PhysicalField nw = -(u1 * wx + u2 * wy) + (b1 * jx + b2 * jy);
  const PhysicalField nj =
      -(u1 * jx + u2 * jy) + (b1 * wx + b2 * wy) + 2.0 * d1b1 * su + 2.0 * d2u2 * sb;

  VorticityCurrentRhs out;
  out.domega.grid = grid;
  out.dj.grid = grid;
  to_spectral_pair(nw, nj, g, out.domega.coeffs, out.dj.coeffs);
  dealias_in_place(out.domega.coeffs, g);
  dealias_in_place(out.dj.coeffs, g);
  return out;
}

VorticityCurrentRhs vorticity_current_rhs(const FlowState& state, const PhysicsParams& params) {
  params.validate();
  const Complex w0 = state.omega_hat.coeffs(0, 0);
  const Complex j0 = state.j_hat.coeffs(0, 0);
  if (w0 != 0.0 || j0 != 0.0) {
    throw Error("vorticity_current_rhs: state is not mean-free (zero modes must be exactly 0)");
  }
  VorticityCurrentRhs out = vorticity_current_nonlinear(state);
  const Grid2D& g = *state.grid();
  out.domega.coeffs += dissipation_symbol(g, params.nu, params.alpha) * state.omega_hat.coeffs;
  out.dj.coeffs += dissipation_symbol(g, params.kappa, params.beta) * state.j_hat.coeffs;
  return out;
}

Real formulation_consistency(const SpectralVector& u, const SpectralVector& b,
                             const PhysicsParams& params) {
  const PrimitiveRhs prim = primitive_rhs(u, b, params);
  FlowState state{curl(u), curl(b), 0.0};
  state.omega_hat.coeffs(0, 0) = 0.0;
  state.j_hat.coeffs(0, 0) = 0.0;
  const VorticityCurrentRhs vc = vorticity_current_rhs(state, params);

  const Grid2D& g = *u.c1.grid;
  const PhysicalField cw = detail::to_physical(curl(prim.du).coeffs, g);
  const PhysicalField cj = detail::to_physical(curl(prim.db).coeffs, g);
  const PhysicalField dw = detail::to_physical(vc.domega.coeffs, g);
  const PhysicalField dj = detail::to_physical(vc.dj.coeffs, g);
  const Real scale = std::max({cw.abs().maxCoeff(), cj.abs().maxCoeff(), dw.abs().maxCoeff(),
                               dj.abs().maxCoeff()});
  if (scale == 0.0) return 0.0;
  const Real r = std::max((cw - dw).abs().maxCoeff(), (cj - dj).abs().maxCoeff());
  return r / scale;
}

}  // namespace gmhd
