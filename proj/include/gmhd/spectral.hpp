#pragma once

#include "gmhd/grid.hpp"

namespace gmhd {

/// Fourier coefficients of a real scalar field on a periodic grid.
///
/// Convention: f_hat(xi) = int f e^{-i x.xi} dx, approximated by the grid sum
/// h^2 sum_x f(x) e^{-i x.xi}, so f_hat(0) is the integral of f. The inverse is
/// f(x) = L^{-2} sum_xi f_hat(xi) e^{i x.xi}.
struct SpectralField {
  GridPtr grid;
  Coefficients coeffs;

  SpectralField() = default;
  SpectralField(GridPtr g, Coefficients c) : grid(std::move(g)), coeffs(std::move(c)) {}

  static SpectralField zeros(const GridPtr& g) {
    return {g, Coefficients::Zero(g->n(), g->n())};
  }

  int n() const { return grid->n(); }
  Complex operator()(int i1, int i2) const { return coeffs(i1, i2); }
  Complex& operator()(int i1, int i2) { return coeffs(i1, i2); }
  /// Coefficient addressed by centered integer frequency.
  Complex at_frequency(int k1, int k2) const {
    return coeffs(grid->index(k1), grid->index(k2));
  }

  SpectralField& operator+=(const SpectralField& o) { coeffs += o.coeffs; return *this; }
  SpectralField& operator-=(const SpectralField& o) { coeffs -= o.coeffs; return *this; }
  SpectralField& operator*=(Real s) { coeffs *= s; return *this; }
};

inline SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
inline SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
inline SpectralField operator*(Real s, SpectralField a) { return a *= s; }
inline SpectralField operator-(SpectralField a) { a.coeffs = -a.coeffs; return a; }

/// Two-component vector field, each component a SpectralField on the same grid.
struct SpectralVector {
  SpectralField c1, c2;

  SpectralVector& operator+=(const SpectralVector& o) { c1 += o.c1; c2 += o.c2; return *this; }
  SpectralVector& operator-=(const SpectralVector& o) { c1 -= o.c1; c2 -= o.c2; return *this; }
  SpectralVector& operator*=(Real s) { c1 *= s; c2 *= s; return *this; }
};

inline SpectralVector operator+(SpectralVector a, const SpectralVector& b) { return a += b; }
inline SpectralVector operator-(SpectralVector a, const SpectralVector& b) { return a -= b; }
inline SpectralVector operator*(Real s, SpectralVector a) { return a *= s; }

/// Physical -> spectral. Throws if any sample is non-finite.
SpectralField forward_transform(const GridPtr& grid, const PhysicalField& f);

/// Spectral -> physical. Throws if the imaginary residue exceeds 1e-10 of the
/// field scale, which means the coefficients were not Hermitian.
PhysicalField inverse_transform(const SpectralField& F);

/// Largest |F(k) - conj(F(-k))| relative to max |F|; 0 for the zero field.
Real hermitian_defect(const SpectralField& F);

/// Lambda^s: multiply every coefficient by |xi|^s. Requires s >= 0.
SpectralField fractional_laplacian(const SpectralField& F, Real s);

/// d/dx_axis for axis in {1, 2}.
SpectralField spectral_derivative(const SpectralField& F, int axis);

/// (-d2 F, d1 F).
SpectralVector perp_gradient(const SpectralField& F);

/// (d1 F, d2 F).
SpectralVector gradient(const SpectralField& F);

/// Zero every mode outside the two-thirds band.
SpectralField dealias(const SpectralField& F);
void dealias_in_place(Coefficients& c, const Grid2D& grid);

/// Orthogonal projection onto divergence-free fields; the mean mode passes through.
SpectralVector leray_project(const SpectralVector& v);

/// Spectral inner product (f, g)_{L^2} = L^{-2} sum f_hat conj(g_hat), real part.
Real inner_product(const SpectralField& f, const SpectralField& g);

/// ||f||_{L^2} from the coefficients (Parseval).
Real l2_norm(const SpectralField& F);

}  // namespace gmhd
