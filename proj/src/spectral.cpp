#include "gmhd/spectral.hpp"

#include <cmath>
#include <sstream>

#include "fft.hpp"

namespace gmhd {

namespace {

void require_same_grid(const SpectralField& a, const SpectralField& b, const char* where) {
  if (a.grid.get() != b.grid.get() &&
      (a.grid->n() != b.grid->n() || a.grid->box_length() != b.grid->box_length())) {
    throw Error(std::string(where) + ": fields live on different grids");
  }
}

}  // namespace

SpectralField forward_transform(const GridPtr& grid, const PhysicalField& f) {
  const int n = grid->n();
  if (f.rows() != n || f.cols() != n) {
    throw Error("forward_transform: field shape does not match grid n=" + std::to_string(n));
  }
  for (int i2 = 0; i2 < n; ++i2) {
    for (int i1 = 0; i1 < n; ++i1) {
      if (!std::isfinite(f(i1, i2))) {
        std::ostringstream os;
        os << "forward_transform: non-finite sample " << f(i1, i2) << " at grid point (" << i1
           << ", " << i2 << ")";
        throw Error(os.str());
      }
    }
  }
  Coefficients in = f.cast<Complex>();
  Coefficients out;
  detail::fft2(in, out, -1);
  out *= grid->cell_area();
  return {grid, std::move(out)};
}

PhysicalField inverse_transform(const SpectralField& F) {
  const Grid2D& g = *F.grid;
  Coefficients out;
  detail::fft2(F.coeffs, out, +1);
  const Real norm = 1.0 / (g.box_length() * g.box_length());
  out *= norm;
  // Any sample is bounded by L^-2 sum |F|; measure the residue against that.
  const Real scale = F.coeffs.abs().sum() * norm;
  const Real residue = out.imag().abs().maxCoeff();
  if (residue > 1e-10 * scale) {
    std::ostringstream os;
    os << "inverse_transform: imaginary residue " << residue << " exceeds 1e-10 of field scale "
       << scale << " (coefficients are not Hermitian-symmetric)";
    throw Error(os.str());
  }
  return out.real();
}

Real hermitian_defect(const SpectralField& F) {
  const int n = F.n();
  const Real peak = F.coeffs.abs().maxCoeff();
  if (peak == 0.0) return 0.0;
  Real worst = 0.0;
  for (int i2 = 0; i2 < n; ++i2) {
    for (int i1 = 0; i1 < n; ++i1) {
      const Complex a = F.coeffs(i1, i2);
      const Complex b = F.coeffs((n - i1) % n, (n - i2) % n);
      worst = std::max(worst, std::abs(a - std::conj(b)));
    }
  }
  return worst / peak;
}

SpectralField fractional_laplacian(const SpectralField& F, Real s) {
  if (!(s >= 0.0)) {
    throw Error("fractional_laplacian: exponent must be >= 0 (got " + std::to_string(s) + ")");
  }
  if (s == 0.0) return F;
  SpectralField out = F;
  out.coeffs *= F.grid->xi_abs().pow(s);
  return out;
}

SpectralField spectral_derivative(const SpectralField& F, int axis) {
  if (axis != 1 && axis != 2) {
    throw Error("spectral_derivative: axis must be 1 or 2 (got " + std::to_string(axis) + ")");
  }
  const Eigen::ArrayXXd& k = axis == 1 ? F.grid->dxi1() : F.grid->dxi2();
  SpectralField out = F;
  out.coeffs *= Complex(0.0, 1.0) * k.cast<Complex>();
  return out;
}

SpectralVector gradient(const SpectralField& F) {
  return {spectral_derivative(F, 1), spectral_derivative(F, 2)};
}

SpectralVector perp_gradient(const SpectralField& F) {
  return {-spectral_derivative(F, 2), spectral_derivative(F, 1)};
}

void dealias_in_place(Coefficients& c, const Grid2D& grid) { c *= grid.dealias_mask(); }

SpectralField dealias(const SpectralField& F) {
  SpectralField out = F;
  dealias_in_place(out.coeffs, *F.grid);
  return out;
}

SpectralVector leray_project(const SpectralVector& v) {
  require_same_grid(v.c1, v.c2, "leray_project");
  const Grid2D& g = *v.c1.grid;
  // Projection uses the derivative wavenumbers so that the divergence operator
  // (same wavenumbers) annihilates the output exactly.
  const Eigen::ArrayXXcd k1 = g.dxi1().cast<Complex>();
  const Eigen::ArrayXXcd k2 = g.dxi2().cast<Complex>();
  const Eigen::ArrayXXcd kdotv = k1 * v.c1.coeffs + k2 * v.c2.coeffs;
  const Eigen::ArrayXXcd phi = kdotv / g.inverse_laplacian_divisor().cast<Complex>();
  SpectralVector out = v;
  out.c1.coeffs -= k1 * phi;
  out.c2.coeffs -= k2 * phi;
  return out;
}

Real inner_product(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f, g, "inner_product");
  const Real L = f.grid->box_length();
  return (f.coeffs * g.coeffs.conjugate()).real().sum() / (L * L);
}

Real l2_norm(const SpectralField& F) {
  const Real L = F.grid->box_length();
  return std::sqrt(F.coeffs.abs2().sum()) / L;
}

}  // namespace gmhd
