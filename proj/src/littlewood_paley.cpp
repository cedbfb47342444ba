#include "gmhd/littlewood_paley.hpp"

#include <cmath>

#include "fft.hpp"

namespace gmhd {

namespace {

// C-infinity step: 0 for t <= 0, 1 for t >= 1.
Real smooth_step(Real t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const Real a = std::exp(-1.0 / t);
  const Real b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

Real binomial(int l, int q) {
  Real c = 1.0;
  for (int i = 1; i <= q; ++i) c = c * (l - q + i) / i;
  return c;
}

}  // namespace

Real lp_cutoff(Real xi) {
  constexpr Real lo = 0.75, hi = 4.0 / 3.0;
  return smooth_step((hi - std::abs(xi)) / (hi - lo));
}

Real lp_multiplier(int k, Real xi) {
  if (k < -1) throw Error("lp_multiplier: k must be >= -1");
  if (k == -1) return lp_cutoff(xi);
  return lp_cutoff(std::ldexp(xi, -(k + 1))) - lp_cutoff(std::ldexp(xi, -k));
}

int lp_min_k_max(const Grid2D& grid) {
  const Real xi_max = grid.xi_abs().maxCoeff();
  int k = -1;
  while (lp_cutoff(std::ldexp(xi_max, -(k + 1))) < 1.0) ++k;
  return k;
}

std::vector<LPBlock> lp_decompose(const SpectralField& F, int k_max) {
  const Grid2D& g = *F.grid;
  if (k_max < lp_min_k_max(g)) {
    throw Error("lp_decompose: k_max=" + std::to_string(k_max) + " does not cover the grid (need >= " +
                std::to_string(lp_min_k_max(g)) + ")");
  }
  std::vector<LPBlock> blocks;
  const Eigen::ArrayXXd& xi = g.xi_abs();
  for (int k = -1; k <= k_max; ++k) {
    const Eigen::ArrayXXd m = xi.unaryExpr([k](Real x) { return lp_multiplier(k, x); });
    blocks.push_back({k, SpectralField(F.grid, F.coeffs * m)});
  }
  return blocks;
}

Real bernstein_check(const LPBlock& block, int l) {
  if (block.k < 0) throw Error("bernstein_check: block index must be >= 0");
  if (l < 0) throw Error("bernstein_check: l must be >= 0");
  const Grid2D& g = *block.field.grid;
  const PhysicalField f = detail::to_physical(block.field.coeffs, g);
  const Real base = f.abs().sum();
  if (base == 0.0) throw Error("bernstein_check: zero block");
  if (l == 0) return 1.0;

  // |grad^l f|^2 = sum_q C(l,q) (d1^{l-q} d2^q f)^2
  const Eigen::ArrayXXcd ik1 = Complex(0.0, 1.0) * g.dxi1().cast<Complex>();
  const Eigen::ArrayXXcd ik2 = Complex(0.0, 1.0) * g.dxi2().cast<Complex>();
  PhysicalField sq = PhysicalField::Zero(g.n(), g.n());
  for (int q = 0; q <= l; ++q) {
    Coefficients d = block.field.coeffs;
    for (int i = 0; i < l - q; ++i) d *= ik1;
    for (int i = 0; i < q; ++i) d *= ik2;
    sq += binomial(l, q) * detail::to_physical(d, g).square();
  }
  return sq.sqrt().sum() / (std::ldexp(1.0, block.k * l) * base);
}

}  // namespace gmhd
