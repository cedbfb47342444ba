#pragma once

#include <vector>

#include "gmhd/spectral.hpp"

namespace gmhd {

/// One dyadic piece of a field. k = -1 is the low-frequency block.
struct LPBlock {
  int k = -1;
  SpectralField field;
};

/// Smooth radial cutoff: 1 for |xi| <= 3/4, 0 for |xi| >= 4/3.
Real lp_cutoff(Real xi);

/// Multiplier of block k at |xi|: chi(xi) for k = -1, chi(xi / 2^{k+1}) - chi(xi / 2^k)
/// otherwise, so the blocks up to k_max sum to chi(xi / 2^{k_max+1}).
Real lp_multiplier(int k, Real xi);

/// Blocks k = -1..k_max. Requires chi(|xi| / 2^{k_max+1}) = 1 on the whole grid,
/// which makes the sum of the blocks equal to F.
std::vector<LPBlock> lp_decompose(const SpectralField& F, int k_max);

/// Smallest k_max that satisfies lp_decompose's requirement on this grid.
int lp_min_k_max(const Grid2D& grid);

/// ||grad^l f||_{L^1} / (2^{kl} ||f||_{L^1}) for a block with k >= 0, both norms
/// grid quadratures and |grad^l f| the Frobenius norm of the derivative tensor.
/// Throws for a zero block.
Real bernstein_check(const LPBlock& block, int l);

}  // namespace gmhd
