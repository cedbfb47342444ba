#pragma once

#include "gmhd/grid.hpp"

namespace gmhd::detail {

// Unnormalized 2D complex transforms on an n x n array; `in` and `out` must
// not alias. Sign -1 is forward (e^{-i x.xi}), +1 is backward.
void fft2(const Coefficients& in, Coefficients& out, int sign);

// In-place 2D type-I DCT (FFTW REDFT00) on an m x m array, m >= 2.
void dct1_2d(Eigen::ArrayXXd& data);

// Unchecked transforms for the solver's inner loops. Non-finite values pass
// through so that blow-up surfaces as NaN/Inf in the state.
PhysicalField to_physical(const Coefficients& F, const Grid2D& grid);
Coefficients to_spectral(const PhysicalField& f, const Grid2D& grid);

// Two Hermitian coefficient arrays synthesized with one complex transform:
// a + i b = backward(A + i B).
void to_physical_pair(const Coefficients& A, const Coefficients& B, const Grid2D& grid,
                      PhysicalField& a, PhysicalField& b);

// Inverse of the above: one forward transform of a + i b, split by symmetry.
void to_spectral_pair(const PhysicalField& a, const PhysicalField& b, const Grid2D& grid,
                      Coefficients& A, Coefficients& B);

}  // namespace gmhd::detail
