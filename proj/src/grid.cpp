#include "gmhd/grid.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace gmhd {

Grid2D::Grid2D(int n, Real box_length) : n_(n), box_length_(box_length) {
  if (n < 8 || n % 2 != 0) {
    throw Error("Grid2D: n must be even and >= 8 (got " + std::to_string(n) + ")");
  }
  if (!(box_length > 0.0) || !std::isfinite(box_length)) {
    throw Error("Grid2D: box_length must be positive and finite");
  }
  const Real q = dk();
  xi1_.resize(n, n);
  xi2_.resize(n, n);
  dxi1_.resize(n, n);
  dxi2_.resize(n, n);
  mask_.resize(n, n);
  for (int i2 = 0; i2 < n; ++i2) {
    for (int i1 = 0; i1 < n; ++i1) {
      const int k1 = frequency(i1);
      const int k2 = frequency(i2);
      xi1_(i1, i2) = q * k1;
      xi2_(i1, i2) = q * k2;
      dxi1_(i1, i2) = (2 * k1 == n) ? 0.0 : q * k1;
      dxi2_(i1, i2) = (2 * k2 == n) ? 0.0 : q * k2;
      // two-thirds rule: drop max(|k1|,|k2|) > n/3
      const bool keep = 3 * std::abs(k1) <= n && 3 * std::abs(k2) <= n;
      mask_(i1, i2) = keep ? 1.0 : 0.0;
    }
  }
  xi_sq_ = xi1_.square() + xi2_.square();
  xi_abs_ = xi_sq_.sqrt();
  const Eigen::ArrayXXd dsq = dxi1_.square() + dxi2_.square();
  inv_div_ = (dsq > 0.0).select(dsq, 1.0);
}

}  // namespace gmhd
