#pragma once

#include <functional>
#include <vector>

#include "gmhd/types.hpp"

namespace gmhd::detail {

struct QuadratureResult {
  Real value = 0.0;
  Real error = 0.0;
  /// Integral of |f|, the scale for relative error checks.
  Real l1 = 0.0;
};

// Adaptive 15-point Gauss-Kronrod (Boost) on [a, b], bisecting up to
// max_depth levels until the local error falls below rel_tol of the panel.
QuadratureResult gauss_kronrod(const std::function<Real(Real)>& f, Real a, Real b, Real rel_tol,
                               unsigned max_depth = 12);

// Sum of gauss_kronrod over consecutive panels [edges[i], edges[i+1]].
QuadratureResult gauss_kronrod_panels(const std::function<Real(Real)>& f,
                                      const std::vector<Real>& edges, Real rel_tol,
                                      unsigned max_depth = 12);

struct GaussLegendre {
  std::vector<Real> nodes;
  std::vector<Real> weights;
};

// Nodes and weights on [-1, 1] from the Jacobi matrix eigenproblem.
GaussLegendre gauss_legendre(int order);

}  // namespace gmhd::detail
