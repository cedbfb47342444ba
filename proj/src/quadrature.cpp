#include "quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace gmhd::detail {

QuadratureResult gauss_kronrod(const std::function<Real(Real)>& f, Real a, Real b, Real rel_tol,
                               unsigned max_depth) {
  QuadratureResult r;
  if (a == b) return r;
  r.value = boost::math::quadrature::gauss_kronrod<Real, 15>::integrate(f, a, b, max_depth, rel_tol,
                                                                          &r.error, &r.l1);
  return r;
}

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<Real, 15>;
using Gauss = boost::math::quadrature::gauss<Real, 7>;

// One G7/K15 pair on [a, b]; the error is |K15 - G7|.
QuadratureResult kronrod_panel(const std::function<Real(Real)>& f, Real a, Real b) {
  const auto& xk = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& xg = Gauss::abscissa();
  const auto& wg = Gauss::weights();
  const Real mid = 0.5 * (a + b);
  const Real half = 0.5 * (b - a);
  Real k15 = 0.0, g7 = 0.0, l1 = 0.0;
  for (std::size_t i = 0; i < xk.size(); ++i) {
    Real fx, ax;
    if (i == 0) {
      fx = f(mid);
      ax = std::abs(fx);
    } else {
      const Real lo = f(mid - half * xk[i]);
      const Real hi = f(mid + half * xk[i]);
      fx = lo + hi;
      ax = std::abs(lo) + std::abs(hi);
    }
    k15 += wk[i] * fx;
    l1 += wk[i] * ax;
    for (std::size_t j = 0; j < xg.size(); ++j) {
      if (std::abs(xg[j] - xk[i]) < 1e-14) g7 += wg[j] * fx;
    }
  }
  return {half * k15, half * std::abs(k15 - g7), half * l1};
}

QuadratureResult refine(const std::function<Real(Real)>& f, Real a, Real b,
                        const QuadratureResult& coarse, Real budget, unsigned depth) {
  if (coarse.error <= budget || depth == 0) return coarse;
  const Real m = 0.5 * (a + b);
  const QuadratureResult left = kronrod_panel(f, a, m);
  const QuadratureResult right = kronrod_panel(f, m, b);
  const QuadratureResult l = refine(f, a, m, left, 0.5 * budget, depth - 1);
  const QuadratureResult r = refine(f, m, b, right, 0.5 * budget, depth - 1);
  return {l.value + r.value, l.error + r.error, l.l1 + r.l1};
}

}  // namespace

QuadratureResult gauss_kronrod_panels(const std::function<Real(Real)>& f,
                                      const std::vector<Real>& edges, Real rel_tol,
                                      unsigned max_depth) {
  // First pass fixes the scale; only panels over their share of the absolute
  // budget rel_tol * int |f| are bisected.
  std::vector<QuadratureResult> first;
  Real l1 = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    first.push_back(kronrod_panel(f, edges[i], edges[i + 1]));
    l1 += first.back().l1;
  }
  QuadratureResult total;
  const Real length = edges.empty() ? 0.0 : edges.back() - edges.front();
  for (std::size_t i = 0; i < first.size(); ++i) {
    const Real share = length > 0.0 ? (edges[i + 1] - edges[i]) / length : 0.0;
    const QuadratureResult p =
        refine(f, edges[i], edges[i + 1], first[i], rel_tol * l1 * share, max_depth);
    total.value += p.value;
    total.error += p.error;
    total.l1 += p.l1;
  }
  return total;
}

GaussLegendre gauss_legendre(int order) {
  if (order < 1 || order > 256) throw Error("gauss_legendre: order must lie in [1, 256]");
  static std::mutex mutex;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard<std::mutex> lock(mutex);
  if (auto it = cache.find(order); it != cache.end()) return it->second;

  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
  for (int i = 1; i < order; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    J(i, i - 1) = b;
    J(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  GaussLegendre g;
  for (int i = 0; i < order; ++i) {
    g.nodes.push_back(es.eigenvalues()(i));
    g.weights.push_back(2.0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i));
  }
  cache.emplace(order, g);
  return g;
}

}  // namespace gmhd::detail
