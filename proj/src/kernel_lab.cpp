#include "gmhd/kernel_lab.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fft.hpp"
#include "quadrature.hpp"

namespace gmhd {

namespace {

using BesselPolicy =
    boost::math::policies::policy<boost::math::policies::promote_double<false>>;

Real bessel_j(int m, Real x) { return boost::math::cyl_bessel_j(m, x, BesselPolicy()); }

constexpr int kTailTerms = 30;

void require_beta(Real beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw Error("kernel: beta must be positive");
}

// Upper limit beyond which s^p exp(-s^{2 beta}) stays below 1e-18 of its peak.
Real spectral_cutoff(Real beta, Real p) {
  const Real q = 2.0 * beta;
  const Real s_peak = p > 0.0 ? std::pow(p / q, 1.0 / q) : 0.0;
  const Real log_peak = p > 0.0 ? p * std::log(s_peak) - std::pow(s_peak, q) : 0.0;
  Real s = std::max(s_peak, 1.0);
  while (p * std::log(s) - std::pow(s, q) > log_peak - 41.5) s *= 1.02;
  return s;
}

// Panels no wider than half a period of J_m(r s).
std::vector<Real> panel_edges(Real r, Real s_max) {
  Real width = s_max / 8.0;
  if (r > 0.0) width = std::min(width, kPi / r);
  const int count = static_cast<int>(std::ceil(s_max / width));
  std::vector<Real> edges(count + 1);
  for (int i = 0; i <= count; ++i) edges[i] = s_max * i / count;
  return edges;
}

// (2 pi)^{-1} int_0^inf s^p exp(-s^{2 beta}) J_m(r s) ds
detail::QuadratureResult hankel(Real beta, Real p, int m, Real r) {
  const Real q = 2.0 * beta;
  auto f = [=](Real s) { return std::pow(s, p) * std::exp(-std::pow(s, q)) * bessel_j(m, r * s); };
  detail::QuadratureResult res =
      detail::gauss_kronrod_panels(f, panel_edges(r, spectral_cutoff(beta, p)), 1e-11, 10);
  res.value /= kTwoPi;
  res.error /= kTwoPi;
  res.l1 /= kTwoPi;
  return res;
}

Real binomial(int l, int q) {
  Real c = 1.0;
  for (int i = 1; i <= q; ++i) c = c * (l - q + i) / i;
  return c;
}

Real falling(Real c, int q) {
  Real f = 1.0;
  for (int i = 0; i < q; ++i) f *= c - i;
  return f;
}

bool is_integer(Real x) { return std::abs(x - std::round(x)) < 1e-12; }

}  // namespace

std::vector<Real> kernel_asymptotic_coefficients(Real beta, int terms) {
  require_beta(beta);
  std::vector<Real> a;
  for (int k = 1; k <= terms; ++k) {
    const Real bk = beta * k;
    if (is_integer(bk)) {
      a.push_back(0.0);
      continue;
    }
    // 1/Gamma(-bk) = -sin(pi bk) Gamma(1+bk) / pi
    const Real log_mag =
        2.0 * std::lgamma(1.0 + bk) + 2.0 * bk * std::log(2.0) - std::lgamma(k + 1.0);
    const Real sign = (k % 2 == 1 ? 1.0 : -1.0) * std::sin(kPi * bk);
    a.push_back(sign * std::exp(log_mag) / (kPi * kPi));
  }
  return a;
}

Real kernel_asymptotic(const std::vector<Real>& coefficients, Real beta, Real r) {
  Real sum = 0.0;
  Real last = INFINITY;
  const Real lr = std::log(r);
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    if (coefficients[i] == 0.0) continue;
    const Real k = static_cast<Real>(i + 1);
    const Real term = coefficients[i] * std::exp(-(2.0 + 2.0 * beta * k) * lr);
    if (std::abs(term) > last) break;
    sum += term;
    last = std::abs(term);
  }
  return sum;
}

Real kernel_asymptotic(Real beta, Real r) {
  return kernel_asymptotic(kernel_asymptotic_coefficients(beta, kTailTerms), beta, r);
}

KernelSample kernel_value(Real beta, Real r) {
  require_beta(beta);
  if (!(r >= 0.0)) throw Error("kernel_value: r must be >= 0");
  const detail::QuadratureResult h = hankel(beta, 1.0, 0, r);
  const detail::QuadratureResult dh = hankel(beta, 2.0, 1, r);
  return {h.value, -dh.value, h.error};
}

// ---------------------------------------------------------------------------
// KernelTable

Real KernelTable::evaluate(Real r) const {
  r = std::abs(r);
  if (r >= radii.back()) {
    return r == radii.back() ? values.back() : kernel_asymptotic(tail_coefficients, beta, r);
  }
  const auto it = std::upper_bound(radii.begin(), radii.end(), r);
  const std::size_t i = static_cast<std::size_t>(it - radii.begin()) - 1;
  const Real d = radii[i + 1] - radii[i];
  const Real t = (r - radii[i]) / d;
  const Real t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * values[i] + (t3 - 2 * t2 + t) * d * derivative_values[i] +
         (-2 * t3 + 3 * t2) * values[i + 1] + (t3 - t2) * d * derivative_values[i + 1];
}

Real KernelTable::mass() const {
  const detail::GaussLegendre gl = detail::gauss_legendre(4);
  Real sum = 0.0;
  for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
    const Real mid = 0.5 * (radii[i] + radii[i + 1]);
    const Real half = 0.5 * (radii[i + 1] - radii[i]);
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      const Real r = mid + half * gl.nodes[q];
      sum += half * gl.weights[q] * evaluate(r) * r;
    }
  }
  Real tail = 0.0;
  Real last = INFINITY;
  const Real R = radii.back();
  for (std::size_t i = 0; i < tail_coefficients.size(); ++i) {
    if (tail_coefficients[i] == 0.0) continue;
    const Real e = 2.0 * beta * static_cast<Real>(i + 1);
    const Real term = tail_coefficients[i] * std::pow(R, -e) / e;
    if (std::abs(term) > last) break;
    tail += term;
    last = std::abs(term);
  }
  return kTwoPi * (sum + tail);
}

int KernelTable::sign_changes() const {
  const Real floor = 1e-12 * std::abs(values.front());
  int changes = 0;
  int prev = 0;
  for (Real v : values) {
    if (std::abs(v) <= floor) continue;
    const int s = v > 0.0 ? 1 : -1;
    if (prev != 0 && s != prev) ++changes;
    prev = s;
  }
  return changes;
}

void KernelTable::validate() const {
  require_beta(beta);
  if (radii.size() < 2 || values.size() != radii.size() ||
      derivative_values.size() != radii.size()) {
    throw Error("KernelTable: radii, values and derivative_values must have equal length >= 2");
  }
  if (radii.front() != 0.0) throw Error("KernelTable: radii must start at 0");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (i > 0 && !(radii[i] > radii[i - 1])) {
      throw Error("KernelTable: radii must be strictly increasing (index " + std::to_string(i) + ")");
    }
    if (!std::isfinite(values[i]) || !std::isfinite(derivative_values[i])) {
      throw Error("KernelTable: non-finite sample at r=" + std::to_string(radii[i]));
    }
  }
  const Real h_last = values.back();
  if (std::abs(h_last) < 1e-10) return;
  const Real tail = kernel_asymptotic(tail_coefficients, beta, radii.back());
  if (std::abs(tail - h_last) > 1e-4 * std::abs(h_last) + 1e-12) {
    std::ostringstream os;
    os << "KernelTable: tail not resolved at r=" << radii.back() << " (h=" << h_last
       << ", expansion=" << tail << "); increase r_max";
    throw Error(os.str());
  }
}

KernelTable kernel_profile(Real beta, Real r_max, int n_samples) {
  require_beta(beta);
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw Error("kernel_profile: r_max must be positive");
  if (n_samples < 2) throw Error("kernel_profile: n_samples must be >= 2");
  KernelTable t;
  t.beta = beta;
  t.tail_coefficients = kernel_asymptotic_coefficients(beta, kTailTerms);
  t.radii.resize(n_samples);
  t.values.resize(n_samples);
  t.derivative_values.resize(n_samples);
  // Relative target 1e-8, with an absolute floor of 1e-12 h(0) for tail
  // samples whose value is orders of magnitude below the integrand scale.
  Real h0 = 0.0;
  Real worst = 0.0, worst_r = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const Real r = r_max * i / (n_samples - 1);
    const KernelSample s = kernel_value(beta, r);
    if (i == 0) h0 = std::abs(s.value);
    t.radii[i] = r;
    t.values[i] = s.value;
    t.derivative_values[i] = s.derivative;
    const Real scaled = s.error / (1e-8 * std::max(std::abs(s.value), 1e-4 * h0));
    if (!(scaled <= worst)) {
      worst = scaled;
      worst_r = r;
    }
  }
  if (!(worst <= 1.0)) {
    std::ostringstream os;
    os << "kernel_profile(beta=" << beta << "): quadrature missed the error target, worst at r="
       << worst_r << " (" << worst << "x the target)";
    throw QuadratureFailure(os.str(), worst_r);
  }
  t.validate();
  return t;
}

void write_kernel_csv(const KernelTable& table, std::ostream& os) {
  os << "r,h,dh_dr\n";
  char buf[96];
  for (std::size_t i = 0; i < table.radii.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", table.radii[i], table.values[i],
                  table.derivative_values[i]);
    os << buf;
  }
}

void write_kernel_csv(const KernelTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write kernel CSV '" + path + "'");
  write_kernel_csv(table, out);
}

// ---------------------------------------------------------------------------
// L^1 bounds

namespace {

// |grad^l h|(r) = (2^{-l} sum_q C(l,q) G_{|l-2q|}(r)^2)^{1/2} with
// G_m = (2 pi)^{-1} int s^{l+1} exp(-s^{2 beta}) J_m(r s) ds.
Real gradient_magnitude(Real beta, int l, Real r, Real& error) {
  std::vector<Real> G(l + 1, 0.0);
  std::vector<bool> done(l + 1, false);
  Real sum = 0.0;
  for (int q = 0; q <= l; ++q) {
    const int m = std::abs(l - 2 * q);
    if (!done[m]) {
      const detail::QuadratureResult res = hankel(beta, l + 1.0, m, r);
      G[m] = res.value;
      error = std::max(error, res.error);
      done[m] = true;
    }
    sum += binomial(l, q) * G[m] * G[m];
  }
  return std::sqrt(std::ldexp(sum, -l));
}

// |grad^l h| from the large-r expansion: for h ~ sum_k a_k (r^2)^{c_k},
// c_k = -(1 + beta k), the component d^q dbar^{l-q} h has magnitude
// |S_q| with S_q = sum_k a_k (c_k)_q (c_k)_{l-q} r^{2 c_k - l} (falling
// factorials), and |grad^l h|^2 = 2^l sum_q C(l,q) S_q^2.
Real asymptotic_gradient_magnitude(const std::vector<Real>& a, Real beta, int l, Real r) {
  Real sum = 0.0;
  for (int q = 0; q <= l; ++q) {
    Real S = 0.0;
    Real last = INFINITY;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0.0) continue;
      const Real c = -(1.0 + beta * static_cast<Real>(i + 1));
      const Real term = a[i] * falling(c, q) * falling(c, l - q) * std::pow(r, 2.0 * c - l);
      if (std::abs(term) > last) break;
      S += term;
      last = std::abs(term);
    }
    sum += binomial(l, q) * S * S;
  }
  return std::sqrt(std::ldexp(sum, l));
}

// 2 pi int_R^inf |grad^l h| r dr from the leading term of the expansion.
Real gradient_tail(const std::vector<Real>& a, Real beta, int l, Real R) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    const Real bk = beta * static_cast<Real>(i + 1);
    const Real c = -(1.0 + bk);
    Real m2 = 0.0;
    for (int q = 0; q <= l; ++q) {
      const Real f = falling(c, q) * falling(c, l - q);
      m2 += binomial(l, q) * f * f;
    }
    const Real M = std::sqrt(std::ldexp(m2, l));
    const Real e = 2.0 * bk + l;
    return kTwoPi * std::abs(a[i]) * M * std::pow(R, -e) / e;
  }
  return 0.0;
}

// Quadrature of the exact profile derivatives on [0, R], the expansion on
// [R, 1e4], and its leading term beyond.
Real gradient_l1(Real beta, int l, Real R, Real panel) {
  const std::vector<Real> a = kernel_asymptotic_coefficients(beta, kTailTerms);
  Real error = 0.0;
  auto near = [&](Real r) { return kTwoPi * r * gradient_magnitude(beta, l, r, error); };
  const int count = static_cast<int>(std::ceil(R / panel));
  std::vector<Real> edges(count + 1);
  for (int i = 0; i <= count; ++i) edges[i] = R * i / count;
  const detail::QuadratureResult body = detail::gauss_kronrod_panels(near, edges, 1e-10, 12);

  auto far = [&](Real r) { return kTwoPi * r * asymptotic_gradient_magnitude(a, beta, l, r); };
  std::vector<Real> far_edges{R};
  while (far_edges.back() < 1e4) far_edges.push_back(far_edges.back() * 1.25);
  const detail::QuadratureResult mid = detail::gauss_kronrod_panels(far, far_edges, 1e-12, 12);
  const Real tail = mid.value + gradient_tail(a, beta, l, far_edges.back());

  const Real total = body.value + tail;
  if (!std::isfinite(total) || body.error > 1e-6 * std::abs(total) || tail > 0.5 * total) {
    std::ostringstream os;
    os << "kernel_l1_bounds(beta=" << beta << ", l=" << l << "): radial integral on [0," << R
       << "] did not converge (error " << body.error << ", tail " << tail << ")";
    throw QuadratureFailure(os.str(), R);
  }
  return total;
}

// Discrete L^1 norm of the periodic field with symbol exp(-|xi|^{2 beta}) |xi|^eta
// on an n x n grid of box L. The symbol is even in both axes, so the field
// on the quarter domain is a 2D type-I cosine transform.
Real fractional_l1(Real beta, Real eta, Real L, int n) {
  const int m = n / 2 + 1;
  const Real dk = kTwoPi / L;
  // beyond |xi|^{2 beta} = 80 the symbol is below 1e-34
  const Real cutoff = std::pow(80.0 + eta * 10.0, 1.0 / (2.0 * beta));
  const int imax = std::min(m, static_cast<int>(std::ceil(cutoff / dk)) + 1);
  Eigen::ArrayXXd g = Eigen::ArrayXXd::Zero(m, m);
  for (int i2 = 0; i2 < imax; ++i2) {
    for (int i1 = 0; i1 < imax; ++i1) {
      const Real xi = dk * std::sqrt(Real(i1) * i1 + Real(i2) * i2);
      const Real e = std::pow(xi, 2.0 * beta);
      if (e > 80.0 + eta * 10.0) continue;
      g(i1, i2) = std::exp(-e) * (eta == 0.0 ? 1.0 : std::pow(xi, eta));
    }
  }
  detail::dct1_2d(g);
  Eigen::ArrayXd w = Eigen::ArrayXd::Constant(m, 2.0);
  w(0) = 1.0;
  w(m - 1) = 1.0;
  const Real h = L / n;
  const Real sum = (w.matrix().transpose() * g.abs().matrix() * w.matrix()).value();
  return sum * h * h / (L * L);
}

}  // namespace

KernelL1Report kernel_l1_bounds(Real beta, int l_max, const std::vector<Real>& eta_list,
                                const L1BoundsOptions& options) {
  require_beta(beta);
  if (l_max < 0 || l_max > 4) throw Error("kernel_l1_bounds: l_max must lie in [0, 4]");
  for (Real eta : eta_list) {
    if (!(eta >= 0.0) || !std::isfinite(eta)) throw Error("kernel_l1_bounds: eta must be >= 0");
  }
  if (options.n < 8 || options.n % 2 != 0) throw Error("kernel_l1_bounds: n must be even");
  KernelL1Report report;
  report.beta = beta;
  for (int l = 0; l <= l_max; ++l) {
    L1Estimate e;
    e.order = l;
    e.value = gradient_l1(beta, l, options.radius, 1.0);
    e.refined = gradient_l1(beta, l, 2.0 * options.radius, 0.5);
    e.error_bar = std::abs(e.refined - e.value);
    report.gradient.push_back(e);
  }
  for (Real eta : eta_list) {
    L1Estimate e;
    e.order = eta;
    e.value = fractional_l1(beta, eta, options.box_length, options.n);
    e.refined = fractional_l1(beta, eta, options.box_length, 2 * options.n);
    e.error_bar = std::abs(e.refined - e.value);
    report.fractional.push_back(e);
  }
  return report;
}

// ---------------------------------------------------------------------------
// mild solution

SpectralField mild_solution(const SpectralField& v0, const Forcing& forcing, Real t, Real beta,
                            Real kappa, const DuhamelOptions& options) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error("mild_solution: t must be positive");
  require_beta(beta);
  if (!(kappa >= 0.0)) throw Error("mild_solution: kappa must be >= 0");
  if (options.order < 1 || options.panels < 1) {
    throw Error("mild_solution: quadrature order and panel count must be positive");
  }
  const Grid2D& g = *v0.grid;
  const Eigen::ArrayXXd symbol = kappa * g.xi_abs().pow(2.0 * beta);
  SpectralField out = v0;
  out.coeffs *= (-t * symbol).exp();
  if (!forcing) return out;

  const detail::GaussLegendre gl = detail::gauss_legendre(options.order);
  const Real width = t / options.panels;
  for (int p = 0; p < options.panels; ++p) {
    const Real mid = (p + 0.5) * width;
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      const Real s = mid + 0.5 * width * gl.nodes[q];
      const SpectralField f = forcing(s);
      if (!f.grid || f.grid->n() != g.n() || f.grid->box_length() != g.box_length()) {
        throw Error("mild_solution: forcing grid does not match v0");
      }
      out.coeffs += (0.5 * width * gl.weights[q]) * (-(t - s) * symbol).exp() * f.coeffs;
    }
  }
  return out;
}

SpectralField mild_solution_convolution(const SpectralField& v0, const KernelTable& table, Real t,
                                        Real kappa, int images) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error("mild_solution_convolution: t must be positive");
  if (!(kappa >= 0.0)) throw Error("mild_solution_convolution: kappa must be >= 0");
  if (images < 0) throw Error("mild_solution_convolution: images must be >= 0");
  if (kappa == 0.0) return v0;
  const Real beta = table.beta;
  const Grid2D& g = *v0.grid;
  const int n = g.n();
  const Real L = g.box_length();
  const Real lambda = std::pow(kappa * t, 1.0 / (2.0 * beta));
  const Real scale = 1.0 / (lambda * lambda);

  PhysicalField K = PhysicalField::Zero(n, n);
  for (int i2 = 0; i2 < n; ++i2) {
    const Real x2 = (i2 <= n / 2 ? i2 : i2 - n) * g.spacing();
    for (int i1 = 0; i1 < n; ++i1) {
      const Real x1 = (i1 <= n / 2 ? i1 : i1 - n) * g.spacing();
      Real sum = 0.0;
      for (int m2 = -images; m2 <= images; ++m2) {
        for (int m1 = -images; m1 <= images; ++m1) {
          sum += table.evaluate(std::hypot(x1 + m1 * L, x2 + m2 * L) / lambda);
        }
      }
      K(i1, i2) = scale * sum;
    }
  }

  // Images outside the square of half-width a contribute about
  // L^{-2} int_{|y|_inf > a} K dy, from the expansion term by term:
  // int r^{-p} = a^{2-p} / (p - 2) * 8 int_0^{pi/4} cos^{p-2}.
  const Real a = (images + 0.5) * L;
  Real outside = 0.0;
  Real last = INFINITY;
  for (std::size_t i = 0; i < table.tail_coefficients.size(); ++i) {
    if (table.tail_coefficients[i] == 0.0) continue;
    const Real bk = beta * static_cast<Real>(i + 1);
    const Real p = 2.0 + 2.0 * bk;
    const detail::QuadratureResult ang = detail::gauss_kronrod(
        [p](Real th) { return std::pow(std::cos(th), p - 2.0); }, 0.0, kPi / 4.0, 1e-13);
    const Real term = table.tail_coefficients[i] * std::pow(lambda, 2.0 * bk) *
                      std::pow(a, 2.0 - p) / (p - 2.0) * 8.0 * ang.value;
    if (std::abs(term) > last) break;
    outside += term;
    last = std::abs(term);
  }
  K += outside / (L * L);

  SpectralField out = v0;
  out.coeffs *= detail::to_spectral(K, g);
  return out;
}

}  // namespace gmhd
