#include "gmhd/fields.hpp"

#include <cmath>
#include <random>

#include "gmhd/checkpoint.hpp"

namespace gmhd {

namespace {

Real mean_mode_scale(const SpectralField& F) {
  return std::max(F.coeffs.abs().maxCoeff(), 1e-300);
}

SpectralVector invert_curl(const SpectralField& s, const char* what) {
  const Complex mean = s.coeffs(0, 0);
  if (std::abs(mean) > 1e-12 * mean_mode_scale(s) && std::abs(mean) > 0.0) {
    throw Error(std::string(what) + ": field has nonzero mean " + std::to_string(std::abs(mean)) +
                "; the inverse Laplacian is undefined on constants");
  }
  const Grid2D& g = *s.grid;
  // v_hat = i(xi2, -xi1) s_hat / |xi|^2, so that curl v = s
  const Eigen::ArrayXXcd w =
      Complex(0.0, 1.0) * s.coeffs / g.inverse_laplacian_divisor().cast<Complex>();
  SpectralVector v{SpectralField(s.grid, w * g.dxi2().cast<Complex>()),
                   SpectralField(s.grid, -w * g.dxi1().cast<Complex>())};
  v.c1.coeffs(0, 0) = 0.0;
  v.c2.coeffs(0, 0) = 0.0;
  return v;
}

void finalize(SpectralField& F) {
  dealias_in_place(F.coeffs, *F.grid);
  F.coeffs(0, 0) = 0.0;
}

SpectralField from_samples(const GridPtr& grid, auto&& fn) {
  const int n = grid->n();
  PhysicalField f(n, n);
  for (int i2 = 0; i2 < n; ++i2) {
    for (int i1 = 0; i1 < n; ++i1) {
      f(i1, i2) = fn(grid->coordinate(i1), grid->coordinate(i2));
    }
  }
  SpectralField F = forward_transform(grid, f);
  finalize(F);
  return F;
}

}  // namespace

InitialKind parse_initial_kind(const std::string& name) {
  if (name == "orszag_tang") return InitialKind::orszag_tang;
  if (name == "random_bandlimited") return InitialKind::random_bandlimited;
  if (name == "single_mode") return InitialKind::single_mode;
  if (name == "from_file") return InitialKind::from_file;
  throw Error("unknown initial condition kind '" + name + "'");
}

std::string to_string(InitialKind kind) {
  switch (kind) {
    case InitialKind::orszag_tang: return "orszag_tang";
    case InitialKind::random_bandlimited: return "random_bandlimited";
    case InitialKind::single_mode: return "single_mode";
    case InitialKind::from_file: return "from_file";
  }
  return "?";
}

SpectralVector biot_savart(const SpectralField& omega_hat) {
  return invert_curl(omega_hat, "biot_savart");
}

SpectralVector b_from_current(const SpectralField& j_hat) {
  return invert_curl(j_hat, "b_from_current");
}

SpectralField curl(const SpectralVector& v) {
  return spectral_derivative(v.c2, 1) - spectral_derivative(v.c1, 2);
}

SpectralField divergence(const SpectralVector& v) {
  return spectral_derivative(v.c1, 1) + spectral_derivative(v.c2, 2);
}

SpectralField random_bandlimited_field(const GridPtr& grid, std::uint64_t seed, int k_min,
                                       int k_max) {
  if (k_min < 1 || k_max < k_min) {
    throw Error("random_bandlimited: need 1 <= k_min <= k_max");
  }
  const int n = grid->n();
  std::mt19937_64 rng(seed);
  std::normal_distribution<Real> normal(0.0, 1.0);
  PhysicalField noise(n, n);
  for (int i2 = 0; i2 < n; ++i2)
    for (int i1 = 0; i1 < n; ++i1) noise(i1, i2) = normal(rng);
  SpectralField F = forward_transform(grid, noise);
  for (int i2 = 0; i2 < n; ++i2) {
    for (int i1 = 0; i1 < n; ++i1) {
      const int k1 = grid->frequency(i1), k2 = grid->frequency(i2);
      const int ksq = k1 * k1 + k2 * k2;
      const bool in_band = ksq >= k_min * k_min && ksq <= k_max * k_max;
      if (!in_band || !grid->kept(i1, i2) || 2 * std::abs(k1) == n || 2 * std::abs(k2) == n) {
        F.coeffs(i1, i2) = 0.0;
      }
    }
  }
  F.coeffs(0, 0) = 0.0;
  const Real rms = l2_norm(F) / grid->box_length();
  if (rms == 0.0) throw Error("random_bandlimited: band [k_min, k_max] contains no retained modes");
  F *= 1.0 / rms;
  return F;
}

FlowState make_initial_condition(const InitialCondition& spec, const GridPtr& grid) {
  FlowState s;
  const Real q = grid->dk();
  const Real A = spec.amplitude;
  const Real c = spec.magnetic_amplitude;
  switch (spec.kind) {
    case InitialKind::orszag_tang:
      // u = A(-sin x2, sin x1), b = c(-sin x2, sin 2x1)
      s.omega_hat = from_samples(grid, [&](Real x1, Real x2) {
        return A * q * (std::cos(q * x1) + std::cos(q * x2));
      });
      s.j_hat = from_samples(grid, [&](Real x1, Real x2) {
        return c * q * (2.0 * std::cos(2.0 * q * x1) + std::cos(q * x2));
      });
      break;
    case InitialKind::single_mode: {
      const int k1 = spec.mode_k1, k2 = spec.mode_k2;
      if (k1 == 0 && k2 == 0) throw Error("single_mode: mode (0,0) has no curl");
      if (3 * std::abs(k1) > grid->n() || 3 * std::abs(k2) > grid->n()) {
        throw Error("single_mode: mode lies outside the dealiased band");
      }
      const Real kabs = q * std::sqrt(Real(k1 * k1 + k2 * k2));
      // stream function cos(xi.x)/|xi| gives max |u| = amplitude
      s.omega_hat = from_samples(grid, [&](Real x1, Real x2) {
        return A * kabs * std::cos(q * (k1 * x1 + k2 * x2));
      });
      s.j_hat = from_samples(grid, [&](Real x1, Real x2) {
        return c * kabs * std::cos(q * (k1 * x1 + k2 * x2));
      });
      break;
    }
    case InitialKind::random_bandlimited:
      s.omega_hat = A * random_bandlimited_field(grid, spec.seed, spec.k_min, spec.k_max);
      s.j_hat = c * random_bandlimited_field(grid, spec.seed ^ 0x9e3779b97f4a7c15ULL, spec.k_min,
                                             spec.k_max);
      break;
    case InitialKind::from_file: {
      Checkpoint ck = read_checkpoint(spec.file);
      if (ck.n != grid->n()) {
        throw Error("from_file: checkpoint field 'n' = " + std::to_string(ck.n) +
                    " does not match grid n = " + std::to_string(grid->n()));
      }
      if (ck.box_length != grid->box_length()) {
        throw Error("from_file: checkpoint field 'box_length' does not match the grid");
      }
      s.omega_hat = SpectralField(grid, std::move(ck.omega));
      s.j_hat = SpectralField(grid, std::move(ck.current));
      s.time = ck.time;
      finalize(s.omega_hat);
      finalize(s.j_hat);
      break;
    }
  }
  return s;
}

}  // namespace gmhd
