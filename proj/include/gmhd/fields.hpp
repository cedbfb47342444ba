#pragma once

#include <cstdint>
#include <string>

#include "gmhd/spectral.hpp"

namespace gmhd {

/// Canonical solver state: vorticity and current in spectral form at time t.
/// Both fields are Hermitian, dealiased and mean-free.
struct FlowState {
  SpectralField omega_hat;
  SpectralField j_hat;
  Real time = 0.0;

  const GridPtr& grid() const { return omega_hat.grid; }
};

enum class InitialKind { orszag_tang, random_bandlimited, single_mode, from_file };

struct InitialCondition {
  InitialKind kind = InitialKind::orszag_tang;
  /// Velocity amplitude (Orszag-Tang, single mode) or vorticity rms (random).
  Real amplitude = 1.0;
  /// Magnetic amplitude; the Orszag-Tang constant c.
  Real magnetic_amplitude = 1.0;
  std::uint64_t seed = 1;
  /// Integer frequency band [k_min, k_max] for random_bandlimited.
  int k_min = 1;
  int k_max = 8;
  /// Integer frequency of the single_mode preset.
  int mode_k1 = 1;
  int mode_k2 = 0;
  /// Checkpoint path for from_file.
  std::string file;
};

InitialKind parse_initial_kind(const std::string& name);
std::string to_string(InitialKind kind);

/// u = curl^{-1} omega = grad^perp Delta^{-1} omega. Throws on nonzero mean.
SpectralVector biot_savart(const SpectralField& omega_hat);

/// b from j; same operator as biot_savart.
SpectralVector b_from_current(const SpectralField& j_hat);

/// Scalar curl -d2 v1 + d1 v2.
SpectralField curl(const SpectralVector& v);

/// d1 v1 + d2 v2.
SpectralField divergence(const SpectralVector& v);

/// Builds a divergence-free, mean-free, dealiased state at t = 0 (or at the
/// checkpoint time for from_file).
FlowState make_initial_condition(const InitialCondition& spec, const GridPtr& grid);

/// Mean-free Hermitian random field with coefficients on the integer band
/// k_min <= |k| <= k_max (Euclidean, integer frequencies), scaled to unit rms.
SpectralField random_bandlimited_field(const GridPtr& grid, std::uint64_t seed, int k_min,
                                       int k_max);

}  // namespace gmhd
