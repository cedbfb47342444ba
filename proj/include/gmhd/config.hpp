#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gmhd/kernel_lab.hpp"
#include "gmhd/timestepper.hpp"

namespace gmhd {

struct OutputConfig {
  std::string directory = "out";
  /// Checkpoints at record times that are multiples of this; 0 writes only
  /// the final state.
  Real checkpoint_interval = 0.0;
};

/// Value grids for cmd_sweep; an empty list means the [physics]/[grid] value.
struct SweepConfig {
  std::vector<Real> alpha;
  std::vector<Real> beta;
  std::vector<int> n;
  /// 0 means machine parallelism.
  int workers = 0;
};

struct KernelConfig {
  std::vector<Real> beta;
  int l_max = 2;
  std::vector<Real> eta = {0.5, 1.7};
  Real r_max = 30.0;
  int n_samples = 3001;
  L1BoundsOptions bounds;
};

struct RunConfig {
  PhysicsParams physics = PhysicsParams::standard(1.25);
  int n = 128;
  Real box_length = kTwoPi;
  InitialCondition ic;
  /// Series CSV of the run being continued (restart from ic.file).
  std::string ic_series;
  StepperConfig stepper;
  DiagnosticsConfig diagnostics;
  OutputConfig output;
  SweepConfig sweep;
  KernelConfig kernel;

  void validate() const;
};

/// Flat sectioned key=value text:
///
///   [physics]   preset (standard | ideal), nu, alpha, kappa, beta
///   [grid]      n, box_length
///   [ic]        kind, amplitude, magnetic_amplitude, seed, k_min, k_max,
///               mode_k1, mode_k2, file, series
///   [stepper]   scheme, cfl, dt_max, t_end
///   [diagnostics] interval, lp, track_delta, delta, slope_threshold,
///               final_window, growth_factor, transient_fraction, blowup_linf
///   [output]    directory, checkpoint_interval
///   [sweep]     alpha, beta, n, workers
///   [kernel]    beta, l_max, eta, r_max, n_samples, radius, box_length, grid_n
///
/// '#' and ';' start comments. Lists are comma separated. Real values accept
/// a trailing "pi" (box_length = 2pi). A preset resets nu, alpha and kappa
/// and is applied where it appears, so later keys override it. Unknown
/// sections and keys are errors naming the key and line.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

/// Inverse of parse_config for the keys above (round-trips every field).
std::string format_config(const RunConfig& config);

}  // namespace gmhd
