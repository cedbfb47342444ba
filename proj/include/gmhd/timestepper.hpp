#pragma once

#include <functional>
#include <optional>
#include <string>

#include "gmhd/diagnostics.hpp"

namespace gmhd {

enum class Scheme { if_rk4, imex_euler };

Scheme parse_scheme(const std::string& name);
std::string to_string(Scheme scheme);

struct StepperConfig {
  Scheme scheme = Scheme::if_rk4;
  /// Advective safety factor in (0, 1].
  Real cfl = 0.5;
  Real dt_max = 0.01;
  /// t_end = 0 is accepted and produces the initial record only.
  Real t_end = 1.0;

  void validate() const;
};

/// Raised when a state leaves the finite range or ||omega||_inf passes the
/// blow-up threshold. From run() it also carries the series up to the event,
/// terminated by a row with the blow-up marker.
class BlowupDetected : public Error {
 public:
  BlowupDetected(Real time, const std::string& what) : Error(what), time_(time) {}

  Real time() const { return time_; }
  /// Last finite diagnostics row (empty when raised by step()).
  const std::vector<Real>& last_diagnostics() const { return last_; }
  const NormSeries& series() const { return series_; }

  void attach(NormSeries series) {
    series_ = std::move(series);
    if (series_.size() > 0) last_ = series_.row(series_.size() - 1);
  }

 private:
  Real time_;
  std::vector<Real> last_;
  NormSeries series_;
};

/// Multiplies every coefficient by exp(-c |xi|^s dt). Requires c >= 0, dt >= 0.
SpectralField linear_propagator(const SpectralField& F, Real s, Real c, Real dt);

/// One step of the vorticity-current system. if_rk4 treats both dissipation
/// terms exactly through the integrating factor; imex_euler is first order
/// (explicit nonlinear, implicit dissipation). The result is dealiased and
/// mean-free with time advanced by dt.
FlowState step(const FlowState& state, const PhysicsParams& params, Real dt,
               Scheme scheme = Scheme::if_rk4, Real blowup_linf = 1e12);

/// min(dt_max, cfl h / max(||u||_inf, ||b||_inf, 1e-12)) with grid maxima of
/// the Euclidean magnitudes.
Real choose_dt(const FlowState& state, const PhysicsParams& params, const StepperConfig& config);

struct RunResult {
  NormSeries series;
  FlowState state;
  std::size_t steps = 0;
};

struct RunOptions {
  /// Called after every record with the recorded state.
  std::function<void(const FlowState&, const NormSeries&)> on_record;
  /// Series of an earlier run to continue (restart). Rows after the initial
  /// state's time are dropped; if the last kept row is at that time the
  /// initial record is not repeated.
  std::optional<NormSeries> resume;
};

/// Steps from `initial` to config.t_end. Records at t0, at every multiple of
/// the diagnostics interval and at t_end; the step before a record time is
/// shortened to land on it exactly. Throws BlowupDetected with the partial
/// series attached.
RunResult run(const FlowState& initial, const PhysicsParams& params, const StepperConfig& stepper,
              const DiagnosticsConfig& diagnostics, const RunOptions& options = {});

/// Builds the initial condition on `grid` and runs it.
RunResult run(const InitialCondition& ic, const GridPtr& grid, const PhysicsParams& params,
              const StepperConfig& stepper, const DiagnosticsConfig& diagnostics,
              const RunOptions& options = {});

}  // namespace gmhd
