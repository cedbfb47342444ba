#include "gmhd/timestepper.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fft.hpp"

namespace gmhd {

Scheme parse_scheme(const std::string& name) {
  if (name == "if_rk4") return Scheme::if_rk4;
  if (name == "imex_euler") return Scheme::imex_euler;
  throw Error("unknown stepper scheme '" + name + "' (expected if_rk4 or imex_euler)");
}

std::string to_string(Scheme scheme) {
  return scheme == Scheme::if_rk4 ? "if_rk4" : "imex_euler";
}

void StepperConfig::validate() const {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw Error("stepper.cfl must lie in (0, 1]");
  if (!(dt_max > 0.0) || !std::isfinite(dt_max)) throw Error("stepper.dt_max must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw Error("stepper.t_end must be >= 0");
}

SpectralField linear_propagator(const SpectralField& F, Real s, Real c, Real dt) {
  if (!(dt >= 0.0)) throw Error("linear_propagator: dt must be >= 0");
  if (!(c >= 0.0)) throw Error("linear_propagator: coefficient must be >= 0");
  if (dt == 0.0 || c == 0.0) return F;
  SpectralField out = F;
  out.coeffs *= (-c * dt * F.grid->xi_abs().pow(s)).exp();
  return out;
}

namespace {

struct Pair {
  Coefficients w, j;
};

Pair nonlinear(const GridPtr& grid, const Coefficients& w, const Coefficients& j) {
  FlowState s{SpectralField(grid, w), SpectralField(grid, j), 0.0};
  VorticityCurrentRhs r = vorticity_current_nonlinear(s);
  return {std::move(r.domega.coeffs), std::move(r.dj.coeffs)};
}

// Symbol of the linear part for omega and j.
Eigen::ArrayXXd linear_symbol(const Grid2D& g, Real c, Real s) {
  if (c == 0.0) return Eigen::ArrayXXd::Zero(g.n(), g.n());
  return -c * g.xi_abs().pow(2.0 * s);
}

void check_finite(const FlowState& s, Real blowup_linf) {
  const Grid2D& g = *s.grid();
  const Real L2 = g.box_length() * g.box_length();
  const Real bound = s.omega_hat.coeffs.abs().sum() / L2;
  const Real jbound = s.j_hat.coeffs.abs().sum() / L2;
  if (std::isfinite(bound) && std::isfinite(jbound) && bound <= blowup_linf) return;
  std::ostringstream os;
  if (!std::isfinite(bound) || !std::isfinite(jbound)) {
    os << "blow-up at t=" << s.time << ": non-finite state";
    throw BlowupDetected(s.time, os.str());
  }
  // the coefficient sum only bounds the grid maximum; check the real thing
  const Real linf = detail::to_physical(s.omega_hat.coeffs, g).abs().maxCoeff();
  if (linf > blowup_linf) {
    os << "blow-up at t=" << s.time << ": ||omega||_inf=" << linf << " exceeds " << blowup_linf;
    throw BlowupDetected(s.time, os.str());
  }
}

}  // namespace

FlowState step(const FlowState& state, const PhysicsParams& params, Real dt, Scheme scheme,
               Real blowup_linf) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error("step: dt must be positive");
  const GridPtr& grid = state.grid();
  const Grid2D& g = *grid;
  const Eigen::ArrayXXd Lw = linear_symbol(g, params.nu, params.alpha);
  const Eigen::ArrayXXd Lj = linear_symbol(g, params.kappa, params.beta);
  const Coefficients& w0 = state.omega_hat.coeffs;
  const Coefficients& j0 = state.j_hat.coeffs;

  FlowState out;
  out.time = state.time + dt;
  out.omega_hat.grid = grid;
  out.j_hat.grid = grid;

  if (scheme == Scheme::imex_euler) {
    const Pair n0 = nonlinear(grid, w0, j0);
    out.omega_hat.coeffs = (w0 + dt * n0.w) / (1.0 - dt * Lw);
    out.j_hat.coeffs = (j0 + dt * n0.j) / (1.0 - dt * Lj);
  } else {
    // Lawson RK4 with half-step factors E = exp(L dt / 2).
    const Eigen::ArrayXXd Ew = (0.5 * dt * Lw).exp();
    const Eigen::ArrayXXd Ej = (0.5 * dt * Lj).exp();
    const Pair k1 = nonlinear(grid, w0, j0);
    const Pair k2 = nonlinear(grid, Ew * (w0 + 0.5 * dt * k1.w), Ej * (j0 + 0.5 * dt * k1.j));
    const Coefficients w0h = Ew * w0;
    const Coefficients j0h = Ej * j0;
    const Pair k3 = nonlinear(grid, w0h + 0.5 * dt * k2.w, j0h + 0.5 * dt * k2.j);
    const Pair k4 = nonlinear(grid, Ew * (w0h + dt * k3.w), Ej * (j0h + dt * k3.j));
    out.omega_hat.coeffs =
        Ew * (Ew * (w0 + dt / 6.0 * k1.w) + dt / 3.0 * (k2.w + k3.w)) + dt / 6.0 * k4.w;
    out.j_hat.coeffs =
        Ej * (Ej * (j0 + dt / 6.0 * k1.j) + dt / 3.0 * (k2.j + k3.j)) + dt / 6.0 * k4.j;
  }
  dealias_in_place(out.omega_hat.coeffs, g);
  dealias_in_place(out.j_hat.coeffs, g);
  out.omega_hat.coeffs(0, 0) = 0.0;
  out.j_hat.coeffs(0, 0) = 0.0;
  check_finite(out, blowup_linf);
  return out;
}

Real choose_dt(const FlowState& state, const PhysicsParams&, const StepperConfig& config) {
  const Grid2D& g = *state.grid();
  const SpectralVector u = biot_savart(state.omega_hat);
  const SpectralVector b = b_from_current(state.j_hat);
  PhysicalField u1, u2, b1, b2;
  detail::to_physical_pair(u.c1.coeffs, u.c2.coeffs, g, u1, u2);
  detail::to_physical_pair(b.c1.coeffs, b.c2.coeffs, g, b1, b2);
  const Real umax = (u1.square() + u2.square()).sqrt().maxCoeff();
  const Real bmax = (b1.square() + b2.square()).sqrt().maxCoeff();
  const Real speed = std::max({umax, bmax, 1e-12});
  return std::min(config.dt_max, config.cfl * g.spacing() / speed);
}

namespace {

// Smallest multiple of `interval` strictly after t, tolerant of round-off in
// times that were themselves set to multiples.
Real next_record_time(Real t, Real interval) {
  const Real k = std::floor(t / interval * (1.0 + 1e-12) + 1e-9);
  return (k + 1.0) * interval;
}

}  // namespace

RunResult run(const FlowState& initial, const PhysicsParams& params, const StepperConfig& stepper,
              const DiagnosticsConfig& diagnostics, const RunOptions& options) {
  params.validate();
  stepper.validate();
  diagnostics.validate();

  RunResult result;
  result.state = initial;
  FlowState& state = result.state;
  NormSeries& series = result.series;

  bool skip_initial = false;
  if (options.resume) {
    series = *options.resume;
    series.truncate_after(state.time);
    if (series.blown_up()) throw Error("run: cannot resume a series that ended in blow-up");
    skip_initial = !series.empty() && series.times().back() == state.time;
  }
  // record() marks and throws on non-finite or oversized values
  auto take_record = [&] {
    try {
      record(state, params, diagnostics, series);
    } catch (const Error& e) {
      if (!series.blown_up()) throw;
      BlowupDetected out(state.time, e.what());
      out.attach(series);
      throw out;
    }
    if (options.on_record) options.on_record(state, series);
  };
  if (!skip_initial) take_record();

  const Real t_end = stepper.t_end;
  try {
    while (state.time < t_end) {
      const Real target = std::min(next_record_time(state.time, diagnostics.interval), t_end);
      while (state.time < target) {
        Real dt = choose_dt(state, params, stepper);
        const Real remaining = target - state.time;
        bool land = false;
        if (remaining <= dt * (1.0 + 1e-9)) {
          dt = remaining;
          land = true;
        } else if (remaining < 2.0 * dt) {
          dt = 0.5 * remaining;
        }
        state = step(state, params, dt, stepper.scheme, diagnostics.blowup_linf);
        if (land) state.time = target;
        ++result.steps;
      }
      take_record();
    }
  } catch (BlowupDetected& e) {
    // terminal marker row repeats the last finite values
    if (!series.empty() && e.time() > series.times().back()) {
      series.append(e.time(), series.row(series.size() - 1), true);
    }
    BlowupDetected out(e.time(), e.what());
    out.attach(series);
    throw out;
  }
  return result;
}

RunResult run(const InitialCondition& ic, const GridPtr& grid, const PhysicsParams& params,
              const StepperConfig& stepper, const DiagnosticsConfig& diagnostics,
              const RunOptions& options) {
  return run(make_initial_condition(ic, grid), params, stepper, diagnostics, options);
}

}  // namespace gmhd
