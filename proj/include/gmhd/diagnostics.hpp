#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gmhd/dynamics.hpp"

namespace gmhd {

struct DiagnosticsConfig {
  /// Recording cadence in simulation time, independent of dt.
  Real interval = 0.05;
  /// Exponents p for the lp_omega_<p> columns.
  std::vector<Real> lp_exponents = {4.0, 8.0};
  /// Record ||Lambda^{1+delta} j|| (the smoothing exponent of the grad-j bound).
  bool track_delta = true;
  /// Unset: delta = min(2 beta - 2, 0.5) / 2; the column is dropped if delta <= 0.
  std::optional<Real> delta;
  /// bkm_report: a log-slope of the BKM integrands above this over the final
  /// window marks the run as growing.
  Real slope_threshold = 0.5;
  /// bkm_report: fraction of the horizon (at the end) used for slope fits.
  Real final_window = 1.0 / 3.0;
  /// Boundedness convention: quantities must stay below growth_factor times
  /// their maximum over the initial transient.
  Real growth_factor = 10.0;
  Real transient_fraction = 1.0 / 3.0;
  /// ||omega||_inf above this counts as blow-up.
  Real blowup_linf = 1e12;

  void validate() const;
  /// delta actually used for this beta, or nullopt when the column is dropped.
  std::optional<Real> effective_delta(Real beta) const;
};

/// Time-stamped table of norm quantities with a fixed column order.
class NormSeries {
 public:
  NormSeries() = default;
  explicit NormSeries(std::vector<std::string> names) : names_(std::move(names)) {}

  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Real>& times() const { return times_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  bool blown_up() const { return blown_up_; }

  /// Index of a column; throws if absent.
  std::size_t column_index(const std::string& name) const;
  bool has_column(const std::string& name) const;
  Real value(std::size_t row, const std::string& name) const;
  std::vector<Real> column(const std::string& name) const;
  const std::vector<Real>& row(std::size_t i) const { return rows_[i]; }

  /// Appends a row. Requires strictly increasing time and matching width.
  void append(Real time, std::vector<Real> values, bool blowup_marker = false);

  /// Drops rows with time > t (used to splice a restart onto an earlier series).
  void truncate_after(Real t);

  /// Header "time,<names...>,blowup", one row per sample, %.17g values.
  void write_csv(std::ostream& os) const;
  void write_csv(const std::string& path) const;
  static NormSeries read_csv(const std::string& path);

 private:
  std::vector<std::string> names_;
  std::vector<Real> times_;
  std::vector<std::vector<Real>> rows_;
  bool blown_up_ = false;
};

/// (h^2 sum |f|^p)^{1/p}, p >= 1.
Real lp_norm(const PhysicalField& f, Real p, const Grid2D& grid);
/// Grid maximum of |f|.
Real linf_norm(const PhysicalField& f);

/// Homogeneous ||Lambda^s F||_{L^2} via Parseval; s = 0 is the plain L^2 norm.
Real sobolev_norm(const SpectralField& F, Real s);

/// Sobolev exponents recorded for j: beta, r = beta - 1, beta + r, and 1 + delta.
/// Negative exponents (beta < 1) are clamped to 0.
struct SobolevSet {
  Real beta, r, beta_plus_r;
  std::optional<Real> one_plus_delta;
};
SobolevSet sobolev_set(const PhysicsParams& params, const DiagnosticsConfig& config);

/// Column names record() produces for these settings.
std::vector<std::string> diagnostic_names(const PhysicsParams& params,
                                          const DiagnosticsConfig& config);

/// Computes every tracked norm of `state`, appends it, and advances the
/// trapezoid integrals. Non-finite values are appended with the blow-up marker
/// and then reported by throwing.
void record(const FlowState& state, const PhysicsParams& params, const DiagnosticsConfig& config,
            NormSeries& series);

enum class Verdict { bounded, growing, blown_up };
std::string to_string(Verdict v);

struct BkmSummary {
  Real horizon = 0.0;
  /// int (||omega||_inf + ||j||_inf) dt
  Real bkm_integral = 0.0;
  /// int ||grad j||_inf^2 dt
  Real int_linf_grad_j_sq = 0.0;
  /// Integrand histories.
  std::vector<Real> times, bkm_integrand, grad_j_integrand;
  /// Least-squares slopes of the log integrands over the final window.
  Real bkm_log_slope = 0.0;
  Real grad_j_log_slope = 0.0;
  /// Largest ratio of a tracked quantity to its transient maximum.
  Real transient_ratio = 0.0;
  std::string transient_worst;
  Verdict verdict = Verdict::bounded;
};

BkmSummary bkm_report(const NormSeries& series, const DiagnosticsConfig& config);

/// (E(T) - E(0) + int dissipation) / (E(0) T) with E = energy_u + energy_b;
/// zero when the initial energy vanishes.
Real energy_balance_residual(const NormSeries& series);

}  // namespace gmhd
