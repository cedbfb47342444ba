#include "gmhd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fft.hpp"

namespace gmhd {

void DiagnosticsConfig::validate() const {
  if (!(interval > 0.0) || !std::isfinite(interval)) {
    throw Error("diagnostics.interval must be positive");
  }
  for (Real p : lp_exponents) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw Error("diagnostics.lp: exponents must be >= 1");
  }
  if (delta && !(*delta > 0.0)) throw Error("diagnostics.delta must be positive");
  if (!(final_window > 0.0 && final_window <= 1.0)) {
    throw Error("diagnostics.final_window must lie in (0, 1]");
  }
  if (!(transient_fraction > 0.0 && transient_fraction <= 1.0)) {
    throw Error("diagnostics.transient_fraction must lie in (0, 1]");
  }
  if (!(growth_factor > 1.0)) throw Error("diagnostics.growth_factor must exceed 1");
  if (!(blowup_linf > 0.0)) throw Error("diagnostics.blowup_linf must be positive");
}

std::optional<Real> DiagnosticsConfig::effective_delta(Real beta) const {
  if (!track_delta) return std::nullopt;
  const Real d = delta ? *delta : std::min(2.0 * beta - 2.0, 0.5) / 2.0;
  if (!(d > 0.0)) return std::nullopt;
  return d;
}

// ---------------------------------------------------------------------------
// NormSeries

std::size_t NormSeries::column_index(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw Error("NormSeries: no column named '" + name + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

bool NormSeries::has_column(const std::string& name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

Real NormSeries::value(std::size_t row, const std::string& name) const {
  return rows_.at(row)[column_index(name)];
}

std::vector<Real> NormSeries::column(const std::string& name) const {
  const std::size_t c = column_index(name);
  std::vector<Real> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(r[c]);
  return out;
}

void NormSeries::append(Real time, std::vector<Real> values, bool blowup_marker) {
  if (blown_up_) throw Error("NormSeries: cannot append after the blow-up marker");
  if (values.size() != names_.size()) throw Error("NormSeries: row width mismatch");
  if (!times_.empty() && !(time > times_.back())) {
    throw Error("NormSeries: sample times must be strictly increasing");
  }
  times_.push_back(time);
  rows_.push_back(std::move(values));
  blown_up_ = blowup_marker;
}

void NormSeries::truncate_after(Real t) {
  while (!times_.empty() && times_.back() > t) {
    times_.pop_back();
    rows_.pop_back();
    blown_up_ = false;
  }
}

void NormSeries::write_csv(std::ostream& os) const {
  os << "time";
  for (const auto& n : names_) os << ',' << n;
  os << ",blowup\n";
  char buf[32];
  for (std::size_t i = 0; i < times_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", times_[i]);
    os << buf;
    for (Real v : rows_[i]) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os << ',' << buf;
    }
    const bool marker = blown_up_ && i + 1 == times_.size();
    os << ',' << (marker ? 1 : 0) << '\n';
  }
}

void NormSeries::write_csv(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write series CSV '" + path + "'");
  write_csv(out);
}

NormSeries NormSeries::read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read series CSV '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw Error("series CSV '" + path + "' is empty");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header.size() < 2 || header.front() != "time" || header.back() != "blowup") {
    throw Error("series CSV '" + path + "': header must start with 'time' and end with 'blowup'");
  }
  NormSeries s(std::vector<std::string>(header.begin() + 1, header.end() - 1));
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<Real> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        cells.push_back(std::stod(cell));
      } catch (const std::exception&) {
        // stod rejects "nan"/"inf" spellings on some platforms; strtod does not
        cells.push_back(std::strtod(cell.c_str(), nullptr));
      }
    }
    if (cells.size() != header.size()) {
      throw Error("series CSV '" + path + "': line " + std::to_string(lineno) +
                  " has the wrong number of columns");
    }
    const bool marker = cells.back() != 0.0;
    s.append(cells.front(), std::vector<Real>(cells.begin() + 1, cells.end() - 1), marker);
  }
  return s;
}

// ---------------------------------------------------------------------------
// norms

Real lp_norm(const PhysicalField& f, Real p, const Grid2D& grid) {
  if (!(p >= 1.0)) throw Error("lp_norm: p must be >= 1");
  const Real m = f.abs().maxCoeff();
  if (m == 0.0) return 0.0;
  // scale by the maximum to keep |f|^p representable for large p
  const Real sum = (f.abs() / m).pow(p).sum();
  return m * std::pow(grid.cell_area() * sum, 1.0 / p);
}

Real linf_norm(const PhysicalField& f) { return f.abs().maxCoeff(); }

Real sobolev_norm(const SpectralField& F, Real s) {
  if (!(s >= 0.0)) throw Error("sobolev_norm: exponent must be >= 0");
  const Real L = F.grid->box_length();
  if (s == 0.0) return std::sqrt(F.coeffs.abs2().sum()) / L;
  return std::sqrt((F.grid->xi_abs().pow(2.0 * s) * F.coeffs.abs2()).sum()) / L;
}

SobolevSet sobolev_set(const PhysicsParams& params, const DiagnosticsConfig& config) {
  SobolevSet s;
  s.beta = params.beta;
  s.r = std::max(params.beta - 1.0, 0.0);
  s.beta_plus_r = std::max(2.0 * params.beta - 1.0, 0.0);
  if (auto d = config.effective_delta(params.beta)) s.one_plus_delta = 1.0 + *d;
  return s;
}

namespace {

std::string format_exponent(Real p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", p);
  return buf;
}

// Instantaneous quantities, in column order, followed by the integrands that
// feed the accumulated columns.
struct Snapshot {
  std::vector<std::string> names;
  std::vector<Real> values;
  // integrand name -> accumulated column name
  std::vector<std::pair<std::string, std::string>> integrals;
};

Snapshot layout(const PhysicsParams& params, const DiagnosticsConfig& config) {
  Snapshot s;
  s.names = {"energy_u", "energy_b", "l2_omega", "l2_j"};
  for (Real p : config.lp_exponents) s.names.push_back("lp_omega_" + format_exponent(p));
  for (const char* n : {"linf_omega", "linf_j", "sobolev_j_beta", "sobolev_j_r",
                        "sobolev_j_beta_plus_r"}) {
    s.names.push_back(n);
  }
  const SobolevSet set = sobolev_set(params, config);
  if (set.one_plus_delta) s.names.push_back("sobolev_j_1_plus_delta");
  for (const char* n : {"linf_grad_j", "dissipation_u", "dissipation_b"}) s.names.push_back(n);
  s.integrals = {{"sobolev_j_beta", "int_sobolev_j_sq_beta"},
                 {"sobolev_j_r", "int_sobolev_j_sq_r"},
                 {"sobolev_j_beta_plus_r", "int_sobolev_j_sq_beta_plus_r"}};
  if (set.one_plus_delta) {
    s.integrals.push_back({"sobolev_j_1_plus_delta", "int_sobolev_j_sq_1_plus_delta"});
  }
  s.integrals.push_back({"linf_grad_j", "int_linf_grad_j_sq"});
  s.integrals.push_back({"bkm", "bkm_integral"});
  s.integrals.push_back({"dissipation", "int_dissipation"});
  return s;
}

}  // namespace

std::vector<std::string> diagnostic_names(const PhysicsParams& params,
                                          const DiagnosticsConfig& config) {
  Snapshot s = layout(params, config);
  for (const auto& [integrand, name] : s.integrals) s.names.push_back(name);
  return s.names;
}

void record(const FlowState& state, const PhysicsParams& params, const DiagnosticsConfig& config,
            NormSeries& series) {
  const GridPtr& grid = state.grid();
  const Grid2D& g = *grid;
  Snapshot snap = layout(params, config);
  if (series.names().empty() && series.empty()) {
    series = NormSeries(diagnostic_names(params, config));
  } else if (series.names() != diagnostic_names(params, config)) {
    throw Error("record: series columns do not match the diagnostics configuration");
  }
  if (!series.empty() && !(state.time > series.times().back())) {
    throw Error("record: state time must exceed the last recorded time");
  }

  const SpectralVector u = biot_savart(state.omega_hat);
  const SpectralVector b = b_from_current(state.j_hat);
  PhysicalField w, j, jx, jy;
  detail::to_physical_pair(state.omega_hat.coeffs, state.j_hat.coeffs, g, w, j);
  const SpectralVector gj = gradient(state.j_hat);
  detail::to_physical_pair(gj.c1.coeffs, gj.c2.coeffs, g, jx, jy);

  const SobolevSet set = sobolev_set(params, config);
  auto sq = [](Real x) { return x * x; };

  std::vector<Real>& v = snap.values;
  v.push_back(0.5 * (sq(l2_norm(u.c1)) + sq(l2_norm(u.c2))));
  v.push_back(0.5 * (sq(l2_norm(b.c1)) + sq(l2_norm(b.c2))));
  v.push_back(l2_norm(state.omega_hat));
  v.push_back(l2_norm(state.j_hat));
  for (Real p : config.lp_exponents) v.push_back(lp_norm(w, p, g));
  const Real linf_w = linf_norm(w);
  const Real linf_j = linf_norm(j);
  v.push_back(linf_w);
  v.push_back(linf_j);
  v.push_back(sobolev_norm(state.j_hat, set.beta));
  v.push_back(sobolev_norm(state.j_hat, set.r));
  v.push_back(sobolev_norm(state.j_hat, set.beta_plus_r));
  if (set.one_plus_delta) v.push_back(sobolev_norm(state.j_hat, *set.one_plus_delta));
  const Real linf_grad_j = (jx.square() + jy.square()).sqrt().maxCoeff();
  v.push_back(linf_grad_j);
  const Real diss_u = params.nu == 0.0 ? 0.0
                                       : params.nu * (sq(sobolev_norm(u.c1, params.alpha)) +
                                                      sq(sobolev_norm(u.c2, params.alpha)));
  const Real diss_b = params.kappa == 0.0 ? 0.0
                                          : params.kappa * (sq(sobolev_norm(b.c1, params.beta)) +
                                                            sq(sobolev_norm(b.c2, params.beta)));
  v.push_back(diss_u);
  v.push_back(diss_b);

  // integrands: squared Sobolev norms, ||grad j||^2, BKM sum, total dissipation
  auto integrand_now = [&](const std::string& key) -> Real {
    if (key == "bkm") return linf_w + linf_j;
    if (key == "dissipation") return diss_u + diss_b;
    if (key == "linf_grad_j") return sq(linf_grad_j);
    const auto it = std::find(snap.names.begin(), snap.names.end(), key);
    return sq(v[static_cast<std::size_t>(it - snap.names.begin())]);
  };
  auto integrand_prev = [&](const std::string& key) -> Real {
    const std::size_t last = series.size() - 1;
    if (key == "bkm") return series.value(last, "linf_omega") + series.value(last, "linf_j");
    if (key == "dissipation") {
      return series.value(last, "dissipation_u") + series.value(last, "dissipation_b");
    }
    return sq(series.value(last, key));
  };
  for (const auto& [key, name] : snap.integrals) {
    Real acc = 0.0;
    if (!series.empty()) {
      const Real dt = state.time - series.times().back();
      acc = series.value(series.size() - 1, name) +
            0.5 * dt * (integrand_prev(key) + integrand_now(key));
    }
    v.push_back(acc);
  }

  const bool finite = std::all_of(v.begin(), v.end(), [](Real x) { return std::isfinite(x); });
  const bool overflow = linf_w > config.blowup_linf;
  series.append(state.time, std::move(v), !finite || overflow);
  if (!finite || overflow) {
    std::ostringstream os;
    os << "record: blow-up at t=" << state.time << " (||omega||_inf=" << linf_w << ")";
    throw Error(os.str());
  }
}

// ---------------------------------------------------------------------------
// reports

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::bounded: return "bounded";
    case Verdict::growing: return "growing";
    case Verdict::blown_up: return "blown_up";
  }
  return "?";
}

namespace {

Real log_slope(const std::vector<Real>& t, const std::vector<Real>& y, std::size_t first) {
  Real st = 0, sy = 0, stt = 0, sty = 0;
  std::size_t m = 0;
  for (std::size_t i = first; i < t.size(); ++i) {
    if (!(y[i] > 0.0)) continue;
    const Real ly = std::log(y[i]);
    st += t[i];
    sy += ly;
    stt += t[i] * t[i];
    sty += t[i] * ly;
    ++m;
  }
  if (m < 2) return 0.0;
  const Real den = m * stt - st * st;
  return den > 0.0 ? (m * sty - st * sy) / den : 0.0;
}

}  // namespace

BkmSummary bkm_report(const NormSeries& series, const DiagnosticsConfig& config) {
  BkmSummary out;
  if (series.empty()) throw Error("bkm_report: empty series");
  const std::size_t last = series.size() - 1;
  const auto& t = series.times();
  out.horizon = t.back() - t.front();
  out.times = t;
  const auto w = series.column("linf_omega");
  const auto j = series.column("linf_j");
  const auto gj = series.column("linf_grad_j");
  for (std::size_t i = 0; i < t.size(); ++i) {
    out.bkm_integrand.push_back(w[i] + j[i]);
    out.grad_j_integrand.push_back(gj[i] * gj[i]);
  }
  out.bkm_integral = series.value(last, "bkm_integral");
  out.int_linf_grad_j_sq = series.value(last, "int_linf_grad_j_sq");

  if (series.blown_up()) {
    out.verdict = Verdict::blown_up;
    return out;
  }

  const Real window_start = t.back() - config.final_window * out.horizon;
  std::size_t first = 0;
  while (first < t.size() && t[first] < window_start) ++first;
  out.bkm_log_slope = log_slope(t, out.bkm_integrand, first);
  out.grad_j_log_slope = log_slope(t, out.grad_j_integrand, first);

  // energy-type quantities: the two left-hand sides plus their constituents
  const auto lw = series.column("l2_omega");
  const auto lj = series.column("l2_j");
  const auto jr = series.column("sobolev_j_r");
  const auto ib = series.column("int_sobolev_j_sq_beta");
  const auto ibr = series.column("int_sobolev_j_sq_beta_plus_r");
  std::vector<std::pair<std::string, std::vector<Real>>> tracked = {
      {"l2_omega", lw}, {"l2_j", lj}, {"sobolev_j_r", jr}};
  std::vector<Real> first_bound(t.size()), second_bound(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    first_bound[i] = lw[i] * lw[i] + lj[i] * lj[i] + ib[i];
    second_bound[i] = jr[i] * jr[i] + ibr[i];
  }
  tracked.push_back({"omega_j_energy_bound", first_bound});
  tracked.push_back({"sobolev_r_bound", second_bound});

  const Real transient_end = t.front() + config.transient_fraction * out.horizon;
  for (const auto& [name, values] : tracked) {
    Real transient_max = 0.0, overall = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] <= transient_end) transient_max = std::max(transient_max, values[i]);
      overall = std::max(overall, values[i]);
    }
    const Real ratio = transient_max > 0.0 ? overall / transient_max : (overall > 0.0 ? 1e300 : 0.0);
    if (ratio > out.transient_ratio) {
      out.transient_ratio = ratio;
      out.transient_worst = name;
    }
  }

  const bool slope_growth = std::max(out.bkm_log_slope, out.grad_j_log_slope) > config.slope_threshold;
  const bool transient_growth = out.transient_ratio > config.growth_factor;
  out.verdict = (slope_growth || transient_growth) ? Verdict::growing : Verdict::bounded;
  return out;
}

Real energy_balance_residual(const NormSeries& series) {
  if (series.size() < 2) return 0.0;
  const std::size_t last = series.size() - 1;
  const Real e0 = series.value(0, "energy_u") + series.value(0, "energy_b");
  const Real e1 = series.value(last, "energy_u") + series.value(last, "energy_b");
  const Real diss = series.value(last, "int_dissipation") - series.value(0, "int_dissipation");
  const Real T = series.times().back() - series.times().front();
  if (e0 == 0.0 || T == 0.0) return 0.0;
  return std::abs(e1 - e0 + diss) / (e0 * T);
}

}  // namespace gmhd
