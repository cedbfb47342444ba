#include "gmhd/config.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace gmhd {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Context {
  std::string source;
  int line = 0;
  std::string key;

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream os;
    os << "config " << source << " line " << line << ": key '" << key << "': " << what;
    throw Error(os.str());
  }
};

Real parse_real(const std::string& text, const Context& ctx) {
  std::string t = trim(text);
  Real factor = 1.0;
  if (t.size() >= 2 && t.compare(t.size() - 2, 2, "pi") == 0) {
    factor = kPi;
    t = trim(t.substr(0, t.size() - 2));
    if (t.empty()) return kPi;
    if (t.back() == '*') t = trim(t.substr(0, t.size() - 1));
  }
  char* end = nullptr;
  errno = 0;
  const Real v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v)) {
    ctx.fail("expected a finite number, got '" + text + "'");
  }
  return v * factor;
}

long long parse_integer(const std::string& text, const Context& ctx) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
    ctx.fail("expected an integer, got '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& text, const Context& ctx) {
  const long long v = parse_integer(text, ctx);
  if (v < -(1LL << 30) || v > (1LL << 30)) ctx.fail("integer out of range");
  return static_cast<int>(v);
}

std::uint64_t parse_u64(const std::string& text, const Context& ctx) {
  const std::string t = trim(text);
  if (t.empty() || t[0] == '-') ctx.fail("expected an unsigned integer, got '" + text + "'");
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
  if (end != t.c_str() + t.size() || errno == ERANGE) {
    ctx.fail("expected an unsigned integer, got '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& text, const Context& ctx) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  ctx.fail("expected true or false, got '" + text + "'");
}

template <class T, class F>
std::vector<T> parse_list(const std::string& text, const Context& ctx, F item) {
  std::vector<T> out;
  if (trim(text).empty()) return out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(item(cell, ctx));
  return out;
}

std::vector<Real> parse_reals(const std::string& text, const Context& ctx) {
  return parse_list<Real>(text, ctx, parse_real);
}

using Setter = std::function<void(RunConfig&, const std::string&, const Context&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"physics.preset",
       [](RunConfig& c, const std::string& v, const Context& ctx) {
         const std::string p = trim(v);
         const Real beta = c.physics.beta;
         if (p == "standard") {
           c.physics = PhysicsParams::standard(beta);
         } else if (p == "ideal") {
           c.physics = PhysicsParams::ideal();
           c.physics.beta = beta;
         } else {
           ctx.fail("unknown preset '" + p + "' (expected standard or ideal)");
         }
       }},
      {"physics.nu", [](RunConfig& c, const std::string& v, const Context& x) { c.physics.nu = parse_real(v, x); }},
      {"physics.alpha", [](RunConfig& c, const std::string& v, const Context& x) { c.physics.alpha = parse_real(v, x); }},
      {"physics.kappa", [](RunConfig& c, const std::string& v, const Context& x) { c.physics.kappa = parse_real(v, x); }},
      {"physics.beta", [](RunConfig& c, const std::string& v, const Context& x) { c.physics.beta = parse_real(v, x); }},
      {"grid.n", [](RunConfig& c, const std::string& v, const Context& x) { c.n = parse_int(v, x); }},
      {"grid.box_length", [](RunConfig& c, const std::string& v, const Context& x) { c.box_length = parse_real(v, x); }},
      {"ic.kind",
       [](RunConfig& c, const std::string& v, const Context& x) {
         try {
           c.ic.kind = parse_initial_kind(trim(v));
         } catch (const Error& e) {
           x.fail(e.what());
         }
       }},
      {"ic.amplitude", [](RunConfig& c, const std::string& v, const Context& x) { c.ic.amplitude = parse_real(v, x); }},
      {"ic.magnetic_amplitude", [](RunConfig& c, const std::string& v, const Context& x) { c.ic.magnetic_amplitude = parse_real(v, x); }},
      {"ic.seed", [](RunConfig& c, const std::string& v, const Context& x) { c.ic.seed = parse_u64(v, x); }},
      {"ic.k_min", [](RunConfig& c, const std::string& v, const Context& x) { c.ic.k_min = parse_int(v, x); }},
      {"ic.k_max", [](RunConfig& c, const std::string& v, const Context& x) { c.ic.k_max = parse_int(v, x); }},
      {"ic.mode_k1", [](RunConfig& c, const std::string& v, const Context& x) { c.ic.mode_k1 = parse_int(v, x); }},
      {"ic.mode_k2", [](RunConfig& c, const std::string& v, const Context& x) { c.ic.mode_k2 = parse_int(v, x); }},
      {"ic.file", [](RunConfig& c, const std::string& v, const Context&) { c.ic.file = trim(v); }},
      {"ic.series", [](RunConfig& c, const std::string& v, const Context&) { c.ic_series = trim(v); }},
      {"stepper.scheme",
       [](RunConfig& c, const std::string& v, const Context& x) {
         try {
           c.stepper.scheme = parse_scheme(trim(v));
         } catch (const Error& e) {
           x.fail(e.what());
         }
       }},
      {"stepper.cfl", [](RunConfig& c, const std::string& v, const Context& x) { c.stepper.cfl = parse_real(v, x); }},
      {"stepper.dt_max", [](RunConfig& c, const std::string& v, const Context& x) { c.stepper.dt_max = parse_real(v, x); }},
      {"stepper.t_end", [](RunConfig& c, const std::string& v, const Context& x) { c.stepper.t_end = parse_real(v, x); }},
      {"diagnostics.interval", [](RunConfig& c, const std::string& v, const Context& x) { c.diagnostics.interval = parse_real(v, x); }},
      {"diagnostics.lp", [](RunConfig& c, const std::string& v, const Context& x) { c.diagnostics.lp_exponents = parse_reals(v, x); }},
      {"diagnostics.track_delta", [](RunConfig& c, const std::string& v, const Context& x) { c.diagnostics.track_delta = parse_bool(v, x); }},
      {"diagnostics.delta",
       [](RunConfig& c, const std::string& v, const Context& x) {
         if (trim(v) == "auto") {
           c.diagnostics.delta.reset();
         } else {
           c.diagnostics.delta = parse_real(v, x);
         }
       }},
      {"diagnostics.slope_threshold", [](RunConfig& c, const std::string& v, const Context& x) { c.diagnostics.slope_threshold = parse_real(v, x); }},
      {"diagnostics.final_window", [](RunConfig& c, const std::string& v, const Context& x) { c.diagnostics.final_window = parse_real(v, x); }},
      {"diagnostics.growth_factor", [](RunConfig& c, const std::string& v, const Context& x) { c.diagnostics.growth_factor = parse_real(v, x); }},
      {"diagnostics.transient_fraction", [](RunConfig& c, const std::string& v, const Context& x) { c.diagnostics.transient_fraction = parse_real(v, x); }},
      {"diagnostics.blowup_linf", [](RunConfig& c, const std::string& v, const Context& x) { c.diagnostics.blowup_linf = parse_real(v, x); }},
      {"output.directory", [](RunConfig& c, const std::string& v, const Context&) { c.output.directory = trim(v); }},
      {"output.checkpoint_interval", [](RunConfig& c, const std::string& v, const Context& x) { c.output.checkpoint_interval = parse_real(v, x); }},
      {"sweep.alpha", [](RunConfig& c, const std::string& v, const Context& x) { c.sweep.alpha = parse_reals(v, x); }},
      {"sweep.beta", [](RunConfig& c, const std::string& v, const Context& x) { c.sweep.beta = parse_reals(v, x); }},
      {"sweep.n", [](RunConfig& c, const std::string& v, const Context& x) { c.sweep.n = parse_list<int>(v, x, parse_int); }},
      {"sweep.workers", [](RunConfig& c, const std::string& v, const Context& x) { c.sweep.workers = parse_int(v, x); }},
      {"kernel.beta", [](RunConfig& c, const std::string& v, const Context& x) { c.kernel.beta = parse_reals(v, x); }},
      {"kernel.l_max", [](RunConfig& c, const std::string& v, const Context& x) { c.kernel.l_max = parse_int(v, x); }},
      {"kernel.eta", [](RunConfig& c, const std::string& v, const Context& x) { c.kernel.eta = parse_reals(v, x); }},
      {"kernel.r_max", [](RunConfig& c, const std::string& v, const Context& x) { c.kernel.r_max = parse_real(v, x); }},
      {"kernel.n_samples", [](RunConfig& c, const std::string& v, const Context& x) { c.kernel.n_samples = parse_int(v, x); }},
      {"kernel.radius", [](RunConfig& c, const std::string& v, const Context& x) { c.kernel.bounds.radius = parse_real(v, x); }},
      {"kernel.box_length", [](RunConfig& c, const std::string& v, const Context& x) { c.kernel.bounds.box_length = parse_real(v, x); }},
      {"kernel.grid_n", [](RunConfig& c, const std::string& v, const Context& x) { c.kernel.bounds.n = parse_int(v, x); }},
  };
  return table;
}

std::string fmt(Real v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_same_v<T, Real>) {
      out += fmt(v[i]);
    } else {
      out += std::to_string(v[i]);
    }
  }
  return out;
}

}  // namespace

void RunConfig::validate() const {
  physics.validate();
  if (n < 8 || n % 2 != 0) throw Error("config: grid.n must be even and >= 8");
  if (!(box_length > 0.0)) throw Error("config: grid.box_length must be positive");
  if (ic.kind == InitialKind::from_file && ic.file.empty()) {
    throw Error("config: ic.file is required when ic.kind = from_file");
  }
  if (!ic_series.empty() && ic.kind != InitialKind::from_file) {
    throw Error("config: ic.series only applies to ic.kind = from_file");
  }
  stepper.validate();
  diagnostics.validate();
  if (output.directory.empty()) throw Error("config: output.directory must not be empty");
  if (!(output.checkpoint_interval >= 0.0)) {
    throw Error("config: output.checkpoint_interval must be >= 0");
  }
  if (sweep.workers < 0) throw Error("config: sweep.workers must be >= 0");
  for (int v : sweep.n) {
    if (v < 8 || v % 2 != 0) throw Error("config: sweep.n entries must be even and >= 8");
  }
  for (Real v : sweep.alpha) {
    if (!(v >= 0.0)) throw Error("config: sweep.alpha entries must be >= 0");
  }
  for (Real v : sweep.beta) {
    if (!(v >= 0.0)) throw Error("config: sweep.beta entries must be >= 0");
  }
  if (kernel.n_samples < 2) throw Error("config: kernel.n_samples must be >= 2");
  if (kernel.l_max < 0 || kernel.l_max > 4) throw Error("config: kernel.l_max must lie in [0, 4]");
}

RunConfig parse_config(std::istream& in, const std::string& source) {
  RunConfig config;
  std::string section;
  std::string raw;
  Context ctx{source, 0, ""};
  while (std::getline(in, raw)) {
    ++ctx.line;
    std::string line = raw;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        ctx.key = line;
        ctx.fail("malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    ctx.key = section.empty() ? trim(line.substr(0, eq)) : section + "." + trim(line.substr(0, eq));
    if (eq == std::string::npos) ctx.fail("expected key = value");
    const auto it = setters().find(ctx.key);
    if (it == setters().end()) ctx.fail("unknown key");
    it->second(config, line.substr(eq + 1), ctx);
  }
  config.validate();
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("config: cannot open '" + path + "'");
  return parse_config(in, "'" + path + "'");
}

std::string format_config(const RunConfig& c) {
  std::ostringstream os;
  os << "[physics]\nnu = " << fmt(c.physics.nu) << "\nalpha = " << fmt(c.physics.alpha)
     << "\nkappa = " << fmt(c.physics.kappa) << "\nbeta = " << fmt(c.physics.beta) << "\n\n";
  os << "[grid]\nn = " << c.n << "\nbox_length = " << fmt(c.box_length) << "\n\n";
  os << "[ic]\nkind = " << to_string(c.ic.kind) << "\namplitude = " << fmt(c.ic.amplitude)
     << "\nmagnetic_amplitude = " << fmt(c.ic.magnetic_amplitude) << "\nseed = " << c.ic.seed
     << "\nk_min = " << c.ic.k_min << "\nk_max = " << c.ic.k_max << "\nmode_k1 = " << c.ic.mode_k1
     << "\nmode_k2 = " << c.ic.mode_k2 << "\n";
  if (!c.ic.file.empty()) os << "file = " << c.ic.file << "\n";
  if (!c.ic_series.empty()) os << "series = " << c.ic_series << "\n";
  os << "\n[stepper]\nscheme = " << to_string(c.stepper.scheme) << "\ncfl = " << fmt(c.stepper.cfl)
     << "\ndt_max = " << fmt(c.stepper.dt_max) << "\nt_end = " << fmt(c.stepper.t_end) << "\n\n";
  const DiagnosticsConfig& d = c.diagnostics;
  os << "[diagnostics]\ninterval = " << fmt(d.interval) << "\nlp = " << join(d.lp_exponents)
     << "\ntrack_delta = " << (d.track_delta ? "true" : "false")
     << "\ndelta = " << (d.delta ? fmt(*d.delta) : std::string("auto"))
     << "\nslope_threshold = " << fmt(d.slope_threshold) << "\nfinal_window = " << fmt(d.final_window)
     << "\ngrowth_factor = " << fmt(d.growth_factor)
     << "\ntransient_fraction = " << fmt(d.transient_fraction)
     << "\nblowup_linf = " << fmt(d.blowup_linf) << "\n\n";
  os << "[output]\ndirectory = " << c.output.directory
     << "\ncheckpoint_interval = " << fmt(c.output.checkpoint_interval) << "\n\n";
  os << "[sweep]\nalpha = " << join(c.sweep.alpha) << "\nbeta = " << join(c.sweep.beta)
     << "\nn = " << join(c.sweep.n) << "\nworkers = " << c.sweep.workers << "\n\n";
  os << "[kernel]\nbeta = " << join(c.kernel.beta) << "\nl_max = " << c.kernel.l_max
     << "\neta = " << join(c.kernel.eta) << "\nr_max = " << fmt(c.kernel.r_max)
     << "\nn_samples = " << c.kernel.n_samples << "\nradius = " << fmt(c.kernel.bounds.radius)
     << "\nbox_length = " << fmt(c.kernel.bounds.box_length)
     << "\ngrid_n = " << c.kernel.bounds.n << "\n";
  return os.str();
}

}  // namespace gmhd
