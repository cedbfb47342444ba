#include "gmhd/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "gmhd/checkpoint.hpp"

namespace gmhd {

namespace fs = std::filesystem;

namespace {

std::string fmt(Real v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_fmt(Real v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  const std::string probe = (fs::path(dir) / ".write_probe").string();
  std::ofstream test(probe);
  if (ec || !test) throw Error("output.directory '" + dir + "' is not writable");
  test.close();
  fs::remove(probe, ec);
}

bool is_multiple(Real t, Real interval) {
  if (!(interval > 0.0)) return false;
  const Real k = std::round(t / interval);
  return k >= 1.0 && std::abs(t - k * interval) <= 1e-9 * std::max(1.0, std::abs(t));
}

void write_report(const std::string& path, const RunOutcome& o, Real initial_dt) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write report '" + path + "'");
  const BkmSummary& s = o.summary;
  out << "status=" << o.status << "\n"
      << "final_time=" << fmt(o.final_time) << "\n"
      << "steps=" << o.steps << "\n"
      << "initial_dt=" << fmt(initial_dt) << "\n"
      << "verdict=" << to_string(s.verdict) << "\n"
      << "bkm_integral=" << fmt(s.bkm_integral) << "\n"
      << "int_linf_grad_j_sq=" << fmt(s.int_linf_grad_j_sq) << "\n"
      << "bkm_log_slope=" << fmt(s.bkm_log_slope) << "\n"
      << "grad_j_log_slope=" << fmt(s.grad_j_log_slope) << "\n"
      << "transient_ratio=" << fmt(s.transient_ratio) << "\n"
      << "transient_worst=" << s.transient_worst << "\n"
      << "energy_balance_residual=" << fmt(o.energy_residual) << "\n";
}

int worker_count(const RunConfig& config, const CliOverrides& cli) {
  if (cli.workers) return *cli.workers;
  if (const char* env = std::getenv("GMHD2D_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) {
      throw Error("GMHD2D_WORKERS must be a positive integer (got '" + std::string(env) + "')");
    }
    return static_cast<int>(v);
  }
  if (config.sweep.workers > 0) return config.sweep.workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

RunConfig load_with_overrides(const std::string& path, const CliOverrides& cli) {
  RunConfig config = load_config(path);
  if (cli.out_dir) config.output.directory = *cli.out_dir;
  if (cli.seed) config.ic.seed = *cli.seed;
  return config;
}

}  // namespace

RunOutcome execute_run(const RunConfig& config, std::ostream& log) {
  config.validate();
  ensure_directory(config.output.directory);
  const fs::path dir(config.output.directory);
  const GridPtr grid = Grid2D::create(config.n, config.box_length);

  const FlowState initial = make_initial_condition(config.ic, grid);
  RunOptions options;
  if (!config.ic_series.empty()) options.resume = NormSeries::read_csv(config.ic_series);
  const Real start = initial.time;
  const Real interval = config.output.checkpoint_interval;
  options.on_record = [&](const FlowState& state, const NormSeries&) {
    if (state.time > start && is_multiple(state.time, interval)) {
      char name[64];
      std::snprintf(name, sizeof name, "checkpoint_t%.6f.bin", state.time);
      write_checkpoint((dir / name).string(), Checkpoint::from_state(state, config.physics));
    }
  };
  const Real initial_dt = choose_dt(initial, config.physics, config.stepper);
  log << "run: n=" << config.n << " beta=" << config.physics.beta << " alpha=" << config.physics.alpha
      << " t=" << start << ".." << config.stepper.t_end << " initial dt=" << initial_dt << "\n";

  RunOutcome outcome;
  NormSeries series;
  try {
    RunResult result = run(initial, config.physics, config.stepper, config.diagnostics, options);
    write_checkpoint((dir / "final.bin").string(),
                     Checkpoint::from_state(result.state, config.physics));
    series = std::move(result.series);
    outcome.status = "completed";
    outcome.steps = result.steps;
    outcome.final_time = result.state.time;
  } catch (const BlowupDetected& e) {
    series = e.series();
    outcome.status = "blowup";
    outcome.final_time = e.time();
    log << e.what() << "\n";
  }
  series.write_csv((dir / "series.csv").string());
  outcome.summary = bkm_report(series, config.diagnostics);
  outcome.energy_residual = energy_balance_residual(series);
  write_report((dir / "report.txt").string(), outcome, initial_dt);
  return outcome;
}

int cmd_run(const std::string& config_path, const CliOverrides& cli, std::ostream& out,
            std::ostream& err) {
  try {
    const RunConfig config = load_with_overrides(config_path, cli);
    const RunOutcome o = execute_run(config, out);
    out << "status=" << o.status << " verdict=" << to_string(o.summary.verdict)
        << " bkm_integral=" << o.summary.bkm_integral
        << " int_linf_grad_j_sq=" << o.summary.int_linf_grad_j_sq << "\n";
    return o.status == "blowup" ? kExitResult : kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_sweep(const std::string& config_path, const CliOverrides& cli, std::ostream& out,
              std::ostream& err) {
  RunConfig base;
  int workers = 1;
  try {
    base = load_with_overrides(config_path, cli);
    workers = worker_count(base, cli);
    if (workers < 1) throw Error("--workers must be >= 1");
    ensure_directory(base.output.directory);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const std::vector<Real> alphas =
      base.sweep.alpha.empty() ? std::vector<Real>{base.physics.alpha} : base.sweep.alpha;
  const std::vector<Real> betas =
      base.sweep.beta.empty() ? std::vector<Real>{base.physics.beta} : base.sweep.beta;
  const std::vector<int> ns = base.sweep.n.empty() ? std::vector<int>{base.n} : base.sweep.n;
  std::vector<RunConfig> cells;
  for (Real a : alphas) {
    for (Real b : betas) {
      for (int n : ns) {
        RunConfig c = base;
        c.physics.alpha = a;
        c.physics.beta = b;
        c.n = n;
        char name[96];
        std::snprintf(name, sizeof name, "cell_%03zu_alpha%s_beta%s_n%d", cells.size(),
                      short_fmt(a).c_str(), short_fmt(b).c_str(), n);
        c.output.directory = (fs::path(base.output.directory) / name).string();
        cells.push_back(std::move(c));
      }
    }
  }
  if (cells.size() > 200) {
    err << "error: sweep grid has " << cells.size() << " cells (limit 200)\n";
    return kExitUsage;
  }

  std::vector<RunOutcome> outcomes(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&]() {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      std::ostringstream log;
      try {
        ensure_directory(cells[i].output.directory);
        std::ofstream((fs::path(cells[i].output.directory) / "config.ini").string())
            << format_config(cells[i]);
        outcomes[i] = execute_run(cells[i], log);
      } catch (const std::exception& e) {
        outcomes[i].status = std::string("failed: ") + e.what();
      }
      std::lock_guard<std::mutex> lock(log_mutex);
      out << "cell " << i << " alpha=" << cells[i].physics.alpha << " beta=" << cells[i].physics.beta
          << " n=" << cells[i].n << ": " << outcomes[i].status << " "
          << to_string(outcomes[i].summary.verdict) << "\n";
    }
  };
  const int pool_size = std::min<int>(workers, static_cast<int>(cells.size()));
  std::vector<std::thread> pool;
  for (int w = 0; w < pool_size; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  const std::string summary_path = (fs::path(base.output.directory) / "summary.csv").string();
  std::ofstream summary(summary_path, std::ios::trunc);
  if (!summary) {
    err << "error: cannot write '" << summary_path << "'\n";
    return kExitUsage;
  }
  summary << "alpha,beta,n,verdict,bkm_integral,int_linf_grad_j_sq,status\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const RunOutcome& o = outcomes[i];
    std::string status = o.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    const bool ran = o.status == "completed" || o.status == "blowup";
    summary << fmt(cells[i].physics.alpha) << ',' << fmt(cells[i].physics.beta) << ','
            << cells[i].n << ',' << (ran ? to_string(o.summary.verdict) : "none") << ','
            << fmt(o.summary.bkm_integral) << ',' << fmt(o.summary.int_linf_grad_j_sq) << ','
            << status << '\n';
  }
  return kExitOk;
}

int cmd_kernel(const std::string& config_path, const CliOverrides& cli, std::ostream& out,
               std::ostream& err) {
  RunConfig config;
  try {
    config = load_with_overrides(config_path, cli);
    if (config.kernel.beta.empty()) throw Error("kernel.beta: empty beta list");
    for (Real b : config.kernel.beta) {
      if (!(b > 0.0)) throw Error("kernel.beta: entries must be positive");
    }
    for (Real e : config.kernel.eta) {
      if (!(e >= 0.0)) throw Error("kernel.eta: entries must be >= 0");
    }
    ensure_directory(config.output.directory);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  const fs::path dir(config.output.directory);
  try {
    std::ofstream report((dir / "kernel_l1.csv").string(), std::ios::trunc);
    report << "beta,quantity,order,value,refined,error_bar,relative_change\n";
    for (Real beta : config.kernel.beta) {
      const KernelTable table =
          kernel_profile(beta, config.kernel.r_max, config.kernel.n_samples);
      write_kernel_csv(table, (dir / ("kernel_beta_" + short_fmt(beta) + ".csv")).string());
      const Real h0 = std::tgamma(1.0 / beta) / (4.0 * kPi * beta);
      out << "beta=" << beta << " h(0)=" << fmt(table.values.front()) << " (closed form "
          << fmt(h0) << ") mass=" << fmt(table.mass()) << " sign_changes=" << table.sign_changes()
          << "\n";
      if (beta == 1.0) {
        Real worst = 0.0;
        for (std::size_t i = 0; i < table.radii.size(); ++i) {
          const Real r = table.radii[i];
          worst = std::max(worst, std::abs(table.values[i] - std::exp(-r * r / 4.0) / (4.0 * kPi)));
        }
        out << "beta=1 gaussian max abs error=" << worst << "\n";
      }
      const KernelL1Report r =
          kernel_l1_bounds(beta, config.kernel.l_max, config.kernel.eta, config.kernel.bounds);
      auto emit = [&](const char* what, const L1Estimate& e) {
        report << fmt(beta) << ',' << what << ',' << fmt(e.order) << ',' << fmt(e.value) << ','
               << fmt(e.refined) << ',' << fmt(e.error_bar) << ',' << fmt(e.relative_change())
               << '\n';
        out << "  " << what << " " << e.order << ": " << e.value << " (refined " << e.refined
            << ", rel change " << e.relative_change() << ")\n";
      };
      for (const auto& e : r.gradient) emit("grad", e);
      for (const auto& e : r.fractional) emit("lambda", e);
    }
  } catch (const QuadratureFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitResult;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

int cmd_inspect(const std::string& checkpoint_path, std::ostream& out, std::ostream& err) {
  try {
    const Checkpoint ck = read_checkpoint(checkpoint_path);
    out << "magic=GMHD2D\nversion=" << ck.version << "\nn=" << ck.n
        << "\nbox_length=" << fmt(ck.box_length) << "\ntime=" << fmt(ck.time)
        << "\nnu=" << fmt(ck.params.nu) << "\nalpha=" << fmt(ck.params.alpha)
        << "\nkappa=" << fmt(ck.params.kappa) << "\nbeta=" << fmt(ck.params.beta)
        << "\npayload_bytes=" << 2 * static_cast<std::size_t>(ck.n) * ck.n * 16 << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace gmhd
