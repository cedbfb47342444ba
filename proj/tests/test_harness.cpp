#include <doctest.h>

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "gmhd/checkpoint.hpp"
#include "gmhd/config.hpp"
#include "gmhd/harness.hpp"
#include "support.hpp"

using namespace gmhd;
namespace fs = std::filesystem;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

int count_lines(const std::string& s) {
  return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

void corrupt(const fs::path& path, std::size_t offset, unsigned char byte) {
  std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
  f.seekp(static_cast<std::streamoff>(offset));
  f.put(static_cast<char>(byte));
}

const char* kSmall =
    "[physics]\npreset = standard\nbeta = 1.25\n"
    "[grid]\nn = 32\n"
    "[stepper]\nt_end = 0.2\n"
    "[diagnostics]\ninterval = 0.05\n"
    "[output]\ncheckpoint_interval = 0.1\n";

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("parsing") {
    const RunConfig c = parse(
        "# comment\n[physics]\npreset = ideal ; trailing\nbeta = 1.5\n"
        "[grid]\nn = 64\nbox_length = 2pi\n"
        "[ic]\nkind = random_bandlimited\nseed = 12345678901234\n"
        "[diagnostics]\nlp = 2, 4, 16\ndelta = 0.1\n"
        "[sweep]\nbeta = 0.4, 0.8\nn = 32, 64\n");
    CHECK(c.physics.kappa == 0.0);
    CHECK(c.physics.beta == 1.5);
    CHECK(c.n == 64);
    CHECK(c.box_length == doctest::Approx(kTwoPi).epsilon(1e-15));
    CHECK(c.ic.kind == InitialKind::random_bandlimited);
    CHECK(c.ic.seed == 12345678901234ULL);
    CHECK(c.diagnostics.lp_exponents == std::vector<Real>{2.0, 4.0, 16.0});
    CHECK(c.diagnostics.delta.value() == 0.1);
    CHECK(c.sweep.n == std::vector<int>{32, 64});

    // a preset applies where it appears
    const RunConfig later = parse("[physics]\nkappa = 3\npreset = standard\n");
    CHECK(later.physics.kappa == 1.0);
    const RunConfig earlier = parse("[physics]\npreset = standard\nkappa = 3\n");
    CHECK(earlier.physics.kappa == 3.0);
  }

  TEST_CASE("errors name the key and line") {
    const std::string unknown = error_of("[physics]\nbeta = 1\nbogus = 2\n");
    CHECK(unknown.find("physics.bogus") != std::string::npos);
    CHECK(unknown.find("line 3") != std::string::npos);
    CHECK(error_of("[nowhere]\nx = 1\n").find("nowhere.x") != std::string::npos);
    CHECK(error_of("[grid]\nn = sixty\n").find("grid.n") != std::string::npos);
    CHECK(error_of("[stepper]\nscheme = euler\n").find("stepper.scheme") != std::string::npos);
    CHECK(error_of("[grid]\nn\n").find("expected key = value") != std::string::npos);
    CHECK(error_of("[grid\n").find("malformed") != std::string::npos);
    CHECK(error_of("[grid]\nn = 7\n").find("grid.n") != std::string::npos);
    CHECK(error_of("[physics]\nkappa = -1\n").find("kappa") != std::string::npos);
    CHECK_FALSE(error_of("[ic]\nkind = from_file\n").empty());
  }

  TEST_CASE("format round trip") {
    RunConfig c = parse(
        "[physics]\nnu = 0.01\nalpha = 0.7\nbeta = 1.1\n[grid]\nn = 48\nbox_length = 4pi\n"
        "[ic]\nkind = single_mode\nmode_k1 = 2\nmode_k2 = -1\n[stepper]\ncfl = 0.3\n"
        "[diagnostics]\ntrack_delta = false\n[output]\ndirectory = /tmp/x\n"
        "[sweep]\nalpha = 0, 0.5\nworkers = 3\n[kernel]\nbeta = 0.6, 1.5\neta = 0.5\n");
    const std::string text = format_config(c);
    const RunConfig back = parse(text);
    CHECK(format_config(back) == text);
    CHECK(back.physics.nu == c.physics.nu);
    CHECK(back.box_length == c.box_length);
    CHECK(back.ic.mode_k2 == -1);
    CHECK(back.sweep.workers == 3);
    CHECK(back.kernel.beta == c.kernel.beta);
    CHECK_FALSE(back.diagnostics.track_delta);
  }
}

TEST_SUITE("checkpoint") {
  TEST_CASE("bitwise roundtrip") {
    const auto g = Grid2D::create(32);
    InitialCondition ic;
    ic.kind = InitialKind::random_bandlimited;
    FlowState s = make_initial_condition(ic, g);
    s.time = 0.1 + 0.2;
    PhysicsParams p{0.01, 0.5, 0.7, 1.3};
    const auto dir = test::scratch_dir("checkpoint_roundtrip");
    const std::string path = (dir / "a.bin").string();
    write_checkpoint(path, Checkpoint::from_state(s, p));
    CHECK(fs::file_size(path) == Checkpoint::kHeaderBytes + 2 * 32 * 32 * 16);

    const Checkpoint ck = read_checkpoint(path);
    CHECK(ck.n == 32);
    CHECK(ck.time == s.time);
    CHECK(ck.params.kappa == 0.7);
    CHECK(std::memcmp(ck.omega.data(), s.omega_hat.coeffs.data(), 32 * 32 * sizeof(Complex)) == 0);
    CHECK(std::memcmp(ck.current.data(), s.j_hat.coeffs.data(), 32 * 32 * sizeof(Complex)) == 0);

    write_checkpoint((dir / "b.bin").string(), ck);
    CHECK(test::slurp(path) == test::slurp(dir / "b.bin"));

    // header layout: magic, then little-endian version 1 and n
    const std::string bytes = test::slurp(path);
    CHECK(bytes.compare(0, 7, std::string("GMHD2D\0", 7)) == 0);
    CHECK(bytes[7] == 1);
    CHECK(bytes[11] == 32);
  }

  TEST_CASE("corrupt headers name the field") {
    const auto g = Grid2D::create(16);
    const FlowState s = make_initial_condition(InitialCondition{}, g);
    const auto dir = test::scratch_dir("checkpoint_corrupt");
    struct Case {
      std::size_t offset;
      unsigned char byte;
      const char* field;
    };
    for (const Case& c : {Case{0, 'X', "magic"}, Case{7, 9, "version"}, Case{11, 7, "n"},
                          Case{26, 0xff, "box_length"}, Case{66, 0xff, "beta"}}) {
      const fs::path path = dir / (std::string(c.field) + ".bin");
      write_checkpoint(path.string(), Checkpoint::from_state(s, PhysicsParams::standard(1.25)));
      corrupt(path, c.offset, c.byte);
      std::string msg;
      try {
        read_checkpoint(path.string());
      } catch (const Error& e) {
        msg = e.what();
      }
      CHECK(msg.find(std::string("'") + c.field + "'") != std::string::npos);
    }
    const fs::path trunc = dir / "trunc.bin";
    write_checkpoint(trunc.string(), Checkpoint::from_state(s, PhysicsParams::standard(1.25)));
    fs::resize_file(trunc, 100);
    CHECK_THROWS_WITH_AS(read_checkpoint(trunc.string()), doctest::Contains("payload"), Error);
    fs::resize_file(trunc, 20);
    CHECK_THROWS_WITH_AS(read_checkpoint(trunc.string()), doctest::Contains("'box_length'"), Error);
  }
}

TEST_SUITE("harness") {
  TEST_CASE("run with t_end = 0 writes one row") {
    const auto dir = test::scratch_dir("cli_t0");
    test::write_text(dir / "c.ini", "[grid]\nn = 16\n[stepper]\nt_end = 0\n");
    std::ostringstream out, err;
    CliOverrides cli;
    cli.out_dir = (dir / "out").string();
    CHECK(cmd_run((dir / "c.ini").string(), cli, out, err) == kExitOk);
    CHECK(count_lines(test::slurp(dir / "out" / "series.csv")) == 2);
    CHECK(test::slurp(dir / "out" / "report.txt").find("verdict=bounded") != std::string::npos);
    CHECK(fs::exists(dir / "out" / "final.bin"));
  }

  TEST_CASE("usage errors exit 1") {
    const auto dir = test::scratch_dir("cli_errors");
    std::ostringstream out, err;
    CHECK(cmd_run((dir / "missing.ini").string(), {}, out, err) == kExitUsage);
    test::write_text(dir / "bad.ini", "[grid]\nsize = 16\n");
    CHECK(cmd_run((dir / "bad.ini").string(), {}, out, err) == kExitUsage);
    CHECK(err.str().find("grid.size") != std::string::npos);
    CHECK(cmd_inspect((dir / "missing.bin").string(), out, err) == kExitUsage);
  }

  TEST_CASE("blow-up exits 2 and keeps the series") {
    const auto dir = test::scratch_dir("cli_blowup");
    test::write_text(dir / "c.ini",
                     "[physics]\npreset = ideal\n[grid]\nn = 32\n[stepper]\nt_end = 2\n"
                     "[diagnostics]\nblowup_linf = 2.05\n");
    std::ostringstream out, err;
    CliOverrides cli;
    cli.out_dir = (dir / "out").string();
    CHECK(cmd_run((dir / "c.ini").string(), cli, out, err) == kExitResult);
    const NormSeries s = NormSeries::read_csv((dir / "out" / "series.csv").string());
    CHECK(s.blown_up());
    CHECK(test::slurp(dir / "out" / "report.txt").find("verdict=blown_up") != std::string::npos);
  }

  TEST_CASE("restart from a checkpoint reproduces the uninterrupted run") {
    const auto dir = test::scratch_dir("cli_restart");
    test::write_text(dir / "full.ini", kSmall);
    std::ostringstream out, err;
    CliOverrides cli;
    cli.out_dir = (dir / "full").string();
    REQUIRE(cmd_run((dir / "full.ini").string(), cli, out, err) == kExitOk);
    const fs::path ck = dir / "full" / "checkpoint_t0.100000.bin";
    REQUIRE(fs::exists(ck));
    CHECK(fs::exists(dir / "full" / "checkpoint_t0.200000.bin"));

    test::write_text(dir / "restart.ini", std::string(kSmall) + "[ic]\nkind = from_file\nfile = " +
                                              ck.string() + "\nseries = " +
                                              (dir / "full" / "series.csv").string() + "\n");
    cli.out_dir = (dir / "restart").string();
    REQUIRE(cmd_run((dir / "restart.ini").string(), cli, out, err) == kExitOk);
    CHECK(test::slurp(dir / "restart" / "series.csv") == test::slurp(dir / "full" / "series.csv"));
    CHECK(test::slurp(dir / "restart" / "final.bin") == test::slurp(dir / "full" / "final.bin"));

    std::ostringstream header;
    CHECK(cmd_inspect(ck.string(), header, err) == kExitOk);
    CHECK(header.str().find("n=32") != std::string::npos);
    CHECK(header.str().find("time=0.10000000000000001") != std::string::npos);

    // a damaged checkpoint is a usage error naming the header field
    const fs::path bad = dir / "bad.bin";
    fs::copy_file(ck, bad);
    corrupt(bad, 8, 0x7f);
    test::write_text(dir / "bad.ini",
                     std::string(kSmall) + "[ic]\nkind = from_file\nfile = " + bad.string() + "\n");
    std::ostringstream err2;
    cli.out_dir = (dir / "bad").string();
    CHECK(cmd_run((dir / "bad.ini").string(), cli, out, err2) == kExitUsage);
    CHECK(err2.str().find("'version'") != std::string::npos);
  }

  TEST_CASE("a 1x1 sweep matches run and sweeps are deterministic") {
    const auto dir = test::scratch_dir("cli_sweep");
    test::write_text(dir / "one.ini", kSmall);
    std::ostringstream out, err;
    CliOverrides cli;
    cli.out_dir = (dir / "run").string();
    REQUIRE(cmd_run((dir / "one.ini").string(), cli, out, err) == kExitOk);
    cli.out_dir = (dir / "sweep").string();
    cli.workers = 1;
    REQUIRE(cmd_sweep((dir / "one.ini").string(), cli, out, err) == kExitOk);
    const fs::path cell = dir / "sweep" / "cell_000_alpha0_beta1.25_n32";
    CHECK(test::slurp(cell / "series.csv") == test::slurp(dir / "run" / "series.csv"));
    CHECK(test::slurp(cell / "report.txt") == test::slurp(dir / "run" / "report.txt"));
    CHECK(fs::exists(cell / "config.ini"));

    // a failing cell is recorded and the others still run
    test::write_text(dir / "grid.ini",
                     std::string(kSmall) +
                         "[ic]\nkind = single_mode\nmode_k1 = 5\n"
                         "[sweep]\nbeta = 0.8, 1.5\nn = 8, 32\n");
    cli.workers = 2;
    cli.out_dir = (dir / "g1").string();
    REQUIRE(cmd_sweep((dir / "grid.ini").string(), cli, out, err) == kExitOk);
    cli.out_dir = (dir / "g2").string();
    REQUIRE(cmd_sweep((dir / "grid.ini").string(), cli, out, err) == kExitOk);
    const std::string summary = test::slurp(dir / "g1" / "summary.csv");
    CHECK(summary == test::slurp(dir / "g2" / "summary.csv"));
    CHECK(count_lines(summary) == 5);
    CHECK(summary.rfind("alpha,beta,n,verdict,bkm_integral,int_linf_grad_j_sq,status\n", 0) == 0);
    CHECK(summary.find(",8,none,") != std::string::npos);
    CHECK(summary.find("failed: single_mode") != std::string::npos);
    CHECK(summary.find(",32,bounded,") != std::string::npos);
  }

  TEST_CASE("kernel command") {
    const auto dir = test::scratch_dir("cli_kernel");
    std::ostringstream out, err;
    CliOverrides cli;
    cli.out_dir = (dir / "out").string();
    test::write_text(dir / "empty.ini", "[kernel]\nbeta =\n");
    CHECK(cmd_kernel((dir / "empty.ini").string(), cli, out, err) == kExitUsage);

    test::write_text(dir / "k.ini",
                     "[kernel]\nbeta = 1\nl_max = 1\neta = 0.5\nr_max = 20\nn_samples = 401\n"
                     "grid_n = 512\nbox_length = 32\n");
    CHECK(cmd_kernel((dir / "k.ini").string(), cli, out, err) == kExitOk);
    CHECK(out.str().find("gaussian max abs error") != std::string::npos);
    CHECK(fs::exists(dir / "out" / "kernel_beta_1.csv"));
    const std::string l1 = test::slurp(dir / "out" / "kernel_l1.csv");
    CHECK(count_lines(l1) == 4);
  }
}
