#include <doctest.h>

#include <map>
#include <sstream>

#include "gmhd/harness.hpp"
#include "support.hpp"

using namespace gmhd;
namespace fs = std::filesystem;

namespace {

std::map<std::string, std::string> read_report(const fs::path& path) {
  std::map<std::string, std::string> out;
  std::istringstream in(test::slurp(path));
  for (std::string line; std::getline(in, line);) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

}  // namespace

TEST_SUITE("regression") {
  TEST_CASE("Orszag-Tang baseline at n = 128") {
    const auto dir = test::scratch_dir("regression_baseline");
    test::write_text(dir / "run.ini",
                     "[physics]\npreset = standard\nbeta = 1.25\n[grid]\nn = 128\n[stepper]\nt_end = 2\n");
    std::ostringstream log, err;
    CliOverrides cli;
    cli.out_dir = (dir / "out").string();
    REQUIRE(cmd_run((dir / "run.ini").string(), cli, log, err) == kExitOk);
    const auto report = read_report(dir / "out" / "report.txt");
    CHECK(report.at("verdict") == "bounded");
    // values from the first validated build
    CHECK(std::stod(report.at("bkm_integral")) == doctest::Approx(5.2941006884466892).epsilon(1e-9));
    CHECK(std::stod(report.at("int_linf_grad_j_sq")) ==
          doctest::Approx(2.4060975543006728).epsilon(1e-9));
  }

  TEST_CASE("beta sweep ordering") {
    const auto dir = test::scratch_dir("regression_sweep");
    test::write_text(dir / "sweep.ini",
                     "[physics]\npreset = standard\n[grid]\nn = 128\n[stepper]\nt_end = 3\n"
                     "[diagnostics]\ninterval = 0.01\n"
                     "[sweep]\nalpha = 0\nbeta = 0.4, 0.8, 1.1, 1.5\n");
    std::ostringstream log, err;
    CliOverrides cli;
    cli.out_dir = (dir / "out").string();
    REQUIRE(cmd_sweep((dir / "sweep.ini").string(), cli, log, err) == kExitOk);

    // alpha,beta,n,verdict,bkm_integral,int_linf_grad_j_sq,status
    std::istringstream in(test::slurp(dir / "out" / "summary.csv"));
    std::string line;
    std::getline(in, line);
    std::vector<std::string> verdicts;
    std::vector<Real> grad_j;
    while (std::getline(in, line)) {
      std::vector<std::string> cells;
      std::istringstream row(line);
      for (std::string c; std::getline(row, c, ',');) cells.push_back(c);
      REQUIRE(cells.size() == 7);
      CHECK(cells[6] == "completed");
      verdicts.push_back(cells[3]);
      grad_j.push_back(std::stod(cells[5]));
    }
    REQUIRE(verdicts.size() == 4);
    MESSAGE("verdicts: " << verdicts[0] << " " << verdicts[1] << " " << verdicts[2] << " " << verdicts[3]);
    for (std::size_t i = 1; i < grad_j.size(); ++i) CHECK(grad_j[i] < grad_j[i - 1]);
    // once bounded, larger beta stays bounded
    for (std::size_t i = 1; i < verdicts.size(); ++i) {
      if (verdicts[i - 1] == "bounded") CHECK(verdicts[i] == "bounded");
    }
    CHECK(verdicts.front() != "bounded");
    CHECK(verdicts.back() == "bounded");
  }
}
