#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "gmhd/timestepper.hpp"
#include "support.hpp"

using namespace gmhd;
using gmhd::test::max_abs;
using gmhd::test::sample;
using gmhd::test::spectral;

namespace {

// omega = 0, j depending on x1 only: the nonlinear terms vanish identically.
FlowState diffusion_state(const GridPtr& g, Real amplitude) {
  FlowState s;
  s.omega_hat = SpectralField::zeros(g);
  s.j_hat = spectral(g, [&](Real x1, Real) {
    return amplitude * (std::cos(x1) + 0.5 * std::sin(x1));
  });
  return s;
}

NormSeries synthetic(const std::vector<Real>& times, const std::function<Real(Real)>& grad_j) {
  const PhysicsParams p = PhysicsParams::standard(1.25);
  NormSeries s(diagnostic_names(p, DiagnosticsConfig{}));
  for (Real t : times) {
    std::vector<Real> row(s.names().size(), 1.0);
    row[s.column_index("linf_grad_j")] = grad_j(t);
    s.append(t, row);
  }
  return s;
}

}  // namespace

TEST_SUITE("diagnostics") {
  TEST_CASE("Lp norms") {
    const auto g = Grid2D::create(64);
    const PhysicalField c = PhysicalField::Constant(64, 64, -1.5);
    for (Real p : {1.0, 2.0, 3.5, 8.0}) {
      CHECK(lp_norm(c, p, *g) == doctest::Approx(1.5 * std::pow(kTwoPi, 2.0 / p)).epsilon(1e-13));
    }
    const PhysicalField s = sample(g, [](Real x1, Real) { return std::sin(x1); });
    CHECK(std::pow(lp_norm(s, 2.0, *g), 2) == doctest::Approx(2.0 * kPi * kPi).epsilon(1e-13));
    CHECK(linf_norm(s) == doctest::Approx(1.0));
    CHECK(lp_norm(PhysicalField::Zero(64, 64), 4.0, *g) == 0.0);
    CHECK_THROWS_AS(lp_norm(s, 0.5, *g), Error);

    const auto g128 = Grid2D::create(128);
    const PhysicalField r = inverse_transform(random_bandlimited_field(g128, 3, 1, 2));
    const Real l64 = lp_norm(r, 64.0, *g128);
    CHECK(std::abs(l64 - linf_norm(r)) <= 0.05 * linf_norm(r));
    // the scan closes in on the maximum
    CHECK(std::abs(lp_norm(r, 16.0, *g128) - linf_norm(r)) > std::abs(l64 - linf_norm(r)));
  }

  TEST_CASE("Sobolev norms") {
    const auto g = Grid2D::create(64);
    const SpectralField r = random_bandlimited_field(g, 4, 1, 15);
    CHECK(sobolev_norm(r, 0.0) == doctest::Approx(l2_norm(r)).epsilon(1e-12));
    CHECK(sobolev_norm(r, 0.0) ==
          doctest::Approx(lp_norm(inverse_transform(r), 2.0, *g)).epsilon(1e-10));

    const SpectralField m = spectral(g, [](Real x1, Real) { return std::cos(2.0 * x1); });
    CHECK(sobolev_norm(m, 1.5) == doctest::Approx(std::pow(2.0, 1.5) * l2_norm(m)).epsilon(1e-13));

    Real previous = 0.0;
    for (Real s : {0.0, 0.3, 0.5, 1.0, 1.25, 2.0, 3.1}) {
      const Real v = sobolev_norm(r, s);
      CHECK(v >= previous);
      previous = v;
    }
    CHECK_THROWS_AS(sobolev_norm(r, -0.2), Error);
  }

  TEST_CASE("column layout") {
    const PhysicsParams p = PhysicsParams::standard(1.25);
    const std::vector<std::string> names = diagnostic_names(p, DiagnosticsConfig{});
    const std::vector<std::string> expected = {
        "energy_u", "energy_b", "l2_omega", "l2_j", "lp_omega_4", "lp_omega_8", "linf_omega",
        "linf_j", "sobolev_j_beta", "sobolev_j_r", "sobolev_j_beta_plus_r",
        "sobolev_j_1_plus_delta", "linf_grad_j", "dissipation_u", "dissipation_b",
        "int_sobolev_j_sq_beta", "int_sobolev_j_sq_r", "int_sobolev_j_sq_beta_plus_r",
        "int_sobolev_j_sq_1_plus_delta", "int_linf_grad_j_sq", "bkm_integral",
        "int_dissipation"};
    CHECK(names == expected);

    // delta = min(2 beta - 2, 0.5) / 2: positive only for beta > 1
    DiagnosticsConfig dc;
    CHECK(dc.effective_delta(1.25).value() == doctest::Approx(0.25));
    CHECK(dc.effective_delta(1.1).value() == doctest::Approx(0.1));
    CHECK_FALSE(dc.effective_delta(1.0).has_value());
    CHECK_FALSE(dc.effective_delta(0.4).has_value());
    const auto low = diagnostic_names(PhysicsParams::standard(0.8), dc);
    CHECK(std::find(low.begin(), low.end(), "sobolev_j_1_plus_delta") == low.end());
    dc.delta = 0.05;
    CHECK(dc.effective_delta(0.8).value() == 0.05);
    dc.track_delta = false;
    CHECK_FALSE(dc.effective_delta(1.5).has_value());

    const SobolevSet set = sobolev_set(PhysicsParams::standard(1.3), DiagnosticsConfig{});
    CHECK(set.r == doctest::Approx(0.3));
    CHECK(set.beta_plus_r == doctest::Approx(1.6));
    const SobolevSet low_set = sobolev_set(PhysicsParams::standard(0.4), DiagnosticsConfig{});
    CHECK(low_set.r == 0.0);
    CHECK(low_set.beta_plus_r == 0.0);
  }

  TEST_CASE("zero state records zeros") {
    const auto g = Grid2D::create(32);
    const FlowState z{SpectralField::zeros(g), SpectralField::zeros(g), 0.0};
    NormSeries s;
    record(z, PhysicsParams::standard(1.25), DiagnosticsConfig{}, s);
    FlowState later = z;
    later.time = 0.1;
    record(later, PhysicsParams::standard(1.25), DiagnosticsConfig{}, s);
    REQUIRE(s.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
      for (Real v : s.row(i)) CHECK(v == 0.0);
    }
    CHECK_THROWS_AS(record(later, PhysicsParams::standard(1.25), DiagnosticsConfig{}, s), Error);
    CHECK_THROWS_AS(record(z, PhysicsParams::standard(1.1), DiagnosticsConfig{}, s), Error);

    const BkmSummary r = bkm_report(s, DiagnosticsConfig{});
    CHECK(r.bkm_integral == 0.0);
    CHECK(r.int_linf_grad_j_sq == 0.0);
    CHECK(r.verdict == Verdict::bounded);
    CHECK(energy_balance_residual(s) == 0.0);
  }

  TEST_CASE("recorded values match direct evaluation") {
    const auto g = Grid2D::create(64);
    const FlowState s = make_initial_condition(InitialCondition{}, g);
    const PhysicsParams p = PhysicsParams::standard(1.25);
    NormSeries series;
    record(s, p, DiagnosticsConfig{}, series);
    // u = (-sin x2, sin x1), b = (-sin x2, sin 2 x1): both energies are 2 pi^2
    CHECK(series.value(0, "energy_u") == doctest::Approx(2.0 * kPi * kPi).epsilon(1e-13));
    CHECK(series.value(0, "energy_b") == doctest::Approx(2.0 * kPi * kPi).epsilon(1e-13));
    CHECK(series.value(0, "linf_omega") == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(series.value(0, "linf_j") == doctest::Approx(3.0).epsilon(1e-13));
    // j = 2 cos 2x1 + cos x2: grad j = (-4 sin 2x1, -sin x2), max at x1 = pi/4, x2 = pi/2
    CHECK(series.value(0, "linf_grad_j") == doctest::Approx(std::sqrt(17.0)).epsilon(1e-13));
    // ||Lambda^beta j||^2 = (2 pi)^2 / 2 (4 * 2^{2 beta} + 1)
    const Real jb = std::sqrt(2.0 * kPi * kPi * (4.0 * std::pow(2.0, 2.5) + 1.0));
    CHECK(series.value(0, "sobolev_j_beta") == doctest::Approx(jb).epsilon(1e-13));
    // kappa ||Lambda^beta b||^2 with b having modes |xi| = 1 and 2
    const Real db = 2.0 * kPi * kPi * (1.0 + std::pow(2.0, 2.5));
    CHECK(series.value(0, "dissipation_b") == doctest::Approx(db).epsilon(1e-13));
    CHECK(series.value(0, "dissipation_u") == 0.0);
    CHECK(series.value(0, "bkm_integral") == 0.0);
  }

  TEST_CASE("pure diffusion: Sobolev integral equals the L2 energy drop") {
    const auto g = Grid2D::create(32);
    PhysicsParams p = PhysicsParams::standard(1.2);
    p.kappa = 0.9;
    StepperConfig st;
    st.t_end = 0.5;
    DiagnosticsConfig dc;
    dc.interval = 0.001;
    const RunResult r = run(diffusion_state(g, 1.0), p, st, dc);
    const std::size_t last = r.series.size() - 1;
    const Real j0 = r.series.value(0, "l2_j");
    const Real j1 = r.series.value(last, "l2_j");
    const Real expected = (j0 * j0 - j1 * j1) / (2.0 * p.kappa);
    CHECK(std::abs(r.series.value(last, "int_sobolev_j_sq_beta") - expected) <= 1e-6 * expected);
    // single |xi| = 1 mode: ||j(t)|| = ||j0|| e^{-kappa t}
    CHECK(j1 == doctest::Approx(j0 * std::exp(-p.kappa * 0.5)).epsilon(1e-12));
    CHECK(energy_balance_residual(r.series) <= 1e-6);

    // accumulated columns never decrease
    for (const auto& name : r.series.names()) {
      if (name.rfind("int_", 0) != 0 && name != "bkm_integral") continue;
      const auto col = r.series.column(name);
      for (std::size_t i = 1; i < col.size(); ++i) CHECK(col[i] >= col[i - 1]);
    }
  }

  TEST_CASE("pure diffusion: BKM integrals converge") {
    const auto g = Grid2D::create(32);
    const PhysicsParams p = PhysicsParams::standard(1.25);
    StepperConfig st;
    st.t_end = 8.0;
    DiagnosticsConfig dc;
    dc.interval = 0.01;
    const FlowState s0 = diffusion_state(g, 2.0);
    const RunResult r = run(s0, p, st, dc);
    const Real a = r.series.value(0, "linf_j");
    auto bkm_at = [&](Real t) {
      const auto& ts = r.series.times();
      const auto it = std::find_if(ts.begin(), ts.end(), [&](Real x) { return std::abs(x - t) < 1e-9; });
      return r.series.value(static_cast<std::size_t>(it - ts.begin()), "bkm_integral");
    };
    // linf j = a e^{-t}: integral a (1 - e^{-T})
    for (Real T : {1.0, 2.0, 4.0, 8.0}) {
      CHECK(bkm_at(T) == doctest::Approx(a * (1.0 - std::exp(-T))).epsilon(1e-4));
    }
    // increments shrink like the exponential tail
    const Real ratio = (std::exp(-4.0) - std::exp(-8.0)) / (std::exp(-2.0) - std::exp(-4.0));
    CHECK((bkm_at(8.0) - bkm_at(4.0)) / (bkm_at(4.0) - bkm_at(2.0)) == doctest::Approx(ratio).epsilon(1e-3));
    const BkmSummary rep = bkm_report(r.series, dc);
    CHECK(rep.verdict == Verdict::bounded);
    CHECK(rep.bkm_log_slope == doctest::Approx(-1.0).epsilon(1e-3));
    CHECK(rep.grad_j_log_slope == doctest::Approx(-2.0).epsilon(1e-3));
  }

  TEST_CASE("ideal run conserves energy") {
    const auto g = Grid2D::create(64);
    StepperConfig st;
    st.t_end = 0.5;
    const RunResult r = run(InitialCondition{}, g, PhysicsParams::ideal(), st, DiagnosticsConfig{});
    const auto eu = r.series.column("energy_u");
    const auto eb = r.series.column("energy_b");
    for (std::size_t i = 0; i < eu.size(); ++i) {
      CHECK(std::abs(eu[i] + eb[i] - eu[0] - eb[0]) <= 1e-6 * (eu[0] + eb[0]));
    }
  }

  TEST_CASE("verdicts") {
    std::vector<Real> times;
    for (int i = 0; i <= 30; ++i) times.push_back(0.1 * i);
    DiagnosticsConfig dc;
    const BkmSummary flat = bkm_report(synthetic(times, [](Real) { return 1.0; }), dc);
    CHECK(flat.verdict == Verdict::bounded);
    CHECK(flat.grad_j_log_slope == doctest::Approx(0.0));

    // ||grad j||^2 = e^{2 t}: log-slope 2 over the final window
    const BkmSummary up = bkm_report(synthetic(times, [](Real t) { return std::exp(t); }), dc);
    CHECK(up.grad_j_log_slope == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(up.verdict == Verdict::growing);

    // below the threshold: e^{0.2 t}
    const BkmSummary slow = bkm_report(synthetic(times, [](Real t) { return std::exp(0.1 * t); }), dc);
    CHECK(slow.verdict == Verdict::bounded);

    NormSeries marked = synthetic(times, [](Real) { return 1.0; });
    marked.append(3.05, marked.row(marked.size() - 1), true);
    CHECK(marked.blown_up());
    CHECK(bkm_report(marked, dc).verdict == Verdict::blown_up);
    CHECK_THROWS_AS(marked.append(3.1, marked.row(0)), Error);

    // a tracked quantity that rises past 10x its transient maximum
    NormSeries steady = synthetic(times, [](Real) { return 1.0; });
    NormSeries grown(steady.names());
    for (std::size_t i = 0; i < steady.size(); ++i) {
      std::vector<Real> row = steady.row(i);
      row[steady.column_index("l2_j")] = steady.times()[i] > 2.5 ? 20.0 : 1.0;
      grown.append(steady.times()[i], row);
    }
    const BkmSummary g = bkm_report(grown, dc);
    CHECK(g.transient_ratio >= 20.0);
    CHECK(g.verdict == Verdict::growing);
    CHECK_THROWS_AS(bkm_report(NormSeries(steady.names()), dc), Error);
    CHECK(to_string(Verdict::blown_up) == "blown_up");
  }

  TEST_CASE("series CSV") {
    const auto g = Grid2D::create(32);
    StepperConfig st;
    st.t_end = 0.1;
    const RunResult r = run(InitialCondition{}, g, PhysicsParams::standard(1.25), st, DiagnosticsConfig{});
    const auto dir = test::scratch_dir("series_csv");
    const std::string path = (dir / "series.csv").string();
    r.series.write_csv(path);

    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header.rfind("time,energy_u,energy_b,l2_omega,l2_j,", 0) == 0);
    CHECK(header.substr(header.size() - 7) == ",blowup");

    const NormSeries back = NormSeries::read_csv(path);
    CHECK(back.names() == r.series.names());
    REQUIRE(back.size() == r.series.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      CHECK(back.times()[i] == r.series.times()[i]);
      CHECK(back.row(i) == r.series.row(i));
    }
    std::ostringstream again;
    back.write_csv(again);
    CHECK(again.str() == test::slurp(path));

    test::write_text(dir / "bad.csv", "t,a\n0,1\n");
    CHECK_THROWS_AS(NormSeries::read_csv((dir / "bad.csv").string()), Error);
    test::write_text(dir / "short.csv", "time,a,blowup\n0,1\n");
    CHECK_THROWS_AS(NormSeries::read_csv((dir / "short.csv").string()), Error);

    NormSeries t = back;
    t.truncate_after(0.05);
    CHECK(t.size() == 2);
    CHECK(t.times().back() == 0.05);
  }
}
