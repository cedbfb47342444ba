#include <doctest.h>

#include <cmath>

#include "gmhd/checkpoint.hpp"
#include "gmhd/fields.hpp"
#include "support.hpp"

using namespace gmhd;
using gmhd::test::max_abs;
using gmhd::test::sample;
using gmhd::test::spectral;

TEST_SUITE("fields") {
  TEST_CASE("Biot-Savart of sin x1") {
    const auto g = Grid2D::create(32);
    const SpectralField w = spectral(g, [](Real x1, Real) { return std::sin(x1); });
    const SpectralVector u = biot_savart(w);
    CHECK(max_abs(inverse_transform(u.c1)) <= 1e-13);
    CHECK(max_abs(inverse_transform(u.c2) + sample(g, [](Real x1, Real) { return std::cos(x1); })) <=
          1e-13);
    CHECK(max_abs(inverse_transform(curl(u) - w)) <= 1e-12);
  }

  TEST_CASE("Biot-Savart of zero and of random fields") {
    const auto g = Grid2D::create(64);
    const SpectralVector z = biot_savart(SpectralField::zeros(g));
    CHECK(max_abs(z.c1.coeffs) == 0.0);
    CHECK(max_abs(z.c2.coeffs) == 0.0);

    const SpectralField w = random_bandlimited_field(g, 17, 1, 20);
    const SpectralVector u = biot_savart(w);
    CHECK(max_abs(inverse_transform(curl(u) - w)) <= 1e-11);
    CHECK(max_abs(inverse_transform(divergence(u))) <= 1e-13);

    const SpectralVector b = b_from_current(w);
    CHECK(max_abs((b.c1 - u.c1).coeffs) == 0.0);
  }

  TEST_CASE("nonzero mean is rejected") {
    const auto g = Grid2D::create(16);
    SpectralField w = random_bandlimited_field(g, 2, 1, 4);
    w(0, 0) = 1.0;
    CHECK_THROWS_AS(biot_savart(w), Error);
  }

  TEST_CASE("Orszag-Tang state") {
    const auto g = Grid2D::create(64);
    const FlowState s = make_initial_condition(InitialCondition{}, g);
    CHECK(s.time == 0.0);
    const PhysicalField w = inverse_transform(s.omega_hat);
    const PhysicalField j = inverse_transform(s.j_hat);
    CHECK(max_abs(w - sample(g, [](Real x1, Real x2) { return std::cos(x1) + std::cos(x2); })) <=
          1e-13);
    CHECK(max_abs(j - sample(g, [](Real x1, Real x2) {
                    return 2.0 * std::cos(2.0 * x1) + std::cos(x2);
                  })) <= 1e-13);

    const SpectralVector u = biot_savart(s.omega_hat);
    CHECK(max_abs(inverse_transform(divergence(u))) <= 1e-13);
    CHECK(max_abs(inverse_transform(u.c1) + sample(g, [](Real, Real x2) { return std::sin(x2); })) <=
          1e-13);
    const SpectralVector b = b_from_current(s.j_hat);
    CHECK(max_abs(inverse_transform(b.c2) -
                  sample(g, [](Real x1, Real) { return std::sin(2.0 * x1); })) <= 1e-13);
  }

  TEST_CASE("single mode") {
    const auto g = Grid2D::create(32);
    InitialCondition ic;
    ic.kind = InitialKind::single_mode;
    ic.amplitude = 0.0;
    ic.magnetic_amplitude = 0.0;
    const FlowState zero = make_initial_condition(ic, g);
    CHECK(max_abs(zero.omega_hat.coeffs) == 0.0);
    CHECK(max_abs(zero.j_hat.coeffs) == 0.0);

    ic.amplitude = 1.5;
    ic.mode_k1 = 2;
    ic.mode_k2 = 1;
    const FlowState s = make_initial_condition(ic, g);
    const SpectralVector u = biot_savart(s.omega_hat);
    const PhysicalField speed =
        (inverse_transform(u.c1).square() + inverse_transform(u.c2).square()).sqrt();
    CHECK(speed.maxCoeff() == doctest::Approx(1.5).epsilon(1e-12));

    ic.mode_k1 = 0;
    ic.mode_k2 = 0;
    CHECK_THROWS_AS(make_initial_condition(ic, g), Error);
    ic.mode_k1 = 11;
    CHECK_THROWS_AS(make_initial_condition(ic, g), Error);
  }

  TEST_CASE("random band-limited field") {
    const auto g = Grid2D::create(64);
    const SpectralField a = random_bandlimited_field(g, 42, 3, 9);
    const SpectralField b = random_bandlimited_field(g, 42, 3, 9);
    const SpectralField c = random_bandlimited_field(g, 43, 3, 9);
    CHECK(max_abs((a - b).coeffs) == 0.0);
    CHECK(max_abs((a - c).coeffs) > 0.0);
    CHECK(a(0, 0) == Complex(0.0, 0.0));
    CHECK(hermitian_defect(a) <= 1e-15);

    for (int i1 = 0; i1 < 64; ++i1) {
      for (int i2 = 0; i2 < 64; ++i2) {
        if (std::abs(a(i1, i2)) == 0.0) continue;
        const Real k = g->xi_abs()(i1, i2);
        CHECK(k >= 3.0 - 1e-12);
        CHECK(k <= 9.0 + 1e-12);
      }
    }
    const PhysicalField f = inverse_transform(a);
    CHECK(std::sqrt(f.square().mean()) == doctest::Approx(1.0).epsilon(1e-12));

    InitialCondition ic;
    ic.kind = InitialKind::random_bandlimited;
    ic.seed = 5;
    const FlowState s1 = make_initial_condition(ic, g);
    const FlowState s2 = make_initial_condition(ic, g);
    CHECK(max_abs((s1.omega_hat - s2.omega_hat).coeffs) == 0.0);
    CHECK(max_abs((s1.j_hat - s2.j_hat).coeffs) == 0.0);
    CHECK(max_abs((s1.j_hat - s1.omega_hat).coeffs) > 0.0);
    CHECK_THROWS_AS(random_bandlimited_field(g, 1, 5, 2), Error);
  }

  TEST_CASE("initial condition from a checkpoint") {
    const auto g = Grid2D::create(16);
    InitialCondition ic;
    ic.kind = InitialKind::random_bandlimited;
    FlowState s = make_initial_condition(ic, g);
    s.time = 0.75;
    const auto dir = test::scratch_dir("fields_from_file");
    const std::string path = (dir / "state.bin").string();
    write_checkpoint(path, Checkpoint::from_state(s, PhysicsParams::standard(1.25)));

    InitialCondition from;
    from.kind = InitialKind::from_file;
    from.file = path;
    const FlowState back = make_initial_condition(from, g);
    CHECK(back.time == 0.75);
    CHECK(max_abs((back.omega_hat - s.omega_hat).coeffs) == 0.0);
    CHECK(max_abs((back.j_hat - s.j_hat).coeffs) == 0.0);
    CHECK_THROWS_AS(make_initial_condition(from, Grid2D::create(32)), Error);
  }

  TEST_CASE("initial kind names") {
    for (auto k : {InitialKind::orszag_tang, InitialKind::random_bandlimited,
                   InitialKind::single_mode, InitialKind::from_file}) {
      CHECK(parse_initial_kind(to_string(k)) == k);
    }
    CHECK_THROWS_AS(parse_initial_kind("vortex"), Error);
  }
}
