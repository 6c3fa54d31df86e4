#include <doctest.h>

#include "growthsim/scenarios.hpp"

using namespace growthsim;

TEST_CASE("non_normal closed form: frozen reference values")
{
    // Reference computed independently at 30 digits.
    const NonNormalSolution s = analytic_non_normal(0.5, 1.0, 0.5, 1.0, 0.1, 1.0);
    CHECK(s.F_e12 == doctest::Approx(-0.003368973499542733548).epsilon(1e-14));
    CHECK(s.p == 1.0);
    // v1 = V_G alpha (e^{-G (t - x2/V_G)/mu} - e^{-G t / mu})
    CHECK(s.v1 == doctest::Approx(0.5 * (std::exp(-5.0) - std::exp(-10.0))).epsilon(1e-14));
}

TEST_CASE("non_normal closed form: attachment, base and domain")
{
    // Freshly attached material carries the full shear -alpha.
    const NonNormalSolution top = analytic_non_normal(0.7, 0.7, 0.5, 1.0, 0.1, 1.0);
    CHECK(top.F_e12 == doctest::Approx(-0.5));
    CHECK(top.v1 == doctest::Approx(0.5 * (1.0 - std::exp(-7.0))));
    // Clamped base.
    CHECK(analytic_non_normal(0.0, 0.4, 0.5, 1.0, 0.1, 1.0).v1 == 0.0);

    CHECK_THROWS_AS(analytic_non_normal(1.1, 1.0, 0.5, 1.0, 0.1, 1.0), OutOfBody);
    CHECK_THROWS_AS(analytic_non_normal(-0.1, 1.0, 0.5, 1.0, 0.1, 1.0), OutOfBody);
    CHECK_THROWS_AS(analytic_non_normal(0.1, 1.0, 0.5, 1.0, 0.0, 1.0), ValidationError);
}

TEST_CASE("fdm closed form")
{
    const FdmShearSolution s = analytic_fdm_shear(0.1, 1.0, 1.0);
    CHECK(s.sigma(0, 1) == doctest::Approx(0.1));
    CHECK(s.sigma(0, 0) == doctest::Approx(0.01));
    CHECK(s.sigma(1, 1) == 0.0);
    CHECK(s.F_e(0, 1) == doctest::Approx(0.1));
    CHECK(s.v1 == 0.0);
}

TEST_CASE("configuration validation names the field")
{
    auto expect_field = [](ScenarioConfig c, const std::string& field) {
        try
        {
            c.validate();
            FAIL("expected ValidationError for " << field);
        }
        catch (const ValidationError& e)
        {
            CHECK(std::string(e.what()).rfind(field + ":", 0) == 0);
        }
    };
    auto c = ScenarioConfig::defaults(ScenarioKind::non_normal);
    CHECK_NOTHROW(c.validate());

    auto bad = c;
    bad.params.G = -1.0;
    expect_field(bad, "G");
    bad = c;
    bad.n_cells = 8;
    expect_field(bad, "n_cells");
    bad = c;
    bad.t_end = 0.0;
    expect_field(bad, "t_end");
    bad = c;
    bad.dt = -0.1;
    expect_field(bad, "dt");

    auto fdm = ScenarioConfig::defaults(ScenarioKind::fdm_shear);
    fdm.H0 = 0.0;
    expect_field(fdm, "H0");

    auto thermal = ScenarioConfig::defaults(ScenarioKind::thermal);
    thermal.alpha = 0.0;
    expect_field(thermal, "alpha");
}

TEST_CASE("time step is Courant limited and divides t_end")
{
    auto c = ScenarioConfig::defaults(ScenarioKind::non_normal);
    // dt_cfl = 0.9 * H_end / (n |V_b|) = 0.9 / 200 -> 223 steps.
    CHECK(c.step_count() == 223);
    CHECK(c.time_step() * 223.0 == doctest::Approx(1.0));
    CHECK(c.time_step() <= 0.9 / 200.0);

    c.dt = 0.1;
    CHECK(c.step_count() == 10);
    c.dt = 0.3;
    CHECK(c.step_count() == 4);
    CHECK(c.time_step() == doctest::Approx(0.25));

    // Very small mu: the relaxation time bounds the default step.
    auto stiff = ScenarioConfig::defaults(ScenarioKind::non_normal);
    stiff.params.mu = 1e-3;
    CHECK(stiff.time_step() <= 1e-3);
}

TEST_CASE("non_normal run tracks the closed form")
{
    auto c = ScenarioConfig::defaults(ScenarioKind::non_normal);
    c.n_cells = 50;
    const RunResult r = run_non_normal(c);
    REQUIRE(r.history.size() == c.step_count() + 1);
    CHECK(r.history.front().grid.empty());
    CHECK(r.final_state().t == 1.0);
    CHECK(r.final_state().grid.height() == doctest::Approx(1.0));
    CHECK(r.errors.back().linf("Fe12") < 2e-2);
    CHECK(r.errors.back().linf("p") <= 1e-12);
    CHECK(r.pathlines.size() == 20);
    for (const StepMetrics& m : r.metrics)
    {
        CHECK(m.momentum_residual <= 1e-10);
        CHECK(m.base_velocity == 0.0);
        CHECK(m.det_deviation <= 1e-12);
    }
    CHECK_THROWS_AS(r.errors.back().linf("sigma12"), ValidationError);
}

TEST_CASE("non_normal without viscosity is rejected")
{
    auto c = ScenarioConfig::defaults(ScenarioKind::non_normal);
    c.params.mu = 0.0;
    CHECK_THROWS_AS(run_non_normal(c), ValidationError);
}

TEST_CASE("fdm run holds the exact steady state on a coarse grid")
{
    auto c = ScenarioConfig::defaults(ScenarioKind::fdm_shear);
    c.n_cells = 16;
    const RunResult r = run_fdm_shear(c);
    for (const OracleErrors& e : r.errors)
        for (const FieldError& f : e.fields)
            CHECK(f.linf <= 1e-10);
    CHECK(r.final_state().grid.height() == c.H0 + 0.1 * c.t_end);
}

TEST_CASE("thermal attachment: alpha = 1 is stress free, alpha != 1 is not")
{
    auto c = ScenarioConfig::defaults(ScenarioKind::thermal);
    c.n_cells = 32;
    const RunResult r = run_thermal(c);
    CHECK(r.reduced_ansatz_residual <= kDetTolerance);
    const FieldState& last = r.final_state();
    // Grown material carries F_e = I / alpha and pressure G / alpha^2.
    const std::size_t top = last.grid.size() - 1;
    CHECK(last.F_e[top](0, 0) == doctest::Approx(1.0 / 0.9));
    CHECK(last.p[top] == doctest::Approx(1.0 / 0.81));
    for (const Vec2& v : last.v)
        CHECK(v.norm() == 0.0);

    c.alpha = 1.0;
    const RunResult unit = run_thermal(c);
    for (double p : unit.final_state().p)
        CHECK(p == 1.0);

    c.alpha = -0.5;
    CHECK_THROWS_AS(run_thermal(c), ValidationError);
}

TEST_CASE("driver dispatch and kind names")
{
    CHECK(scenario_kind_from_string("fdm_shear") == ScenarioKind::fdm_shear);
    CHECK(to_string(ScenarioKind::thermal) == "thermal");
    CHECK_THROWS_AS(scenario_kind_from_string("spiral"), ValidationError);
    CHECK_THROWS_AS(run_fdm_shear(ScenarioConfig::defaults(ScenarioKind::thermal)), ValidationError);
}

TEST_CASE("convergence study")
{
    CHECK(observed_order(4.0, 1.0) == doctest::Approx(2.0));
    CHECK(observed_order(9.0, 1.0, 3.0) == doctest::Approx(2.0));

    auto c = ScenarioConfig::defaults(ScenarioKind::non_normal);
    const auto rows = convergence_study(c, {25, 50, 100});
    REQUIRE(rows.size() == 3);
    CHECK_FALSE(rows[0].order.has_value());
    CHECK(rows[1].linf < rows[0].linf);
    CHECK(*rows[2].order >= 0.9);

    CHECK_THROWS_AS(convergence_study(ScenarioConfig::defaults(ScenarioKind::thermal), {16, 32}),
                    NoOracle);
    c.H0 = 0.5;
    CHECK_THROWS_AS(convergence_study(c, {16, 32}), NoOracle);
}
