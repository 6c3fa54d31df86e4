#include <doctest.h>

#include "growthsim/balance.hpp"

using namespace growthsim;

namespace
{

const Vec2 e2(0.0, 1.0);

std::vector<Tensor2> uniform(std::size_t n, double g)
{
    Tensor2 F;
    F << 1.0, g, 0.0, 1.0;
    return std::vector<Tensor2>(n, F);
}

} // namespace

TEST_CASE("boundary speed, growth traction and inferred density")
{
    CHECK(boundary_normal_velocity(2.0, 1.0, Vec2(0.0, 0.5), e2) == doctest::Approx(2.5));
    CHECK(boundary_normal_velocity(-1.0, 2.0, Vec2::Zero(), e2) == doctest::Approx(-0.5));
    CHECK_THROWS_AS(boundary_normal_velocity(1.0, 0.0, Vec2::Zero(), e2), ValidationError);

    const Vec2 t = growth_traction(0.1, Vec2(1.0, 0.0), Vec2(0.2, 0.0), Vec2(0.0, -0.3));
    CHECK(t(0) == doctest::Approx(0.08));
    CHECK(t(1) == doctest::Approx(-0.3));

    GrowthInput g;
    g.M = 2.0;
    g.v_a = Vec2(0.0, 4.0);
    CHECK(g.inferred_density(e2) == doctest::Approx(0.5));
    g.v_a = Vec2(1.0, 0.0);   // tangential supply carries no mass through the surface
    CHECK_THROWS_AS(g.inferred_density(e2), ValidationError);
}

TEST_CASE("vacuum exterior transmits exactly the applied traction")
{
    const Vec2 t_b(0.3, -0.2);
    const SideState vac = SideState::vacuum(t_b, e2);
    CHECK((vac.sigma * e2 - t_b).norm() < 1e-15);
    CHECK(vac.sigma(0, 1) == vac.sigma(1, 0));
}

TEST_CASE("jump residuals vanish for consistent states and detect violations")
{
    // Slow growth: sigma n = t_b.
    SideState inside;
    inside.rho = 1.0;
    inside.sigma << 0.0, 0.2, 0.2, 0.0;
    const SideState outside = SideState::vacuum(Vec2(0.2, 0.0), e2);
    const double M = 1.0;
    const Vec2 V_b = M / inside.rho * e2;
    JumpResiduals r = jump_residuals(inside, outside, V_b, e2, M, Vec2(0.0, 1.0), JumpForm::slow_growth);
    CHECK(r.mass == doctest::Approx(0.0));
    CHECK(r.momentum.norm() < 1e-15);

    // Full form with tangential supply v_a = (v0, 0): sigma n = M v_a with v = 0.
    SideState fdm;
    fdm.rho = 1.0;
    fdm.sigma << 0.01, 0.1, 0.1, 0.0;
    const JumpResiduals full =
        jump_residuals(fdm, SideState::vacuum(Vec2::Zero(), e2), 0.1 * e2, e2, 0.1, Vec2(1.0, 0.0));
    CHECK(full.mass == doctest::Approx(0.0));
    CHECK(full.momentum.norm() < 1e-15);

    inside.sigma(0, 1) = inside.sigma(1, 0) = 0.5;
    r = jump_residuals(inside, outside, V_b, e2, M, Vec2(0.0, 1.0), JumpForm::slow_growth);
    CHECK(r.momentum(0) == doctest::Approx(0.3));
    r = jump_residuals(inside, outside, 2.0 * V_b, e2, M, Vec2(0.0, 1.0), JumpForm::slow_growth);
    CHECK(r.mass == doctest::Approx(1.0));
}

TEST_CASE("unstrained layer under a top shear traction has a linear velocity profile")
{
    // sigma12 = mu v1' = t1 everywhere: v1 = t1 x2 / mu.
    const MaterialParams params{1.0, 0.5, 1.0};
    const Grid1D grid(10, 2.0);
    const auto F = uniform(10, 0.0);
    const MomentumSolution sol =
        quasistatic_momentum_solve_1d(grid, F, F.back(), params, Vec2(0.3, 0.0));
    CHECK(sol.v_faces.front() == 0.0);
    for (std::size_t i = 0; i <= 10; ++i)
        CHECK(sol.v_faces[i] == doctest::Approx(0.6 * grid.face(i)));
    for (std::size_t i = 0; i < 10; ++i)
    {
        CHECK(sol.grad_v[i](0, 1) == doctest::Approx(0.6));
        CHECK(sol.p[i] == doctest::Approx(1.0));
    }
    CHECK(sol.interior_residual <= 1e-10);
    CHECK(sol.top_residual <= 1e-10);
}

TEST_CASE("elastic shear is relaxed by the viscous flow against a free top")
{
    // F12 = g in every cell and t = 0: mu v1' = -G g.
    const MaterialParams params{2.0, 0.1, 1.0};
    const Grid1D grid(8, 1.0);
    const auto F = uniform(8, 0.25);
    const MomentumSolution sol = quasistatic_momentum_solve_1d(grid, F, F.back(), params, Vec2::Zero());
    for (const Tensor2& L : sol.grad_v)
        CHECK(L(0, 1) == doctest::Approx(-5.0));
    CHECK(sol.top_grad_v(0, 1) == doctest::Approx(-5.0));
    CHECK(sol.top_v(0) == doctest::Approx(-5.0));
}

TEST_CASE("body force is balanced by a linear shear stress")
{
    const MaterialParams params{1.0, 0.2, 2.0};
    const Grid1D grid(20, 1.0);
    const auto F = uniform(20, 0.0);
    const Vec2 b(0.5, -1.0);
    const MomentumSolution sol =
        quasistatic_momentum_solve_1d(grid, F, F.back(), params, Vec2(0.1, 0.0), b);
    for (std::size_t i = 0; i < 20; ++i)
    {
        const double H_minus_x = 1.0 - grid.center(i);
        CHECK(params.mu * sol.grad_v[i](0, 1) == doctest::Approx(0.1 + 2.0 * 0.5 * H_minus_x));
        CHECK(sol.p[i] == doctest::Approx(1.0 + 2.0 * H_minus_x));
    }
    CHECK(sol.interior_residual <= 1e-10);
}

TEST_CASE("momentum solve preconditions")
{
    const Grid1D grid(8, 1.0);
    auto F = uniform(8, 0.0);
    CHECK_THROWS_AS(quasistatic_momentum_solve_1d(grid, F, F.back(), MaterialParams{1.0, 0.0, 1.0},
                                                  Vec2::Zero()),
                    SingularSystem);
    F[3](1, 0) = 0.1;
    CHECK_THROWS_AS(quasistatic_momentum_solve_1d(grid, F, F.back(), MaterialParams{1.0, 0.1, 1.0},
                                                  Vec2::Zero()),
                    NotReduced);
    const auto short_field = uniform(5, 0.0);
    CHECK_THROWS_AS(quasistatic_momentum_solve_1d(grid, short_field, short_field.back(),
                                                  MaterialParams{1.0, 0.1, 1.0}, Vec2::Zero()),
                    SingularSystem);
}

TEST_CASE("domain height bookkeeping")
{
    CHECK(advance_domain(1.0, 0.5, 0.2) == doctest::Approx(1.1));
    CHECK_THROWS_AS(advance_domain(0.1, -1.0, 0.2), NegativeHeight);
    CHECK_THROWS_AS(advance_domain(1.0, 1.0, 0.0), ValidationError);

    const DomainTracker tracker{1.0, 0.1};
    CHECK(tracker.height(1.0) == 1.0 + 0.1 * 1.0);
    CHECK(tracker.height_after_steps(10, 0.1) == tracker.height(1.0));
    CHECK_THROWS_AS((DomainTracker{1.0, -2.0}.height(1.0)), NegativeHeight);
}

TEST_CASE("density is conserved without flow and rises under compression")
{
    const Grid1D grid(8, 1.0);
    const std::vector<double> rho(8, 1.5);
    const std::vector<Vec2> still(8, Vec2::Zero());
    std::vector<Tensor2> L(8, Tensor2::Zero());
    CHECK(density_update(grid, rho, still, L, 0.1) == rho);

    for (Tensor2& Li : L)
        Li(0, 0) = -0.2;   // in-plane compression
    for (double r : density_update(grid, rho, still, L, 0.1))
        CHECK(r == doctest::Approx(1.5 * (1.0 + 0.02)));

    const std::vector<Vec2> fast(8, Vec2(0.0, 10.0));
    CHECK_THROWS_AS(density_update(grid, rho, fast, L, 0.1), CFLViolation);
}
