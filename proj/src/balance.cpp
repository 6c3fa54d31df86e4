#include "growthsim/balance.hpp"

#include <cmath>
#include <string>

namespace growthsim
{

double GrowthInput::inferred_density(const Vec2& n) const
{
    const double vn = v_a.dot(n);
    const double rho = M / vn;
    if (!(rho > 0.0) || !std::isfinite(rho))
        throw ValidationError("density inferred from M / (v_a . n) is not positive");
    return rho;
}

double boundary_normal_velocity(double M, double rho, const Vec2& v, const Vec2& n)
{
    if (!(rho > 0.0))
        throw ValidationError("rho must be positive");
    return v.dot(n) + M / rho;
}

Vec2 growth_traction(double M, const Vec2& v_a, const Vec2& v, const Vec2& t_b)
{
    return M * (v_a - v) + t_b;
}

SideState SideState::vacuum(const Vec2& t_b, const Vec2& n)
{
    SideState s;
    const double tn = t_b.dot(n);
    s.sigma = t_b * n.transpose() + n * t_b.transpose() - tn * (n * n.transpose());
    return s;
}

JumpResiduals jump_residuals(const SideState& interior, const SideState& exterior, const Vec2& V_b,
                             const Vec2& n, double M, const Vec2& v_a, JumpForm form)
{
    const double flux_in = interior.rho * (V_b - interior.v).dot(n);
    const double flux_out = exterior.rho * (V_b - exterior.v).dot(n);

    JumpResiduals r;
    r.mass = (flux_in - flux_out) - M;

    const Vec2 traction_jump = interior.sigma * n - exterior.sigma * n;
    if (form == JumpForm::full)
    {
        const Vec2 momentum_flux = interior.v * flux_in - exterior.v * flux_out;
        r.momentum = momentum_flux + traction_jump - M * v_a;
    }
    else
    {
        r.momentum = traction_jump;
    }
    return r;
}

MomentumSolution quasistatic_momentum_solve_1d(const Grid1D& grid, std::span<const Tensor2> F_e,
                                               const Tensor2& top_F_e, const MaterialParams& params,
                                               const Vec2& top_traction, const Vec2& body_force)
{
    if (!(params.mu > 0.0))
        throw SingularSystem("the regularized momentum balance requires mu > 0");
    constexpr double kAnsatzTol = 1e-8;
    auto check_ansatz = [&](const Tensor2& F) {
        if (std::abs(F(1, 0)) > kAnsatzTol || !all_finite(F))
            throw NotReduced("F_e21 = " + std::to_string(F(1, 0)) +
                             " violates the through-thickness shear ansatz");
    };
    check_ansatz(top_F_e);
    for (const Tensor2& F : F_e)
        check_ansatz(F);

    const double G = params.G, mu = params.mu, rho = params.rho;
    const double t1 = top_traction(0), t2 = top_traction(1);
    auto shear = [](const Tensor2& F) { return F(0, 0) * F(1, 0) + F(0, 1) * F(1, 1); };
    auto normal = [](const Tensor2& F) { return F(1, 0) * F(1, 0) + F(1, 1) * F(1, 1); };

    MomentumSolution sol;
    sol.top_grad_v(0, 1) = (t1 - G * shear(top_F_e)) / mu;
    sol.top_p = G * normal(top_F_e) - t2;

    const std::size_t n = grid.size();
    if (grid.empty())
    {
        sol.v_faces.assign(n + 1, 0.0);
        sol.v.assign(n, Vec2::Zero());
        sol.grad_v.assign(n, Tensor2::Zero());
        sol.p.assign(n, sol.top_p);
        return sol;
    }
    if (F_e.size() != n)
        throw SingularSystem("F_e field does not match the grid");

    const double dx = grid.dx();
    const double H = grid.height();
    std::vector<double> S(n);
    for (std::size_t i = 0; i < n; ++i)
        S[i] = shear(F_e[i]);
    // sigma12 at cell centers required by x1-momentum and the top traction.
    auto sigma12_target = [&](std::size_t i) { return t1 + rho * body_force(0) * (H - grid.center(i)); };

    // The tridiagonal system for the face velocities
    //   mu (v_{j+1} - 2 v_j + v_{j-1}) = -rho b1 dx^2 - G dx (S_j - S_{j-1}),
    //   mu (v_n - v_{n-1}) = dx (sigma12_target_{n-1} - G S_{n-1}),   v_0 = 0,
    // telescopes to sigma12_i = sigma12_target(i) in every cell. Solving it in
    // that form keeps each shear rate local; back substitution would carry the
    // rounding of large velocities near the top into old material below.
    sol.v_faces.assign(n + 1, 0.0);
    sol.v.resize(n);
    sol.grad_v.resize(n);
    sol.p.resize(n);
    std::vector<double> rate(n), sigma12(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        rate[i] = (sigma12_target(i) - G * S[i]) / mu;
        sol.v_faces[i + 1] = sol.v_faces[i] + dx * rate[i];
    }
    for (std::size_t i = 0; i < n; ++i)
    {
        sol.v[i] = Vec2(0.5 * (sol.v_faces[i] + sol.v_faces[i + 1]), 0.0);
        sol.grad_v[i] = Tensor2::Zero();
        sol.grad_v[i](0, 1) = rate[i];
        sol.p[i] = G * normal(F_e[i]) - t2 - rho * body_force(1) * (H - grid.center(i));
        sigma12[i] = G * S[i] + mu * rate[i];
    }
    if (!all_finite(Vec2(sol.v_faces.back(), sigma12.back())))
        throw SingularSystem("momentum solve produced non-finite velocities");

    // Residuals of the tridiagonal rows in stress units.
    for (std::size_t j = 1; j < n; ++j)
    {
        const double lhs = mu * (sol.v_faces[j + 1] - 2.0 * sol.v_faces[j] + sol.v_faces[j - 1]);
        const double rhs = -rho * body_force(0) * dx * dx - G * dx * (S[j] - S[j - 1]);
        sol.interior_residual = std::max(sol.interior_residual, std::abs(lhs - rhs) / dx);
    }
    sol.top_v = Vec2(sol.v_faces[n], 0.0);

    sol.top_residual = std::abs(sigma12[n - 1] - sigma12_target(n - 1));
    return sol;
}

double advance_domain(double H, double V_b_normal, double dt)
{
    if (!(dt > 0.0))
        throw ValidationError("time step must be positive");
    const double H_new = H + V_b_normal * dt;
    if (!(H_new > 0.0))
        throw NegativeHeight("body ablated completely (H = " + std::to_string(H_new) + ")");
    return H_new;
}

double DomainTracker::height(double t) const
{
    const double H = H0 + rate * t;
    if (t > 0.0 && !(H > 0.0))
        throw NegativeHeight("body ablated completely (H = " + std::to_string(H) + ")");
    return H;
}

double DomainTracker::height_after_steps(std::size_t steps, double dt) const
{
    return height(static_cast<double>(steps) * dt);
}

std::vector<double> density_update(const Grid1D& grid, std::span<const double> rho,
                                   std::span<const Vec2> v, std::span<const Tensor2> grad_v,
                                   double dt)
{
    if (!(dt > 0.0))
        throw ValidationError("time step must be positive");
    std::vector<double> out(rho.begin(), rho.end());
    if (grid.empty())
        return out;

    const std::size_t n = grid.size();
    const double dx = grid.dx();
    double vmax = 0.0;
    for (const Vec2& vi : v)
        vmax = std::max(vmax, std::abs(vi(1)));
    if (vmax * dt / dx > 0.9)
        throw CFLViolation("Courant number " + std::to_string(vmax * dt / dx) + " exceeds 0.9");

    // Upwind mass flux through faces 0..n; the base is clamped.
    std::vector<double> flux(n + 1, 0.0);
    for (std::size_t f = 1; f <= n; ++f)
    {
        const double a = f < n ? 0.5 * (v[f - 1](1) + v[f](1)) : v[n - 1](1);
        const double upwind = a >= 0.0 ? rho[f - 1] : (f < n ? rho[f] : rho[n - 1]);
        flux[f] = a * upwind;
    }
    for (std::size_t i = 0; i < n; ++i)
    {
        const double stretch = grad_v[i](0, 0);
        if (flux[i + 1] != flux[i] || stretch != 0.0)
            out[i] = rho[i] - dt / dx * (flux[i + 1] - flux[i]) - dt * rho[i] * stretch;
    }
    return out;
}

void apply_momentum(FieldState& state, const MomentumSolution& solution)
{
    state.v = solution.v;
    state.grad_v = solution.grad_v;
    state.p = solution.p;
    state.top_v = solution.top_v;
    state.top_grad_v = solution.top_grad_v;
}

} // namespace growthsim
