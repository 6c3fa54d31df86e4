#pragma once

#include <span>
#include <string>
#include <vector>

#include "growthsim/constitutive.hpp"
#include "growthsim/fields.hpp"
#include "growthsim/tensor.hpp"

namespace growthsim
{

/// Surface source data at the growing boundary.
struct GrowthInput
{
    double M = 0.0;                         // mass rate per area, > 0 accretion
    Vec2 v_a = Vec2::Zero();                // velocity of material at attachment
    Vec2 t_b = Vec2::Zero();                // external traction
    Tensor2 F_e_attach = Tensor2::Identity();

    /// rho = M / (v_a . n); throws ValidationError when not positive.
    double inferred_density(const Vec2& n) const;
};

enum class BoundaryKind
{
    clamped,
    growing,
    traction
};

/// V_b . n = v . n + M / rho
double boundary_normal_velocity(double M, double rho, const Vec2& v, const Vec2& n);

/// sigma n = M (v_a - v) + t_b
Vec2 growth_traction(double M, const Vec2& v_a, const Vec2& v, const Vec2& t_b);

/// One side of a growth surface.
struct SideState
{
    double rho = 0.0;
    Vec2 v = Vec2::Zero();
    Tensor2 sigma = Tensor2::Zero();

    /// Empty exterior whose only action on the body is the traction t_b.
    static SideState vacuum(const Vec2& t_b, const Vec2& n);
};

enum class JumpForm
{
    full,        // complete mass and momentum jump conditions
    slow_growth  // momentum fluxes neglected: sigma n = t_b at the surface
};

struct JumpResiduals
{
    double mass = 0.0;
    Vec2 momentum = Vec2::Zero();
};

/// Residuals of the surface jump conditions, with [[a]] = a_interior - a_exterior
/// and n the outward normal of the interior.
JumpResiduals jump_residuals(const SideState& interior, const SideState& exterior, const Vec2& V_b,
                             const Vec2& n, double M, const Vec2& v_a,
                             JumpForm form = JumpForm::full);

/// Solution of the quasistatic through-thickness momentum balance.
struct MomentumSolution
{
    std::vector<double> v_faces;    // v1 at faces 0..n, v_faces[0] = 0 (clamped)
    std::vector<Vec2> v;            // cell averages
    std::vector<Tensor2> grad_v;    // [[0, dv1/dx2], [0, 0]] per cell
    std::vector<double> p;          // pressure per cell
    Vec2 top_v = Vec2::Zero();
    Tensor2 top_grad_v = Tensor2::Zero();
    double top_p = 0.0;
    double interior_residual = 0.0; // max tridiagonal row residual, stress units
    double top_residual = 0.0;      // |sigma12 - t1| at the top cell
};

/// Quasistatic momentum balance for fields depending on x2 only, with
/// v = v1(x2) e1, clamped base, prescribed top traction and mu > 0.
/// F_e must satisfy F_e21 = 0 (the reduced shear ansatz). The pressure is
/// eliminated through the normal traction: sigma22 = t2 + rho b2 (H - x2).
MomentumSolution quasistatic_momentum_solve_1d(const Grid1D& grid, std::span<const Tensor2> F_e,
                                               const Tensor2& top_F_e, const MaterialParams& params,
                                               const Vec2& top_traction,
                                               const Vec2& body_force = Vec2::Zero());

/// H + V_b dt; throws NegativeHeight on complete ablation.
double advance_domain(double H, double V_b_normal, double dt);

/// Height under a constant boundary speed, evaluated in closed form so that
/// no rounding accumulates over many steps.
struct DomainTracker
{
    double H0 = 0.0;
    double rate = 0.0;

    double height(double t) const;
    double height_after_steps(std::size_t steps, double dt) const;
};

/// Conservative upwind update of d rho/dt + div(rho v) = 0 on the 1D grid.
/// grad_v(0, 0) supplies the in-plane stretch rate dv1/dx1.
std::vector<double> density_update(const Grid1D& grid, std::span<const double> rho,
                                   std::span<const Vec2> v, std::span<const Tensor2> grad_v,
                                   double dt);

/// Fill a state with a solved momentum field.
void apply_momentum(FieldState& state, const MomentumSolution& solution);

} // namespace growthsim
