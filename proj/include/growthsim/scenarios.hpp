#pragma once

#include <optional>
#include <string>
#include <vector>

#include "growthsim/balance.hpp"
#include "growthsim/constitutive.hpp"
#include "growthsim/fields.hpp"
#include "growthsim/kinematics.hpp"

namespace growthsim
{

enum class ScenarioKind
{
    non_normal, // sheared attachment, traction-free top, viscous relaxation
    fdm_shear,  // deposition with tangential momentum transfer
    thermal     // attachment with isotropic thermal contraction
};

std::string to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(const std::string& name);

/// Determinant tolerance for incompressible fields in the bulk.
inline constexpr double kDetTolerance = 1e-6;

struct ScenarioConfig
{
    ScenarioKind kind = ScenarioKind::non_normal;
    MaterialParams params{1.0, 0.1, 1.0};

    double alpha = 0.5;   // attachment shear (non_normal) or thermal factor (thermal)
    double H0 = 0.0;      // initial height
    double V_G = 1.0;     // growth speed M / rho (non_normal, thermal)
    double h = 0.1;       // deposited layer thickness (fdm_shear)
    double v0 = 1.0;      // nozzle speed (fdm_shear)
    double L = 1.0;       // nozzle travel length (fdm_shear)
    Vec2 t_b = Vec2::Zero();

    std::size_t n_cells = 200;
    std::optional<double> dt;  // default: Courant-limited
    double t_end = 1.0;
    std::size_t output_every = 10;
    std::vector<double> mu_sweep{1.0, 0.3, 0.1, 0.03, 0.01};

    /// Documented defaults for each scenario (G = rho = 1, V_G = 1).
    static ScenarioConfig defaults(ScenarioKind kind);

    /// Throws ValidationError naming the offending field.
    void validate() const;

    GrowthInput growth() const;
    /// Speed of the top surface, V_b . e2.
    double boundary_speed() const;
    /// Resolved time step; t_end is an integer multiple of it.
    double time_step() const;
    std::size_t step_count() const;
};

struct FieldError
{
    std::string field;
    double linf = 0.0;
    double l2 = 0.0;
};

struct OracleErrors
{
    std::size_t step = 0;
    double t = 0.0;
    std::vector<FieldError> fields;

    double linf(const std::string& field) const;
};

struct StepMetrics
{
    std::size_t step = 0;
    double t = 0.0;
    double H = 0.0;
    double momentum_residual = 0.0;     // interior x1-momentum balance
    double top_traction_residual = 0.0; // |sigma e2 - t| at the top, both components
    double base_velocity = 0.0;         // |v| at the clamped base face
    double mass_jump = 0.0;
    double momentum_jump = 0.0;
    double ansatz_deviation = 0.0;      // max |F_e21|
    double det_deviation = 0.0;         // max |det F_e - det F_e_ref|
};

struct RunResult
{
    ScenarioConfig config;
    std::vector<FieldState> history;    // one entry per time level, t_0 = 0 .. t_end
    std::vector<StepMetrics> metrics;   // aligned with history
    std::vector<OracleErrors> errors;   // empty for scenarios without a closed form
    std::vector<PathlineRecord> pathlines;
    double reduced_ansatz_residual = 0.0;

    const FieldState& final_state() const { return history.back(); }
};

// -- closed forms ---------------------------------------------------------

struct NonNormalSolution
{
    double v1;
    double F_e12;
    double p;
};

/// Viscously regularized relaxation of sheared attachment on a clamped
/// substrate growing at V_G from H = 0.
NonNormalSolution analytic_non_normal(double x2, double t, double alpha, double G, double mu,
                                      double V_G);

struct FdmShearSolution
{
    Tensor2 sigma;
    Tensor2 F_e;
    double v1;
};

/// Uniform steady shear under the momentum flux M v0 e1.
FdmShearSolution analytic_fdm_shear(double M, double v0, double G);

// -- drivers --------------------------------------------------------------

RunResult run_non_normal(const ScenarioConfig& config);
RunResult run_fdm_shear(const ScenarioConfig& config);
RunResult run_thermal(const ScenarioConfig& config);
RunResult run_scenario(const ScenarioConfig& config);

/// Pathlines of `count` particles spread over the final body, integrated
/// through the stored velocity history.
std::vector<PathlineRecord> trace_pathlines(const RunResult& result, std::size_t count);

struct ConvergenceRow
{
    std::size_t n_cells = 0;
    double dt = 0.0;
    double linf = 0.0;
    double l2 = 0.0;
    std::optional<double> order;   // observed order against the previous row
    double seconds = 0.0;
};

/// Oracle error at t_end across resolutions, dt proportional to 1/n_cells.
std::vector<ConvergenceRow> convergence_study(const ScenarioConfig& config,
                                              const std::vector<std::size_t>& resolutions);

/// Observed order log(e_coarse / e_fine) / log(n_fine / n_coarse).
double observed_order(double e_coarse, double e_fine, double refinement = 2.0);

} // namespace growthsim
