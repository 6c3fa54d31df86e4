#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "growthsim/fields.hpp"
#include "growthsim/tensor.hpp"

namespace growthsim
{

/// Courant limit for the upwind transport step.
inline constexpr double kMaxCourant = 0.9;

/// Conditions at the top surface x2 = H for one transport step.
struct TopBoundary
{
    double mass_rate = 0.0;          // M: > 0 accretion (inflow), < 0 ablation (outflow)
    std::optional<Tensor2> inflow;   // value carried by newly attached material
    double height_after = 0.0;       // H at the end of the step
};

/// A tensor field on a grid together with the value carried by the material
/// at the top face.
struct TransportedField
{
    Grid1D grid;
    std::vector<Tensor2> cells;
    Tensor2 top = Tensor2::Identity();
};

/// One step of dA/dt + (v . grad) A = (grad v) A on the 1D grid: first-order
/// upwind in x2, forward Euler for the source, then regrid onto
/// [0, top.height_after]. Material deposited during the step takes the inflow
/// value; an ablating top is extrapolated from the interior.
TransportedField advance_tensor_field(const Grid1D& grid, std::span<const Tensor2> cells,
                                      const Tensor2& top_value, std::span<const Vec2> v,
                                      std::span<const Tensor2> grad_v, const Vec2& top_v,
                                      const Tensor2& top_grad_v, double dt,
                                      const TopBoundary& top);

/// Advance F_e of a field state by dt. Velocity, pressure and density are
/// carried over to the new grid unchanged; the momentum solve refreshes them.
FieldState advance_F_e_grid(const FieldState& state, std::span<const Tensor2> grad_v, double dt,
                            const TopBoundary& top);

/// Same transport for the total deformation gradient F. The inflow value
/// defaults to the identity (added material is its own reference).
TransportedField advance_F_grid(const FieldState& state, std::span<const Tensor2> F,
                                const Tensor2& F_top, double dt, TopBoundary top);

/// Piecewise-linear resampling of cell data onto [0, new_height]. Positions
/// above every node take the value of the highest node.
template <typename T>
std::vector<T> resample(std::span<const double> node_x, std::span<const T> node_values,
                        const Grid1D& target);

// -- characteristics ------------------------------------------------------

struct VelocitySample
{
    Vec2 v = Vec2::Zero();
    Tensor2 grad_v = Tensor2::Zero();
    // The point lies above an ablating surface: the particle has left the body.
    bool ablated = false;
};

using VelocitySampler = std::function<VelocitySample(const Vec2& x, double t)>;

struct PathlineSample
{
    double t;
    Vec2 x;
    Tensor2 F_e;
};

struct PathlineRecord
{
    Vec2 seed = Vec2::Zero();
    double t_start = 0.0;
    std::vector<PathlineSample> samples;
    bool left_through_ablation = false;
};

/// RK2 (midpoint) integration of dx/dt = v, dF_e/dt = (grad v) F_e from t0 to
/// t1. The last step is shortened to land on t1.
PathlineRecord integrate_characteristics(const VelocitySampler& sampler, const Vec2& seed,
                                         double t0, double t1, double dt, const Tensor2& F_e0);

/// Positions only, same integrator and step sequence.
std::vector<std::pair<double, Vec2>> integrate_pathline(const VelocitySampler& sampler,
                                                        const Vec2& seed, double t0, double t1,
                                                        double dt);

/// Velocity field from a stored history: piecewise-linear in x2,
/// piecewise-constant in time over [t_k, t_{k+1}).
class HistorySampler
{
public:
    explicit HistorySampler(std::span<const FieldState> history);

    VelocitySample operator()(const Vec2& x, double t) const;

private:
    std::span<const FieldState> history_;
};

/// Interpolated F_e of a stored state at height x2.
Tensor2 sample_F_e(const FieldState& state, double x2);

// -- reconstruction -------------------------------------------------------

struct Reconstruction
{
    std::size_t first = 0;                  // history index of t0
    std::vector<TransportedField> F;        // one per history entry from `first`
    std::vector<std::vector<Tensor2>> F_relax;
    std::vector<Tensor2> F_relax_top;
};

/// Replay the stored velocities from t0 (default: the earliest stored time)
/// with F(t0) = I and recover F_relax = F_e^{-1} F at every sample.
Reconstruction reconstruct_reference(std::span<const FieldState> history,
                                     std::optional<double> t0 = std::nullopt);

/// Rate of F_e when the relaxed shape itself evolves:
/// (grad v) F_e + F_e F_relax d/dt(F_relax^{-1}).
template <typename D1, typename D2, typename D3, typename D4>
Tensor<typename D1::Scalar, D1::RowsAtCompileTime>
elastic_rate_with_relax_evolution(const Eigen::MatrixBase<D1>& F_e,
                                  const Eigen::MatrixBase<D2>& grad_v,
                                  const Eigen::MatrixBase<D3>& F_relax,
                                  const Eigen::MatrixBase<D4>& d_relax_inv_dt)
{
    return grad_v * F_e + F_e * F_relax * d_relax_inv_dt;
}

} // namespace growthsim

#include "growthsim/kinematics_impl.hpp"
