#pragma once

#include <cmath>
#include <optional>
#include <utility>

#include "growthsim/tensor.hpp"

namespace growthsim
{

/// Material constants for an incompressible neo-Hookean solid with a viscous
/// regularization term.
template <typename Scalar = double>
struct MaterialParamsT
{
    Scalar G = 1;   // shear modulus [Pa]
    Scalar mu = 0;  // viscous coefficient [Pa s]
    Scalar rho = 1; // mass density [kg/m^3]

    bool valid() const { return G > 0 && mu >= 0 && rho > 0; }
};
using MaterialParams = MaterialParamsT<double>;

/// Stress state of material at the instant it attaches to the body.
struct AttachmentSpec
{
    Tensor2 sigma_star = Tensor2::Zero();
    // Added material is undeformed along the growth surface (F_e l = l for l
    // tangent to the surface), restricting the inversion to [[1, g], [0, 1]].
    bool tangential_identity = true;
    // When set, the pressure is fixed by the body rather than solved for.
    std::optional<double> pinned_pressure;
};

/// -p I + G F_e F_e^T. Symmetric bitwise: the off-diagonal is computed once.
template <typename Derived>
Tensor<typename Derived::Scalar, Derived::RowsAtCompileTime>
neo_hookean_stress(const Eigen::MatrixBase<Derived>& F_e, typename Derived::Scalar p,
                   const MaterialParamsT<typename Derived::Scalar>& params)
{
    using Scalar = typename Derived::Scalar;
    constexpr int Dim = Derived::RowsAtCompileTime;
    Tensor<Scalar, Dim> b = F_e * F_e.transpose();
    for (int i = 0; i < Dim; ++i)
        for (int j = i + 1; j < Dim; ++j)
            b(j, i) = b(i, j);
    Tensor<Scalar, Dim> sigma = params.G * b;
    sigma.diagonal().array() -= p;
    return sigma;
}

/// Neo-Hookean stress plus the viscous term 2 mu sym(grad v).
template <typename DerivedF, typename DerivedL>
Tensor<typename DerivedF::Scalar, DerivedF::RowsAtCompileTime>
total_stress(const Eigen::MatrixBase<DerivedF>& F_e, const Eigen::MatrixBase<DerivedL>& grad_v,
             typename DerivedF::Scalar p, const MaterialParamsT<typename DerivedF::Scalar>& params)
{
    auto sigma = neo_hookean_stress(F_e, p, params);
    if (params.mu == 0)
        return sigma;
    sigma += 2 * params.mu * sym(grad_v);
    return sigma;
}

/// Invert the stress response on the tangential-identity family: find
/// F_e = [[1, g], [0, 1]] and p such that the traction sigma e2 of the
/// returned state equals sigma_star e2.
inline std::pair<Tensor2, double> attach_elastic_deformation(const AttachmentSpec& spec,
                                                             const MaterialParams& params)
{
    const Tensor2& s = spec.sigma_star;
    if (!all_finite(s))
        throw NoInverse("attachment stress is not finite");
    if (s(0, 1) != s(1, 0))
        throw NoInverse("attachment stress must be symmetric");
    if (!spec.tangential_identity)
        throw NoInverse("the stress response is only inverted on the tangential-identity family");

    // sigma e2 = (G g, G - p)
    const double gamma = s(0, 1) / params.G;
    double p = params.G - s(1, 1);
    if (spec.pinned_pressure)
    {
        const double achievable = params.G - *spec.pinned_pressure;
        const double scale = std::max({1.0, std::abs(params.G), std::abs(s(1, 1))});
        if (std::abs(achievable - s(1, 1)) > 1e-12 * scale)
            throw NoInverse("requested normal traction " + std::to_string(s(1, 1)) +
                            " is unreachable with the pinned pressure");
        p = *spec.pinned_pressure;
    }

    Tensor2 F_e;
    F_e << 1.0, gamma, 0.0, 1.0;
    return {F_e, p};
}

} // namespace growthsim
