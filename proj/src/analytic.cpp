#include <cmath>
#include <string>

#include "growthsim/scenarios.hpp"

namespace growthsim
{

NonNormalSolution analytic_non_normal(double x2, double t, double alpha, double G, double mu,
                                      double V_G)
{
    if (!(mu > 0.0))
        throw ValidationError("mu must be positive for the regularized closed form");
    if (!(V_G > 0.0))
        throw ValidationError("V_G must be positive for the closed form");
    const double H = V_G * t;
    if (x2 < 0.0 || x2 > H + 1e-12 * std::max(1.0, H))
        throw OutOfBody("x2 = " + std::to_string(x2) + " lies outside the body [0, " +
                        std::to_string(H) + "]");

    const double rate = G / mu;
    const double age = std::max(0.0, t - x2 / V_G);
    const double since_attach = std::exp(-rate * age);
    return {V_G * alpha * (since_attach - std::exp(-rate * t)), -alpha * since_attach, G};
}

FdmShearSolution analytic_fdm_shear(double M, double v0, double G)
{
    const double flux = M * v0;
    FdmShearSolution s;
    s.sigma << flux * flux / G, flux, flux, 0.0;
    s.F_e << 1.0, flux / G, 0.0, 1.0;
    s.v1 = 0.0;
    return s;
}

} // namespace growthsim
