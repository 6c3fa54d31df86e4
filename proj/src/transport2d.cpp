#include "growthsim/transport2d.hpp"

#include <cmath>
#include <string>

#include "growthsim/kinematics.hpp"

namespace growthsim
{

Grid2D::Grid2D(std::size_t nx_, std::size_t ny_, double lx_, double ly_)
    : nx(nx_), ny(ny_), lx(lx_), ly(ly_)
{
    if (nx < 3 || ny < 3)
        throw ValidationError("2D grid needs at least 3 cells per direction");
    if (!(lx > 0.0) || !(ly > 0.0))
        throw ValidationError("2D grid extents must be positive");
}

namespace
{

enum class Ghost
{
    repeat,
    linear
};

void check_courant(const Grid2D& grid, const Field2D<Vec2>& v, double dt)
{
    if (!(dt > 0.0))
        throw ValidationError("time step must be positive");
    double cx = 0.0, cy = 0.0;
    for (const Vec2& vi : v)
    {
        cx = std::max(cx, std::abs(vi(0)));
        cy = std::max(cy, std::abs(vi(1)));
    }
    const double courant = dt * (cx / grid.dx() + cy / grid.dy());
    if (courant > kMaxCourant)
        throw CFLViolation("Courant number " + std::to_string(courant) + " exceeds " +
                           std::to_string(kMaxCourant));
}

// (v . grad) f with first-order upwinding.
template <typename T>
T upwind_advection(const Grid2D& grid, const Field2D<T>& f, const Vec2& v, std::size_t i,
                   std::size_t j, Ghost ghost)
{
    auto value = [&](long ii, long jj) -> T {
        const long nx = static_cast<long>(grid.nx), ny = static_cast<long>(grid.ny);
        auto at = [&](long a, long b) -> const T& {
            return f[grid.index(static_cast<std::size_t>(a), static_cast<std::size_t>(b))];
        };
        if (ii < 0)
            return ghost == Ghost::linear ? T(2.0 * at(0, jj) - at(1, jj)) : at(0, jj);
        if (ii >= nx)
            return ghost == Ghost::linear ? T(2.0 * at(nx - 1, jj) - at(nx - 2, jj)) : at(nx - 1, jj);
        if (jj < 0)
            return ghost == Ghost::linear ? T(2.0 * at(ii, 0) - at(ii, 1)) : at(ii, 0);
        if (jj >= ny)
            return ghost == Ghost::linear ? T(2.0 * at(ii, ny - 1) - at(ii, ny - 2)) : at(ii, ny - 1);
        return at(ii, jj);
    };
    const long I = static_cast<long>(i), J = static_cast<long>(j);
    const T& c = f[grid.index(i, j)];
    T out = T(0.0 * c);
    if (v(0) > 0.0)
        out += v(0) * (c - value(I - 1, J)) / grid.dx();
    else if (v(0) < 0.0)
        out += v(0) * (value(I + 1, J) - c) / grid.dx();
    if (v(1) > 0.0)
        out += v(1) * (c - value(I, J - 1)) / grid.dy();
    else if (v(1) < 0.0)
        out += v(1) * (value(I, J + 1) - c) / grid.dy();
    return out;
}

// Second-order derivative along one axis with one-sided stencils at walls.
template <typename T, typename At>
T derivative(At&& at, std::size_t k, std::size_t n, double h)
{
    if (k == 0)
        return T((-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h));
    if (k + 1 == n)
        return T((3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h));
    return T((at(k + 1) - at(k - 1)) / (2.0 * h));
}

} // namespace

Field2D<Tensor2> advance_F_grid_2d(const Grid2D& grid, const Field2D<Tensor2>& F,
                                   const Field2D<Vec2>& v, const Field2D<Tensor2>& grad_v,
                                   double dt)
{
    check_courant(grid, v, dt);
    Field2D<Tensor2> out(grid.size());
    for (std::size_t j = 0; j < grid.ny; ++j)
        for (std::size_t i = 0; i < grid.nx; ++i)
        {
            const std::size_t c = grid.index(i, j);
            out[c] = F[c] - dt * upwind_advection(grid, F, v[c], i, j, Ghost::repeat) +
                     dt * (grad_v[c] * F[c]);
        }
    return out;
}

Field2D<Vec2> advance_inverse_motion(const Grid2D& grid, const Field2D<Vec2>& chi_inv,
                                     const Field2D<Vec2>& v, double dt, double mass_rate)
{
    if (mass_rate != 0.0)
        throw GrowthNotSupported(
            "inverse-motion transport has no inflow condition for added material");
    check_courant(grid, v, dt);
    Field2D<Vec2> out(grid.size());
    for (std::size_t j = 0; j < grid.ny; ++j)
        for (std::size_t i = 0; i < grid.nx; ++i)
        {
            const std::size_t c = grid.index(i, j);
            out[c] = chi_inv[c] - dt * upwind_advection(grid, chi_inv, v[c], i, j, Ghost::linear);
        }
    return out;
}

Field2D<Tensor2> velocity_gradient_2d(const Grid2D& grid, const Field2D<Vec2>& v)
{
    Field2D<Tensor2> out(grid.size());
    for (std::size_t j = 0; j < grid.ny; ++j)
        for (std::size_t i = 0; i < grid.nx; ++i)
        {
            const Vec2 d1 = derivative<Vec2>([&](std::size_t k) { return v[grid.index(k, j)]; }, i,
                                             grid.nx, grid.dx());
            const Vec2 d2 = derivative<Vec2>([&](std::size_t k) { return v[grid.index(i, k)]; }, j,
                                             grid.ny, grid.dy());
            Tensor2& L = out[grid.index(i, j)];
            L.col(0) = d1;
            L.col(1) = d2;
        }
    return out;
}

Field2D<Tensor2> deformation_from_inverse_motion(const Grid2D& grid, const Field2D<Vec2>& chi_inv)
{
    Field2D<Tensor2> grad = velocity_gradient_2d(grid, chi_inv);
    for (Tensor2& g : grad)
        g = inverse(g);
    return grad;
}

double max_row_curl(const Grid2D& grid, const Field2D<Tensor2>& A, std::size_t margin)
{
    margin = std::max<std::size_t>(margin, 1);
    double worst = 0.0;
    for (std::size_t j = margin; j + margin < grid.ny; ++j)
        for (std::size_t i = margin; i + margin < grid.nx; ++i)
            for (int r = 0; r < 2; ++r)
            {
                const double dA1_dx2 =
                    (A[grid.index(i, j + 1)](r, 0) - A[grid.index(i, j - 1)](r, 0)) / (2.0 * grid.dy());
                const double dA2_dx1 =
                    (A[grid.index(i + 1, j)](r, 1) - A[grid.index(i - 1, j)](r, 1)) / (2.0 * grid.dx());
                worst = std::max(worst, std::abs(dA1_dx2 - dA2_dx1));
            }
    return worst;
}

} // namespace growthsim
