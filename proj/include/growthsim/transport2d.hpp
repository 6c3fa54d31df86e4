#pragma once

#include <functional>
#include <vector>

#include "growthsim/tensor.hpp"

namespace growthsim
{

/// Uniform cell-centered box grid [0, lx] x [0, ly] for fixed-particle-set
/// (no growth) transport studies. Storage is row-major in (j, i).
struct Grid2D
{
    std::size_t nx = 0;
    std::size_t ny = 0;
    double lx = 1.0;
    double ly = 1.0;

    Grid2D(std::size_t nx_, std::size_t ny_, double lx_ = 1.0, double ly_ = 1.0);

    double dx() const { return lx / static_cast<double>(nx); }
    double dy() const { return ly / static_cast<double>(ny); }
    std::size_t size() const { return nx * ny; }
    std::size_t index(std::size_t i, std::size_t j) const { return j * nx + i; }
    Vec2 center(std::size_t i, std::size_t j) const
    {
        return {(static_cast<double>(i) + 0.5) * dx(), (static_cast<double>(j) + 0.5) * dy()};
    }
};

template <typename T>
using Field2D = std::vector<T>;

/// Sample a function at every cell center.
template <typename T>
Field2D<T> sample_field(const Grid2D& grid, const std::function<T(const Vec2&)>& f)
{
    Field2D<T> out(grid.size());
    for (std::size_t j = 0; j < grid.ny; ++j)
        for (std::size_t i = 0; i < grid.nx; ++i)
            out[grid.index(i, j)] = f(grid.center(i, j));
    return out;
}

/// One upwind / forward-Euler step of dF/dt + (v . grad) F = (grad v) F.
/// Inflow ghosts repeat the boundary cell.
Field2D<Tensor2> advance_F_grid_2d(const Grid2D& grid, const Field2D<Tensor2>& F,
                                   const Field2D<Vec2>& v, const Field2D<Tensor2>& grad_v,
                                   double dt);

/// One upwind step of the passive advection of the inverse motion
/// X = chi^{-1}(x, t). Inflow ghosts extrapolate linearly. Only valid for a
/// fixed particle set: any nonzero surface mass rate raises GrowthNotSupported.
Field2D<Vec2> advance_inverse_motion(const Grid2D& grid, const Field2D<Vec2>& chi_inv,
                                     const Field2D<Vec2>& v, double dt, double mass_rate = 0.0);

/// F = (grad chi^{-1})^{-1}, second-order differences (one-sided at walls).
Field2D<Tensor2> deformation_from_inverse_motion(const Grid2D& grid,
                                                 const Field2D<Vec2>& chi_inv);

/// Gradient of a cell-centered vector field, same stencils.
Field2D<Tensor2> velocity_gradient_2d(const Grid2D& grid, const Field2D<Vec2>& v);

/// Row-wise spatial curl of a tensor field A: for each row r,
/// d A_r1 / dx2 - d A_r2 / dx1. Returns the max magnitude over cells at least
/// `margin` cells away from the walls.
double max_row_curl(const Grid2D& grid, const Field2D<Tensor2>& A, std::size_t margin = 1);

} // namespace growthsim
