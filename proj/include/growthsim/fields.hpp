#pragma once

#include <cstddef>
#include <vector>

#include "growthsim/tensor.hpp"

namespace growthsim
{

/// Uniform cell-centered grid over the through-thickness coordinate x2 in
/// [0, H]. H == 0 denotes a body that has not been deposited yet.
class Grid1D
{
public:
    static constexpr std::size_t kMinCells = 4;

    Grid1D() = default;
    Grid1D(std::size_t n_cells, double height);

    std::size_t size() const { return n_cells_; }
    double height() const { return height_; }
    double dx() const { return height_ / static_cast<double>(n_cells_); }
    bool empty() const { return height_ == 0.0; }

    double center(std::size_t i) const { return (static_cast<double>(i) + 0.5) * dx(); }
    double face(std::size_t i) const { return static_cast<double>(i) * dx(); }

    /// Same cell count on [0, new_height].
    Grid1D resized(double new_height) const { return Grid1D(n_cells_, new_height); }

private:
    std::size_t n_cells_ = kMinCells;
    double height_ = 0.0;
};

/// Discretized fields at one instant. Cell arrays all have grid.size()
/// entries; the top-face values belong to the material at x2 = H.
struct FieldState
{
    Grid1D grid;
    double t = 0.0;

    std::vector<Vec2> v;
    std::vector<Tensor2> grad_v;
    std::vector<Tensor2> F_e;
    std::vector<double> p;
    std::vector<double> rho;

    Vec2 top_v = Vec2::Zero();
    Tensor2 top_grad_v = Tensor2::Zero();
    Tensor2 top_F_e = Tensor2::Identity();

    /// Uniform state: zero velocity, constant F_e, p and rho.
    static FieldState uniform(const Grid1D& grid, double t, const Tensor2& F_e, double p,
                              double rho);

    bool finite() const;
};

/// Piecewise-linear reconstruction through the cell centers, the top-face
/// value at x2 = H, and constant extension below the first center.
template <typename T>
T interpolate_cells(const Grid1D& grid, const std::vector<T>& cells, const T& top, double x2);

} // namespace growthsim

#include "growthsim/fields_impl.hpp"
