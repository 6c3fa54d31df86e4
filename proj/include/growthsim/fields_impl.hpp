#pragma once

#include <algorithm>
#include <cmath>
#include <string>

namespace growthsim
{

inline Grid1D::Grid1D(std::size_t n_cells, double height) : n_cells_(n_cells), height_(height)
{
    if (n_cells < kMinCells)
        throw ValidationError("n_cells must be at least " + std::to_string(kMinCells));
    if (!(height >= 0.0) || !std::isfinite(height))
        throw ValidationError("grid height must be finite and nonnegative");
}

inline FieldState FieldState::uniform(const Grid1D& grid, double t, const Tensor2& F_e, double p,
                                      double rho)
{
    FieldState s;
    s.grid = grid;
    s.t = t;
    const std::size_t n = grid.size();
    s.v.assign(n, Vec2::Zero());
    s.grad_v.assign(n, Tensor2::Zero());
    s.F_e.assign(n, F_e);
    s.p.assign(n, p);
    s.rho.assign(n, rho);
    s.top_F_e = F_e;
    return s;
}

inline bool FieldState::finite() const
{
    auto ok = [](const auto& range) {
        return std::all_of(range.begin(), range.end(), [](const auto& x) {
            if constexpr (std::is_arithmetic_v<std::decay_t<decltype(x)>>)
                return std::isfinite(x);
            else
                return all_finite(x);
        });
    };
    return ok(v) && ok(grad_v) && ok(F_e) && ok(p) && ok(rho) && all_finite(top_v) &&
           all_finite(top_grad_v) && all_finite(top_F_e);
}

template <typename T>
T interpolate_cells(const Grid1D& grid, const std::vector<T>& cells, const T& top, double x2)
{
    const std::size_t n = grid.size();
    if (grid.empty() || x2 >= grid.height())
        return top;
    if (x2 <= grid.center(0))
        return cells[0];
    if (x2 >= grid.center(n - 1))
    {
        const double w = (x2 - grid.center(n - 1)) / (grid.height() - grid.center(n - 1));
        return T((1.0 - w) * cells[n - 1] + w * top);
    }
    const double s = x2 / grid.dx() - 0.5;
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(s), n - 2);
    const double w = s - static_cast<double>(i);
    return T((1.0 - w) * cells[i] + w * cells[i + 1]);
}

} // namespace growthsim
