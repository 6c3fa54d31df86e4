#include "growthsim/kinematics.hpp"

#include <cmath>
#include <string>

namespace growthsim
{

namespace
{

// Nodes of a piecewise-linear profile in x2, kept strictly increasing.
template <typename T>
struct NodeProfile
{
    std::vector<double> x;
    std::vector<T> values;

    void push(double xi, const T& value)
    {
        if (!x.empty() && !(xi > x.back()))
            return;
        x.push_back(xi);
        values.push_back(value);
    }

    T at(double xi) const
    {
        if (xi <= x.front())
            return values.front();
        if (xi >= x.back())
            return values.back();
        std::size_t j = 0;
        while (x[j + 1] < xi)
            ++j;
        const double w = (xi - x[j]) / (x[j + 1] - x[j]);
        return T((1.0 - w) * values[j] + w * values[j + 1]);
    }

    std::vector<T> onto(const Grid1D& target) const
    {
        return resample<T>(x, values, target);
    }
};

template <typename T>
NodeProfile<T> centers_profile(const Grid1D& grid, std::span<const T> cells)
{
    NodeProfile<T> profile;
    if (grid.empty())
    {
        profile.push(0.0, cells.front());
        return profile;
    }
    for (std::size_t i = 0; i < grid.size(); ++i)
        profile.push(grid.center(i), cells[i]);
    return profile;
}

void check_step(double dt)
{
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw ValidationError("time step must be positive and finite");
}

} // namespace

TransportedField advance_tensor_field(const Grid1D& grid, std::span<const Tensor2> cells,
                                      const Tensor2& top_value, std::span<const Vec2> v,
                                      std::span<const Tensor2> grad_v, const Vec2& top_v,
                                      const Tensor2& top_grad_v, double dt,
                                      const TopBoundary& top)
{
    check_step(dt);
    const bool accreting = top.mass_rate > 0.0;
    if (accreting && !top.inflow)
        throw MissingInflowBC("accreting top surface requires an inflow value");
    if (!(top.height_after > 0.0))
        throw NegativeHeight("transport step ends with height " + std::to_string(top.height_after));

    const std::size_t n = grid.size();
    std::vector<Tensor2> advanced(cells.begin(), cells.end());
    Tensor2 top_advanced = top_value;

    if (!grid.empty())
    {
        const double dx = grid.dx();
        double vmax = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            vmax = std::max(vmax, std::abs(v[i](1)));
        if (vmax * dt / dx > kMaxCourant)
            throw CFLViolation("Courant number " + std::to_string(vmax * dt / dx) + " exceeds " +
                               std::to_string(kMaxCourant));

        for (std::size_t i = 0; i < n; ++i)
        {
            const double a = v[i](1);
            Tensor2 flux = Tensor2::Zero();
            if (a > 0.0)
            {
                // The base is clamped, so the ghost below cell 0 repeats it.
                const Tensor2& below = i == 0 ? cells[0] : cells[i - 1];
                flux = a * (cells[i] - below) / dx;
            }
            else if (a < 0.0)
            {
                const Tensor2& above = i + 1 == n ? top_value : cells[i + 1];
                flux = a * (above - cells[i]) / dx;
            }
            advanced[i] = cells[i] - dt * flux + dt * (grad_v[i] * cells[i]);
        }
        top_advanced = top_value + dt * (top_grad_v * top_value);
    }
    else if (accreting)
    {
        top_advanced = *top.inflow + dt * (top_grad_v * *top.inflow);
    }

    // Nodes after the step: Eulerian cell values at the old centers and the
    // particle that sat on the old top face.
    NodeProfile<Tensor2> profile;
    if (grid.empty())
    {
        profile.push(0.0, top_advanced);
    }
    else
    {
        profile = centers_profile<Tensor2>(grid, advanced);
        profile.push(grid.height() + top_v(1) * dt, top_advanced);
    }
    if (accreting)
        profile.push(top.height_after, *top.inflow);

    TransportedField out;
    out.grid = grid.resized(top.height_after);
    out.cells = profile.onto(out.grid);
    out.top = accreting ? *top.inflow : profile.at(top.height_after);
    return out;
}

FieldState advance_F_e_grid(const FieldState& state, std::span<const Tensor2> grad_v, double dt,
                            const TopBoundary& top)
{
    TransportedField F_e = advance_tensor_field(state.grid, state.F_e, state.top_F_e, state.v,
                                                grad_v, state.top_v, state.top_grad_v, dt, top);

    FieldState out;
    out.grid = F_e.grid;
    out.t = state.t + dt;
    out.F_e = std::move(F_e.cells);
    out.top_F_e = F_e.top;

    auto carry = [&](auto cells, const auto& top_value) {
        using T = typename decltype(cells)::value_type;
        auto profile = centers_profile<T>(state.grid, cells);
        if (!state.grid.empty())
            profile.push(state.grid.height(), top_value);
        return profile;
    };
    const auto v_profile = carry(std::span<const Vec2>(state.v), state.top_v);
    const auto L_profile = carry(std::span<const Tensor2>(state.grad_v), state.top_grad_v);
    out.v = v_profile.onto(out.grid);
    out.grad_v = L_profile.onto(out.grid);
    out.top_v = v_profile.at(out.grid.height());
    out.top_grad_v = L_profile.at(out.grid.height());
    out.p = centers_profile<double>(state.grid, state.p).onto(out.grid);
    out.rho = centers_profile<double>(state.grid, state.rho).onto(out.grid);
    return out;
}

TransportedField advance_F_grid(const FieldState& state, std::span<const Tensor2> F,
                                const Tensor2& F_top, double dt, TopBoundary top)
{
    if (!top.inflow)
        top.inflow = Tensor2::Identity();
    return advance_tensor_field(state.grid, F, F_top, state.v, state.grad_v, state.top_v,
                                state.top_grad_v, dt, top);
}

// -- characteristics ------------------------------------------------------

namespace
{

template <typename Step>
void march(double t0, double t1, double dt, Step&& step)
{
    check_step(dt);
    if (!(t1 > t0))
        return;
    const auto n_steps = static_cast<std::size_t>(std::ceil((t1 - t0) / dt - 1e-9));
    for (std::size_t k = 0; k < n_steps; ++k)
    {
        const double t = t0 + static_cast<double>(k) * dt;
        const double t_next = k + 1 == n_steps ? t1 : t0 + static_cast<double>(k + 1) * dt;
        if (!step(t, t_next - t))
            return;
    }
}

} // namespace

PathlineRecord integrate_characteristics(const VelocitySampler& sampler, const Vec2& seed,
                                         double t0, double t1, double dt, const Tensor2& F_e0)
{
    PathlineRecord record;
    record.seed = seed;
    record.t_start = t0;
    record.samples.push_back({t0, seed, F_e0});

    Vec2 x = seed;
    Tensor2 F = F_e0;
    march(t0, t1, dt, [&](double t, double h) {
        const VelocitySample s1 = sampler(x, t);
        if (s1.ablated)
        {
            record.left_through_ablation = true;
            return false;
        }
        const Vec2 x_mid = x + 0.5 * h * s1.v;
        const Tensor2 F_mid = F + 0.5 * h * (s1.grad_v * F);
        const VelocitySample s2 = sampler(x_mid, t + 0.5 * h);
        if (s2.ablated)
        {
            record.left_through_ablation = true;
            return false;
        }
        x = x + h * s2.v;
        F = F + h * (s2.grad_v * F_mid);
        record.samples.push_back({t + h, x, F});
        return true;
    });
    return record;
}

std::vector<std::pair<double, Vec2>> integrate_pathline(const VelocitySampler& sampler,
                                                        const Vec2& seed, double t0, double t1,
                                                        double dt)
{
    std::vector<std::pair<double, Vec2>> out{{t0, seed}};
    Vec2 x = seed;
    march(t0, t1, dt, [&](double t, double h) {
        const VelocitySample s1 = sampler(x, t);
        if (s1.ablated)
            return false;
        const Vec2 x_mid = x + 0.5 * h * s1.v;
        const VelocitySample s2 = sampler(x_mid, t + 0.5 * h);
        if (s2.ablated)
            return false;
        x = x + h * s2.v;
        out.emplace_back(t + h, x);
        return true;
    });
    return out;
}

HistorySampler::HistorySampler(std::span<const FieldState> history) : history_(history)
{
    if (history_.empty())
        throw ValidationError("velocity history is empty");
}

VelocitySample HistorySampler::operator()(const Vec2& x, double t) const
{
    auto it = std::upper_bound(history_.begin(), history_.end(), t,
                               [](double value, const FieldState& s) { return value < s.t; });
    const std::size_t k = it == history_.begin() ? 0 : static_cast<std::size_t>(it - history_.begin()) - 1;
    const FieldState& s = history_[k];

    const double h_now = s.grid.height();
    const double h_next = k + 1 < history_.size() ? history_[k + 1].grid.height() : h_now;
    const double tol = 1e-12 * std::max(1.0, std::max(h_now, h_next));
    const double x2 = x(1);
    if (x2 < -tol)
        throw OutOfDomain("characteristic left the body through the base at x2 = " +
                          std::to_string(x2));

    VelocitySample out;
    if (x2 > std::max(h_now, h_next) + tol)
    {
        if (h_next < h_now)
        {
            out.ablated = true;
            return out;
        }
        throw OutOfDomain("characteristic at x2 = " + std::to_string(x2) +
                          " is above the body surface");
    }
    out.v = interpolate_cells(s.grid, s.v, s.top_v, x2);
    out.grad_v = interpolate_cells(s.grid, s.grad_v, s.top_grad_v, x2);
    return out;
}

Tensor2 sample_F_e(const FieldState& state, double x2)
{
    return interpolate_cells(state.grid, state.F_e, state.top_F_e, x2);
}

// -- reconstruction -------------------------------------------------------

Reconstruction reconstruct_reference(std::span<const FieldState> history, std::optional<double> t0)
{
    if (history.empty())
        throw ValidationError("reconstruction needs a nonempty history");

    Reconstruction rec;
    if (t0)
    {
        const double tol = 1e-12 * std::max(1.0, std::abs(*t0));
        auto it = std::find_if(history.begin(), history.end(),
                               [&](const FieldState& s) { return s.t >= *t0 - tol; });
        if (it == history.end())
            throw ValidationError("reference time lies after the stored history");
        rec.first = static_cast<std::size_t>(it - history.begin());
    }

    const FieldState& start = history[rec.first];
    rec.F.push_back({start.grid, std::vector<Tensor2>(start.grid.size(), Tensor2::Identity()),
                     Tensor2::Identity()});

    for (std::size_t k = rec.first; k + 1 < history.size(); ++k)
    {
        const FieldState& now = history[k];
        const FieldState& next = history[k + 1];
        const double dt = next.t - now.t;
        const double moved = now.grid.height() + now.top_v(1) * dt;
        const double growth = next.grid.height() - moved;
        const double tol = 1e-14 * std::max(1.0, next.grid.height());

        TopBoundary top;
        top.mass_rate = growth > tol ? 1.0 : (growth < -tol ? -1.0 : 0.0);
        top.height_after = next.grid.height();
        const TransportedField& F = rec.F.back();
        rec.F.push_back(advance_F_grid(now, F.cells, F.top, dt, top));
    }

    for (std::size_t k = 0; k < rec.F.size(); ++k)
    {
        const FieldState& s = history[rec.first + k];
        const TransportedField& F = rec.F[k];
        std::vector<Tensor2> relax(F.cells.size());
        for (std::size_t i = 0; i < F.cells.size(); ++i)
            relax[i] = inverse(s.F_e[i]) * F.cells[i];
        rec.F_relax.push_back(std::move(relax));
        rec.F_relax_top.push_back(inverse(s.top_F_e) * F.top);
    }
    return rec;
}

} // namespace growthsim
