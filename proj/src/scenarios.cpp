#include "growthsim/scenarios.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace growthsim
{

std::string to_string(ScenarioKind kind)
{
    switch (kind)
    {
    case ScenarioKind::non_normal:
        return "non_normal";
    case ScenarioKind::fdm_shear:
        return "fdm_shear";
    case ScenarioKind::thermal:
        return "thermal";
    }
    return "unknown";
}

ScenarioKind scenario_kind_from_string(const std::string& name)
{
    if (name == "non_normal")
        return ScenarioKind::non_normal;
    if (name == "fdm_shear")
        return ScenarioKind::fdm_shear;
    if (name == "thermal")
        return ScenarioKind::thermal;
    throw ValidationError("kind: unknown scenario '" + name + "'");
}

ScenarioConfig ScenarioConfig::defaults(ScenarioKind kind)
{
    ScenarioConfig c;
    c.kind = kind;
    switch (kind)
    {
    case ScenarioKind::non_normal:
        c.alpha = 0.5;
        c.H0 = 0.0;
        break;
    case ScenarioKind::fdm_shear:
        c.H0 = 1.0;
        break;
    case ScenarioKind::thermal:
        c.alpha = 0.9;
        c.H0 = 0.25;
        break;
    }
    return c;
}

void ScenarioConfig::validate() const
{
    auto require = [](bool ok, const std::string& field, const std::string& rule) {
        if (!ok)
            throw ValidationError(field + ": " + rule);
    };
    require(params.G > 0.0 && std::isfinite(params.G), "G", "must be positive");
    require(params.mu > 0.0 && std::isfinite(params.mu), "mu",
            "must be positive (the momentum balance is viscously regularized)");
    require(params.rho > 0.0 && std::isfinite(params.rho), "rho", "must be positive");
    require(std::isfinite(alpha), "alpha", "must be finite");
    require(H0 >= 0.0 && std::isfinite(H0), "H0", "must be nonnegative");
    require(std::isfinite(V_G), "V_G", "must be finite");
    require(t_end > 0.0 && std::isfinite(t_end), "t_end", "must be positive");
    require(!dt || (*dt > 0.0 && std::isfinite(*dt)), "dt", "must be positive");
    require(n_cells >= 16, "n_cells", "must be at least 16");
    require(output_every >= 1, "output_every", "must be at least 1");
    require(all_finite(t_b), "t_b", "must be finite");
    for (double m : mu_sweep)
        require(m > 0.0 && std::isfinite(m), "mu_sweep", "entries must be positive");

    switch (kind)
    {
    case ScenarioKind::non_normal:
        require(H0 > 0.0 || V_G > 0.0, "V_G", "must be positive when the body starts empty");
        break;
    case ScenarioKind::fdm_shear:
        require(H0 > 0.0, "H0", "must be positive for fdm_shear");
        require(h >= 0.0 && std::isfinite(h), "h", "must be nonnegative");
        require(std::isfinite(v0), "v0", "must be finite");
        require(L > 0.0 && std::isfinite(L), "L", "must be positive");
        break;
    case ScenarioKind::thermal:
        require(alpha > 0.0, "alpha", "must be positive for thermal attachment");
        require(H0 > 0.0 || V_G > 0.0, "V_G", "must be positive when the body starts empty");
        break;
    }
}

GrowthInput ScenarioConfig::growth() const
{
    GrowthInput g;
    g.t_b = t_b;
    switch (kind)
    {
    case ScenarioKind::non_normal:
        g.M = params.rho * V_G;
        g.v_a = Vec2(0.0, V_G);
        g.F_e_attach << 1.0, -alpha, 0.0, 1.0;
        break;
    case ScenarioKind::fdm_shear:
    {
        g.M = params.rho * h * v0 / L;
        g.v_a = Vec2(v0, 0.0);
        // Undeformed along the surface, loaded by the momentum flux M v0 e1.
        AttachmentSpec spec;
        spec.sigma_star = analytic_fdm_shear(g.M, v0, params.G).sigma;
        spec.sigma_star(0, 1) += t_b(0);
        spec.sigma_star(1, 0) += t_b(0);
        spec.sigma_star(1, 1) += t_b(1);
        g.F_e_attach = attach_elastic_deformation(spec, params).first;
        break;
    }
    case ScenarioKind::thermal:
        g.M = params.rho * V_G;
        g.v_a = Vec2(0.0, V_G);
        g.F_e_attach = Tensor2::Identity() / alpha;
        break;
    }
    return g;
}

double ScenarioConfig::boundary_speed() const
{
    const GrowthInput g = growth();
    return boundary_normal_velocity(g.M, params.rho, Vec2::Zero(), Vec2(0.0, 1.0));
}

std::size_t ScenarioConfig::step_count() const
{
    double target = 0.0;
    if (dt)
    {
        target = *dt;
    }
    else
    {
        const double speed = std::abs(boundary_speed());
        const double H_end = H0 + boundary_speed() * t_end;
        const double H_ref = H0 > 0.0 ? std::min(H0, H_end) : H_end;
        target = speed > 0.0 && H_ref > 0.0
                     ? kMaxCourant * H_ref / (static_cast<double>(n_cells) * speed)
                     : t_end / static_cast<double>(n_cells);
        // Forward-Euler relaxation of F_e stays monotone for dt <= mu / G.
        target = std::min(target, params.mu / params.G);
    }
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(t_end / target - 1e-9)));
}

double ScenarioConfig::time_step() const
{
    return t_end / static_cast<double>(step_count());
}

double OracleErrors::linf(const std::string& field) const
{
    for (const FieldError& e : fields)
        if (e.field == field)
            return e.linf;
    throw ValidationError("no oracle error recorded for field '" + field + "'");
}

double observed_order(double e_coarse, double e_fine, double refinement)
{
    return std::log(e_coarse / e_fine) / std::log(refinement);
}

namespace
{

const Vec2 kUp(0.0, 1.0);

class FieldErrorAccumulator
{
public:
    FieldErrorAccumulator(std::string name, double dx) : error_{std::move(name), 0.0, 0.0}, dx_(dx) {}

    void add(double computed, double exact)
    {
        const double e = std::abs(computed - exact);
        error_.linf = std::max(error_.linf, e);
        sum_ += e * e * dx_;
    }

    FieldError result() const
    {
        FieldError e = error_;
        e.l2 = std::sqrt(sum_);
        return e;
    }

private:
    FieldError error_;
    double dx_;
    double sum_ = 0.0;
};

struct ScenarioSetup
{
    Tensor2 initial_F_e = Tensor2::Identity();
    Vec2 top_traction = Vec2::Zero();
    JumpForm jump_form = JumpForm::slow_growth;
    bool equilibrate_initial_body = false;
    bool check_unit_det = true;
};

OracleErrors non_normal_errors(const ScenarioConfig& cfg, const FieldState& s, std::size_t step)
{
    OracleErrors out{step, s.t, {}};
    const double dx = s.grid.dx();
    FieldErrorAccumulator F("Fe12", dx), v("v1", dx), p("p", dx);
    for (std::size_t i = 0; i < s.grid.size() && !s.grid.empty(); ++i)
    {
        const auto exact = analytic_non_normal(s.grid.center(i), s.t, cfg.alpha, cfg.params.G,
                                               cfg.params.mu, cfg.V_G);
        F.add(s.F_e[i](0, 1), exact.F_e12);
        v.add(s.v[i](0), exact.v1);
        p.add(s.p[i], exact.p);
    }
    out.fields = {F.result(), v.result(), p.result()};
    return out;
}

OracleErrors fdm_errors(const ScenarioConfig& cfg, const FieldState& s, std::size_t step)
{
    const GrowthInput g = cfg.growth();
    const FdmShearSolution exact = analytic_fdm_shear(g.M, cfg.v0, cfg.params.G);
    OracleErrors out{step, s.t, {}};
    const double dx = s.grid.dx();
    FieldErrorAccumulator s11("sigma11", dx), s12("sigma12", dx), s22("sigma22", dx),
        F("Fe12", dx), v("v1", dx);
    for (std::size_t i = 0; i < s.grid.size(); ++i)
    {
        const Tensor2 sigma = total_stress(s.F_e[i], s.grad_v[i], s.p[i], cfg.params);
        s11.add(sigma(0, 0), exact.sigma(0, 0));
        s12.add(sigma(0, 1), exact.sigma(0, 1));
        s22.add(sigma(1, 1), exact.sigma(1, 1));
        F.add(s.F_e[i](0, 1), exact.F_e(0, 1));
        v.add(s.v[i](0), exact.v1);
    }
    out.fields = {s11.result(), s12.result(), s22.result(), F.result(), v.result()};
    return out;
}

StepMetrics measure(const ScenarioConfig& cfg, const ScenarioSetup& setup, const GrowthInput& g,
                    const FieldState& s, const MomentumSolution& sol, std::size_t step)
{
    StepMetrics m;
    m.step = step;
    m.t = s.t;
    m.H = s.grid.height();
    m.momentum_residual = sol.interior_residual;
    m.base_velocity = sol.v_faces.empty() ? 0.0 : std::abs(sol.v_faces.front());

    const std::size_t n = s.grid.size();
    if (!s.grid.empty())
    {
        const Tensor2 sigma = total_stress(s.F_e[n - 1], s.grad_v[n - 1], s.p[n - 1], cfg.params);
        m.top_traction_residual = (sigma * kUp - setup.top_traction).cwiseAbs().maxCoeff();
    }

    // Jump conditions at the growth surface, evaluated with the material on the top face.
    SideState interior;
    interior.rho = cfg.params.rho;
    interior.v = s.top_v;
    interior.sigma = total_stress(s.top_F_e, s.top_grad_v, sol.top_p, cfg.params);
    const SideState exterior = SideState::vacuum(g.t_b, kUp);
    const Vec2 V_b = s.top_v + (g.M / cfg.params.rho) * kUp;
    const JumpResiduals r = jump_residuals(interior, exterior, V_b, kUp, g.M, g.v_a, setup.jump_form);
    m.mass_jump = std::abs(r.mass);
    m.momentum_jump = r.momentum.cwiseAbs().maxCoeff();

    m.ansatz_deviation = std::abs(s.top_F_e(1, 0));
    for (const Tensor2& F : s.F_e)
    {
        m.ansatz_deviation = std::max(m.ansatz_deviation, std::abs(F(1, 0)));
        if (setup.check_unit_det && !s.grid.empty())
            m.det_deviation = std::max(m.det_deviation, std::abs(det(F) - 1.0));
    }
    return m;
}

RunResult march(const ScenarioConfig& cfg, const ScenarioSetup& setup)
{
    cfg.validate();
    const GrowthInput g = cfg.growth();
    const double dt = cfg.time_step();
    const std::size_t steps = cfg.step_count();
    const DomainTracker domain{cfg.H0, cfg.boundary_speed()};
    const bool accreting = g.M > 0.0;

    FieldState state = FieldState::uniform(Grid1D(cfg.n_cells, cfg.H0), 0.0, setup.initial_F_e,
                                           cfg.params.G, cfg.params.rho);
    if (accreting)
        state.top_F_e = g.F_e_attach;
    if (setup.equilibrate_initial_body)
    {
        // Quasistatic response to the traction switched on at t = 0+: the
        // shear of every cell jumps so that G F12 F22 carries t1.
        for (Tensor2& F : state.F_e)
            F(0, 1) = (setup.top_traction(0) / cfg.params.G - F(0, 0) * F(1, 0)) / F(1, 1);
    }

    RunResult result;
    result.config = cfg;
    result.history.reserve(steps + 1);
    for (std::size_t k = 0;; ++k)
    {
        const MomentumSolution sol = quasistatic_momentum_solve_1d(
            state.grid, state.F_e, state.top_F_e, cfg.params, setup.top_traction);
        apply_momentum(state, sol);
        result.metrics.push_back(measure(cfg, setup, g, state, sol, k));
        if (!state.grid.empty())
        {
            if (cfg.kind == ScenarioKind::non_normal && cfg.H0 == 0.0 && cfg.V_G > 0.0)
                result.errors.push_back(non_normal_errors(cfg, state, k));
            else if (cfg.kind == ScenarioKind::fdm_shear)
                result.errors.push_back(fdm_errors(cfg, state, k));
        }
        result.history.push_back(state);
        if (k == steps)
            break;

        const double t_next = k + 1 == steps ? cfg.t_end : static_cast<double>(k + 1) * dt;
        const double h = t_next - state.t;
        state.rho = density_update(state.grid, state.rho, state.v, state.grad_v, h);

        TopBoundary top;
        top.mass_rate = g.M;
        if (accreting)
            top.inflow = g.F_e_attach;
        top.height_after = domain.height(t_next);
        state = advance_F_e_grid(state, state.grad_v, h, top);
        state.t = t_next;
    }
    return result;
}

} // namespace

RunResult run_non_normal(const ScenarioConfig& config)
{
    if (config.kind != ScenarioKind::non_normal)
        throw ValidationError("kind: run_non_normal needs a non_normal configuration");
    ScenarioSetup setup;
    setup.top_traction = config.t_b;
    RunResult result = march(config, setup);
    result.pathlines = trace_pathlines(result, 20);
    return result;
}

RunResult run_fdm_shear(const ScenarioConfig& config)
{
    if (config.kind != ScenarioKind::fdm_shear)
        throw ValidationError("kind: run_fdm_shear needs an fdm_shear configuration");
    const GrowthInput g = config.growth();
    ScenarioSetup setup;
    // Momentum exchange with the deposited material; the body velocity is
    // negligible next to v_a.
    setup.top_traction = growth_traction(g.M, g.v_a, Vec2::Zero(), g.t_b);
    setup.jump_form = JumpForm::full;
    setup.equilibrate_initial_body = true;
    return march(config, setup);
}

RunResult run_thermal(const ScenarioConfig& config)
{
    if (config.kind != ScenarioKind::thermal)
        throw ValidationError("kind: run_thermal needs a thermal configuration");
    ScenarioSetup setup;
    setup.top_traction = config.t_b;
    // det F_e = 1 / alpha^2 at attachment; incompressibility is checked on
    // the reconstructed F instead.
    setup.check_unit_det = false;
    RunResult result = march(config, setup);

    const Reconstruction rec = reconstruct_reference(result.history);
    double residual = 0.0;
    for (const StepMetrics& m : result.metrics)
        residual = std::max(residual, m.ansatz_deviation);
    for (const TransportedField& F : rec.F)
        for (const Tensor2& Fi : F.cells)
            residual = std::max(residual, std::abs(det(Fi) - 1.0));
    result.reduced_ansatz_residual = residual;
    if (residual > kDetTolerance)
        throw IncompatibleAnsatz("through-thickness reduction is inconsistent: residual " +
                                 std::to_string(residual));
    return result;
}

RunResult run_scenario(const ScenarioConfig& config)
{
    switch (config.kind)
    {
    case ScenarioKind::non_normal:
        return run_non_normal(config);
    case ScenarioKind::fdm_shear:
        return run_fdm_shear(config);
    case ScenarioKind::thermal:
        return run_thermal(config);
    }
    throw ValidationError("kind: unknown scenario");
}

std::vector<PathlineRecord> trace_pathlines(const RunResult& result, std::size_t count)
{
    const ScenarioConfig& cfg = result.config;
    const GrowthInput g = cfg.growth();
    const HistorySampler sampler(result.history);
    const double dt = cfg.time_step();
    const double H_end = result.final_state().grid.height();
    const double speed = cfg.boundary_speed();

    std::vector<PathlineRecord> out;
    out.reserve(count);
    for (std::size_t j = 0; j < count; ++j)
    {
        const double x2 = (static_cast<double>(j) + 0.5) / static_cast<double>(count) * H_end;
        if (x2 <= cfg.H0 || !(speed > 0.0))
        {
            const Tensor2 F0 = sample_F_e(result.history.front(), x2);
            out.push_back(integrate_characteristics(sampler, Vec2(0.0, x2), 0.0, cfg.t_end, dt, F0));
        }
        else
        {
            const double t_att = (x2 - cfg.H0) / speed;
            out.push_back(integrate_characteristics(sampler, Vec2(0.0, x2), t_att, cfg.t_end, dt,
                                                    g.F_e_attach));
        }
    }
    return out;
}

std::vector<ConvergenceRow> convergence_study(const ScenarioConfig& config,
                                              const std::vector<std::size_t>& resolutions)
{
    if (config.kind == ScenarioKind::thermal)
        throw NoOracle("the thermal scenario has no closed-form solution");
    if (config.kind == ScenarioKind::non_normal && config.H0 != 0.0)
        throw NoOracle("the non_normal closed form assumes growth from H0 = 0");

    std::vector<ConvergenceRow> rows;
    for (std::size_t n : resolutions)
    {
        ScenarioConfig c = config;
        c.n_cells = n;
        if (config.dt)
            c.dt = *config.dt * static_cast<double>(config.n_cells) / static_cast<double>(n);

        const auto start = std::chrono::steady_clock::now();
        RunResult r = config.kind == ScenarioKind::non_normal ? [&] {
            ScenarioSetup setup;
            setup.top_traction = c.t_b;
            return march(c, setup);
        }()
                                                              : run_fdm_shear(c);
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        ConvergenceRow row;
        row.n_cells = n;
        row.dt = c.time_step();
        row.seconds = seconds;
        const OracleErrors& e = r.errors.back();
        if (config.kind == ScenarioKind::non_normal)
        {
            for (const FieldError& f : e.fields)
                if (f.field == "Fe12")
                {
                    row.linf = f.linf;
                    row.l2 = f.l2;
                }
        }
        else
        {
            // Every field at every time level for the steady solution.
            for (const OracleErrors& level : r.errors)
                for (const FieldError& f : level.fields)
                {
                    row.linf = std::max(row.linf, f.linf);
                    row.l2 = std::max(row.l2, f.l2);
                }
        }
        if (!rows.empty() && rows.back().linf > 0.0 && row.linf > 0.0)
            row.order = observed_order(rows.back().linf, row.linf,
                                       static_cast<double>(n) / static_cast<double>(rows.back().n_cells));
        rows.push_back(row);
    }
    return rows;
}

} // namespace growthsim
