#include "growthsim/verification.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <numbers>

#include <unistd.h>

#include "growthsim/io.hpp"
#include "growthsim/transport2d.hpp"

namespace growthsim
{

namespace fs = std::filesystem;

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double max_abs(const Tensor2& A)
{
    return A.cwiseAbs().maxCoeff();
}

std::string fmt(double value)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", value);
    return buf;
}

CriterionResult make(int id, std::string name, double measured, double threshold)
{
    CriterionResult r;
    r.id = id;
    r.name = std::move(name);
    r.measured = measured;
    r.threshold = threshold;
    r.passed = measured <= threshold;
    return r;
}

std::string level_key(const char* prefix, std::size_t n)
{
    return std::string(prefix) + "(n=" + std::to_string(n) + ")";
}

// Observed orders between consecutive rows; +inf when the error stops at zero.
std::vector<double> orders(const std::vector<double>& errors)
{
    std::vector<double> out;
    for (std::size_t k = 1; k < errors.size(); ++k)
        out.push_back(errors[k] > 0.0 ? observed_order(errors[k - 1], errors[k])
                                      : std::numeric_limits<double>::infinity());
    return out;
}

bool strictly_decreasing(const std::vector<double>& errors)
{
    for (std::size_t k = 1; k < errors.size(); ++k)
        if (!(errors[k] < errors[k - 1]))
            return false;
    return true;
}

const std::vector<std::size_t> kLevels{50, 100, 200, 400};

// Steps of the default non_normal run at the coarsest level; finer levels
// scale it exactly so that (dx, dt) halve together.
ScenarioConfig refined_non_normal(std::size_t n)
{
    ScenarioConfig c = ScenarioConfig::defaults(ScenarioKind::non_normal);
    c.n_cells = kLevels.front();
    const std::size_t base_steps = c.step_count();
    c.n_cells = n;
    c.dt = c.t_end / static_cast<double>(base_steps * (n / kLevels.front()));
    return c;
}

} // namespace

// -- 1 --------------------------------------------------------------------

CriterionResult check_non_normal_oracle()
{
    ScenarioConfig cfg = ScenarioConfig::defaults(ScenarioKind::non_normal);
    const std::vector<ConvergenceRow> rows = convergence_study(cfg, kLevels);

    std::vector<double> errors;
    double slowest = 0.0;
    for (const ConvergenceRow& row : rows)
    {
        errors.push_back(row.linf);
        slowest = std::max(slowest, row.seconds);
    }

    // Level n = 200 with the CFL-limited step: L-inf over every stored time.
    cfg.n_cells = 200;
    const RunResult run = run_non_normal(cfg);
    double worst = 0.0;
    for (const OracleErrors& e : run.errors)
        worst = std::max(worst, e.linf("Fe12"));

    CriterionResult r = make(1, "non-normal growth oracle", worst, 1e-2);
    const std::vector<double> p = orders(errors);
    const double min_order = *std::min_element(p.begin(), p.end());
    r.passed = r.passed && strictly_decreasing(errors) && min_order >= 0.9 && slowest < 10.0;
    for (std::size_t k = 0; k < rows.size(); ++k)
        r.table.emplace_back(level_key("linf_Fe12_t_end", rows[k].n_cells), errors[k]);
    r.table.emplace_back("min_order", min_order);
    r.table.emplace_back("max_level_seconds", slowest);
    r.detail = "max over time at n=200; t_end orders >= " + fmt(min_order) +
               ", slowest level " + fmt(slowest) + " s";
    return r;
}

// -- 2 --------------------------------------------------------------------

CriterionResult check_quasistatic_limit()
{
    const ScenarioConfig base = ScenarioConfig::defaults(ScenarioKind::non_normal);
    const double x2 = 0.25;
    std::vector<double> values;
    CriterionResult r;
    for (double mu : base.mu_sweep)
    {
        ScenarioConfig c = base;
        c.params.mu = mu;
        const RunResult run = run_non_normal(c);
        values.push_back(std::abs(sample_F_e(run.final_state(), x2)(0, 1)));
        r.table.emplace_back("|Fe12|(mu=" + format_double(mu) + ")", values.back());
    }
    const double mu_min = *std::min_element(base.mu_sweep.begin(), base.mu_sweep.end());
    const double envelope =
        1.1 * base.alpha * std::exp(-base.params.G * (base.t_end - x2 / base.V_G) / mu_min);
    const double finest = values.back();

    bool decreasing = true;
    for (std::size_t k = 1; k < values.size(); ++k)
        decreasing = decreasing && values[k] < values[k - 1];

    r.id = 2;
    r.name = "quasistatic limit";
    r.measured = finest;
    r.threshold = envelope;
    r.passed = decreasing && finest < envelope;
    r.detail = std::string(decreasing ? "monotone" : "NOT monotone") + " over the mu sweep";
    return r;
}

// -- 3 --------------------------------------------------------------------

CriterionResult check_pressure_uniformity()
{
    const ScenarioConfig cfg = ScenarioConfig::defaults(ScenarioKind::non_normal);
    const RunResult run = run_non_normal(cfg);
    double worst = 0.0;
    for (const FieldState& s : run.history)
        for (double p : s.p)
            worst = std::max(worst, std::abs(p - cfg.params.G));
    CriterionResult r = make(3, "pressure uniformity", worst, 1e-8);
    r.detail = "max |p - G| over cells and steps";
    return r;
}

// -- 4 --------------------------------------------------------------------

CriterionResult check_fdm_steady_state()
{
    const auto start = Clock::now();
    double worst = 0.0;
    double height_gap = 0.0;
    CriterionResult r;
    for (std::size_t n : kLevels)
    {
        ScenarioConfig c = ScenarioConfig::defaults(ScenarioKind::fdm_shear);
        c.n_cells = n;
        const RunResult run = run_fdm_shear(c);
        double level = 0.0;
        for (const OracleErrors& e : run.errors)
            for (const FieldError& f : e.fields)
            {
                level = std::max(level, f.linf);
                if (n == 200 && &e == &run.errors.back())
                    r.table.emplace_back(f.field, f.linf);
            }
        worst = std::max(worst, level);
        const double expected = c.H0 + (c.h * c.v0 / c.L) * c.t_end;
        const double H = run.final_state().grid.height();
        height_gap = std::max(height_gap, std::abs(H - expected) / expected);
        r.table.emplace_back(level_key("linf_all_fields", n), level);
    }
    const double elapsed = seconds_since(start);
    r.table.emplace_back("H_relative_gap", height_gap);
    r.table.emplace_back("seconds", elapsed);

    r.id = 4;
    r.name = "fdm shear exact steady state";
    r.measured = worst;
    r.threshold = 1e-10;
    const double eps = std::numeric_limits<double>::epsilon();
    r.passed = worst <= 1e-10 && height_gap <= 4.0 * eps && elapsed < 5.0;
    r.detail = "sigma11, sigma12, sigma22, Fe12, v1 at all levels and times; H gap " +
               fmt(height_gap) + ", " + fmt(elapsed) + " s";
    return r;
}

// -- 5 --------------------------------------------------------------------

CriterionResult check_transport_characteristics()
{
    std::vector<double> gaps;
    CriterionResult r;
    for (std::size_t n : kLevels)
    {
        const RunResult run = run_non_normal(refined_non_normal(n));
        const FieldState& last = run.final_state();
        double gap = 0.0;
        for (const PathlineRecord& path : run.pathlines)
        {
            const PathlineSample& end = path.samples.back();
            gap = std::max(gap, max_abs(end.F_e - sample_F_e(last, end.x(1))));
        }
        gaps.push_back(gap);
        r.table.emplace_back(level_key("linf_grid_vs_characteristics", n), gap);
    }
    const std::vector<double> p = orders(gaps);
    const double min_order = *std::min_element(p.begin(), p.end());
    r.table.emplace_back("min_order", min_order);

    r.id = 5;
    r.name = "transport/characteristics equivalence";
    r.measured = min_order;
    r.threshold = 0.9;
    r.passed = strictly_decreasing(gaps) && min_order >= 0.9;
    r.detail = "20 pathlines, observed order " + fmt(min_order) + " (>= 0.9 required)";
    return r;
}

// -- 6 --------------------------------------------------------------------

namespace
{

// Difference between the two routes to F after t_end in the shear flow
// v = (u(x2), 0), u = sin(pi x2) / 2.
double inverse_motion_gap(std::size_t n, double t_end)
{
    using std::numbers::pi;
    const Grid2D grid(n, n);
    const auto v = sample_field<Vec2>(grid, [](const Vec2& x) { return Vec2(0.5 * std::sin(pi * x(1)), 0.0); });
    const auto L = sample_field<Tensor2>(grid, [](const Vec2& x) {
        Tensor2 g = Tensor2::Zero();
        g(0, 1) = 0.5 * pi * std::cos(pi * x(1));
        return g;
    });
    Field2D<Tensor2> F(grid.size(), Tensor2::Identity());
    auto chi = sample_field<Vec2>(grid, [](const Vec2& x) { return x; });

    const auto steps = static_cast<std::size_t>(std::ceil(t_end / (0.5 * grid.dx() / 0.5)));
    const double dt = t_end / static_cast<double>(steps);
    for (std::size_t k = 0; k < steps; ++k)
    {
        F = advance_F_grid_2d(grid, F, v, L, dt);
        chi = advance_inverse_motion(grid, chi, v, dt);
    }
    const Field2D<Tensor2> F_chi = deformation_from_inverse_motion(grid, chi);
    double gap = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        gap = std::max(gap, max_abs(F[i] - F_chi[i]));
    return gap;
}

} // namespace

CriterionResult check_inverse_motion()
{
    std::vector<double> gaps;
    CriterionResult r;
    for (std::size_t n : {16, 32, 64, 128})
    {
        gaps.push_back(inverse_motion_gap(n, 0.5));
        r.table.emplace_back(level_key("linf_F_routes", n), gaps.back());
    }
    const std::vector<double> p = orders(gaps);
    const double min_order = *std::min_element(p.begin(), p.end());
    r.table.emplace_back("min_order", min_order);

    r.id = 6;
    r.name = "inverse-motion oracle equivalence";
    r.measured = min_order;
    r.threshold = 0.9;
    r.passed = strictly_decreasing(gaps) && min_order >= 0.9;
    r.detail = "shear flow u = sin(pi x2)/2, observed order " + fmt(min_order);
    return r;
}

// -- 7 --------------------------------------------------------------------

namespace
{

double max_det_drift(const std::vector<PathlineRecord>& paths)
{
    double worst = 0.0;
    for (const PathlineRecord& path : paths)
        for (const PathlineSample& s : path.samples)
            worst = std::max(worst, std::abs(det(s.F_e) - 1.0));
    return worst;
}

// Pathlines of the cellular flow psi = sin(pi x) sin(pi y) / pi, which is
// divergence free with a full velocity gradient.
double cellular_det_drift(double dt)
{
    using std::numbers::pi;
    const VelocitySampler sampler = [](const Vec2& x, double) {
        VelocitySample s;
        const double sx = std::sin(pi * x(0)), cx = std::cos(pi * x(0));
        const double sy = std::sin(pi * x(1)), cy = std::cos(pi * x(1));
        s.v = Vec2(sx * cy, -cx * sy);
        s.grad_v << pi * cx * cy, -pi * sx * sy, pi * sx * sy, -pi * cx * cy;
        return s;
    };
    std::vector<PathlineRecord> paths;
    for (int k = 0; k < 5; ++k)
    {
        const Vec2 seed(0.15 + 0.1 * k, 0.3 + 0.05 * k);
        paths.push_back(integrate_characteristics(sampler, seed, 0.0, 1.0, dt, Tensor2::Identity()));
    }
    return max_det_drift(paths);
}

} // namespace

CriterionResult check_determinant_transport()
{
    ScenarioConfig cfg = ScenarioConfig::defaults(ScenarioKind::non_normal);
    const double dt = cfg.time_step();
    const double coarse = max_det_drift(run_non_normal(cfg).pathlines);
    cfg.dt = dt / 2.0;
    const double fine = max_det_drift(run_non_normal(cfg).pathlines);

    // Below this the drift is rounding, and a 4x ratio is meaningless.
    constexpr double kRoundoff = 1e-13;
    const bool improves = fine <= coarse / 4.0 || (coarse <= kRoundoff && fine <= kRoundoff);

    // Full-gradient flow: the drift ratio tends to 4 from below, so the
    // second-order claim is checked as an observed order.
    const double flow_coarse = cellular_det_drift(0.005);
    const double flow_fine = cellular_det_drift(0.0025);
    const double flow_order = observed_order(flow_coarse, flow_fine);

    CriterionResult r = make(7, "determinant transport", coarse, 1e-6);
    r.passed = r.passed && improves && std::abs(flow_order - 2.0) <= 0.05;
    r.table = {{"pathline_det_drift(dt)", coarse},
               {"pathline_det_drift(dt/2)", fine},
               {"cellular_det_drift(0.005)", flow_coarse},
               {"cellular_det_drift(0.0025)", flow_fine},
               {"cellular_ratio", flow_coarse / flow_fine},
               {"cellular_order", flow_order}};
    r.detail = "20 pathlines at n=200; cellular-flow order " + fmt(flow_order);
    return r;
}

// -- 8 --------------------------------------------------------------------

CriterionResult check_reconstruction(const std::vector<ScenarioKind>& kinds)
{
    double worst = 0.0;
    CriterionResult r;
    for (ScenarioKind kind : kinds)
    {
        const RunResult run = run_scenario(ScenarioConfig::defaults(kind));
        const Reconstruction rec = reconstruct_reference(run.history);
        double level = 0.0;
        auto compare = [&](const Tensor2& F_e, const Tensor2& F_relax, const Tensor2& F) {
            level = std::max(level, max_abs(F_e * F_relax - F) / std::max(1.0, max_abs(F)));
        };
        for (std::size_t k = 0; k < rec.F.size(); ++k)
        {
            const FieldState& s = run.history[rec.first + k];
            for (std::size_t i = 0; i < rec.F[k].cells.size(); ++i)
                compare(s.F_e[i], rec.F_relax[k][i], rec.F[k].cells[i]);
            compare(s.top_F_e, rec.F_relax_top[k], rec.F[k].top);
        }
        worst = std::max(worst, level);
        r.table.emplace_back(to_string(kind), level);
    }
    r.id = 8;
    r.name = "reconstruction round-trip";
    r.measured = worst;
    r.threshold = 1e-8;
    r.passed = worst <= 1e-8;
    r.detail = "relative |F_e F_relax - F| at every sample";
    return r;
}

// -- 9 --------------------------------------------------------------------

CriterionResult check_jump_residuals(const std::vector<ScenarioKind>& kinds)
{
    double worst = 0.0;
    CriterionResult r;
    for (ScenarioKind kind : kinds)
    {
        const RunResult run = run_scenario(ScenarioConfig::defaults(kind));
        double mass = 0.0, momentum = 0.0;
        for (const StepMetrics& m : run.metrics)
        {
            mass = std::max(mass, m.mass_jump);
            momentum = std::max(momentum, m.momentum_jump);
        }
        r.table.emplace_back(to_string(kind) + ".mass", mass);
        r.table.emplace_back(to_string(kind) + ".momentum", momentum);
        worst = std::max({worst, mass, momentum});
    }
    r.id = 9;
    r.name = "jump-condition residuals";
    r.measured = worst;
    r.threshold = 1e-8;
    r.passed = worst <= 1e-8;
    r.detail = "mass and momentum jumps at the growth surface, every step";
    return r;
}

// -- 10 -------------------------------------------------------------------

CriterionResult check_thermal_properties()
{
    const ScenarioConfig cfg = ScenarioConfig::defaults(ScenarioKind::thermal);
    const RunResult run = run_thermal(cfg);

    double traction = 0.0, base = 0.0;
    for (const StepMetrics& m : run.metrics)
    {
        traction = std::max(traction, m.top_traction_residual);
        base = std::max(base, m.base_velocity);
    }

    // alpha = 1: attachment is stress free and nothing moves.
    ScenarioConfig unit = cfg;
    unit.alpha = 1.0;
    const RunResult trivial = run_thermal(unit);
    double trivial_gap = 0.0;
    for (const FieldState& s : trivial.history)
        for (std::size_t i = 0; i < s.grid.size() && !s.grid.empty(); ++i)
        {
            const Tensor2 sigma = total_stress(s.F_e[i], s.grad_v[i], s.p[i], cfg.params);
            trivial_gap = std::max({trivial_gap, max_abs(sigma), s.v[i].cwiseAbs().maxCoeff(),
                                    max_abs(s.F_e[i] - Tensor2::Identity())});
        }

    // alpha != 1: the grown region carries a relaxed shape other than I.
    const Reconstruction rec = reconstruct_reference(run.history);
    const FieldState& last = run.final_state();
    double min_departure = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < last.grid.size(); ++i)
        if (last.grid.center(i) > cfg.H0)
            min_departure = std::min(min_departure,
                                     max_abs(rec.F_relax.back()[i] - Tensor2::Identity()));

    CriterionResult r = make(10, "thermal scenario properties", traction, 1e-8);
    r.passed = r.passed && base == 0.0 && trivial_gap <= 1e-12 && min_departure > 1e-3;
    r.table = {{"top_traction_residual", traction},
               {"base_velocity", base},
               {"alpha1_max_deviation", trivial_gap},
               {"grown_min_|F_relax-I|", min_departure},
               {"reduced_ansatz_residual", run.reduced_ansatz_residual}};
    r.detail = "base |v| " + fmt(base) + ", alpha=1 deviation " + fmt(trivial_gap) +
               ", grown-region |F_relax - I| >= " + fmt(min_departure);
    return r;
}

// -- 11 -------------------------------------------------------------------

namespace
{

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> listing(const fs::path& dir)
{
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir))
        names.push_back(entry.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
}

} // namespace

CriterionResult check_determinism(const std::vector<ScenarioKind>& kinds,
                                  const std::optional<fs::path>& work_dir)
{
    static int counter = 0;
    const fs::path root = work_dir ? *work_dir
                                   : fs::temp_directory_path() /
                                         ("growthsim-determinism-" + std::to_string(::getpid()) +
                                          "-" + std::to_string(counter++));
    const bool owns_root = !work_dir;

    std::size_t mismatches = 0, compared = 0;
    CriterionResult r;
    for (ScenarioKind kind : kinds)
    {
        std::vector<RunManifest> manifests;
        std::vector<fs::path> dirs;
        for (const char* tag : {"a", "b"})
        {
            const auto start = Clock::now();
            const RunResult run = run_scenario(ScenarioConfig::defaults(kind));
            const fs::path dir = root / to_string(kind) / tag;
            manifests.push_back(write_fields(run, dir, seconds_since(start)));
            dirs.push_back(dir);
        }
        std::size_t kind_mismatches = 0;
        // The wall-clock duration is the only manifest field allowed to differ.
        if (listing(dirs[0]) != listing(dirs[1]) || manifests[0].config != manifests[1].config ||
            manifests[0].files.size() != manifests[1].files.size())
            ++kind_mismatches;
        for (const ManifestFile& f : manifests[0].files)
        {
            ++compared;
            if (slurp(dirs[0] / f.name) != slurp(dirs[1] / f.name))
                ++kind_mismatches;
        }
        for (std::size_t k = 0; k < manifests[0].files.size() && k < manifests[1].files.size(); ++k)
            if (manifests[0].files[k].sha256 != manifests[1].files[k].sha256)
                ++kind_mismatches;
        r.table.emplace_back(to_string(kind) + ".mismatches", static_cast<double>(kind_mismatches));
        mismatches += kind_mismatches;
    }
    if (owns_root)
    {
        std::error_code ec;
        fs::remove_all(root, ec);
    }

    r.id = 11;
    r.name = "determinism";
    r.measured = static_cast<double>(mismatches);
    r.threshold = 0.0;
    r.passed = mismatches == 0 && compared > 0;
    r.detail = std::to_string(compared) + " files compared byte for byte";
    return r;
}

// -- grouping -------------------------------------------------------------

const std::vector<std::string>& verify_scenario_names()
{
    static const std::vector<std::string> names{"non_normal", "fdm_shear",      "thermal",
                                                "transport",  "inverse_motion", "determinism",
                                                "all"};
    return names;
}

std::vector<CriterionResult> verify_scenario(const std::string& name)
{
    using K = ScenarioKind;
    const std::vector<K> every{K::non_normal, K::fdm_shear, K::thermal};
    if (name == "non_normal")
        return {check_non_normal_oracle(),         check_quasistatic_limit(),
                check_pressure_uniformity(),       check_transport_characteristics(),
                check_determinant_transport(),     check_reconstruction({K::non_normal}),
                check_jump_residuals({K::non_normal})};
    if (name == "fdm_shear")
        return {check_fdm_steady_state(), check_reconstruction({K::fdm_shear}),
                check_jump_residuals({K::fdm_shear})};
    if (name == "thermal")
        return {check_jump_residuals({K::thermal}), check_thermal_properties()};
    if (name == "transport")
        return {check_transport_characteristics(), check_determinant_transport()};
    if (name == "inverse_motion")
        return {check_inverse_motion()};
    if (name == "determinism")
        return {check_determinism(every)};
    if (name == "all")
        return {check_non_normal_oracle(),
                check_quasistatic_limit(),
                check_pressure_uniformity(),
                check_fdm_steady_state(),
                check_transport_characteristics(),
                check_inverse_motion(),
                check_determinant_transport(),
                check_reconstruction({K::non_normal, K::fdm_shear}),
                check_jump_residuals(every),
                check_thermal_properties(),
                check_determinism(every)};
    throw UsageError("unknown verify scenario '" + name + "'");
}

std::string format_result(const CriterionResult& r)
{
    return std::string(r.passed ? "PASS" : "FAIL") + " [" + std::to_string(r.id) + "] " + r.name +
           ": measured " + fmt(r.measured) + " vs threshold " + fmt(r.threshold) + " (" +
           r.detail + ")";
}

} // namespace growthsim
