// growthsim: run, verify and refinement-study front end.
//
//   growthsim run <config> [--out DIR]
//   growthsim verify <scenario> [--out DIR]
//   growthsim converge <config> --levels N
//
// Exit codes: 0 success, 1 scenario error or failed verification, 2 usage
// error. Failures print one line "error: <Kind>: <message>" on stderr.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "growthsim/io.hpp"
#include "growthsim/verification.hpp"

namespace
{

using namespace growthsim;
namespace fs = std::filesystem;

int report_error(const std::string& kind, const std::string& message, int code)
{
    std::cerr << "error: " << kind << ": " << message << "\n";
    return code;
}

int cmd_run(const std::string& config_path, const std::string& out)
{
    const ScenarioConfig config = parse_config(config_path);
    const auto start = std::chrono::steady_clock::now();
    const RunResult result = run_scenario(config);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const fs::path dir = out.empty() ? default_output_dir() : fs::path(out);
    const RunManifest manifest = write_fields(result, dir, seconds);

    std::printf("scenario  %s\n", to_string(config.kind).c_str());
    std::printf("steps     %zu (dt = %.6g)\n", manifest.steps, manifest.dt);
    std::printf("H(t_end)  %.17g\n", manifest.H_final);
    if (!result.errors.empty())
        for (const FieldError& e : result.errors.back().fields)
            std::printf("linf %-8s %.3e\n", e.field.c_str(), e.linf);
    std::printf("files     %zu + manifest.json in %s\n", manifest.files.size(), dir.string().c_str());
    return 0;
}

int cmd_verify(const std::string& scenario, const std::string& out)
{
    const std::vector<CriterionResult> results = verify_scenario(scenario);
    bool all_passed = true;
    for (const CriterionResult& r : results)
    {
        std::cout << format_result(r) << "\n";
        for (const auto& [key, value] : r.table)
            std::printf("    %-34s %.3e\n", key.c_str(), value);
        all_passed = all_passed && r.passed;
    }

    if (!out.empty())
    {
        // Timings stay on stdout so the report is reproducible.
        std::error_code ec;
        fs::create_directories(out, ec);
        const fs::path path = fs::path(out) / ("verify_" + scenario + ".csv");
        std::ofstream file(path, std::ios::binary);
        file << "id,name,passed,measured,threshold\n";
        for (const CriterionResult& r : results)
            file << r.id << "," << r.name << "," << (r.passed ? 1 : 0) << ","
                 << format_double(r.measured) << "," << format_double(r.threshold) << "\n";
        if (!file)
            throw IoError("cannot write '" + path.string() + "'");
    }

    if (!all_passed)
        return report_error("VerificationFailed", "one or more acceptance tolerances violated", 1);
    return 0;
}

int cmd_converge(const std::string& config_path, std::size_t levels)
{
    const ScenarioConfig config = parse_config(config_path);
    std::vector<std::size_t> resolutions;
    for (std::size_t k = 0; k < levels; ++k)
        resolutions.push_back(config.n_cells << k);

    const std::vector<ConvergenceRow> rows = convergence_study(config, resolutions);
    std::printf("%8s %12s %12s %12s %8s %9s\n", "n_cells", "dt", "linf", "l2", "order", "seconds");
    for (const ConvergenceRow& row : rows)
    {
        char order[16] = "-";
        if (row.order)
            std::snprintf(order, sizeof order, "%.3f", *row.order);
        std::printf("%8zu %12.4e %12.4e %12.4e %8s %9.3f\n", row.n_cells, row.dt, row.linf, row.l2,
                    order, row.seconds);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Eulerian surface-growth simulator"};
    app.require_subcommand(1);

    std::string config_path, out, scenario;
    std::size_t levels = 0;

    CLI::App* run = app.add_subcommand("run", "Run a scenario from a config file");
    run->add_option("config", config_path, "Config file")->required();
    run->add_option("--out", out, "Output directory (default: $GROWTHSIM_OUT_DIR or ./growthsim_out)");

    CLI::App* verify = app.add_subcommand("verify", "Run the built-in acceptance checks");
    verify->add_option("scenario", scenario, "non_normal, fdm_shear, thermal, transport, "
                                             "inverse_motion, determinism or all")
        ->required();
    verify->add_option("--out", out, "Directory for the verification report");

    CLI::App* converge = app.add_subcommand("converge", "Refinement study against the closed form");
    converge->add_option("config", config_path, "Config file")->required();
    converge->add_option("--levels", levels, "Number of resolutions (n_cells doubles)")
        ->required()
        ->check(CLI::Range(2, 8));

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::Success& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        return report_error("UsageError", e.what(), 2);
    }

    try
    {
        if (*run)
            return cmd_run(config_path, out);
        if (*verify)
            return cmd_verify(scenario, out);
        return cmd_converge(config_path, levels);
    }
    catch (const UsageError& e)
    {
        return report_error(e.kind(), e.what(), 2);
    }
    catch (const Error& e)
    {
        return report_error(e.kind(), e.what(), 1);
    }
    catch (const std::exception& e)
    {
        return report_error("InternalError", e.what(), 1);
    }
}
