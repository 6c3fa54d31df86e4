#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "growthsim/io.hpp"

namespace growthsim
{

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string format_double(double value)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string sha256_hex(const std::string& bytes)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
        throw IoError("SHA-256 computation failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i)
    {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

namespace
{

std::string read_bytes(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read '" + path.string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ManifestFile write_file(const fs::path& dir, const std::string& name, const std::string& bytes)
{
    const fs::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out)
        throw IoError("cannot write '" + path.string() + "'");
    return {name, sha256_hex(bytes), bytes.size(), std::nullopt};
}

std::string snapshot_csv(const FieldState& s)
{
    std::string out = std::string(kCsvHeader) + "\n";
    if (s.grid.empty())
        return out;
    for (std::size_t i = 0; i < s.grid.size(); ++i)
    {
        const double row[9] = {s.grid.center(i), s.v[i](0), s.v[i](1),
                               s.F_e[i](0, 0), s.F_e[i](0, 1), s.F_e[i](1, 0), s.F_e[i](1, 1),
                               s.p[i], s.rho[i]};
        for (int c = 0; c < 9; ++c)
        {
            out += format_double(row[c]);
            out.push_back(c + 1 < 9 ? ',' : '\n');
        }
    }
    return out;
}

std::string metrics_jsonl(const RunResult& result)
{
    json header;
    header["type"] = "header";
    header["version"] = kVersion;
    header["scenario"] = to_string(result.config.kind);
    header["fields"] = {"step", "t", "H", "momentum_residual", "top_traction_residual",
                        "base_velocity", "mass_jump", "momentum_jump", "ansatz_deviation",
                        "det_deviation", "oracle"};
    std::string out = header.dump() + "\n";

    std::size_t e = 0;
    for (const StepMetrics& m : result.metrics)
    {
        json line;
        line["type"] = "step";
        line["step"] = m.step;
        line["t"] = m.t;
        line["H"] = m.H;
        line["momentum_residual"] = m.momentum_residual;
        line["top_traction_residual"] = m.top_traction_residual;
        line["base_velocity"] = m.base_velocity;
        line["mass_jump"] = m.mass_jump;
        line["momentum_jump"] = m.momentum_jump;
        line["ansatz_deviation"] = m.ansatz_deviation;
        line["det_deviation"] = m.det_deviation;
        while (e < result.errors.size() && result.errors[e].step < m.step)
            ++e;
        if (e < result.errors.size() && result.errors[e].step == m.step)
        {
            json oracle = json::object();
            for (const FieldError& f : result.errors[e].fields)
                oracle[f.field] = {{"linf", f.linf}, {"l2", f.l2}};
            line["oracle"] = oracle;
        }
        out += line.dump() + "\n";
    }
    return out;
}

json manifest_json(const RunManifest& m)
{
    json j;
    j["version"] = m.version;
    json config = json::object();
    for (const auto& [key, value] : m.config)
        config[key] = value;
    j["config"] = config;
    j["grid"] = {{"n_cells", m.n_cells}, {"H_final", m.H_final}};
    j["time"] = {{"steps", m.steps}, {"dt", m.dt}, {"t_end", m.t_end}};
    j["wall_clock_seconds"] = m.wall_clock_seconds;
    json files = json::array();
    for (const ManifestFile& f : m.files)
    {
        json entry = {{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}};
        if (f.t)
            entry["t"] = *f.t;
        files.push_back(entry);
    }
    j["files"] = files;
    return j;
}

} // namespace

RunManifest write_fields(const RunResult& result, const fs::path& out_dir, double wall_clock_seconds)
{
    std::error_code ec;
    if (fs::exists(out_dir, ec))
    {
        if (!fs::is_directory(out_dir, ec))
            throw IoError("'" + out_dir.string() + "' is not a directory");
        if (!fs::is_empty(out_dir, ec))
            throw IoError("output directory '" + out_dir.string() + "' is not empty");
    }
    else if (!fs::create_directories(out_dir, ec) || ec)
    {
        throw IoError("cannot create output directory '" + out_dir.string() + "'");
    }

    const ScenarioConfig& cfg = result.config;
    RunManifest manifest;
    manifest.config = config_echo(cfg);
    manifest.n_cells = cfg.n_cells;
    manifest.t_end = cfg.t_end;
    manifest.wall_clock_seconds = wall_clock_seconds;
    if (!result.history.empty())
    {
        manifest.steps = result.history.size() - 1;
        manifest.dt = manifest.steps > 0 ? cfg.time_step() : 0.0;
        manifest.H_final = result.final_state().grid.height();
    }

    const std::size_t last = result.history.empty() ? 0 : result.history.size() - 1;
    for (std::size_t k = 0; k < result.history.size(); ++k)
    {
        if (k % cfg.output_every != 0 && k != last)
            continue;
        char name[32];
        std::snprintf(name, sizeof name, "snapshot_%05zu.csv", k);
        ManifestFile f = write_file(out_dir, name, snapshot_csv(result.history[k]));
        f.t = result.history[k].t;
        manifest.files.push_back(f);
    }
    manifest.files.push_back(write_file(out_dir, "metrics.jsonl", metrics_jsonl(result)));
    write_file(out_dir, "manifest.json", manifest_json(manifest).dump(2) + "\n");
    return manifest;
}

std::vector<CsvRow> read_snapshot_csv(const fs::path& path)
{
    std::istringstream in(read_bytes(path));
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw IoError("'" + path.string() + "' does not start with the snapshot header");
    std::vector<CsvRow> rows;
    while (std::getline(in, line))
    {
        CsvRow row{};
        const char* p = line.c_str();
        for (std::size_t c = 0; c < row.size(); ++c)
        {
            char* end = nullptr;
            row[c] = std::strtod(p, &end);
            const char expected = c + 1 < row.size() ? ',' : '\0';
            if (end == p || *end != expected)
                throw IoError("malformed row in '" + path.string() + "': " + line);
            p = end + 1;
        }
        rows.push_back(row);
    }
    return rows;
}

RunManifest read_manifest(const fs::path& path)
{
    json j;
    try
    {
        j = json::parse(read_bytes(path));
        RunManifest m;
        m.version = j.at("version").get<std::string>();
        for (const auto& [key, value] : j.at("config").items())
            m.config.emplace_back(key, value.get<std::string>());
        m.n_cells = j.at("grid").at("n_cells").get<std::size_t>();
        m.H_final = j.at("grid").at("H_final").get<double>();
        m.steps = j.at("time").at("steps").get<std::size_t>();
        m.dt = j.at("time").at("dt").get<double>();
        m.t_end = j.at("time").at("t_end").get<double>();
        m.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
        for (const json& f : j.at("files"))
        {
            ManifestFile file{f.at("name").get<std::string>(), f.at("sha256").get<std::string>(),
                              f.at("bytes").get<std::uintmax_t>(), std::nullopt};
            if (f.contains("t"))
                file.t = f.at("t").get<double>();
            m.files.push_back(file);
        }
        return m;
    }
    catch (const json::exception& e)
    {
        throw IoError("malformed manifest '" + path.string() + "': " + e.what());
    }
}

std::string sha256_file(const fs::path& path)
{
    return sha256_hex(read_bytes(path));
}

fs::path default_output_dir()
{
    if (const char* env = std::getenv(kOutDirEnv); env && *env)
        return env;
    return "growthsim_out";
}

} // namespace growthsim
