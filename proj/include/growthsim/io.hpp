#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "growthsim/scenarios.hpp"

namespace growthsim
{

inline constexpr const char* kVersion = "growthsim 0.1.0";

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "GROWTHSIM_OUT_DIR";

// -- configuration --------------------------------------------------------

/// Parse an INI-style configuration. Grammar:
///
///   # comment            (whole-line, also ';')
///   [section]            optional; keys may also appear before any section
///   key = value
///
/// Sections and their keys:
///   scenario: kind
///   material: G, mu, rho
///   growth:   alpha, H0, V_G, h, v0, L, t_b1, t_b2
///   numerics: n_cells, dt, t_end, output_every
///   sweep:    mu_sweep (comma-separated)
///
/// Omitted keys take the defaults of the scenario kind (non_normal when
/// `kind` is absent). Throws ParseError on malformed syntax, unknown keys or
/// unparsable values, and ValidationError naming the field on an invariant
/// violation.
ScenarioConfig parse_config(const std::filesystem::path& path);
ScenarioConfig parse_config_string(const std::string& text);

/// Flat key/value echo of a configuration in the grammar above.
std::vector<std::pair<std::string, std::string>> config_echo(const ScenarioConfig& config);

// -- output ---------------------------------------------------------------

struct ManifestFile
{
    std::string name;
    std::string sha256;
    std::uintmax_t bytes = 0;
    std::optional<double> t;   // snapshot time, absent for the metrics file
};

struct RunManifest
{
    std::string version = kVersion;
    std::vector<std::pair<std::string, std::string>> config;
    std::size_t n_cells = 0;
    std::size_t steps = 0;
    double dt = 0.0;
    double t_end = 0.0;
    double H_final = 0.0;
    double wall_clock_seconds = 0.0;
    std::vector<ManifestFile> files;   // every emitted file except manifest.json
};

inline constexpr const char* kCsvHeader = "x2,v1,v2,Fe11,Fe12,Fe21,Fe22,p,rho";
using CsvRow = std::array<double, 9>;

/// Shortest-safe decimal form ("%.17g") that round-trips a double.
std::string format_double(double value);

/// Write snapshot_NNNNN.csv every `output_every` steps and at t_end,
/// metrics.jsonl and manifest.json into `out_dir`, which is created if
/// missing and must be empty otherwise. Throws IoError.
RunManifest write_fields(const RunResult& result, const std::filesystem::path& out_dir,
                         double wall_clock_seconds = 0.0);

std::vector<CsvRow> read_snapshot_csv(const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

/// $GROWTHSIM_OUT_DIR, or ./growthsim_out when unset.
std::filesystem::path default_output_dir();

} // namespace growthsim
