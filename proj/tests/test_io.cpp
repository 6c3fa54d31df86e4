#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <set>

#include <unistd.h>

#include "growthsim/io.hpp"

using namespace growthsim;
namespace fs = std::filesystem;

namespace
{

// Fresh, removed-on-exit directory below the system temp dir.
struct ScratchDir
{
    fs::path path;

    ScratchDir()
    {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("growthsim-test-io-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::remove_all(path);
    }
    ~ScratchDir() { fs::remove_all(path); }
};

template <typename E>
std::string message_of(const std::string& text)
{
    try
    {
        parse_config_string(text);
    }
    catch (const E& e)
    {
        return e.what();
    }
    return "<no exception>";
}

RunResult small_run(ScenarioKind kind)
{
    auto c = ScenarioConfig::defaults(kind);
    c.n_cells = 16;
    c.t_end = 0.2;
    c.output_every = 5;
    return run_scenario(c);
}

} // namespace

TEST_CASE("minimal non_normal config takes documented defaults")
{
    const ScenarioConfig c = parse_config_string("alpha = 0.5\nG = 1\nmu = 0.1\nV_G = 1\nt_end = 1\n");
    CHECK(c.kind == ScenarioKind::non_normal);
    CHECK(c.n_cells == 200);
    CHECK_FALSE(c.dt.has_value());
    CHECK(c.alpha == 0.5);
    CHECK(c.H0 == 0.0);
}

TEST_CASE("sections, comments and per-kind defaults")
{
    const ScenarioConfig c = parse_config_string(R"(
# fdm deposition
; alternate comment marker
[scenario]
kind = fdm_shear
[material]
mu = 0.2
[growth]
t_b1 = 0.05
[numerics]
n_cells = 64
dt = 0.01
[sweep]
mu_sweep = 1, 0.5
)");
    CHECK(c.kind == ScenarioKind::fdm_shear);
    CHECK(c.H0 == 1.0);   // fdm default
    CHECK(c.params.mu == 0.2);
    CHECK(c.t_b(0) == 0.05);
    CHECK(c.n_cells == 64);
    CHECK(*c.dt == 0.01);
    CHECK(c.mu_sweep == std::vector<double>{1.0, 0.5});
}

TEST_CASE("invalid values raise ValidationError naming the field")
{
    CHECK(message_of<ValidationError>("G = -1\n").rfind("G:", 0) == 0);
    CHECK(message_of<ValidationError>("n_cells = 4\n").rfind("n_cells:", 0) == 0);
    CHECK(message_of<ValidationError>("kind = spiral\n").rfind("kind:", 0) == 0);
}

TEST_CASE("syntax problems raise ParseError")
{
    CHECK(message_of<ParseError>("alpha = 0.5\nbogus_key = 3\n").find("bogus_key") != std::string::npos);
    CHECK(message_of<ParseError>("[material]\nalpha = 0.5\n").find("alpha") != std::string::npos);
    CHECK(message_of<ParseError>("[colour]\nx = 1\n").find("colour") != std::string::npos);
    CHECK(message_of<ParseError>("alpha = half\n").find("alpha") != std::string::npos);
    CHECK(message_of<ParseError>("alpha = 0.5 # inline\n").find("alpha") != std::string::npos);
    CHECK(message_of<ParseError>("G = 1\nthis line has no equals sign\n").find("line 2") !=
          std::string::npos);
    CHECK(message_of<ParseError>("G = 1\nG = 2\n").find("line") != std::string::npos);
    CHECK_THROWS_AS(parse_config("/nonexistent/growthsim.cfg"), ParseError);
}

TEST_CASE("config echo parses back to the same configuration")
{
    auto c = ScenarioConfig::defaults(ScenarioKind::thermal);
    c.dt = 0.003;
    c.t_b = Vec2(0.1, -0.2);
    std::string text;
    for (const auto& [key, value] : config_echo(c))
        text += key + " = " + value + "\n";
    const ScenarioConfig back = parse_config_string(text);
    CHECK(config_echo(back) == config_echo(c));
}

TEST_CASE("SHA-256 known answers")
{
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("format_double round-trips bitwise")
{
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0})
        CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
}

TEST_CASE("empty history: no snapshots, valid metrics header")
{
    ScratchDir dir;
    RunResult empty;
    empty.config = ScenarioConfig::defaults(ScenarioKind::non_normal);
    const RunManifest m = write_fields(empty, dir.path);
    REQUIRE(m.files.size() == 1);
    CHECK(m.files[0].name == "metrics.jsonl");
    std::ifstream in(dir.path / "metrics.jsonl");
    std::string first;
    std::getline(in, first);
    CHECK(first.find("\"type\":\"header\"") != std::string::npos);
    std::string second;
    CHECK_FALSE(std::getline(in, second));
}

TEST_CASE("single snapshot with four cells")
{
    ScratchDir dir;
    RunResult one;
    one.config = ScenarioConfig::defaults(ScenarioKind::fdm_shear);
    one.history.push_back(FieldState::uniform(Grid1D(4, 1.0), 0.0, Tensor2::Identity(), 1.0, 1.0));
    const RunManifest m = write_fields(one, dir.path);
    REQUIRE(m.files.size() == 2);
    CHECK(m.files[0].name == "snapshot_00000.csv");
    const auto rows = read_snapshot_csv(dir.path / "snapshot_00000.csv");
    CHECK(rows.size() == 4);
    CHECK(rows[0][0] == 0.125);
    CHECK(rows[3][3] == 1.0);   // Fe11
}

TEST_CASE("snapshots round-trip bitwise and the manifest matches the directory")
{
    ScratchDir dir;
    const RunResult r = small_run(ScenarioKind::non_normal);
    const RunManifest m = write_fields(r, dir.path, 0.5);

    std::set<std::string> on_disk;
    for (const auto& entry : fs::directory_iterator(dir.path))
        on_disk.insert(entry.path().filename().string());
    std::set<std::string> listed{"manifest.json"};
    for (const ManifestFile& f : m.files)
    {
        listed.insert(f.name);
        CHECK(sha256_file(dir.path / f.name) == f.sha256);
        CHECK(fs::file_size(dir.path / f.name) == f.bytes);
    }
    CHECK(on_disk == listed);

    const std::size_t last = r.history.size() - 1;
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%05zu.csv", last);
    const auto rows = read_snapshot_csv(dir.path / name);
    const FieldState& s = r.history[last];
    REQUIRE(rows.size() == s.grid.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        CHECK(rows[i][0] == s.grid.center(i));
        CHECK(rows[i][1] == s.v[i](0));
        CHECK(rows[i][4] == s.F_e[i](0, 1));
        CHECK(rows[i][7] == s.p[i]);
        CHECK(rows[i][8] == s.rho[i]);
    }

    const RunManifest back = read_manifest(dir.path / "manifest.json");
    CHECK(back.version == kVersion);
    CHECK(back.files.size() == m.files.size());
    CHECK(back.config == m.config);
    CHECK(back.wall_clock_seconds == 0.5);
    CHECK(back.steps == r.history.size() - 1);
}

TEST_CASE("identical runs produce byte-identical files")
{
    ScratchDir a, b;
    const RunManifest ma = write_fields(small_run(ScenarioKind::thermal), a.path);
    const RunManifest mb = write_fields(small_run(ScenarioKind::thermal), b.path);
    REQUIRE(ma.files.size() == mb.files.size());
    for (std::size_t i = 0; i < ma.files.size(); ++i)
        CHECK(ma.files[i].sha256 == mb.files[i].sha256);
    CHECK(sha256_file(a.path / "manifest.json") == sha256_file(b.path / "manifest.json"));
}

TEST_CASE("write_fields refuses a non-empty directory")
{
    ScratchDir dir;
    fs::create_directories(dir.path);
    std::ofstream(dir.path / "stale.txt") << "x";
    CHECK_THROWS_AS(write_fields(small_run(ScenarioKind::fdm_shear), dir.path), IoError);
}

TEST_CASE("default output directory honours the environment")
{
    ::setenv(kOutDirEnv, "/tmp/growthsim-env-out", 1);
    CHECK(default_output_dir() == fs::path("/tmp/growthsim-env-out"));
    ::unsetenv(kOutDirEnv);
    CHECK(default_output_dir() == fs::path("growthsim_out"));
}
