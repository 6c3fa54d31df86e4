#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "growthsim/io.hpp"

namespace growthsim
{

namespace
{

namespace pt = boost::property_tree;

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& raw)
{
    const std::string s = trim(raw);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError("key '" + key + "': '" + raw + "' is not a number");
    return value;
}

std::size_t parse_count(const std::string& key, const std::string& raw)
{
    const std::string s = trim(raw);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError("key '" + key + "': '" + raw + "' is not a nonnegative integer");
    return value;
}

std::vector<double> parse_list(const std::string& key, const std::string& raw)
{
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_double(key, item));
    if (out.empty())
        throw ParseError("key '" + key + "': empty list");
    return out;
}

using Setter = std::function<void(ScenarioConfig&, const std::string&)>;

struct KeySpec
{
    std::string section;
    Setter set;
};

const std::map<std::string, KeySpec>& key_table()
{
    static const std::map<std::string, KeySpec> table = [] {
        std::map<std::string, KeySpec> t;
        auto real = [&](const char* key, const char* section, double ScenarioConfig::*field) {
            t[key] = {section, [key, field](ScenarioConfig& c, const std::string& v) {
                          c.*field = parse_double(key, v);
                      }};
        };
        t["kind"] = {"scenario", [](ScenarioConfig&, const std::string&) {}};
        t["G"] = {"material", [](ScenarioConfig& c, const std::string& v) { c.params.G = parse_double("G", v); }};
        t["mu"] = {"material", [](ScenarioConfig& c, const std::string& v) { c.params.mu = parse_double("mu", v); }};
        t["rho"] = {"material", [](ScenarioConfig& c, const std::string& v) { c.params.rho = parse_double("rho", v); }};
        real("alpha", "growth", &ScenarioConfig::alpha);
        real("H0", "growth", &ScenarioConfig::H0);
        real("V_G", "growth", &ScenarioConfig::V_G);
        real("h", "growth", &ScenarioConfig::h);
        real("v0", "growth", &ScenarioConfig::v0);
        real("L", "growth", &ScenarioConfig::L);
        real("t_end", "numerics", &ScenarioConfig::t_end);
        t["t_b1"] = {"growth", [](ScenarioConfig& c, const std::string& v) { c.t_b(0) = parse_double("t_b1", v); }};
        t["t_b2"] = {"growth", [](ScenarioConfig& c, const std::string& v) { c.t_b(1) = parse_double("t_b2", v); }};
        t["n_cells"] = {"numerics", [](ScenarioConfig& c, const std::string& v) { c.n_cells = parse_count("n_cells", v); }};
        t["dt"] = {"numerics", [](ScenarioConfig& c, const std::string& v) { c.dt = parse_double("dt", v); }};
        t["output_every"] = {"numerics", [](ScenarioConfig& c, const std::string& v) {
                                 c.output_every = parse_count("output_every", v);
                             }};
        t["mu_sweep"] = {"sweep", [](ScenarioConfig& c, const std::string& v) { c.mu_sweep = parse_list("mu_sweep", v); }};
        return t;
    }();
    return table;
}

bool is_section_name(const std::string& name)
{
    for (const auto& [key, spec] : key_table())
        if (spec.section == name)
            return true;
    return false;
}

ScenarioConfig from_tree(const pt::ptree& tree)
{
    // (key, value) pairs after flattening sections; unknown names collected.
    std::vector<std::pair<std::string, std::string>> entries;
    std::vector<std::string> unknown;
    const auto& table = key_table();

    auto accept = [&](const std::string& key, const std::string& value, const std::string& section) {
        const auto it = table.find(key);
        if (it == table.end())
        {
            unknown.push_back(section.empty() ? key : section + "." + key);
            return;
        }
        if (!section.empty() && it->second.section != section)
            throw ParseError("key '" + key + "' belongs in section [" + it->second.section +
                             "], found in [" + section + "]");
        entries.emplace_back(key, value);
    };

    for (const auto& [name, node] : tree)
    {
        if (!node.empty() || (node.data().empty() && is_section_name(name)))
        {
            if (!is_section_name(name))
            {
                unknown.push_back("[" + name + "]");
                continue;
            }
            for (const auto& [key, leaf] : node)
                accept(key, leaf.data(), name);
        }
        else
        {
            accept(name, node.data(), "");
        }
    }
    if (!unknown.empty())
    {
        std::string list;
        for (const std::string& u : unknown)
            list += (list.empty() ? "" : ", ") + u;
        throw ParseError("unknown key(s): " + list);
    }

    std::map<std::string, std::string> seen;
    for (const auto& [key, value] : entries)
        if (!seen.emplace(key, value).second)
            throw ParseError("key '" + key + "' given more than once");

    ScenarioKind kind = ScenarioKind::non_normal;
    if (const auto it = seen.find("kind"); it != seen.end())
        kind = scenario_kind_from_string(trim(it->second));

    ScenarioConfig config = ScenarioConfig::defaults(kind);
    for (const auto& [key, value] : entries)
        table.at(key).set(config, value);
    config.validate();
    return config;
}

ScenarioConfig parse_stream(std::istream& in)
{
    pt::ptree tree;
    try
    {
        pt::read_ini(in, tree);
    }
    catch (const pt::ini_parser_error& e)
    {
        throw ParseError("line " + std::to_string(e.line()) + ": " + e.message());
    }
    return from_tree(tree);
}

} // namespace

ScenarioConfig parse_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open config file '" + path.string() + "'");
    return parse_stream(in);
}

ScenarioConfig parse_config_string(const std::string& text)
{
    std::istringstream in(text);
    return parse_stream(in);
}

std::vector<std::pair<std::string, std::string>> config_echo(const ScenarioConfig& c)
{
    std::string sweep;
    for (double m : c.mu_sweep)
        sweep += (sweep.empty() ? "" : ",") + format_double(m);
    std::vector<std::pair<std::string, std::string>> out{
        {"kind", to_string(c.kind)},
        {"G", format_double(c.params.G)},
        {"mu", format_double(c.params.mu)},
        {"rho", format_double(c.params.rho)},
        {"alpha", format_double(c.alpha)},
        {"H0", format_double(c.H0)},
        {"V_G", format_double(c.V_G)},
        {"h", format_double(c.h)},
        {"v0", format_double(c.v0)},
        {"L", format_double(c.L)},
        {"t_b1", format_double(c.t_b(0))},
        {"t_b2", format_double(c.t_b(1))},
        {"n_cells", std::to_string(c.n_cells)},
        {"t_end", format_double(c.t_end)},
        {"output_every", std::to_string(c.output_every)},
        {"mu_sweep", sweep},
    };
    if (c.dt)
        out.insert(out.begin() + 13, {"dt", format_double(*c.dt)});
    return out;
}

} // namespace growthsim
