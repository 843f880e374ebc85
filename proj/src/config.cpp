#include <rtnwalk/config.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rtnwalk {

namespace {

std::string trim(const std::string& s)
{
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos)
        return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::string strip_comment(const std::string& line)
{
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"')
            quoted = !quoted;
        else if (line[i] == '#' && !quoted)
            return line.substr(0, i);
    }
    return line;
}

std::string unquote(const std::string& s)
{
    const std::string t = trim(s);
    if (t.size() >= 2 && t.front() == '"' && t.back() == '"')
        return t.substr(1, t.size() - 2);
    return t;
}

double parse_number(const std::string& token, const std::string& key)
{
    const std::string t = trim(token);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v))
        throw ConfigError("key '" + key + "': '" + t + "' is not a finite number");
    return v;
}

/// Splits "[a, b, c]" or "a, b, c" at top-level commas.
std::vector<std::string> split_list(const std::string& raw)
{
    std::string t = trim(raw);
    if (!t.empty() && t.front() == '[') {
        if (t.back() != ']')
            throw ConfigError("unterminated list '" + t + "'");
        t = t.substr(1, t.size() - 2);
    }
    std::vector<std::string> items;
    int depth = 0;
    std::string current;
    for (char ch : t) {
        if (ch == '[')
            ++depth;
        if (ch == ']')
            --depth;
        if (ch == ',' && depth == 0) {
            items.push_back(trim(current));
            current.clear();
        } else {
            current += ch;
        }
    }
    if (!trim(current).empty() || !items.empty())
        items.push_back(trim(current));
    return items;
}

std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_list(const std::vector<double>& values)
{
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i)
        out += (i ? ", " : "") + format_number(values[i]);
    return out + "]";
}

} // namespace

const std::vector<std::pair<std::string, std::string>>& ConfigTable::known_keys()
{
    static const std::vector<std::pair<std::string, std::string>> keys = {
        {"graph", "type"},        {"graph", "n"},           {"graph", "edges"},
        {"search", "target"},     {"search", "gamma"},      {"search", "gamma_scan"},
        {"noise", "mu"},          {"noise", "nu"},          {"time", "t_max"},
        {"time", "dt"},           {"time", "times"},        {"measure", "tau_max"},
        {"measure", "tau_step"},  {"measure", "blp_t_max"}, {"measure", "blp_dt"},
        {"measure", "blp_pair"},  {"measure", "random_candidates"},
        {"measure", "measures"},  {"mc", "trajectories"},   {"run", "seed"},
        {"run", "jobs"},          {"run", "out"},           {"run", "method"},
        {"run", "tolerance"},     {"run", "max_matvecs"},
    };
    return keys;
}

namespace {

const std::string* section_of(const std::string& short_name)
{
    for (const auto& [section, key] : ConfigTable::known_keys())
        if (key == short_name)
            return &section;
    return nullptr;
}

} // namespace

ConfigTable ConfigTable::parse(std::istream& in, const std::string& origin)
{
    ConfigTable table;
    std::string section;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string where = origin + ":" + std::to_string(line_no);
        const std::string t = trim(strip_comment(line));
        if (t.empty())
            continue;
        if (t.front() == '[' && t.back() == ']' && t.find('=') == std::string::npos) {
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        const std::string* expected = section_of(key);
        if (!expected)
            throw ConfigError(where + ": unknown key '" + key + "'");
        if (!section.empty() && *expected != section)
            throw ConfigError(where + ": key '" + key + "' belongs in section [" + *expected +
                              "], found in [" + section + "]");
        if (value.empty())
            throw ConfigError(where + ": key '" + key + "' has no value");
        table.m_values[key] = value;
    }
    return table;
}

ConfigTable ConfigTable::parse_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    return parse(in, path);
}

void ConfigTable::set(const std::string& short_name, const std::string& raw)
{
    if (!section_of(short_name))
        throw ConfigError("unknown key '" + short_name + "'");
    m_values[short_name] = trim(raw);
}

void ConfigTable::apply_environment(const std::string& prefix)
{
    for (const auto& [section, key] : known_keys()) {
        std::string name = prefix + key;
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
        if (const char* value = std::getenv(name.c_str()))
            set(key, value);
    }
}

bool ConfigTable::has(const std::string& short_name) const
{
    return m_values.contains(short_name);
}

std::optional<std::string> ConfigTable::raw(const std::string& short_name) const
{
    const auto it = m_values.find(short_name);
    if (it == m_values.end())
        return std::nullopt;
    return it->second;
}

std::optional<double> ConfigTable::number(const std::string& short_name) const
{
    const auto r = raw(short_name);
    if (!r)
        return std::nullopt;
    return parse_number(*r, short_name);
}

std::optional<std::int64_t> ConfigTable::integer(const std::string& short_name) const
{
    const auto v = number(short_name);
    if (!v)
        return std::nullopt;
    if (std::floor(*v) != *v || std::abs(*v) > 9.0e15)
        throw ConfigError("key '" + short_name + "' must be an integer");
    return static_cast<std::int64_t>(*v);
}

std::optional<std::string> ConfigTable::string(const std::string& short_name) const
{
    const auto r = raw(short_name);
    if (!r)
        return std::nullopt;
    return unquote(*r);
}

std::optional<std::vector<double>> ConfigTable::numbers(const std::string& short_name) const
{
    const auto r = raw(short_name);
    if (!r)
        return std::nullopt;
    std::vector<double> out;
    for (const auto& item : split_list(*r))
        out.push_back(parse_number(item, short_name));
    return out;
}

std::optional<std::vector<std::pair<int, int>>>
ConfigTable::pairs(const std::string& short_name) const
{
    const auto r = raw(short_name);
    if (!r)
        return std::nullopt;
    std::vector<std::pair<int, int>> out;
    for (const auto& item : split_list(*r)) {
        std::string body = trim(item);
        std::vector<std::string> ends;
        if (!body.empty() && body.front() == '[') {
            ends = split_list(body);
        } else {
            const auto dash = body.find('-');
            if (dash == std::string::npos)
                throw ConfigError("edge '" + body + "' must be [a, b] or a-b");
            ends = {body.substr(0, dash), body.substr(dash + 1)};
        }
        if (ends.size() != 2)
            throw ConfigError("edge '" + body + "' must have two endpoints");
        const double a = parse_number(ends[0], short_name);
        const double b = parse_number(ends[1], short_name);
        if (std::floor(a) != a || std::floor(b) != b)
            throw ConfigError("edge endpoints must be integers");
        out.emplace_back(static_cast<int>(a), static_cast<int>(b));
    }
    return out;
}

Graph GraphSpec::build(int n) const
{
    try {
        if (type == "star")
            return star_graph(n);
        if (type == "complete")
            return complete_graph(n);
        if (type == "edges")
            return Graph::from_one_based(n, edges);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("graph: ") + e.what());
    }
    throw ConfigError("unknown graph type '" + type + "'");
}

void ExperimentConfig::validate() const
{
    auto require = [](bool ok, const std::string& what) {
        if (!ok)
            throw ConfigError(what);
    };
    require(graph.type == "star" || graph.type == "complete" || graph.type == "edges",
            "graph type must be star, complete or edges");
    require(!graph.sizes.empty(), "graph size list n is empty");
    for (int n : graph.sizes)
        require(n >= 2, "graph sizes must be >= 2");
    if (graph.type == "edges") {
        require(graph.sizes.size() == 1, "an explicit edge list takes a single node count");
        require(!graph.edges.empty(), "explicit edge list is empty");
        try {
            (void)Graph::from_one_based(graph.sizes.front(), graph.edges);
        } catch (const InvalidArgument& e) {
            throw ConfigError(std::string("edge list: ") + e.what());
        }
    }
    for (int n : graph.sizes) {
        require(target >= 1 && target <= n, "target must be a node in 1..N (N = " +
                                                std::to_string(n) + ")");
        const int links = graph.type == "star"       ? n - 1
                          : graph.type == "complete" ? n * (n - 1) / 2
                                                     : static_cast<int>(graph.edges.size());
        require(links <= 16, "graph has more than 16 links; the exact engine is exponential "
                             "in the link count");
    }
    require(!gamma || *gamma > 0.0, "gamma must be positive");
    require(gamma_lo > 0.0 && gamma_hi >= gamma_lo && gamma_step > 0.0,
            "gamma_scan must be [lo, hi, step] with 0 < lo <= hi, step > 0");
    require(!mu.empty(), "mu list is empty");
    require(!nu.empty(), "nu list is empty");
    for (double m : mu)
        require(m > 0.0, "mu values must be positive");
    for (double v : nu)
        require(v >= 0.0 && v <= 1.0, "nu values must lie in [0,1]");
    require(t_max >= 0.0 && dt > 0.0, "time grid needs t_max >= 0 and dt > 0");
    for (std::size_t i = 0; i < times.size(); ++i)
        require(times[i] >= 0.0 && (i == 0 || times[i] >= times[i - 1]),
                "explicit times must be nonnegative and ascending");
    require(tau_max > 0.0 && tau_step > 0.0, "tau_max and tau_step must be positive");
    require(blp_t_max > 0.0 && blp_dt > 0.0, "blp_t_max and blp_dt must be positive");
    require(blp_pair == "r" || blp_pair == "search", "blp_pair must be r or search");
    require(random_candidates >= 0, "random_candidates must be nonnegative");
    require(!measures.empty(), "measures list is empty");
    for (const auto& m : measures)
        require(m == "div" || m == "blp", "measures entries must be div or blp");
    require(trajectories >= 1, "trajectories must be >= 1");
    require(jobs >= 0, "jobs must be >= 0");
    require(!out.empty(), "output directory is empty");
    require(action.tolerance > 0.0, "tolerance must be positive");
}

ExperimentConfig load_config(const ConfigTable& table)
{
    ExperimentConfig c;
    if (auto v = table.string("type"))
        c.graph.type = *v;
    if (auto v = table.numbers("n")) {
        c.graph.sizes.clear();
        for (double n : *v) {
            if (std::floor(n) != n)
                throw ConfigError("graph sizes must be integers");
            c.graph.sizes.push_back(static_cast<int>(n));
        }
    }
    if (auto v = table.pairs("edges"))
        c.graph.edges = *v;
    if (auto v = table.integer("target"))
        c.target = static_cast<int>(*v);
    if (auto v = table.string("gamma")) {
        if (*v == "auto")
            c.gamma.reset();
        else
            c.gamma = table.number("gamma");
    }
    if (auto v = table.numbers("gamma_scan")) {
        if (v->size() != 3)
            throw ConfigError("gamma_scan must be [lo, hi, step]");
        c.gamma_lo = (*v)[0];
        c.gamma_hi = (*v)[1];
        c.gamma_step = (*v)[2];
    }
    if (auto v = table.numbers("mu"))
        c.mu = *v;
    if (auto v = table.numbers("nu"))
        c.nu = *v;
    if (auto v = table.number("t_max"))
        c.t_max = *v;
    if (auto v = table.number("dt"))
        c.dt = *v;
    if (auto v = table.numbers("times"))
        c.times = *v;
    if (auto v = table.number("tau_max"))
        c.tau_max = *v;
    if (auto v = table.number("tau_step"))
        c.tau_step = *v;
    if (auto v = table.number("blp_t_max"))
        c.blp_t_max = *v;
    if (auto v = table.number("blp_dt"))
        c.blp_dt = *v;
    if (auto v = table.string("blp_pair"))
        c.blp_pair = *v;
    if (auto v = table.integer("random_candidates"))
        c.random_candidates = static_cast<int>(*v);
    if (auto v = table.raw("measures")) {
        c.measures.clear();
        for (const auto& item : split_list(*v))
            c.measures.push_back(unquote(item));
    }
    if (auto v = table.integer("trajectories"))
        c.trajectories = *v;
    if (auto v = table.integer("seed")) {
        if (*v < 0)
            throw ConfigError("seed must be nonnegative");
        c.seed = static_cast<std::uint64_t>(*v);
    }
    if (auto v = table.integer("jobs"))
        c.jobs = static_cast<int>(*v);
    if (auto v = table.string("out"))
        c.out = *v;
    if (auto v = table.string("method")) {
        if (*v == "taylor")
            c.action.method = ActionMethod::taylor;
        else if (*v == "krylov")
            c.action.method = ActionMethod::krylov;
        else
            throw ConfigError("method must be taylor or krylov");
    }
    if (auto v = table.number("tolerance"))
        c.action.tolerance = *v;
    if (auto v = table.integer("max_matvecs")) {
        if (*v < 1)
            throw ConfigError("max_matvecs must be >= 1");
        c.action.max_matvecs = static_cast<std::size_t>(*v);
    }
    c.validate();
    return c;
}

std::string to_text(const ExperimentConfig& c)
{
    std::ostringstream out;
    out << "[graph]\ntype = \"" << c.graph.type << "\"\nn = [";
    for (std::size_t i = 0; i < c.graph.sizes.size(); ++i)
        out << (i ? ", " : "") << c.graph.sizes[i];
    out << "]\n";
    if (!c.graph.edges.empty()) {
        out << "edges = [";
        for (std::size_t i = 0; i < c.graph.edges.size(); ++i)
            out << (i ? ", " : "") << "[" << c.graph.edges[i].first << ", "
                << c.graph.edges[i].second << "]";
        out << "]\n";
    }
    out << "\n[search]\ntarget = " << c.target << "\ngamma = "
        << (c.gamma ? format_number(*c.gamma) : std::string("\"auto\"")) << "\ngamma_scan = "
        << format_list({c.gamma_lo, c.gamma_hi, c.gamma_step}) << "\n";
    out << "\n[noise]\nmu = " << format_list(c.mu) << "\nnu = " << format_list(c.nu) << "\n";
    out << "\n[time]\nt_max = " << format_number(c.t_max) << "\ndt = " << format_number(c.dt)
        << "\n";
    if (!c.times.empty())
        out << "times = " << format_list(c.times) << "\n";
    out << "\n[measure]\ntau_max = " << format_number(c.tau_max)
        << "\ntau_step = " << format_number(c.tau_step)
        << "\nblp_t_max = " << format_number(c.blp_t_max)
        << "\nblp_dt = " << format_number(c.blp_dt) << "\nblp_pair = \"" << c.blp_pair
        << "\"\nrandom_candidates = " << c.random_candidates << "\nmeasures = [";
    for (std::size_t i = 0; i < c.measures.size(); ++i)
        out << (i ? ", " : "") << "\"" << c.measures[i] << "\"";
    out << "]\n";
    out << "\n[mc]\ntrajectories = " << c.trajectories << "\n";
    out << "\n[run]\nseed = " << c.seed << "\njobs = " << c.jobs << "\nout = \"" << c.out
        << "\"\nmethod = \"" << (c.action.method == ActionMethod::krylov ? "krylov" : "taylor")
        << "\"\ntolerance = " << format_number(c.action.tolerance)
        << "\nmax_matvecs = " << c.action.max_matvecs << "\n";
    return out.str();
}

} // namespace rtnwalk
