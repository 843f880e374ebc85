#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <rtnwalk/errors.hpp>
#include <rtnwalk/graph.hpp>
#include <rtnwalk/propagator.hpp>

namespace rtnwalk {

/// Malformed or out-of-range experiment configuration (CLI exit code 2).
class ConfigError : public Error
{
public:
    using Error::Error;
};

/*
 * Configuration text:
 *
 *     # comment
 *     [noise]
 *     mu = [0.01, 0.1, 1, 10]
 *     nu = 1.0
 *
 * Values are numbers, quoted or bare strings, or bracketed lists (nested
 * one level for edge lists). Every key has a globally unique short name
 * (the part after the section), which is what CLI flags (--t-max) and
 * environment overrides (RTNWALK_T_MAX) refer to.
 */
class ConfigTable
{
public:
    static ConfigTable parse(std::istream& in, const std::string& origin = "<config>");
    static ConfigTable parse_file(const std::string& path);

    /// Known keys as (section, short name).
    static const std::vector<std::pair<std::string, std::string>>& known_keys();

    /// Sets a value by short name; throws ConfigError for unknown keys.
    void set(const std::string& short_name, const std::string& raw);

    /// Applies RTNWALK_<SHORT_NAME> variables present in the environment.
    void apply_environment(const std::string& prefix = "RTNWALK_");

    bool has(const std::string& short_name) const;
    std::optional<std::string> raw(const std::string& short_name) const;

    std::optional<double> number(const std::string& short_name) const;
    std::optional<std::int64_t> integer(const std::string& short_name) const;
    std::optional<std::string> string(const std::string& short_name) const;
    std::optional<std::vector<double>> numbers(const std::string& short_name) const;
    std::optional<std::vector<std::pair<int, int>>> pairs(const std::string& short_name) const;

private:
    std::map<std::string, std::string> m_values; // keyed by short name
};

struct GraphSpec
{
    std::string type = "star"; ///< star | complete | edges
    std::vector<int> sizes{7};
    std::vector<std::pair<int, int>> edges; ///< 1-based, for type = edges

    Graph build(int n) const;
};

struct ExperimentConfig
{
    GraphSpec graph;
    int target = 1;              ///< 1-based
    std::optional<double> gamma; ///< calibrated when absent
    double gamma_lo = 0.001;
    double gamma_hi = 2.0;
    double gamma_step = 0.001;

    std::vector<double> mu{1.0};
    std::vector<double> nu{1.0};

    double t_max = 0.0; ///< 0 selects 2 pi sqrt(N)
    double dt = 0.05;
    std::vector<double> times; ///< explicit grid, overrides t_max/dt when set

    double tau_max = 25.0;
    double tau_step = 0.25;
    double blp_t_max = 50.0;
    double blp_dt = 0.02;
    std::string blp_pair = "r"; ///< r | search
    int random_candidates = 100;
    std::vector<std::string> measures{"div", "blp"};

    std::int64_t trajectories = 10'000;
    std::uint64_t seed = 1;
    int jobs = 0; ///< 0 selects all cores
    std::string out = "out";
    ActionOptions action;

    /// Throws ConfigError on empty lists or out-of-range parameters.
    void validate() const;
};

/// Defaults overlaid with whatever the table holds.
ExperimentConfig load_config(const ConfigTable& table);

/// Re-serializes a config in the text format above.
std::string to_text(const ExperimentConfig& config);

} // namespace rtnwalk
