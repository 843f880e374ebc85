#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <rtnwalk/config.hpp>

namespace rtnwalk {

/// Engine version recorded in every manifest.
std::string_view engine_version();

enum class Command
{
    dynamics, ///< t, p_target, purity, bloch_norm per point
    search,   ///< t, p_target per point, p_succ summary
    nm_div,   ///< Gamma surface per point, N_M summary
    nm_blp,   ///< trace-distance series per point, N_BLP summary
    mc,       ///< trajectory-averaged p_target with standard errors
    sweep,    ///< one summary row per point: gamma, p_succ and the selected measures
};

std::optional<Command> parse_command(std::string_view name);
std::string_view command_name(Command command);

/// One (N, mu, nu) combination, enumerated N-major, then mu, then nu.
struct SweepPoint
{
    int n_nodes = 0;
    double mu = 0.0;
    double nu = 0.0;
};

std::vector<SweepPoint> sweep_points(const ExperimentConfig& config);

struct RunRecord
{
    SweepPoint point;
    double gamma = 0.0;
    double seconds = 0.0;
    std::vector<std::string> outputs;
};

struct RunManifest
{
    std::string command;
    std::string config_text;
    std::string version;
    std::string timestamp; ///< UTC, ISO 8601; the only nondeterministic field
    double seconds = 0.0;
    std::vector<RunRecord> runs;
    std::vector<std::string> outputs; ///< every file written, manifest excluded
};

/**
 * Runs `command` for every sweep point and writes the CSV files plus
 * manifest.json into config.out. config.jobs workers (0 = all cores) are
 * spread over the points, and any left over parallelize within each point.
 * Files are written afterwards in point order by the calling thread, so the
 * output bytes do not depend on the worker count.
 *
 * Throws ConfigError for invalid configurations, ConvergenceError for
 * numerical failures and Error when an output file cannot be written.
 */
RunManifest run_experiment(Command command, const ExperimentConfig& config);

/// gamma used for an N-node graph: config.gamma, or calibrated on the scan.
double resolve_gamma(const ExperimentConfig& config, int n_nodes);

/// Writes the manifest as JSON.
std::string manifest_json(const RunManifest& manifest);

} // namespace rtnwalk
