// rtnwalk: noise-averaged quantum-walk search experiments.
//
//     rtnwalk <dynamics|search|nm-div|nm-blp|mc|sweep> [--config FILE] [--KEY VALUE ...]
//
// Settings are layered: built-in defaults, then the config file, then
// RTNWALK_<KEY> environment variables, then command-line flags. Every config
// key has a flag spelled with dashes (t_max -> --t-max).
//
// Exit codes: 0 success, 2 invalid configuration or usage, 3 numerical failure.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include <rtnwalk/config.hpp>
#include <rtnwalk/errors.hpp>
#include <rtnwalk/experiment.hpp>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

const char* describe(rtnwalk::Command command)
{
    using rtnwalk::Command;
    switch (command) {
    case Command::dynamics:
        return "Noise-averaged dynamics: p_target, purity and Bloch norm over time";
    case Command::search:
        return "Target population over the measurement horizon and p_succ";
    case Command::nm_div:
        return "Divisibility surface Gamma(tau, tau1) and its maximum N_M";
    case Command::nm_blp:
        return "Trace-distance series between two states and N_BLP";
    case Command::mc:
        return "Trajectory average over sampled telegraph-noise histories";
    case Command::sweep:
        return "Summary table of gamma, p_succ and the selected measures per point";
    }
    return "";
}

std::string flag_name(const std::string& key)
{
    std::string flag = "--" + key;
    for (auto& ch : flag)
        if (ch == '_')
            ch = '-';
    return flag;
}

} // namespace

int main(int argc, char** argv)
{
    using namespace rtnwalk;

    CLI::App app{"Continuous-time quantum walk search under random telegraph noise"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(engine_version()));

    std::string config_path;
    std::map<std::string, std::string> overrides;
    std::map<CLI::App*, Command> commands;

    for (auto command : {Command::dynamics, Command::search, Command::nm_div, Command::nm_blp,
                         Command::mc, Command::sweep}) {
        auto* sub = app.add_subcommand(std::string(command_name(command)), describe(command));
        commands[sub] = command;
        sub->add_option("--config", config_path, "Configuration file");
        for (const auto& [section, key] : ConfigTable::known_keys()) {
            sub->add_option(flag_name(key), overrides[key],
                            "Override [" + section + "] " + key);
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    Command command = Command::dynamics;
    CLI::App* chosen = nullptr;
    for (const auto& [sub, c] : commands) {
        if (sub->parsed()) {
            chosen = sub;
            command = c;
        }
    }

    try {
        ConfigTable table;
        if (!config_path.empty())
            table = ConfigTable::parse_file(config_path);
        table.apply_environment();
        for (const auto& [section, key] : ConfigTable::known_keys())
            if (chosen->count(flag_name(key)) > 0)
                table.set(key, overrides[key]);

        const ExperimentConfig config = load_config(table);
        const RunManifest manifest = run_experiment(command, config);
        for (const auto& path : manifest.outputs)
            std::cout << path << "\n";
        std::fprintf(stderr, "%s: %zu point(s) in %.3f s\n", manifest.command.c_str(),
                     manifest.runs.size(), manifest.seconds);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "rtnwalk: configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InvalidArgument& e) {
        std::cerr << "rtnwalk: invalid argument: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ConvergenceError& e) {
        std::cerr << "rtnwalk: numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const Error& e) {
        std::cerr << "rtnwalk: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "rtnwalk: numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}
