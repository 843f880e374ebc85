#include <rtnwalk/experiment.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include <rtnwalk/errors.hpp>
#include <rtnwalk/mc_oracle.hpp>
#include <rtnwalk/measures.hpp>
#include <rtnwalk/parallel.hpp>
#include <rtnwalk/quasiham.hpp>
#include <rtnwalk/search.hpp>

#ifndef RTNWALK_VERSION
#define RTNWALK_VERSION "unknown"
#endif

namespace rtnwalk {

namespace {

namespace fs = std::filesystem;

// 17 significant digits round-trip every double exactly.
std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Short form for file names.
std::string tag(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

class Csv
{
public:
    explicit Csv(std::initializer_list<std::string_view> header)
    {
        bool first = true;
        for (auto h : header) {
            m_text += first ? "" : ",";
            m_text += h;
            first = false;
        }
        m_text += '\n';
    }

    template <class... T>
    void row(const T&... values)
    {
        bool first = true;
        ((m_text += (first ? "" : ","), m_text += cell(values), first = false), ...);
        m_text += '\n';
    }

    const std::string& text() const noexcept { return m_text; }

private:
    static std::string cell(double v) { return fmt(v); }
    static std::string cell(int v) { return std::to_string(v); }
    static std::string cell(std::int64_t v) { return std::to_string(v); }
    static std::string cell(const std::string& v) { return v; }

    std::string m_text;
};

struct OutputFile
{
    std::string name;
    std::string text;
};

struct PointOutput
{
    std::vector<OutputFile> files;
    std::vector<std::string> summary; // cells after mu, nu, N
    double seconds = 0.0;
};

std::string point_stem(Command command, const SweepPoint& p)
{
    std::string stem(command_name(command));
    for (auto& ch : stem)
        if (ch == '-')
            ch = '_';
    return stem + "_N" + std::to_string(p.n_nodes) + "_mu" + tag(p.mu) + "_nu" + tag(p.nu);
}

std::vector<double> dynamics_grid(const ExperimentConfig& c, int n_nodes)
{
    if (!c.times.empty())
        return c.times;
    const double t_max = c.t_max > 0.0 ? c.t_max : default_search_horizon(n_nodes);
    return time_grid(t_max, c.dt);
}

struct PointContext
{
    const ExperimentConfig& config;
    SweepPoint point;
    double gamma;
    int inner_jobs;

    Graph graph() const { return config.graph.build(point.n_nodes); }
    SearchSpec search() const { return {config.target - 1, gamma}; }
    NoiseModel noise(const Graph& g) const { return {g.n_edges(), point.mu, point.nu}; }
    MeasureOptions measure(const QuasiHamiltonian& hq) const
    {
        return {hq.action_options(config.action), inner_jobs};
    }
};

QuasiHamiltonian assemble(const PointContext& ctx, const Graph& g)
{
    return QuasiHamiltonian::assemble(g, ctx.search(), ctx.noise(g),
                                      GeneratorBasis(g.n_nodes()));
}

struct SearchRun
{
    SearchResult search;
    std::vector<DensityMatrix> states;
};

SearchRun run_search(const PointContext& ctx, const QuasiHamiltonian& hq, int n_nodes)
{
    const auto times = dynamics_grid(ctx.config, n_nodes);
    SearchRun run;
    run.states = evolve_rho(hq, initial_state(n_nodes), times, ctx.measure(hq).action);
    run.search = success_probability(times, run.states, ctx.config.target - 1);
    return run;
}

BLPResult run_blp(const PointContext& ctx, const QuasiHamiltonian& hq, const Graph& g)
{
    const auto opts = ctx.measure(hq);
    const DensityMatrix rho1 = initial_state(g.n_nodes());
    if (ctx.config.blp_pair == "search") {
        const auto candidates =
            default_candidates(g, ctx.config.seed, ctx.config.random_candidates);
        return blp_pair_search(hq, rho1, candidates, ctx.config.blp_t_max, ctx.config.blp_dt,
                               opts)
            .best;
    }
    return blp_measure(hq, rho1, optimal_orthogonal_state(g.n_nodes()), ctx.config.blp_t_max,
                       ctx.config.blp_dt, opts);
}

PointOutput compute_point(Command command, const PointContext& ctx)
{
    const auto started = std::chrono::steady_clock::now();
    const Graph g = ctx.graph();
    const int n = g.n_nodes();
    const std::string stem = point_stem(command, ctx.point);
    PointOutput out;

    switch (command) {
    case Command::dynamics: {
        const auto hq = assemble(ctx, g);
        const auto run = run_search(ctx, hq, n);
        Csv csv({"t", "p_target", "purity", "bloch_norm"});
        for (std::size_t k = 0; k < run.states.size(); ++k) {
            const auto& rho = run.states[k];
            csv.row(run.search.times[k], run.search.probability[k], rho.squaredNorm(),
                    to_bloch(rho, hq.basis()).norm());
        }
        out.files.push_back({stem + ".csv", csv.text()});
        out.summary = {fmt(ctx.gamma), fmt(run.search.p_succ), fmt(run.search.t_opt)};
        break;
    }
    case Command::search: {
        const auto hq = assemble(ctx, g);
        const auto run = run_search(ctx, hq, n);
        Csv csv({"t", "p_target"});
        for (std::size_t k = 0; k < run.search.times.size(); ++k)
            csv.row(run.search.times[k], run.search.probability[k]);
        out.files.push_back({stem + ".csv", csv.text()});
        out.summary = {fmt(ctx.gamma), fmt(run.search.p_succ), fmt(run.search.t_opt)};
        break;
    }
    case Command::nm_div: {
        const auto hq = assemble(ctx, g);
        const auto scan = nm_divisibility(hq, initial_state(n), ctx.config.tau_max,
                                          ctx.config.tau_step, ctx.measure(hq));
        Csv csv({"tau", "tau1", "gamma_value"});
        for (const auto& p : scan.surface)
            csv.row(p.tau, p.tau1, p.value);
        out.files.push_back({stem + ".csv", csv.text()});
        out.summary = {fmt(scan.value)};
        break;
    }
    case Command::nm_blp: {
        const auto hq = assemble(ctx, g);
        const auto blp = run_blp(ctx, hq, g);
        Csv csv({"t", "trace_distance", "sigma"});
        for (std::size_t k = 0; k < blp.times.size(); ++k)
            csv.row(blp.times[k], blp.distance[k], blp.sigma[k]);
        out.files.push_back({stem + ".csv", csv.text()});
        out.summary = {fmt(blp.value)};
        break;
    }
    case Command::mc: {
        const auto times = dynamics_grid(ctx.config, n);
        const int w = ctx.config.target - 1;
        const auto mc = average_evolution(g, ctx.search(), ctx.noise(g), initial_state(n), times,
                                          ctx.config.trajectories, ctx.config.seed,
                                          ctx.inner_jobs);
        Csv csv({"t", "p_target", "p_target_stderr", "purity"});
        double p_succ = 0.0;
        double t_opt = 0.0;
        for (std::size_t k = 0; k < mc.times.size(); ++k) {
            const double p = mc.mean[k](w, w).real();
            csv.row(mc.times[k], p, mc.stderr_real[k](w, w), mc.mean[k].squaredNorm());
            if (k == 0 || p > p_succ) {
                p_succ = p;
                t_opt = mc.times[k];
            }
        }
        out.files.push_back({stem + ".csv", csv.text()});
        out.summary = {fmt(ctx.gamma), fmt(p_succ), fmt(t_opt)};
        break;
    }
    case Command::sweep: {
        const auto hq = assemble(ctx, g);
        const auto run = run_search(ctx, hq, n);
        out.summary = {fmt(ctx.gamma), fmt(run.search.p_succ)};
        for (const auto& m : ctx.config.measures) {
            if (m == "div")
                out.summary.push_back(fmt(nm_divisibility(hq, initial_state(n),
                                                          ctx.config.tau_max,
                                                          ctx.config.tau_step, ctx.measure(hq))
                                              .value));
            else
                out.summary.push_back(fmt(run_blp(ctx, hq, g).value));
        }
        break;
    }
    }
    out.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return out;
}

std::vector<std::string> summary_header(Command command, const ExperimentConfig& c)
{
    std::vector<std::string> h{"mu", "nu", "N"};
    switch (command) {
    case Command::dynamics:
    case Command::search:
    case Command::mc:
        h.insert(h.end(), {"gamma", "p_succ", "t_opt"});
        break;
    case Command::nm_div:
    case Command::nm_blp:
        h.push_back("value");
        break;
    case Command::sweep:
        h.insert(h.end(), {"gamma", "p_succ"});
        for (const auto& m : c.measures)
            h.push_back(m == "div" ? "nm_div" : "nm_blp");
        break;
    }
    return h;
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_file(const fs::path& path, const std::string& text)
{
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    file << text;
    file.close();
    if (!file)
        throw Error("cannot write " + path.string());
}

} // namespace

std::string_view engine_version()
{
    return RTNWALK_VERSION;
}

std::optional<Command> parse_command(std::string_view name)
{
    for (auto c : {Command::dynamics, Command::search, Command::nm_div, Command::nm_blp,
                   Command::mc, Command::sweep})
        if (command_name(c) == name)
            return c;
    return std::nullopt;
}

std::string_view command_name(Command command)
{
    switch (command) {
    case Command::dynamics:
        return "dynamics";
    case Command::search:
        return "search";
    case Command::nm_div:
        return "nm-div";
    case Command::nm_blp:
        return "nm-blp";
    case Command::mc:
        return "mc";
    case Command::sweep:
        return "sweep";
    }
    return "?";
}

std::vector<SweepPoint> sweep_points(const ExperimentConfig& config)
{
    std::vector<SweepPoint> points;
    for (int n : config.graph.sizes)
        for (double mu : config.mu)
            for (double nu : config.nu)
                points.push_back({n, mu, nu});
    return points;
}

double resolve_gamma(const ExperimentConfig& config, int n_nodes)
{
    if (config.gamma)
        return *config.gamma;
    const Graph g = config.graph.build(n_nodes);
    const auto grid = gamma_range(config.gamma_lo, config.gamma_hi, config.gamma_step);
    const double horizon = config.t_max > 0.0 ? config.t_max : default_search_horizon(n_nodes);
    return calibrate_gamma(g, config.target - 1, grid, horizon, config.dt);
}

RunManifest run_experiment(Command command, const ExperimentConfig& config)
{
    config.validate();
    const auto started = std::chrono::steady_clock::now();
    const auto points = sweep_points(config);

    std::map<int, double> gammas;
    for (const auto& p : points)
        if (!gammas.contains(p.n_nodes))
            gammas[p.n_nodes] = resolve_gamma(config, p.n_nodes);

    const int jobs = config.jobs > 0 ? config.jobs : default_jobs();
    // Workers go to points first; leftover workers split each point's inner loop.
    const int outer = static_cast<int>(std::min<std::size_t>(points.size(), static_cast<std::size_t>(jobs)));
    const int inner = std::max(1, jobs / outer);

    std::vector<PointOutput> results(points.size());
    parallel_for(points.size(), outer, [&](std::size_t i) {
        const PointContext ctx{config, points[i], gammas.at(points[i].n_nodes), inner};
        results[i] = compute_point(command, ctx);
    });

    // Single collector: files appear in point order.
    const fs::path dir(config.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw Error("cannot create output directory " + dir.string() + ": " + ec.message());

    RunManifest manifest;
    manifest.command = std::string(command_name(command));
    manifest.config_text = to_text(config);
    manifest.version = std::string(engine_version());
    manifest.timestamp = utc_timestamp();

    std::string summary;
    {
        const auto header = summary_header(command, config);
        for (std::size_t i = 0; i < header.size(); ++i)
            summary += (i ? "," : "") + header[i];
        summary += '\n';
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        RunRecord record{points[i], gammas.at(points[i].n_nodes), results[i].seconds, {}};
        for (const auto& f : results[i].files) {
            write_file(dir / f.name, f.text);
            record.outputs.push_back((dir / f.name).string());
            manifest.outputs.push_back(record.outputs.back());
        }
        summary += fmt(points[i].mu) + "," + fmt(points[i].nu) + "," +
                   std::to_string(points[i].n_nodes);
        for (const auto& cell : results[i].summary)
            summary += "," + cell;
        summary += '\n';
        manifest.runs.push_back(std::move(record));
    }
    std::string summary_name(command_name(command));
    for (auto& ch : summary_name)
        if (ch == '-')
            ch = '_';
    const fs::path summary_path = dir / (summary_name + "_summary.csv");
    write_file(summary_path, summary);
    manifest.outputs.push_back(summary_path.string());

    for (const auto& path : manifest.outputs)
        if (!fs::exists(path) || fs::file_size(path) == 0)
            throw Error("output file missing or empty: " + path);

    manifest.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    write_file(dir / "manifest.json", manifest_json(manifest));
    return manifest;
}

std::string manifest_json(const RunManifest& m)
{
    nlohmann::ordered_json j;
    j["command"] = m.command;
    j["engine_version"] = m.version;
    j["timestamp"] = m.timestamp;
    j["wall_clock_seconds"] = m.seconds;
    j["config"] = m.config_text;
    auto& runs = j["runs"] = nlohmann::ordered_json::array();
    for (const auto& r : m.runs) {
        runs.push_back({{"N", r.point.n_nodes},
                        {"mu", r.point.mu},
                        {"nu", r.point.nu},
                        {"gamma", r.gamma},
                        {"wall_clock_seconds", r.seconds},
                        {"outputs", r.outputs}});
    }
    j["outputs"] = m.outputs;
    return j.dump(2) + "\n";
}

} // namespace rtnwalk
