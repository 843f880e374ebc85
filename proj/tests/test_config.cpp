#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include <rtnwalk/config.hpp>

using namespace rtnwalk;

namespace {

ConfigTable parse(const std::string& text)
{
    std::istringstream in(text);
    return ConfigTable::parse(in);
}

} // namespace

TEST_CASE("defaults")
{
    const ExperimentConfig c = load_config(ConfigTable{});
    CHECK(c.graph.type == "star");
    CHECK(c.graph.sizes == std::vector<int>{7});
    CHECK(c.target == 1);
    CHECK_FALSE(c.gamma.has_value());
    CHECK(c.mu == std::vector<double>{1.0});
    CHECK(c.tau_max == 25.0);
    CHECK(c.tau_step == 0.25);
    CHECK(c.blp_t_max == 50.0);
    CHECK(c.blp_dt == 0.02);
    CHECK(c.dt == 0.05);
    CHECK(c.action.tolerance == 1e-10);
}

TEST_CASE("sections, lists, comments and strings")
{
    const auto table = parse(R"(
# sweep of the 7-node star
[graph]
type = "star"   # hub is node 1
n = [4, 5, 6]

[search]
target = 1
gamma = 0.25
gamma_scan = [0.1, 1.0, 0.1]

[noise]
mu = [0.01, 0.1, 1, 10]
nu = 0.5

[measure]
measures = [div]
blp_pair = search

[run]
seed = 99
out = "results/a#b"
method = krylov
max_matvecs = 1000
)");
    const ExperimentConfig c = load_config(table);
    CHECK(c.graph.sizes == std::vector<int>{4, 5, 6});
    CHECK(c.gamma == 0.25);
    CHECK(c.gamma_lo == 0.1);
    CHECK(c.gamma_step == 0.1);
    CHECK(c.mu == std::vector<double>{0.01, 0.1, 1.0, 10.0});
    CHECK(c.nu == std::vector<double>{0.5});
    CHECK(c.measures == std::vector<std::string>{"div"});
    CHECK(c.blp_pair == "search");
    CHECK(c.seed == 99);
    CHECK(c.out == "results/a#b");
    CHECK(c.action.method == ActionMethod::krylov);
    CHECK(c.action.max_matvecs == 1000);
}

TEST_CASE("explicit edge lists in both spellings")
{
    const auto a = load_config(parse("[graph]\ntype = edges\nn = 4\nedges = [[1,2],[2,3],[3,4]]\n"));
    const auto b = load_config(parse("[graph]\ntype = edges\nn = 4\nedges = 1-2, 2-3, 3-4\n"));
    CHECK(a.graph.edges == b.graph.edges);
    const Graph g = a.graph.build(4);
    CHECK(g.n_edges() == 3);
    CHECK(g.edges()[2] == Edge{2, 3});
}

TEST_CASE("gamma auto")
{
    auto table = parse("[search]\ngamma = 0.3\n");
    CHECK(load_config(table).gamma == 0.3);
    table.set("gamma", "auto");
    CHECK_FALSE(load_config(table).gamma.has_value());
}

TEST_CASE("malformed input is a ConfigError")
{
    CHECK_THROWS_AS(parse("[noise]\nbogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse("[noise]\nt_max = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse("mu\n"), ConfigError);
    CHECK_THROWS_AS(parse("mu =\n"), ConfigError);
    CHECK_THROWS_AS(load_config(parse("mu = [0.1, x]\n")), ConfigError);
    CHECK_THROWS_AS(load_config(parse("mu = [0.1, 0.2\n")), ConfigError);
    CHECK_THROWS_AS(load_config(parse("n = 4.5\n")), ConfigError);
    CHECK_THROWS_AS(load_config(parse("seed = -1\n")), ConfigError);
    CHECK_THROWS_AS(load_config(parse("method = euler\n")), ConfigError);
    CHECK_THROWS_AS(load_config(parse("gamma_scan = [1, 2]\n")), ConfigError);
    CHECK_THROWS_AS(ConfigTable::parse_file("/nonexistent/config.txt"), ConfigError);
    CHECK_THROWS_AS(load_config(parse("type = edges\nn = 3\nedges = [[1,1]]\n")), ConfigError);
}

TEST_CASE("out-of-range parameters are rejected")
{
    const char* bad[] = {
        "mu = []",        "nu = []",          "n = []",         "mu = 0",
        "nu = 1.5",       "nu = -0.5",        "n = 1",          "target = 0",
        "target = 8",     "gamma = -1",       "dt = 0",         "tau_max = 0",
        "tau_step = -1",  "blp_dt = 0",       "trajectories = 0", "jobs = -2",
        "tolerance = 0",  "measures = [foo]", "type = ring",    "n = 18",
        "times = [1, 0.5]", "blp_pair = q",   "random_candidates = -1",
    };
    for (const char* line : bad) {
        CAPTURE(line);
        CHECK_THROWS_AS(load_config(parse(line)), ConfigError);
    }
}

TEST_CASE("set and environment overrides")
{
    auto table = parse("[noise]\nmu = 1\n");
    table.set("mu", "0.5, 2");
    CHECK(load_config(table).mu == std::vector<double>{0.5, 2.0});
    CHECK_THROWS_AS(table.set("nonsense", "1"), ConfigError);

    ::setenv("RTNWALK_T_MAX", "3.5", 1);
    ::setenv("RTNWALK_MU", "[7]", 1);
    table.apply_environment();
    ::unsetenv("RTNWALK_T_MAX");
    ::unsetenv("RTNWALK_MU");
    const auto c = load_config(table);
    CHECK(c.t_max == 3.5);
    CHECK(c.mu == std::vector<double>{7.0});
}

TEST_CASE("serialized config parses back to the same values")
{
    auto table = parse("n = [4, 7]\nmu = [0.01, 0.1]\nnu = [0.5, 1]\ngamma = 0.123456789012345\n"
                       "times = [0, 0.5, 2]\ntype = star\ntolerance = 1e-12\n");
    const auto c = load_config(table);
    const std::string text = to_text(c);
    std::istringstream in(text);
    const auto again = load_config(ConfigTable::parse(in));
    CHECK(to_text(again) == text);
    CHECK(again.gamma == c.gamma);
    CHECK(again.times == c.times);
    CHECK(again.action.tolerance == 1e-12);
}
