#include <doctest.h>

#include "oracles.hpp"

#include <rtnwalk/errors.hpp>
#include <rtnwalk/measures.hpp>

using namespace rtnwalk;
using oracle::Complex;

namespace {

QuasiHamiltonian star(int n, double mu, double nu)
{
    return QuasiHamiltonian::assemble(star_graph(n), {0, 1.0 / n}, {n - 1, mu, nu},
                                      GeneratorBasis(n));
}

DensityMatrix basis_state(int n, int k)
{
    DensityMatrix rho = DensityMatrix::Zero(n, n);
    rho(k, k) = 1.0;
    return rho;
}

} // namespace

TEST_CASE("trace distance reference values")
{
    CHECK(trace_distance(basis_state(2, 0), basis_state(2, 0)) == 0.0);
    CHECK(trace_distance(basis_state(2, 0), basis_state(2, 1)) == doctest::Approx(1.0));
    CHECK(trace_distance(basis_state(2, 0), DensityMatrix::Identity(2, 2) / 2.0) ==
          doctest::Approx(0.5));
    CHECK_THROWS_AS(trace_distance(basis_state(2, 0), basis_state(3, 0)), InvalidArgument);
}

TEST_CASE("trace distance is a metric and matches the singular-value form")
{
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 6;
        const DensityMatrix a = oracle::random_density(n, rng);
        const DensityMatrix b = oracle::projector(oracle::random_pure(n, rng));
        const DensityMatrix c = oracle::random_density(n, rng);
        const double ab = trace_distance(a, b);
        CHECK(std::abs(ab - trace_distance(b, a)) <= 1e-13);
        CHECK(ab <= trace_distance(a, c) + trace_distance(c, b) + 1e-12);
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0 + 1e-12);
        CHECK(ab == doctest::Approx(oracle::trace_distance(a, b)).epsilon(1e-10));
        const GeneratorBasis basis(n);
        CHECK(bloch_trace_distance(to_bloch(a, basis), to_bloch(b, basis), basis) ==
              doctest::Approx(ab).epsilon(1e-10));
    }
}

TEST_CASE("orthogonal state |r>")
{
    const DensityMatrix r2 = optimal_orthogonal_state(2);
    CHECK(std::abs(r2(0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(r2(0, 1) + 0.5) < 1e-15);
    for (int n = 2; n <= 10; ++n) {
        const DensityMatrix r = optimal_orthogonal_state(n);
        CHECK(std::abs(r.trace() - 1.0) < 1e-14);
        CHECK(std::abs((r * r).trace() - 1.0) < 1e-12);
        CHECK(std::abs((r * initial_state(n)).trace()) < 1e-12);
        // eigenvector of the star Laplacian with eigenvalue n
        const ComplexMatrix l = laplacian(star_graph(n)).cast<Complex>();
        CHECK((l * r - double(n) * r).norm() < 1e-12);
    }
    CHECK_THROWS_AS(optimal_orthogonal_state(1), InvalidArgument);
}

TEST_CASE("divisibility boundaries vanish")
{
    const auto hq = star(4, 0.05, 1.0);
    const DensityMatrix rho0 = initial_state(4);
    for (double tau : {1.0, 5.0, 12.0}) {
        CHECK(gamma_divisibility(hq, rho0, tau, 0.0) < 1e-8);
        CHECK(gamma_divisibility(hq, rho0, tau, tau) < 1e-8);
    }
    CHECK(gamma_divisibility(hq, rho0, 8.0, 4.0) > 1e-3);

    const auto clean = star(4, 0.05, 0.0);
    for (double tau1 : {1.0, 3.0, 7.0})
        CHECK(gamma_divisibility(clean, rho0, 8.0, tau1) < 1e-8);
}

TEST_CASE("divisibility scan layout and consistency")
{
    const auto hq = star(4, 0.1, 1.0);
    const DensityMatrix rho0 = initial_state(4);
    const auto scan = nm_divisibility(hq, rho0, 10.0, 0.5);
    const std::size_t n = 21;
    REQUIRE(scan.surface.size() == n * (n + 1) / 2);
    std::size_t i = 0;
    double max_value = -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j <= k; ++j, ++i) {
            CHECK(scan.surface[i].tau == doctest::Approx(0.5 * k));
            CHECK(scan.surface[i].tau1 == doctest::Approx(0.5 * j));
            CHECK(scan.surface[i].value >= -1e-12);
            if (j == 0 || j == k)
                CHECK(scan.surface[i].value < 1e-8);
            max_value = std::max(max_value, scan.surface[i].value);
        }
    }
    CHECK(scan.value == max_value);
    CHECK(gamma_divisibility(hq, rho0, scan.tau_star, scan.tau1_star) ==
          doctest::Approx(scan.value).epsilon(1e-8));
    CHECK(gamma_divisibility(hq, rho0, 7.5, 2.0) ==
          doctest::Approx(scan.surface[15 * 16 / 2 + 4].value).epsilon(1e-8));

    MeasureOptions parallel;
    parallel.jobs = 3;
    const auto again = nm_divisibility(hq, rho0, 10.0, 0.5, parallel);
    CHECK(again.value == scan.value);
    for (std::size_t p = 0; p < scan.surface.size(); ++p)
        CHECK(again.surface[p].value == scan.surface[p].value);
}

TEST_CASE("noiseless dynamics are divisible and show no backflow")
{
    const auto clean = star(5, 1.0, 0.0);
    CHECK(nm_divisibility(clean, initial_state(5), 10.0, 0.5).value < 1e-7);
    const auto blp = blp_measure(clean, initial_state(5), optimal_orthogonal_state(5), 20.0, 0.02);
    CHECK(blp.value < 1e-7);
    for (double d : blp.distance)
        CHECK(d == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("BLP series bookkeeping")
{
    const auto hq = star(4, 0.05, 1.0);
    const auto blp = blp_measure(hq, initial_state(4), optimal_orthogonal_state(4), 20.0, 0.05);
    REQUIRE(blp.times.size() == 401);
    CHECK(blp.sigma.back() == 0.0);
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < blp.distance.size(); ++k) {
        const double inc = blp.distance[k + 1] - blp.distance[k];
        CHECK(blp.sigma[k] == doctest::Approx(inc / 0.05));
        if (inc > kBlpNoiseFloor)
            sum += inc;
        CHECK(blp.distance[k + 1] <= blp.distance.front() + 1e-8);
    }
    CHECK(blp.value == doctest::Approx(sum));
    CHECK(blp.value > 1e-3);

    MeasureOptions parallel;
    parallel.jobs = 2;
    const auto again =
        blp_measure(hq, initial_state(4), optimal_orthogonal_state(4), 20.0, 0.05, parallel);
    CHECK(again.distance == blp.distance);
}

TEST_CASE("Gamma surface is larger for slow noise than for fast noise")
{
    const int n = 7;
    const auto slow = nm_divisibility(star(n, 0.01, 1.0), initial_state(n), 25.0, 1.0);
    const auto fast = nm_divisibility(star(n, 10.0, 1.0), initial_state(n), 25.0, 1.0);
    CHECK(slow.value > fast.value);
    double slow_max = 0.0;
    double fast_max = 0.0;
    for (std::size_t i = 0; i < slow.surface.size(); ++i) {
        slow_max = std::max(slow_max, slow.surface[i].value);
        fast_max = std::max(fast_max, fast.surface[i].value);
    }
    CHECK(slow_max > fast_max);
    CHECK(fast.value > 0.0);
}

TEST_CASE("restarting near the slow-noise maximum changes the state")
{
    const int n = 7;
    const auto hq = star(n, 0.01, 1.0);
    const auto scan = nm_divisibility(hq, initial_state(n), 25.0, 0.5);
    const BlochVector n0 = to_bloch(initial_state(n), hq.basis());
    const double at[] = {scan.tau_star};
    const BlochVector full = evolve(hq, n0, at).bloch.front();
    const BlochVector restarted = restarted_evolve(hq, n0, scan.tau1_star, scan.tau_star);
    CHECK(bloch_trace_distance(full, restarted, hq.basis()) > 1e-3);
}

TEST_CASE("candidate set contents and determinism")
{
    const Graph g = star_graph(5);
    const auto a = default_candidates(g, 17, 10);
    const auto b = default_candidates(g, 17, 10);
    const auto c = default_candidates(g, 18, 10);
    REQUIRE(a.size() == 5 + 5 + 1 + 10);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i] == b[i]);
        CHECK(std::abs(a[i].trace() - 1.0) < 1e-12);
        CHECK(std::abs((a[i] * a[i]).trace() - 1.0) < 1e-12);
    }
    CHECK((a[10] - optimal_orthogonal_state(5)).norm() < 1e-15);
    CHECK((a.back() - c.back()).norm() > 1e-3);
}

TEST_CASE("pair search")
{
    const int n = 4;
    const auto hq = star(n, 0.1, 1.0);
    const DensityMatrix s = initial_state(n);
    const std::vector<DensityMatrix> only_r{optimal_orthogonal_state(n)};
    const auto single = blp_pair_search(hq, s, only_r, 20.0, 0.05);
    CHECK(single.best_index == 0);
    CHECK(single.best_state == only_r.front());
    CHECK(single.best.value ==
          doctest::Approx(blp_measure(hq, s, only_r.front(), 20.0, 0.05).value));

    const auto clean = star(n, 0.1, 0.0);
    const auto candidates = default_candidates(star_graph(n), 1, 5);
    const auto none = blp_pair_search(clean, s, candidates, 20.0, 0.05);
    for (double v : none.values)
        CHECK(v < 1e-7);

    const auto full = blp_pair_search(hq, s, candidates, 20.0, 0.05);
    CHECK(full.values.size() == candidates.size());
    for (double v : full.values)
        CHECK(v <= full.best.value);
    CHECK_THROWS_AS(blp_pair_search(hq, s, std::vector<DensityMatrix>{}, 20.0, 0.05),
                    InvalidArgument);
}

TEST_CASE("|r> maximizes backflow among the default candidates on the 7-node star")
{
    const int n = 7;
    const auto hq = star(n, 0.1, 1.0);
    MeasureOptions opts;
    opts.jobs = 0;
    const auto candidates = default_candidates(star_graph(n), 1, 100);
    const auto result = blp_pair_search(hq, initial_state(n), candidates, 50.0, 0.02, opts);
    const double r_value = result.values[2 * n];
    MESSAGE("best candidate " << result.best_index << " value " << result.best.value
                              << ", |r> value " << r_value);
    CHECK(r_value >= result.best.value - 1e-6);
}

TEST_CASE("|r> maximizes backflow among pure states orthogonal to the initial state on the 7-node star")
{
    const int n = 7;
    const auto hq = star(n, 0.1, 1.0);
    const ComplexVector s = ComplexVector::Constant(n, 1.0 / std::sqrt(double(n)));
    std::mt19937_64 rng(7);
    std::vector<DensityMatrix> candidates{optimal_orthogonal_state(n)};
    for (int k = 1; k < n; ++k) {
        ComplexVector psi = ComplexVector::Zero(n);
        psi(k) = 1.0;
        psi -= s * s.dot(psi);
        candidates.push_back(oracle::projector(psi.normalized()));
    }
    for (int k = 0; k < 16; ++k) {
        ComplexVector psi = oracle::random_pure(n, rng);
        psi -= s * s.dot(psi);
        candidates.push_back(oracle::projector(psi.normalized()));
    }
    MeasureOptions opts;
    opts.jobs = 0;
    const auto result = blp_pair_search(hq, initial_state(n), candidates, 50.0, 0.02, opts);
    MESSAGE("best orthogonal candidate " << result.best_index << " value " << result.best.value
                                         << ", |r> value " << result.values[0]);
    CHECK(result.values[0] >= result.best.value - 1e-6);
}

TEST_CASE("measures converge under time-grid refinement")
{
    const int n = 4;
    const auto hq = star(n, 0.1, 1.0);
    const DensityMatrix s = initial_state(n);
    const double nm_coarse = nm_divisibility(hq, s, 25.0, 0.05).value;
    const double nm_fine = nm_divisibility(hq, s, 25.0, 0.025).value;
    CHECK(std::abs(nm_coarse - nm_fine) <= 0.05 * nm_fine);
    const DensityMatrix r = optimal_orthogonal_state(n);
    const double blp_coarse = blp_measure(hq, s, r, 50.0, 0.05).value;
    const double blp_fine = blp_measure(hq, s, r, 50.0, 0.01).value;
    CHECK(std::abs(blp_coarse - blp_fine) <= 0.05 * blp_fine);
}

TEST_CASE("invalid measure grids")
{
    const auto hq = star(3, 1.0, 1.0);
    CHECK_THROWS_AS(nm_divisibility(hq, initial_state(3), 0.0, 0.1), InvalidArgument);
    CHECK_THROWS_AS(nm_divisibility(hq, initial_state(3), 1.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(blp_measure(hq, initial_state(3), optimal_orthogonal_state(3), 1.0, -0.1),
                    InvalidArgument);
    CHECK_THROWS_AS(gamma_divisibility(hq, initial_state(3), 1.0, 2.0), InvalidArgument);
}
