#include <doctest.h>

#include "oracles.hpp"

#include <rtnwalk/errors.hpp>
#include <rtnwalk/measures.hpp>
#include <rtnwalk/quasiham.hpp>

using namespace rtnwalk;
using oracle::Complex;

namespace {

QuasiHamiltonian star(int n, double gamma, double mu, double nu)
{
    return QuasiHamiltonian::assemble(star_graph(n), {0, gamma}, {n - 1, mu, nu},
                                      GeneratorBasis(n));
}

std::vector<double> grid(double t_max, int points)
{
    std::vector<double> t;
    for (int k = 0; k < points; ++k)
        t.push_back(t_max * k / (points - 1));
    return t;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b)
{
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace

TEST_CASE("dimensions follow configurations times generators")
{
    CHECK(star(2, 0.5, 1.0, 1.0).dim() == 6);
    CHECK(star(3, 0.5, 1.0, 1.0).dim() == 32);
    const auto hq7 = star(7, 1.0 / 7, 1.0, 1.0);
    CHECK(hq7.dim() == 3072);
    CHECK(hq7.n_configs() == 64);
    CHECK(hq7.bloch_dim() == 48);
}

TEST_CASE("nonzero count of the assembled generator")
{
    for (int n : {3, 5, 7}) {
        const auto hq = star(n, 1.0 / n, 0.5, 1.0);
        const std::int64_t nc = hq.n_configs();
        const std::int64_t d = hq.bloch_dim();
        const std::int64_t l = n - 1;
        // block-diagonal K_c have zero diagonal, so V (x) I adds (l + 1) entries per row
        const std::int64_t bound = nc * hq.max_block_nonzeros() + (l + 1) * nc * d;
        CHECK(hq.generator().nonZeros() <= bound);
        CHECK(hq.generator().nonZeros() > nc * d * (l + 1));
        CHECK(hq.max_block_nonzeros() < d * d);
    }
}

TEST_CASE("complex matrix and real generator are consistent")
{
    const auto hq = star(3, 0.4, 0.7, 0.6);
    const ComplexMatrix h(hq.matrix());
    const RealMatrix a(hq.generator());
    CHECK(max_abs_diff(Complex(0, -1) * h, a.cast<Complex>()) < 1e-15);
}

TEST_CASE("lift and contract")
{
    const auto hq = star(4, 0.25, 1.0, 1.0);
    const BlochVector n = BlochVector::Random(hq.bloch_dim());
    const RealVector lifted = hq.lift(n);
    CHECK(lifted.size() == hq.dim());
    for (std::int64_t c = 0; c < hq.n_configs(); ++c)
        CHECK((lifted.segment(c * hq.bloch_dim(), hq.bloch_dim()) - n / 8.0).norm() < 1e-15);
    CHECK((hq.contract(lifted) - n).norm() < 1e-14);
    CHECK_THROWS_AS(hq.lift(BlochVector::Zero(3)), InvalidArgument);
}

TEST_CASE("N=3 sparse action matches the dense exponential of the quasi-Hamiltonian")
{
    const double gamma = 1.0 / 3.0;
    const auto hq = star(3, gamma, 1.0, 1.0);
    const ComplexMatrix hq_dense(hq.matrix());
    const DensityMatrix rho0 = initial_state(3);
    const BlochVector n0 = to_bloch(rho0, hq.basis());
    const auto times = grid(25.0, 50);
    const auto result = evolve(hq, n0, times);
    std::mt19937_64 rng(1);
    for (std::size_t k = 0; k < times.size(); ++k) {
        const ComplexMatrix m = (Complex(0, -times[k]) * hq_dense).exp();
        const ComplexVector lifted = m * hq.lift(n0).cast<Complex>();
        const BlochVector dense = hq.contract(lifted.real());
        CHECK(lifted.imag().norm() < 1e-12);
        CHECK((dense - result.bloch[k]).norm() < 1e-10);
    }
}

TEST_CASE("averaged dynamics match the joint Liouville equation")
{
    std::mt19937_64 rng(2);
    for (int n : {3, 4}) {
        const double gamma = 1.0 / n;
        for (auto [mu, nu] : {std::pair{0.1, 1.0}, std::pair{1.0, 0.5}, std::pair{5.0, 0.9}}) {
            const auto hq = star(n, gamma, mu, nu);
            const DensityMatrix rho0 = oracle::random_density(n, rng);
            const std::vector<double> times{0.0, 0.7, 3.0, 11.0};
            const auto rhos = evolve_rho(hq, rho0, times);
            for (std::size_t k = 0; k < times.size(); ++k) {
                const ComplexMatrix ref =
                    oracle::liouville_average(star_graph(n), gamma, 0, mu, nu, rho0, times[k]);
                CHECK(max_abs_diff(rhos[k], ref) < 1e-10);
            }
        }
    }
}

TEST_CASE("non-central target on a general graph matches the Liouville oracle")
{
    const std::vector<std::pair<int, int>> edges{{1, 2}, {2, 3}, {3, 4}, {1, 3}};
    const Graph g = Graph::from_one_based(4, edges);
    const auto hq =
        QuasiHamiltonian::assemble(g, {2, 0.6}, {g.n_edges(), 0.4, 0.8}, GeneratorBasis(4));
    const DensityMatrix rho0 = initial_state(4);
    const double times[] = {2.5};
    const auto rho = evolve_rho(hq, rho0, times).front();
    CHECK(max_abs_diff(rho, oracle::liouville_average(g, 0.6, 2, 0.4, 0.8, rho0, 2.5)) < 1e-10);
}

TEST_CASE("noiseless limit reproduces unitary evolution")
{
    const int n = 7;
    const double gamma = 1.0 / 7.0;
    const RealMatrix h = oracle::hamiltonian(star_graph(n), gamma, 0, 0.0, 0);
    const auto times = grid(20.0, 21);
    for (double mu : {0.01, 10.0}) {
        const auto rhos = evolve_rho(star(n, gamma, mu, 0.0), initial_state(n), times);
        for (std::size_t k = 0; k < times.size(); ++k) {
            const ComplexMatrix u = oracle::unitary(h, times[k]);
            const ComplexMatrix ref = u * initial_state(n) * u.adjoint();
            CHECK(max_abs_diff(rhos[k], ref) < 1e-8);
        }
    }
}

TEST_CASE("t = 0 returns the initial Bloch vector exactly")
{
    const auto hq = star(4, 0.25, 1.0, 1.0);
    const BlochVector n0 = to_bloch(initial_state(4), hq.basis());
    const double zero[] = {0.0};
    CHECK(evolve(hq, n0, zero).bloch.front() == n0);
}

TEST_CASE("maximally mixed state is a fixed point")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> mu(0.01, 10.0);
    std::uniform_real_distribution<double> nu(0.0, 1.0);
    const int n = 5;
    for (int trial = 0; trial < 5; ++trial) {
        const auto hq = star(n, 0.2, mu(rng), nu(rng));
        const DensityMatrix mixed = DensityMatrix::Identity(n, n) / n;
        for (const auto& rho : evolve_rho(hq, mixed, grid(20.0, 5)))
            CHECK(max_abs_diff(rho, mixed) < 1e-10);
    }
}

TEST_CASE("outputs are states: Hermitian, unit trace, positive, purity bounded")
{
    std::mt19937_64 rng(4);
    const int n = 4;
    const auto hq = star(n, 0.25, 0.3, 1.0);
    const auto times = grid(30.0, 31);
    for (int trial = 0; trial < 5; ++trial) {
        const DensityMatrix rho0 = oracle::projector(oracle::random_pure(n, rng));
        const double purity0 = (rho0 * rho0).trace().real();
        for (const auto& rho : evolve_rho(hq, rho0, times)) {
            CHECK((rho - rho.adjoint()).norm() < 1e-10);
            CHECK(std::abs(rho.trace() - 1.0) < 1e-10);
            const Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(rho);
            CHECK(eig.eigenvalues().minCoeff() > -1e-9);
            CHECK((rho * rho).trace().real() <= purity0 + 1e-9);
        }
    }
}

TEST_CASE("trace distance contracts from t = 0")
{
    std::mt19937_64 rng(5);
    const int n = 4;
    const auto hq = star(n, 0.25, 0.05, 1.0);
    const auto times = grid(40.0, 41);
    for (int pair = 0; pair < 20; ++pair) {
        const DensityMatrix a = oracle::projector(oracle::random_pure(n, rng));
        const DensityMatrix b = oracle::random_density(n, rng);
        const double d0 = oracle::trace_distance(a, b);
        const auto ra = evolve_rho(hq, a, times);
        const auto rb = evolve_rho(hq, b, times);
        for (std::size_t k = 0; k < times.size(); ++k)
            CHECK(oracle::trace_distance(ra[k], rb[k]) <= d0 + 1e-9);
    }
}

TEST_CASE("long-time dynamics relax to the maximally mixed state")
{
    const int n = 7;
    const auto hq = star(n, 1.0 / n, 1.0, 1.0);
    const double t[] = {100.0};
    const auto rho = evolve_rho(hq, initial_state(n), t).front();
    CHECK(oracle::trace_distance(rho, DensityMatrix::Identity(n, n) / n) < 0.05);
}

TEST_CASE("fast switching averages the noise out")
{
    const int n = 4;
    const double gamma = 0.25;
    const RealMatrix h = oracle::hamiltonian(star_graph(n), gamma, 0, 0.0, 0);
    const auto times = grid(10.0, 11);
    const auto slow = evolve_rho(star(n, gamma, 1.0, 1.0), initial_state(n), times);
    const auto fast = evolve_rho(star(n, gamma, 1000.0, 1.0), initial_state(n), times);
    double slow_dev = 0.0;
    double fast_dev = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const ComplexMatrix u = oracle::unitary(h, times[k]);
        const ComplexMatrix ref = u * initial_state(n) * u.adjoint();
        slow_dev = std::max(slow_dev, oracle::trace_distance(slow[k], ref));
        fast_dev = std::max(fast_dev, oracle::trace_distance(fast[k], ref));
    }
    CHECK(fast_dev < 1e-2);
    CHECK(fast_dev < 0.1 * slow_dev);
}

TEST_CASE("restarted evolution boundaries")
{
    const int n = 4;
    const auto hq = star(n, 0.25, 0.05, 1.0);
    const BlochVector n0 = to_bloch(initial_state(n), hq.basis());
    const double tau = 6.0;
    const double at[] = {tau};
    const BlochVector full = evolve(hq, n0, at).bloch.front();
    CHECK((restarted_evolve(hq, n0, 0.0, tau) - full).norm() < 1e-10);
    CHECK((restarted_evolve(hq, n0, tau, tau) - full).norm() < 1e-10);
    // resetting the noise mid-way changes the state for slow noise
    CHECK(bloch_trace_distance(restarted_evolve(hq, n0, 3.0, tau), full, hq.basis()) > 1e-3);
    CHECK_THROWS_AS(restarted_evolve(hq, n0, 7.0, tau), InvalidArgument);
    CHECK_THROWS_AS(restarted_evolve(hq, n0, -1.0, tau), InvalidArgument);

    const auto clean = star(n, 0.25, 0.05, 0.0);
    const BlochVector clean_full = evolve(clean, n0, at).bloch.front();
    for (double tau1 : {0.5, 2.0, 4.5})
        CHECK((restarted_evolve(clean, n0, tau1, tau) - clean_full).norm() < 1e-10);
}

TEST_CASE("assembly preconditions")
{
    const Graph g = star_graph(4);
    CHECK_THROWS_AS(QuasiHamiltonian::assemble(g, {0, 0.25}, {2, 1.0, 1.0}, GeneratorBasis(4)),
                    InvalidArgument);
    CHECK_THROWS_AS(QuasiHamiltonian::assemble(g, {0, 0.25}, {3, 1.0, 1.0}, GeneratorBasis(3)),
                    InvalidArgument);
    CHECK_THROWS_AS(QuasiHamiltonian::assemble(g, {4, 0.25}, {3, 1.0, 1.0}, GeneratorBasis(4)),
                    InvalidArgument);
    CHECK_THROWS_AS(QuasiHamiltonian::assemble(g, {0, -1.0}, {3, 1.0, 1.0}, GeneratorBasis(4)),
                    InvalidArgument);
}

TEST_CASE("Krylov propagation gives the same dynamics")
{
    const auto hq = star(5, 0.2, 0.5, 1.0);
    const BlochVector n0 = to_bloch(initial_state(5), hq.basis());
    ActionOptions krylov;
    krylov.method = ActionMethod::krylov;
    const auto times = grid(15.0, 6);
    const auto a = evolve(hq, n0, times);
    const auto b = evolve(hq, n0, times, krylov);
    for (std::size_t k = 0; k < times.size(); ++k)
        CHECK((a.bloch[k] - b.bloch[k]).norm() < 1e-9);
}
