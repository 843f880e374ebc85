#include <rtnwalk/measures.hpp>

#include <cmath>
#include <string>

#include <rtnwalk/errors.hpp>
#include <rtnwalk/parallel.hpp>
#include <rtnwalk/random.hpp>
#include <rtnwalk/search.hpp>

namespace rtnwalk {

namespace {

double half_trace_norm(const ComplexMatrix& hermitian)
{
    const Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(hermitian, Eigen::EigenvaluesOnly);
    return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

DensityMatrix pure_state(const ComplexVector& psi)
{
    const ComplexVector unit = psi.normalized();
    return unit * unit.adjoint();
}

std::vector<double> uniform_grid(double t_max, double dt)
{
    if (!(dt > 0.0) || !(t_max > 0.0))
        throw InvalidArgument("measure grid needs t_max > 0 and step > 0");
    return time_grid(t_max, dt);
}

} // namespace

double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2)
{
    if (rho1.rows() != rho2.rows() || rho1.cols() != rho2.cols())
        throw InvalidArgument("trace distance between matrices of different dimension");
    return half_trace_norm(rho1 - rho2);
}

double bloch_trace_distance(const BlochVector& n1, const BlochVector& n2,
                            const GeneratorBasis& basis)
{
    // rho1 - rho2 = sum_j (n1 - n2)_j l_j / sqrt(dim)
    const ComplexMatrix diff =
        basis.combine(n1 - n2) / std::sqrt(static_cast<double>(basis.dim()));
    return half_trace_norm(diff);
}

double gamma_divisibility(const QuasiHamiltonian& hq, const DensityMatrix& rho0, double tau,
                          double tau1, const MeasureOptions& opts)
{
    const BlochVector n0 = to_bloch(rho0, hq.basis());
    const double at[] = {tau};
    const BlochVector full = evolve(hq, n0, at, opts.action).bloch.front();
    const BlochVector restarted = restarted_evolve(hq, n0, tau1, tau, opts.action);
    return bloch_trace_distance(full, restarted, hq.basis());
}

DivisibilityScan nm_divisibility(const QuasiHamiltonian& hq, const DensityMatrix& rho0,
                                 double tau_max, double step, const MeasureOptions& opts)
{
    const auto grid = uniform_grid(tau_max, step);
    const std::size_t n_grid = grid.size();
    const BlochVector n0 = to_bloch(rho0, hq.basis());
    const DynamicsResult forward = evolve(hq, n0, grid, opts.action);

    // gamma[j][k - j] = Gamma(tau_k, tau1_j)
    std::vector<std::vector<double>> gamma(n_grid);
    parallel_for(n_grid, opts.jobs, [&](std::size_t j) {
        const std::span<const double> lengths(grid.data(), n_grid - j);
        const DynamicsResult restarted = evolve(hq, forward.bloch[j], lengths, opts.action);
        auto& row = gamma[j];
        row.resize(n_grid - j);
        for (std::size_t l = 0; l < row.size(); ++l)
            row[l] = bloch_trace_distance(forward.bloch[j + l], restarted.bloch[l], hq.basis());
    });

    DivisibilityScan scan;
    scan.surface.reserve(n_grid * (n_grid + 1) / 2);
    bool first = true;
    for (std::size_t k = 0; k < n_grid; ++k) {
        for (std::size_t j = 0; j <= k; ++j) {
            const double value = gamma[j][k - j];
            scan.surface.push_back({grid[k], grid[j], value});
            if (first || value > scan.value) {
                first = false;
                scan.value = value;
                scan.tau_star = grid[k];
                scan.tau1_star = grid[j];
            }
        }
    }
    return scan;
}

BLPResult blp_from_trajectories(const DynamicsResult& first, const DynamicsResult& second,
                                const GeneratorBasis& basis, double dt)
{
    if (first.bloch.size() != second.bloch.size())
        throw InvalidArgument("BLP trajectories have different lengths");
    BLPResult result;
    result.times = first.times;
    const std::size_t n = first.bloch.size();
    result.distance.reserve(n);
    for (std::size_t k = 0; k < n; ++k)
        result.distance.push_back(bloch_trace_distance(first.bloch[k], second.bloch[k], basis));

    result.sigma.assign(n, 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double increment = result.distance[k + 1] - result.distance[k];
        result.sigma[k] = increment / dt;
        if (increment > kBlpNoiseFloor)
            result.value += increment;
    }
    return result;
}

BLPResult blp_measure(const QuasiHamiltonian& hq, const DensityMatrix& rho1,
                      const DensityMatrix& rho2, double t_max, double dt,
                      const MeasureOptions& opts)
{
    const auto grid = uniform_grid(t_max, dt);
    const BlochVector n1 = to_bloch(rho1, hq.basis());
    const BlochVector n2 = to_bloch(rho2, hq.basis());
    DynamicsResult first;
    DynamicsResult second;
    if (opts.jobs == 1) {
        first = evolve(hq, n1, grid, opts.action);
        second = evolve(hq, n2, grid, opts.action);
    } else {
        parallel_for(2, opts.jobs, [&](std::size_t i) {
            (i == 0 ? first : second) = evolve(hq, i == 0 ? n1 : n2, grid, opts.action);
        });
    }
    return blp_from_trajectories(first, second, hq.basis(), dt);
}

DensityMatrix optimal_orthogonal_state(int n)
{
    if (n < 2)
        throw InvalidArgument("orthogonal state needs n >= 2");
    ComplexVector r = ComplexVector::Ones(n);
    r(0) = -(n - 1.0);
    return pure_state(r);
}

std::vector<DensityMatrix> default_candidates(const Graph& g, std::uint64_t seed, int n_random)
{
    const int n = g.n_nodes();
    std::vector<DensityMatrix> out;
    for (int k = 0; k < n; ++k) {
        DensityMatrix node = DensityMatrix::Zero(n, n);
        node(k, k) = 1.0;
        out.push_back(std::move(node));
    }
    const Eigen::SelfAdjointEigenSolver<RealMatrix> eig(laplacian(g));
    for (int k = 0; k < n; ++k)
        out.push_back(pure_state(eig.eigenvectors().col(k).cast<Complex>()));
    out.push_back(optimal_orthogonal_state(n));

    SplitMix64 rng(seed, 0x6361'6e64ULL);
    for (int i = 0; i < n_random; ++i) {
        ComplexVector psi(n);
        for (int k = 0; k < n; ++k) {
            const double re = rng.normal();
            const double im = rng.normal();
            psi(k) = Complex(re, im);
        }
        out.push_back(pure_state(psi));
    }
    return out;
}

PairSearchResult blp_pair_search(const QuasiHamiltonian& hq, const DensityMatrix& rho1,
                                 std::span<const DensityMatrix> candidates, double t_max,
                                 double dt, const MeasureOptions& opts)
{
    if (candidates.empty())
        throw InvalidArgument("BLP pair search needs at least one candidate");
    const auto grid = uniform_grid(t_max, dt);
    const DynamicsResult first = evolve(hq, to_bloch(rho1, hq.basis()), grid, opts.action);

    std::vector<BLPResult> results(candidates.size());
    parallel_for(candidates.size(), opts.jobs, [&](std::size_t i) {
        const DynamicsResult second =
            evolve(hq, to_bloch(candidates[i], hq.basis()), grid, opts.action);
        results[i] = blp_from_trajectories(first, second, hq.basis(), dt);
    });

    PairSearchResult out;
    out.values.reserve(results.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
        out.values.push_back(results[i].value);
        if (i == 0 || results[i].value > results[out.best_index].value)
            out.best_index = i;
    }
    out.best_state = candidates[out.best_index];
    out.best = std::move(results[out.best_index]);
    return out;
}

} // namespace rtnwalk
