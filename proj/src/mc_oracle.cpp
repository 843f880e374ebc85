#include <rtnwalk/mc_oracle.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include <rtnwalk/errors.hpp>
#include <rtnwalk/parallel.hpp>

namespace rtnwalk {

namespace {

// Trajectories are reduced in fixed-size blocks, in block order, so the
// averages do not depend on the worker count.
constexpr std::int64_t kBlockSize = 64;

// Precomputed spectra for more configurations than this are not attempted.
constexpr std::int64_t kMaxOracleConfigs = std::int64_t{1} << 16;

Trajectory sample(const NoiseModel& noise, double t_final, std::uint64_t seed,
                  std::uint64_t index)
{
    SplitMix64 rng(seed, index);
    Trajectory traj;
    traj.t_final = t_final;
    traj.initial_signs.resize(static_cast<std::size_t>(noise.n_fluctuators));
    traj.switch_times.resize(static_cast<std::size_t>(noise.n_fluctuators));
    for (int f = 0; f < noise.n_fluctuators; ++f) {
        traj.initial_signs[f] = (rng.next() >> 63) ? -1 : +1;
        auto& times = traj.switch_times[f];
        double t = 0.0;
        for (;;) {
            const double wait = -std::log(rng.uniform_open0()) / noise.mu;
            if (wait <= 0.0)
                continue;
            t += wait;
            if (t >= t_final)
                break;
            times.push_back(t);
        }
    }
    return traj;
}

void check_grid(std::span<const double> times)
{
    double previous = 0.0;
    for (double t : times) {
        if (!std::isfinite(t) || t < previous)
            throw InvalidArgument("time grid must be finite, nonnegative and ascending");
        previous = t;
    }
}

} // namespace

std::int64_t Trajectory::config_at(double t) const
{
    std::int64_t c = 0;
    for (std::size_t f = 0; f < initial_signs.size(); ++f) {
        const auto& times = switch_times[f];
        const auto flips = std::upper_bound(times.begin(), times.end(), t) - times.begin();
        const int sign = (flips % 2 == 0) ? initial_signs[f] : -initial_signs[f];
        if (sign < 0)
            c |= std::int64_t{1} << f;
    }
    return c;
}

Trajectory sample_trajectory(const NoiseModel& noise, double t_final, std::uint64_t seed,
                             std::uint64_t index)
{
    noise.validate();
    if (!(t_final > 0.0) || !std::isfinite(t_final))
        throw InvalidArgument("trajectory length must be positive and finite");
    return sample(noise, t_final, seed, index);
}

TrajectoryPropagator::TrajectoryPropagator(const Graph& g, const SearchSpec& search,
                                           const NoiseModel& noise)
    : m_n_nodes(g.n_nodes())
{
    noise.validate();
    search.validate(g);
    if (noise.n_fluctuators != g.n_edges())
        throw InvalidArgument("noise model and graph disagree on the number of links");
    if (noise.n_configs() > kMaxOracleConfigs)
        throw InvalidArgument("too many noise configurations for the trajectory oracle");

    const auto n_c = noise.n_configs();
    m_vectors.reserve(static_cast<std::size_t>(n_c));
    m_energies.reserve(static_cast<std::size_t>(n_c));
    for (std::int64_t c = 0; c < n_c; ++c) {
        RealMatrix h = search.gamma *
                       noisy_laplacian(g, noise.nu, config_values(c, noise.n_fluctuators));
        h(search.target, search.target) -= 1.0;
        const Eigen::SelfAdjointEigenSolver<RealMatrix> eig(h);
        m_vectors.push_back(eig.eigenvectors());
        m_energies.push_back(eig.eigenvalues());
    }
}

ComplexMatrix TrajectoryPropagator::step(std::int64_t config, double dt) const
{
    const auto& v = m_vectors[static_cast<std::size_t>(config)];
    const auto& e = m_energies[static_cast<std::size_t>(config)];
    ComplexVector phase(e.size());
    for (Eigen::Index i = 0; i < e.size(); ++i)
        phase(i) = std::exp(Complex(0.0, -e(i) * dt));
    const ComplexMatrix vc = v.cast<Complex>();
    return vc * phase.asDiagonal() * vc.adjoint();
}

std::vector<ComplexMatrix> TrajectoryPropagator::unitaries(const Trajectory& traj,
                                                           std::span<const double> times) const
{
    check_grid(times);
    std::vector<std::pair<double, int>> events;
    for (std::size_t f = 0; f < traj.switch_times.size(); ++f)
        for (double t : traj.switch_times[f])
            events.emplace_back(t, static_cast<int>(f));
    std::sort(events.begin(), events.end());

    std::int64_t config = traj.config_at(0.0);
    ComplexMatrix u = ComplexMatrix::Identity(m_n_nodes, m_n_nodes);
    double now = 0.0;
    std::size_t next_event = 0;

    std::vector<ComplexMatrix> out;
    out.reserve(times.size());
    for (double t : times) {
        while (next_event < events.size() && events[next_event].first <= t) {
            const auto [when, fluctuator] = events[next_event++];
            u = step(config, when - now) * u;
            now = when;
            config ^= std::int64_t{1} << fluctuator;
        }
        if (t > now) {
            u = step(config, t - now) * u;
            now = t;
        }
        out.push_back(u);
    }
    return out;
}

McResult average_evolution(const Graph& g, const SearchSpec& search, const NoiseModel& noise,
                           const DensityMatrix& rho0, std::span<const double> times,
                           std::int64_t n_traj, std::uint64_t seed, int jobs)
{
    if (n_traj < 1)
        throw InvalidArgument("need at least one trajectory");
    check_grid(times);
    if (rho0.rows() != g.n_nodes() || rho0.cols() != g.n_nodes())
        throw InvalidArgument("initial state dimension does not match the graph");
    const TrajectoryPropagator propagator(g, search, noise);
    const double t_final = times.empty() ? 0.0 : times.back();
    const int n = g.n_nodes();
    const std::size_t n_t = times.size();

    struct Sums
    {
        std::vector<ComplexMatrix> first;
        std::vector<RealMatrix> second_re;
        std::vector<RealMatrix> second_im;
    };
    auto zero_sums = [&] {
        Sums s;
        s.first.assign(n_t, ComplexMatrix::Zero(n, n));
        s.second_re.assign(n_t, RealMatrix::Zero(n, n));
        s.second_im.assign(n_t, RealMatrix::Zero(n, n));
        return s;
    };

    const auto n_blocks = static_cast<std::size_t>((n_traj + kBlockSize - 1) / kBlockSize);
    std::vector<Sums> blocks(n_blocks);
    parallel_for(n_blocks, jobs, [&](std::size_t b) {
        Sums s = zero_sums();
        const std::int64_t begin = static_cast<std::int64_t>(b) * kBlockSize;
        const std::int64_t end = std::min(n_traj, begin + kBlockSize);
        for (std::int64_t i = begin; i < end; ++i) {
            const Trajectory traj =
                sample(noise, t_final, seed, static_cast<std::uint64_t>(i));
            const auto us = propagator.unitaries(traj, times);
            for (std::size_t k = 0; k < n_t; ++k) {
                const ComplexMatrix rho = us[k] * rho0 * us[k].adjoint();
                s.first[k] += rho;
                s.second_re[k] += rho.real().cwiseAbs2();
                s.second_im[k] += rho.imag().cwiseAbs2();
            }
        }
        blocks[b] = std::move(s);
    });

    Sums total = zero_sums();
    for (const auto& s : blocks) {
        for (std::size_t k = 0; k < n_t; ++k) {
            total.first[k] += s.first[k];
            total.second_re[k] += s.second_re[k];
            total.second_im[k] += s.second_im[k];
        }
    }

    const double count = static_cast<double>(n_traj);
    McResult result;
    result.times.assign(times.begin(), times.end());
    result.n_trajectories = n_traj;
    for (std::size_t k = 0; k < n_t; ++k) {
        const ComplexMatrix mean = total.first[k] / count;
        result.mean.push_back(mean);
        auto standard_error = [&](const RealMatrix& sum_sq, const RealMatrix& m) {
            if (n_traj < 2)
                return RealMatrix(RealMatrix::Zero(n, n));
            const RealMatrix var =
                ((sum_sq - count * m.cwiseAbs2()) / (count - 1.0)).cwiseMax(0.0);
            return RealMatrix((var / count).cwiseSqrt());
        };
        result.stderr_real.push_back(standard_error(total.second_re[k], mean.real()));
        result.stderr_imag.push_back(standard_error(total.second_im[k], mean.imag()));
    }
    return result;
}

} // namespace rtnwalk
