#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <rtnwalk/graph.hpp>
#include <rtnwalk/noise.hpp>
#include <rtnwalk/random.hpp>
#include <rtnwalk/search.hpp>
#include <rtnwalk/types.hpp>

namespace rtnwalk {

/// One RTN realization on [0, t_final].
struct Trajectory
{
    double t_final = 0.0;
    std::vector<int> initial_signs;                ///< +1/-1 per fluctuator
    std::vector<std::vector<double>> switch_times; ///< strictly increasing

    /// Configuration index (bit convention of NoiseModel) at time t.
    std::int64_t config_at(double t) const;
};

/// Poisson switching at rate mu per fluctuator, uniform initial signs.
Trajectory sample_trajectory(const NoiseModel& noise, double t_final, std::uint64_t seed,
                             std::uint64_t index = 0);

/**
 * Time-ordered propagator for one trajectory: U(t_k) for each requested
 * time (ascending), built from exact exponentials of the piecewise-constant
 * configuration Hamiltonians.
 */
class TrajectoryPropagator
{
public:
    TrajectoryPropagator(const Graph& g, const SearchSpec& search, const NoiseModel& noise);

    std::vector<ComplexMatrix> unitaries(const Trajectory& traj,
                                         std::span<const double> times) const;

private:
    ComplexMatrix step(std::int64_t config, double dt) const;

    int m_n_nodes;
    std::vector<RealMatrix> m_vectors;  // eigenvectors per configuration
    std::vector<RealVector> m_energies; // eigenvalues per configuration
};

struct McResult
{
    std::vector<double> times;
    std::vector<DensityMatrix> mean;
    std::vector<RealMatrix> stderr_real; ///< standard error of Re rho_jk
    std::vector<RealMatrix> stderr_imag; ///< standard error of Im rho_jk
    std::int64_t n_trajectories = 0;
};

/// Sample mean of U rho0 U^dagger over n_traj seeded trajectories.
McResult average_evolution(const Graph& g, const SearchSpec& search, const NoiseModel& noise,
                           const DensityMatrix& rho0, std::span<const double> times,
                           std::int64_t n_traj, std::uint64_t seed, int jobs = 1);

} // namespace rtnwalk
