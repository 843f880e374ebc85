#pragma once

#include <span>
#include <vector>

#include <rtnwalk/graph.hpp>
#include <rtnwalk/types.hpp>

namespace rtnwalk {

/// Spatial-search parameters: H = gamma L - |w><w|.
struct SearchSpec
{
    int target = 0;     ///< 0-based node index
    double gamma = 1.0; ///< hopping rate

    /// Throws InvalidArgument if the target is not a node of g or gamma <= 0.
    void validate(const Graph& g) const;
};

/// gamma * laplacian - |w><w| (or the noisy Laplacian when one is given).
ComplexMatrix search_hamiltonian(const RealMatrix& laplacian, const SearchSpec& spec);

/// |s><s| with |s> the uniform superposition over n >= 2 nodes.
DensityMatrix initial_state(int n);

struct SearchResult
{
    std::vector<double> times;
    std::vector<double> probability; ///< p(t) = <w|rho(t)|w>
    double p_succ = 0.0;             ///< max over the grid
    double t_opt = 0.0;              ///< first grid time attaining p_succ
};

/**
 * Target population along a trajectory of density matrices. Deviations of
 * more than 1e-8 outside [0,1], or imaginary parts above 1e-10, throw
 * ConvergenceError; smaller excursions are clipped.
 */
SearchResult success_probability(std::span<const double> times,
                                 std::span<const DensityMatrix> states, int target);

/// Uniform grid 0, dt, 2dt, ... up to t_max (inclusive within dt/2).
std::vector<double> time_grid(double t_max, double dt);

/// Default measurement horizon 2 pi sqrt(N).
double default_search_horizon(int n_nodes);

/// Noiseless search evaluated by dense diagonalization of H.
SearchResult noiseless_search(const Graph& g, const SearchSpec& spec,
                              std::span<const double> times);

/**
 * gamma from the grid maximizing noiseless p_succ on [0, t_max] (grid step
 * dt); ties go to the smaller gamma.
 */
double calibrate_gamma(const Graph& g, int target, std::span<const double> gamma_grid,
                       double t_max, double dt = 0.05);

/// gamma grid lo, lo+step, ..., hi.
std::vector<double> gamma_range(double lo, double hi, double step);

} // namespace rtnwalk
