#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <rtnwalk/graph.hpp>
#include <rtnwalk/quasiham.hpp>
#include <rtnwalk/types.hpp>

namespace rtnwalk {

/// D = 1/2 sum |eig(rho1 - rho2)|.
double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2);

/// Trace distance between the states with Bloch vectors n1 and n2.
double bloch_trace_distance(const BlochVector& n1, const BlochVector& n2,
                            const GeneratorBasis& basis);

/// Propagation settings shared by the measures. jobs <= 0 means all cores.
struct MeasureOptions
{
    ActionOptions action{};
    int jobs = 1;
};

/// Gamma(tau, tau1) = D(E(tau) rho0, E(tau - tau1) E(tau1) rho0).
double gamma_divisibility(const QuasiHamiltonian& hq, const DensityMatrix& rho0,
                          double tau, double tau1, const MeasureOptions& opts = {});

struct GammaPoint
{
    double tau;
    double tau1;
    double value;
};

struct DivisibilityScan
{
    std::vector<GammaPoint> surface; ///< tau-major, tau1 ascending
    double value = 0.0;              ///< N_M
    double tau_star = 0.0;
    double tau1_star = 0.0;
};

/**
 * Gamma on the triangle 0 <= tau1 <= tau <= tau_max of a uniform grid.
 * Each restart time tau1 is one independent propagation over the remaining
 * grid, dispatched across opts.jobs workers. Maximum ties resolve to the
 * smallest tau, then the smallest tau1.
 */
DivisibilityScan nm_divisibility(const QuasiHamiltonian& hq, const DensityMatrix& rho0,
                                 double tau_max, double step,
                                 const MeasureOptions& opts = {});

/// Discarded trace-distance increments in the BLP sum.
inline constexpr double kBlpNoiseFloor = 1e-8;

struct BLPResult
{
    std::vector<double> times;
    std::vector<double> distance;
    std::vector<double> sigma; ///< forward difference; 0 at the last point
    double value = 0.0;        ///< sum of positive increments above the floor
};

BLPResult blp_measure(const QuasiHamiltonian& hq, const DensityMatrix& rho1,
                      const DensityMatrix& rho2, double t_max, double dt,
                      const MeasureOptions& opts = {});

/// BLP with rho1's trajectory already known (a BLPResult prefix is shared
/// across the candidates in a pair search).
BLPResult blp_from_trajectories(const DynamicsResult& first, const DynamicsResult& second,
                                const GeneratorBasis& basis, double dt);

/// Normalized -(N-1)|1> + sum_{k>=2} |k>, orthogonal to |s>.
DensityMatrix optimal_orthogonal_state(int n);

/**
 * Default second-state candidates: every node state, every eigenvector of
 * the Laplacian (dense diagonalization), |r>, and `n_random` Haar-random
 * pure states drawn from `seed`.
 */
std::vector<DensityMatrix> default_candidates(const Graph& g, std::uint64_t seed,
                                              int n_random = 100);

struct PairSearchResult
{
    std::size_t best_index = 0;
    DensityMatrix best_state;
    BLPResult best;
    std::vector<double> values; ///< N_BLP per candidate
};

/// Maximizes N_BLP over rho2 with rho1 fixed; the first maximal candidate wins.
PairSearchResult blp_pair_search(const QuasiHamiltonian& hq, const DensityMatrix& rho1,
                                 std::span<const DensityMatrix> candidates,
                                 double t_max, double dt, const MeasureOptions& opts = {});

} // namespace rtnwalk
