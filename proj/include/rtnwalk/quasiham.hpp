#pragma once

#include <span>
#include <vector>

#include <rtnwalk/bloch.hpp>
#include <rtnwalk/graph.hpp>
#include <rtnwalk/noise.hpp>
#include <rtnwalk/propagator.hpp>
#include <rtnwalk/search.hpp>
#include <rtnwalk/types.hpp>

namespace rtnwalk {

/**
 * Joint classical-configuration x Bloch generator for RTN-averaged dynamics,
 *
 *     H_q = i V (x) I + (+)_c G_c,     G_c = i K_c,
 *
 * where K_c = transfer_generator(H_c) is the real Bloch generator of
 * configuration c. The lifted state evolves as exp(-i H_q t), and
 * -i H_q = V (x) I + (+)_c K_c is real, so propagation runs on real vectors.
 * Lifted index: c * bloch_dim + j.
 */
class QuasiHamiltonian
{
public:
    /// Throws InvalidArgument when the fluctuator count differs from the edge
    /// count or the target is not a node.
    static QuasiHamiltonian assemble(const Graph& g, const SearchSpec& search,
                                     const NoiseModel& noise,
                                     const GeneratorBasis& basis);

    int bloch_dim() const noexcept { return m_basis.size(); }
    std::int64_t n_configs() const noexcept { return m_n_configs; }
    Eigen::Index dim() const noexcept { return m_generator.rows(); }

    const GeneratorBasis& basis() const noexcept { return m_basis; }
    const NoiseModel& noise() const noexcept { return m_noise; }

    /// -i H_q, the real matrix that is actually exponentiated.
    const SparseMatrix<double>& generator() const noexcept { return m_generator; }

    /// H_q itself (complex), for interfaces and dense cross-checks.
    SparseMatrix<Complex> matrix() const;

    /// Largest per-block nonzero count of the K_c.
    Eigen::Index max_block_nonzeros() const noexcept { return m_max_block_nnz; }

    /// ActionOptions with the generator's shift and 1-norm cached.
    ActionOptions action_options(ActionOptions base = {}) const;

    /// |p0> (x) n: every configuration block holds n / N_c.
    RealVector lift(const BlochVector& n) const;

    /// <1| contraction over the classical index.
    BlochVector contract(const RealVector& lifted) const;

private:
    QuasiHamiltonian(GeneratorBasis basis, NoiseModel noise)
        : m_basis(std::move(basis)), m_noise(noise)
    {}

    GeneratorBasis m_basis;
    NoiseModel m_noise;
    std::int64_t m_n_configs = 0;
    Eigen::Index m_max_block_nnz = 0;
    SparseMatrix<double> m_generator;
    double m_shift = 0.0;
    double m_norm = 0.0;
};

struct DynamicsResult
{
    std::vector<double> times;
    std::vector<BlochVector> bloch;

    DensityMatrix density(std::size_t k, const GeneratorBasis& basis) const
    {
        return from_bloch(bloch.at(k), basis);
    }
};

/// n(t) = <1| exp(-i H_q t) |p0> n0 on an ascending grid of t >= 0.
DynamicsResult evolve(const QuasiHamiltonian& hq, const BlochVector& n0,
                      std::span<const double> times, const ActionOptions& opts = {});

/// evolve() followed by reconstruction of the density matrices.
std::vector<DensityMatrix> evolve_rho(const QuasiHamiltonian& hq, const DensityMatrix& rho0,
                                      std::span<const double> times,
                                      const ActionOptions& opts = {});

/**
 * M(tau - tau1) M(tau1) n0: evolve to tau1, reset the noise to its
 * stationary distribution, evolve the remaining tau - tau1.
 */
BlochVector restarted_evolve(const QuasiHamiltonian& hq, const BlochVector& n0,
                             double tau1, double tau, const ActionOptions& opts = {});

} // namespace rtnwalk
