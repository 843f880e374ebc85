#pragma once

#include <cstdint>
#include <vector>

#include <rtnwalk/types.hpp>

namespace rtnwalk {

/**
 * Independent random-telegraph fluctuators with a common switching rate and
 * relative strength.
 *
 * Configuration c in [0, 2^n) encodes fluctuator i as g_i = +1 when bit i of
 * c is clear and g_i = -1 when it is set. This encoding is shared by the
 * classical generator, the quasi-Hamiltonian blocks and the Monte-Carlo
 * oracle.
 */
struct NoiseModel
{
    int n_fluctuators = 0;
    double mu = 1.0; ///< switching rate
    double nu = 0.0; ///< relative strength, in [0,1]

    /// Throws InvalidArgument when a field is out of range.
    void validate() const;

    std::int64_t n_configs() const { return std::int64_t{1} << n_fluctuators; }
};

/// Upper bound on fluctuators accepted by validate().
inline constexpr int kMaxFluctuators = 24;

/// Classical rate matrix V (dP/dt = V P): Kronecker sum of [[-mu,mu],[mu,-mu]].
SparseMatrix<double> generator(const NoiseModel& model);

/// Uniform distribution over all configurations.
RealVector stationary_distribution(const NoiseModel& model);

/// Decodes configuration c into n signs (+1/-1).
std::vector<int> config_values(std::int64_t c, int n);

} // namespace rtnwalk
