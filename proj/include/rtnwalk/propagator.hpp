#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <rtnwalk/types.hpp>

namespace rtnwalk {

enum class ActionMethod {
    taylor, ///< truncated Taylor with scaling (Al-Mohy & Higham)
    krylov, ///< Arnoldi projection with adaptive sub-stepping (Sidje)
};

struct ActionOptions
{
    double tolerance = 1e-10;
    ActionMethod method = ActionMethod::taylor;
    int max_degree = 55;            ///< Taylor degree bound
    int krylov_dim = 30;            ///< Arnoldi basis size
    std::size_t max_matvecs = 50'000'000; ///< budget per call
    std::optional<double> norm;     ///< 1-norm of (A - shift I), if known
    std::optional<double> shift;    ///< trace(A)/n, if known

    void validate() const;
};

/// Exact column-sum 1-norm.
template <class Scalar>
double one_norm(const SparseMatrix<Scalar>& a);

/// trace(a) / n and the 1-norm of a - (trace/n) I. The propagator only needs
/// these two numbers; callers that propagate many times can cache them in
/// ActionOptions.
template <class Scalar>
std::pair<double, double> shift_and_norm(const SparseMatrix<Scalar>& a);

/**
 * w = exp(a t) v without forming the exponential. The relative error
 * target ||w - exp(a t) v|| <= tolerance ||w|| is met for well-conditioned
 * problems; throws ConvergenceError if the matvec budget runs out or the
 * iteration produces non-finite values. Deterministic: serial reductions in
 * a fixed order.
 */
template <class Scalar>
Vector<Scalar> expm_action(const SparseMatrix<Scalar>& a, double t,
                           const Vector<Scalar>& v, const ActionOptions& opts = {});

/// exp(a t_k) v for an ascending, nonnegative grid, stepping from the
/// previous grid point.
template <class Scalar>
std::vector<Vector<Scalar>> expm_action_grid(const SparseMatrix<Scalar>& a,
                                             std::span<const double> times,
                                             const Vector<Scalar>& v,
                                             const ActionOptions& opts = {});

} // namespace rtnwalk
