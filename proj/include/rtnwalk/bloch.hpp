#pragma once

#include <vector>

#include <rtnwalk/types.hpp>

namespace rtnwalk {

/**
 * Generalized Gell-Mann basis of su(dim): dim^2 - 1 Hermitian traceless
 * matrices with Tr(l_j l_k) = 2 delta_jk.
 *
 * Ordering: symmetric E_jk + E_kj for j < k (lexicographic), then
 * antisymmetric -i(E_jk - E_kj) in the same pair order, then the dim - 1
 * diagonal generators
 *     d_l = sqrt(2 / (l (l+1))) (sum_{j<l} E_jj - l E_ll),  l = 1..dim-1.
 * For dim = 2 this is (sigma_x, sigma_y, sigma_z).
 */
class GeneratorBasis
{
public:
    explicit GeneratorBasis(int dim);

    int dim() const noexcept { return m_dim; }
    int size() const noexcept { return static_cast<int>(m_kinds.size()); }

    /// Dense copy of generator j.
    ComplexMatrix matrix(int j) const;

    /// Tr(l_j X) for every j, using the sparsity of the generators.
    ComplexVector traces(const ComplexMatrix& x) const;

    /// sum_j c_j l_j.
    ComplexMatrix combine(const RealVector& coefficients) const;

private:
    enum class Kind { symmetric, antisymmetric, diagonal };
    struct Entry
    {
        Kind kind;
        int j; // row of the pair, or l for diagonal generators
        int k;
    };

    int m_dim;
    std::vector<Entry> m_kinds;
};

/// n_i = sqrt(dim)/2 Tr(l_i rho). Throws InvalidArgument unless rho is
/// Hermitian with unit trace (1e-10).
BlochVector to_bloch(const DensityMatrix& rho, const GeneratorBasis& basis);

/// rho = (I + sqrt(dim) sum_j n_j l_j) / dim. Unit trace and Hermitian by
/// construction; positivity is not guaranteed for arbitrary n.
DensityMatrix from_bloch(const BlochVector& n, const GeneratorBasis& basis);

/**
 * Real antisymmetric generator G of unitary conjugation in Bloch
 * coordinates: exp(G t) to_bloch(rho) == to_bloch(e^{-iHt} rho e^{iHt}).
 * Entry (i,j) is (i/2) Tr([l_i, l_j] H).
 */
RealMatrix transfer_generator(const ComplexMatrix& h, const GeneratorBasis& basis);

/// T_ij = 1/2 Tr(l_i U l_j U^dagger); orthogonal for unitary U.
RealMatrix transfer_matrix(const ComplexMatrix& u, const GeneratorBasis& basis);

} // namespace rtnwalk
