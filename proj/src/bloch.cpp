#include <rtnwalk/bloch.hpp>

#include <cmath>
#include <string>

#include <rtnwalk/errors.hpp>

namespace rtnwalk {

namespace {

constexpr Complex I{0.0, 1.0};

double diagonal_factor(int l)
{
    return std::sqrt(2.0 / (l * (l + 1.0)));
}

void require_square(const ComplexMatrix& m, int dim, const char* what)
{
    if (m.rows() != dim || m.cols() != dim)
        throw InvalidArgument(std::string(what) + " has shape " + std::to_string(m.rows()) +
                              "x" + std::to_string(m.cols()) + ", basis dimension is " +
                              std::to_string(dim));
}

} // namespace

GeneratorBasis::GeneratorBasis(int dim) : m_dim(dim)
{
    if (dim < 2)
        throw InvalidArgument("generator basis needs dimension >= 2, got " +
                              std::to_string(dim));
    m_kinds.reserve(static_cast<std::size_t>(dim) * dim - 1);
    for (int j = 0; j < dim; ++j)
        for (int k = j + 1; k < dim; ++k)
            m_kinds.push_back({Kind::symmetric, j, k});
    for (int j = 0; j < dim; ++j)
        for (int k = j + 1; k < dim; ++k)
            m_kinds.push_back({Kind::antisymmetric, j, k});
    for (int l = 1; l < dim; ++l)
        m_kinds.push_back({Kind::diagonal, l, l});
}

ComplexMatrix GeneratorBasis::matrix(int index) const
{
    const auto& e = m_kinds.at(static_cast<std::size_t>(index));
    ComplexMatrix m = ComplexMatrix::Zero(m_dim, m_dim);
    switch (e.kind) {
    case Kind::symmetric:
        m(e.j, e.k) = 1.0;
        m(e.k, e.j) = 1.0;
        break;
    case Kind::antisymmetric:
        m(e.j, e.k) = -I;
        m(e.k, e.j) = I;
        break;
    case Kind::diagonal: {
        const double f = diagonal_factor(e.j);
        for (int i = 0; i < e.j; ++i)
            m(i, i) = f;
        m(e.j, e.j) = -e.j * f;
        break;
    }
    }
    return m;
}

ComplexVector GeneratorBasis::traces(const ComplexMatrix& x) const
{
    require_square(x, m_dim, "matrix");
    ComplexVector out(size());
    for (int idx = 0; idx < size(); ++idx) {
        const auto& e = m_kinds[static_cast<std::size_t>(idx)];
        switch (e.kind) {
        case Kind::symmetric:
            out(idx) = x(e.k, e.j) + x(e.j, e.k);
            break;
        case Kind::antisymmetric:
            // Tr(-i E_jk X + i E_kj X) = -i X_kj + i X_jk
            out(idx) = -I * x(e.k, e.j) + I * x(e.j, e.k);
            break;
        case Kind::diagonal: {
            Complex partial = 0.0;
            for (int i = 0; i < e.j; ++i)
                partial += x(i, i);
            out(idx) = diagonal_factor(e.j) * (partial - static_cast<double>(e.j) * x(e.j, e.j));
            break;
        }
        }
    }
    return out;
}

ComplexMatrix GeneratorBasis::combine(const RealVector& c) const
{
    if (c.size() != size())
        throw InvalidArgument("coefficient vector has length " + std::to_string(c.size()) +
                              ", expected " + std::to_string(size()));
    ComplexMatrix m = ComplexMatrix::Zero(m_dim, m_dim);
    for (int idx = 0; idx < size(); ++idx) {
        const auto& e = m_kinds[static_cast<std::size_t>(idx)];
        const double v = c(idx);
        switch (e.kind) {
        case Kind::symmetric:
            m(e.j, e.k) += v;
            m(e.k, e.j) += v;
            break;
        case Kind::antisymmetric:
            m(e.j, e.k) += -I * v;
            m(e.k, e.j) += I * v;
            break;
        case Kind::diagonal: {
            const double f = diagonal_factor(e.j) * v;
            for (int i = 0; i < e.j; ++i)
                m(i, i) += f;
            m(e.j, e.j) -= e.j * f;
            break;
        }
        }
    }
    return m;
}

BlochVector to_bloch(const DensityMatrix& rho, const GeneratorBasis& basis)
{
    require_square(rho, basis.dim(), "density matrix");
    const Complex tr = rho.trace();
    if (std::abs(tr - 1.0) > 1e-10)
        throw InvalidArgument("density matrix trace is (" + std::to_string(tr.real()) + ", " +
                              std::to_string(tr.imag()) + "), expected 1");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw InvalidArgument("density matrix is not Hermitian");
    return 0.5 * std::sqrt(static_cast<double>(basis.dim())) * basis.traces(rho).real();
}

DensityMatrix from_bloch(const BlochVector& n, const GeneratorBasis& basis)
{
    const double dim = basis.dim();
    DensityMatrix rho = std::sqrt(dim) * basis.combine(n);
    rho.diagonal().array() += 1.0;
    return rho / dim;
}

RealMatrix transfer_generator(const ComplexMatrix& h, const GeneratorBasis& basis)
{
    require_square(h, basis.dim(), "Hamiltonian");
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw InvalidArgument("Hamiltonian is not Hermitian");

    // dn_i/dt = sum_j 1/2 Tr(l_i (-i)[H, l_j]) n_j
    const int size = basis.size();
    RealMatrix g(size, size);
    for (int j = 0; j < size; ++j) {
        const ComplexMatrix lj = basis.matrix(j);
        const ComplexMatrix c = -I * (h * lj - lj * h);
        g.col(j) = 0.5 * basis.traces(c).real();
    }
    return g;
}

RealMatrix transfer_matrix(const ComplexMatrix& u, const GeneratorBasis& basis)
{
    require_square(u, basis.dim(), "unitary");
    const ComplexMatrix id = ComplexMatrix::Identity(u.rows(), u.cols());
    if ((u.adjoint() * u - id).cwiseAbs().maxCoeff() > 1e-8)
        throw InvalidArgument("matrix is not unitary");

    const int size = basis.size();
    RealMatrix t(size, size);
    for (int j = 0; j < size; ++j) {
        const ComplexMatrix conj = u * basis.matrix(j) * u.adjoint();
        t.col(j) = 0.5 * basis.traces(conj).real();
    }
    return t;
}

} // namespace rtnwalk
