#include <rtnwalk/quasiham.hpp>

#include <cmath>
#include <string>

#include <rtnwalk/errors.hpp>

namespace rtnwalk {

namespace {

// Entries of K_c below this fraction of its largest magnitude are rounding
// residue of exact cancellations and are not stored.
constexpr double kPruneRelative = 1e-14;

// Slack on the Bloch-norm contraction check after each contraction.
constexpr double kContractionSlack = 1e-8;

} // namespace

QuasiHamiltonian QuasiHamiltonian::assemble(const Graph& g, const SearchSpec& search,
                                            const NoiseModel& noise,
                                            const GeneratorBasis& basis)
{
    noise.validate();
    search.validate(g);
    if (noise.n_fluctuators != g.n_edges())
        throw InvalidArgument("noise model has " + std::to_string(noise.n_fluctuators) +
                              " fluctuators but the graph has " +
                              std::to_string(g.n_edges()) + " edges");
    if (basis.dim() != g.n_nodes())
        throw InvalidArgument("generator basis dimension does not match the node count");

    QuasiHamiltonian hq(basis, noise);
    const auto n_c = noise.n_configs();
    const Eigen::Index d = basis.size();
    hq.m_n_configs = n_c;

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(n_c * d) * (noise.n_fluctuators + 1));

    for (std::int64_t c = 0; c < n_c; ++c) {
        const auto signs = config_values(c, noise.n_fluctuators);
        const ComplexMatrix h = search_hamiltonian(noisy_laplacian(g, noise.nu, signs), search);
        const RealMatrix k = transfer_generator(h, basis);
        const double cutoff = kPruneRelative * std::max(1.0, k.cwiseAbs().maxCoeff());
        const Eigen::Index offset = c * d;
        Eigen::Index block_nnz = 0;
        for (Eigen::Index i = 0; i < d; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) {
                if (std::abs(k(i, j)) > cutoff) {
                    triplets.emplace_back(offset + i, offset + j, k(i, j));
                    ++block_nnz;
                }
            }
        }
        hq.m_max_block_nnz = std::max(hq.m_max_block_nnz, block_nnz);
    }

    // V (x) I: constant diagonal -n mu, rate mu to every single-flip neighbour.
    const double diag = -noise.n_fluctuators * noise.mu;
    for (std::int64_t c = 0; c < n_c; ++c) {
        for (Eigen::Index j = 0; j < d; ++j) {
            triplets.emplace_back(c * d + j, c * d + j, diag);
            for (int f = 0; f < noise.n_fluctuators; ++f) {
                const std::int64_t other = c ^ (std::int64_t{1} << f);
                triplets.emplace_back(c * d + j, other * d + j, noise.mu);
            }
        }
    }

    hq.m_generator.resize(n_c * d, n_c * d);
    hq.m_generator.setFromTriplets(triplets.begin(), triplets.end());
    hq.m_generator.makeCompressed();
    std::tie(hq.m_shift, hq.m_norm) = shift_and_norm(hq.m_generator);
    return hq;
}

SparseMatrix<Complex> QuasiHamiltonian::matrix() const
{
    // -i H_q = A  =>  H_q = i A
    SparseMatrix<Complex> h = m_generator.cast<Complex>();
    h *= Complex(0.0, 1.0);
    return h;
}

ActionOptions QuasiHamiltonian::action_options(ActionOptions base) const
{
    base.shift = m_shift;
    base.norm = m_norm;
    return base;
}

RealVector QuasiHamiltonian::lift(const BlochVector& n) const
{
    if (n.size() != bloch_dim())
        throw InvalidArgument("Bloch vector has length " + std::to_string(n.size()) +
                              ", expected " + std::to_string(bloch_dim()));
    return n.replicate(m_n_configs, 1) / static_cast<double>(m_n_configs);
}

BlochVector QuasiHamiltonian::contract(const RealVector& lifted) const
{
    if (lifted.size() != dim())
        throw InvalidArgument("lifted vector has the wrong length");
    const Eigen::Index d = bloch_dim();
    BlochVector n = BlochVector::Zero(d);
    for (std::int64_t c = 0; c < m_n_configs; ++c)
        n += lifted.segment(c * d, d);
    return n;
}

DynamicsResult evolve(const QuasiHamiltonian& hq, const BlochVector& n0,
                      std::span<const double> times, const ActionOptions& opts)
{
    const RealVector start = hq.lift(n0);
    const auto lifted = expm_action_grid<double>(hq.generator(), times, start,
                                                 hq.action_options(opts));
    const double bound = n0.norm() * (1.0 + kContractionSlack) + kContractionSlack;

    DynamicsResult result;
    result.times.assign(times.begin(), times.end());
    result.bloch.reserve(lifted.size());
    for (std::size_t k = 0; k < lifted.size(); ++k) {
        BlochVector n = k < times.size() && times[k] == 0.0 ? n0 : hq.contract(lifted[k]);
        if (n.norm() > bound)
            throw ConvergenceError("averaged map expanded the Bloch vector at t = " +
                                       std::to_string(times[k]),
                                   n.norm() - n0.norm());
        result.bloch.push_back(std::move(n));
    }
    return result;
}

std::vector<DensityMatrix> evolve_rho(const QuasiHamiltonian& hq, const DensityMatrix& rho0,
                                      std::span<const double> times, const ActionOptions& opts)
{
    const auto result = evolve(hq, to_bloch(rho0, hq.basis()), times, opts);
    std::vector<DensityMatrix> out;
    out.reserve(result.bloch.size());
    for (const auto& n : result.bloch)
        out.push_back(from_bloch(n, hq.basis()));
    return out;
}

BlochVector restarted_evolve(const QuasiHamiltonian& hq, const BlochVector& n0, double tau1,
                             double tau, const ActionOptions& opts)
{
    if (!(tau1 >= 0.0) || tau1 > tau)
        throw InvalidArgument("restart time must satisfy 0 <= tau1 <= tau");
    const double first[] = {tau1};
    const BlochVector mid = evolve(hq, n0, first, opts).bloch.front();
    const double second[] = {tau - tau1};
    return evolve(hq, mid, second, opts).bloch.front();
}

} // namespace rtnwalk
