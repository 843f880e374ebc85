#include <rtnwalk/search.hpp>

#include <cmath>
#include <numbers>
#include <string>

#include <rtnwalk/errors.hpp>

namespace rtnwalk {

void SearchSpec::validate(const Graph& g) const
{
    if (target < 0 || target >= g.n_nodes())
        throw InvalidArgument("target node " + std::to_string(target + 1) +
                              " is not in 1.." + std::to_string(g.n_nodes()));
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw InvalidArgument("gamma must be positive and finite");
}

ComplexMatrix search_hamiltonian(const RealMatrix& laplacian, const SearchSpec& spec)
{
    if (spec.target < 0 || spec.target >= laplacian.rows())
        throw InvalidArgument("target node out of range");
    ComplexMatrix h = (spec.gamma * laplacian).cast<Complex>();
    h(spec.target, spec.target) -= 1.0;
    return h;
}

DensityMatrix initial_state(int n)
{
    if (n < 2)
        throw InvalidArgument("initial state needs n >= 2");
    return DensityMatrix::Constant(n, n, 1.0 / n);
}

SearchResult success_probability(std::span<const double> times,
                                 std::span<const DensityMatrix> states, int target)
{
    if (times.size() != states.size())
        throw InvalidArgument("time grid and state list differ in length");
    SearchResult result;
    result.times.assign(times.begin(), times.end());
    result.probability.reserve(states.size());
    for (std::size_t k = 0; k < states.size(); ++k) {
        const auto& rho = states[k];
        if (target < 0 || target >= rho.rows())
            throw InvalidArgument("target node " + std::to_string(target + 1) + " out of range");
        const Complex p = rho(target, target);
        if (std::abs(p.imag()) > 1e-10 || p.real() < -1e-8 || p.real() > 1.0 + 1e-8)
            throw ConvergenceError("target population outside [0,1] at t = " +
                                       std::to_string(times[k]),
                                   std::abs(p));
        const double clipped = std::clamp(p.real(), 0.0, 1.0);
        result.probability.push_back(clipped);
        if (k == 0 || clipped > result.p_succ) {
            result.p_succ = clipped;
            result.t_opt = times[k];
        }
    }
    return result;
}

std::vector<double> time_grid(double t_max, double dt)
{
    if (!(dt > 0.0) || !(t_max >= 0.0))
        throw InvalidArgument("time grid needs dt > 0 and t_max >= 0");
    const auto steps = static_cast<long long>(std::floor(t_max / dt + 0.5));
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(steps + 1));
    for (long long k = 0; k <= steps; ++k)
        grid.push_back(static_cast<double>(k) * dt);
    return grid;
}

double default_search_horizon(int n_nodes)
{
    return 2.0 * std::numbers::pi * std::sqrt(static_cast<double>(n_nodes));
}

SearchResult noiseless_search(const Graph& g, const SearchSpec& spec,
                              std::span<const double> times)
{
    spec.validate(g);
    RealMatrix h = spec.gamma * laplacian(g);
    h(spec.target, spec.target) -= 1.0;
    const Eigen::SelfAdjointEigenSolver<RealMatrix> eig(h);
    const RealVector s = RealVector::Constant(g.n_nodes(), 1.0 / std::sqrt(g.n_nodes()));
    const RealVector overlap = eig.eigenvectors().transpose() * s;
    const RealVector weight = eig.eigenvectors().row(spec.target).transpose().cwiseProduct(overlap);

    SearchResult result;
    result.times.assign(times.begin(), times.end());
    for (std::size_t k = 0; k < times.size(); ++k) {
        Complex amp = 0.0;
        for (Eigen::Index i = 0; i < weight.size(); ++i)
            amp += weight(i) * std::exp(Complex(0.0, -eig.eigenvalues()(i) * times[k]));
        const double p = std::norm(amp);
        result.probability.push_back(p);
        if (k == 0 || p > result.p_succ) {
            result.p_succ = p;
            result.t_opt = times[k];
        }
    }
    return result;
}

double calibrate_gamma(const Graph& g, int target, std::span<const double> gamma_grid,
                       double t_max, double dt)
{
    if (gamma_grid.empty())
        throw InvalidArgument("gamma grid is empty");
    const auto times = time_grid(t_max, dt);
    double best_gamma = gamma_grid.front();
    double best_p = -1.0;
    for (double gamma : gamma_grid) {
        const double p = noiseless_search(g, {target, gamma}, times).p_succ;
        if (p > best_p || (p == best_p && gamma < best_gamma)) {
            best_p = p;
            best_gamma = gamma;
        }
    }
    return best_gamma;
}

std::vector<double> gamma_range(double lo, double hi, double step)
{
    if (!(step > 0.0) || !(lo > 0.0) || hi < lo)
        throw InvalidArgument("gamma range needs 0 < lo <= hi and step > 0");
    std::vector<double> grid;
    const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
    for (long long k = 0; k <= count; ++k)
        grid.push_back(lo + static_cast<double>(k) * step);
    return grid;
}

} // namespace rtnwalk
