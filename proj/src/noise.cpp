#include <rtnwalk/noise.hpp>

#include <cmath>
#include <string>

#include <rtnwalk/errors.hpp>

namespace rtnwalk {

void NoiseModel::validate() const
{
    if (n_fluctuators < 1 || n_fluctuators > kMaxFluctuators)
        throw InvalidArgument("fluctuator count must be in [1, " +
                              std::to_string(kMaxFluctuators) + "], got " +
                              std::to_string(n_fluctuators));
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw InvalidArgument("switching rate mu must be positive and finite");
    if (!(nu >= 0.0 && nu <= 1.0))
        throw InvalidArgument("noise strength nu must lie in [0,1]");
}

SparseMatrix<double> generator(const NoiseModel& model)
{
    model.validate();
    const auto n_c = model.n_configs();
    const int n = model.n_fluctuators;

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(n_c) * (n + 1));
    for (std::int64_t c = 0; c < n_c; ++c) {
        triplets.emplace_back(c, c, -n * model.mu);
        for (int i = 0; i < n; ++i)
            triplets.emplace_back(c, c ^ (std::int64_t{1} << i), model.mu);
    }
    SparseMatrix<double> v(n_c, n_c);
    v.setFromTriplets(triplets.begin(), triplets.end());
    return v;
}

RealVector stationary_distribution(const NoiseModel& model)
{
    model.validate();
    const auto n_c = model.n_configs();
    return RealVector::Constant(n_c, 1.0 / static_cast<double>(n_c));
}

std::vector<int> config_values(std::int64_t c, int n)
{
    if (n < 0 || n > kMaxFluctuators)
        throw InvalidArgument("fluctuator count out of range");
    if (c < 0 || c >= (std::int64_t{1} << n))
        throw InvalidArgument("configuration index " + std::to_string(c) +
                              " out of range for " + std::to_string(n) + " fluctuators");
    std::vector<int> g(n);
    for (int i = 0; i < n; ++i)
        g[i] = ((c >> i) & 1) ? -1 : +1;
    return g;
}

} // namespace rtnwalk
