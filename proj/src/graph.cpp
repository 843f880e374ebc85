#include <rtnwalk/graph.hpp>

#include <algorithm>
#include <string>

#include <rtnwalk/errors.hpp>

namespace rtnwalk {

Graph::Graph(int n_nodes, std::vector<Edge> edges)
    : m_n_nodes(n_nodes), m_edges(std::move(edges))
{
    if (n_nodes < 1)
        throw InvalidArgument("graph needs at least one node");
    for (auto& e : m_edges) {
        if (e.a == e.b)
            throw InvalidArgument("self-loop at node " + std::to_string(e.a + 1));
        if (e.a < 0 || e.b < 0 || e.a >= n_nodes || e.b >= n_nodes)
            throw InvalidArgument("edge endpoint out of range");
        if (e.a > e.b)
            std::swap(e.a, e.b);
    }
    std::sort(m_edges.begin(), m_edges.end());
    if (std::adjacent_find(m_edges.begin(), m_edges.end()) != m_edges.end())
        throw InvalidArgument("duplicate edge");
}

Graph Graph::from_one_based(int n_nodes, std::span<const std::pair<int, int>> edges)
{
    std::vector<Edge> converted;
    converted.reserve(edges.size());
    for (auto [a, b] : edges)
        converted.push_back({a - 1, b - 1});
    return Graph(n_nodes, std::move(converted));
}

RealMatrix Graph::adjacency() const
{
    RealMatrix a = RealMatrix::Zero(m_n_nodes, m_n_nodes);
    for (const auto& e : m_edges) {
        a(e.a, e.b) = 1.0;
        a(e.b, e.a) = 1.0;
    }
    return a;
}

RealVector Graph::degrees() const
{
    RealVector d = RealVector::Zero(m_n_nodes);
    for (const auto& e : m_edges) {
        d(e.a) += 1.0;
        d(e.b) += 1.0;
    }
    return d;
}

Graph star_graph(int n)
{
    if (n < 2)
        throw InvalidArgument("star graph needs n >= 2, got " + std::to_string(n));
    std::vector<Edge> edges;
    for (int k = 1; k < n; ++k)
        edges.push_back({0, k});
    return Graph(n, std::move(edges));
}

Graph complete_graph(int n)
{
    if (n < 2)
        throw InvalidArgument("complete graph needs n >= 2, got " + std::to_string(n));
    std::vector<Edge> edges;
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
            edges.push_back({j, k});
    return Graph(n, std::move(edges));
}

RealMatrix laplacian(const Graph& g)
{
    RealMatrix l = g.degrees().asDiagonal();
    l -= g.adjacency();
    return l;
}

RealMatrix noisy_laplacian(const Graph& g, double nu, std::span<const int> config)
{
    if (static_cast<int>(config.size()) != g.n_edges())
        throw InvalidArgument("fluctuator configuration has " + std::to_string(config.size()) +
                              " entries for " + std::to_string(g.n_edges()) + " edges");
    RealMatrix l = RealMatrix::Zero(g.n_nodes(), g.n_nodes());
    for (std::size_t i = 0; i < config.size(); ++i) {
        const auto& e = g.edges()[i];
        const double w = 1.0 + nu * config[i];
        l(e.a, e.b) -= w;
        l(e.b, e.a) -= w;
        l(e.a, e.a) += w;
        l(e.b, e.b) += w;
    }
    return l;
}

} // namespace rtnwalk
