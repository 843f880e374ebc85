#pragma once

#include <span>
#include <utility>
#include <vector>

#include <rtnwalk/types.hpp>

namespace rtnwalk {

/*
 * Node indexing: the external interface (config files, CLI flags, CSV output)
 * numbers nodes 1..N, matching the node basis |1>..|N>. Everything inside the
 * library is 0-based: node k on the command line is index k-1 here.
 */

/// Undirected link between two distinct nodes, stored with a < b (0-based).
struct Edge
{
    int a;
    int b;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/**
 * Simple undirected graph. The edge list is kept sorted lexicographically;
 * that order is the fluctuator order used by every other module (fluctuator i
 * sits on edges()[i]).
 */
class Graph
{
public:
    /// Throws InvalidArgument on self-loops, duplicates or out-of-range nodes.
    Graph(int n_nodes, std::vector<Edge> edges);

    /// Builds from 1-based node pairs, as written in config files.
    static Graph from_one_based(int n_nodes,
                                std::span<const std::pair<int, int>> edges);

    int n_nodes() const noexcept { return m_n_nodes; }
    int n_edges() const noexcept { return static_cast<int>(m_edges.size()); }
    const std::vector<Edge>& edges() const noexcept { return m_edges; }

    RealMatrix adjacency() const;
    RealVector degrees() const;

private:
    int m_n_nodes;
    std::vector<Edge> m_edges;
};

/// Star with node 1 (index 0) as hub; n >= 2.
Graph star_graph(int n);

/// Complete graph on n >= 2 nodes.
Graph complete_graph(int n);

/// L = D - A.
RealMatrix laplacian(const Graph& g);

/**
 * Laplacian with every link (j,k) rescaled by 1 + nu * g_jk for the given
 * fluctuator signs (one +1/-1 per edge, in edge order). Row sums stay zero.
 */
RealMatrix noisy_laplacian(const Graph& g, double nu, std::span<const int> config);

} // namespace rtnwalk
