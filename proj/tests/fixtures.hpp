#pragma once

#include <cmath>
#include <vector>

#include "merw/graph.hpp"
#include "merw/rng.hpp"

namespace merw::testing {

// Undirected path graph 1-2-...-n (0-based), no self-loops.
inline WeightedGraph path_graph(std::size_t n) {
    GraphBuilder b(n, GraphKind::Simple);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        b.add(i, i + 1, 1.0);
        b.add(i + 1, i, 1.0);
    }
    return b.build();
}

// Complete graph on n vertices, no self-loops.
inline WeightedGraph complete_graph(std::size_t n) {
    GraphBuilder b(n, GraphKind::Simple);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) b.add(i, j, 1.0);
    return b.build();
}

// 3-vertex chain with a self-loop on the last vertex:
// M = [[0,1,0],[1,0,1],[0,1,1]]. Dominant eigenvalue 2 cos(pi/7).
inline WeightedGraph chain_with_loop() {
    return WeightedGraph::from_rows(
        {{0, 1, 0}, {1, 0, 1}, {0, 1, 1}}, GraphKind::Simple);
}

inline WeightedGraph directed_cycle(std::size_t n) {
    GraphBuilder b(n, GraphKind::Simple);
    for (std::size_t i = 0; i < n; ++i) b.add(i, (i + 1) % n, 1.0);
    return b.build();
}

// Random strongly connected digraph: a directed Hamiltonian cycle plus extra
// random edges; aperiodic variants add a self-loop.
inline WeightedGraph random_strongly_connected(std::size_t n, std::uint64_t seed,
                                               GraphKind kind = GraphKind::Simple,
                                               bool force_aperiodic = false,
                                               double extra_edge_prob = 0.35) {
    const CounterRng rng(seed, "fixture-graph");
    GraphBuilder b(n, kind);
    std::uint64_t ctr = 0;
    auto weight_for = [&](std::uint64_t c) {
        switch (kind) {
            case GraphKind::Simple: return 1.0;
            case GraphKind::MultiEdge: return 1.0 + std::floor(rng.uniform(c ^ 0xabcdef) * 3.0);
            case GraphKind::Weighted: return 0.25 + rng.uniform(c ^ 0xabcdef) * 2.0;
        }
        return 1.0;
    };
    std::vector<std::vector<char>> used(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        b.add(i, j, weight_for(ctr++));
        used[i][j] = 1;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (used[i][j] || i == j) {
                ++ctr;
                continue;
            }
            if (rng.uniform(ctr++) < extra_edge_prob) {
                b.add(i, j, weight_for(ctr++));
                used[i][j] = 1;
            }
        }
    if (force_aperiodic && !used[0][0]) b.add(0, 0, weight_for(ctr++));
    return b.build();
}

// Brute-force reachability closure used as an oracle against SCC results.
inline std::vector<std::vector<char>> reachability_oracle(const WeightedGraph& g) {
    const std::size_t n = g.size();
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    g.for_each_edge([&](std::size_t i, std::size_t j, double) { reach[i][j] = 1; });
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (reach[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (reach[k][j]) reach[i][j] = 1;
    return reach;
}

}  // namespace merw::testing
