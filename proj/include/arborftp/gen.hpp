#pragma once

#include <cstdint>

#include "arborftp/graph.hpp"

namespace arborftp {

// Seeded random instance with root 0 and a guaranteed arborescence: every
// vertex v > 0 first gets a backbone in-edge from some u < v, then every
// remaining ordered pair (u, w) with w != root is kept with probability
// `density`. density = 1 yields every legal pair exactly once, so
// m = n(n-1) - (n-1). Costs are uniform integers in [1, cost_max].
inline Graph gen_random_graph(int n, double density, int cost_max, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("gen_random_graph: n must be >= 2");
    if (!(density > 0.0 && density <= 1.0))
        throw std::invalid_argument("gen_random_graph: density must be in (0, 1]");
    SplitMix64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    Graph g;
    g.n = n;
    g.root = 0;

    std::vector<int> backbone_parent(n, -1);
    for (int v = 1; v < n; ++v)
        backbone_parent[v] = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(v)));

    auto add_edge = [&](int u, int w) {
        Edge e;
        e.id = g.m();
        e.tail = u;
        e.head = w;
        e.cost = static_cast<Cost>(rng.next_in(1, cost_max)) * kCostScale;
        g.edges.push_back(e);
    };
    for (int u = 0; u < n; ++u) {
        for (int w = 1; w < n; ++w) {
            if (u == w) continue;
            if (backbone_parent[w] == u || rng.next_unit() < density) add_edge(u, w);
        }
    }
    g.rebuild_adjacency();
    return g;
}

}  // namespace arborftp
