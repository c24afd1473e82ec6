#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <thread>
#include <vector>

#include "arborftp/arborescence.hpp"
#include "arborftp/graph.hpp"

namespace arborftp {

// The two components of the base arborescence after deleting the edge into v:
// subtree (v and its descendants) and rest (the component containing the root).
struct TreePartition {
    std::vector<int> subtree;
    std::vector<int> rest;
    std::vector<char> in_subtree;
};

inline TreePartition partition(const Graph& g, const Arborescence& t, int v) {
    TreePartition p;
    p.in_subtree.assign(g.n, 0);
    std::vector<std::vector<int>> children(g.n);
    for (int u = 0; u < g.n; ++u)
        if (t.parent_edge[u] >= 0) children[g.edges[t.parent_edge[u]].tail].push_back(u);
    std::vector<int> stack{v};
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        if (p.in_subtree[u]) continue;
        p.in_subtree[u] = 1;
        p.subtree.push_back(u);
        for (int c : children[u]) stack.push_back(c);
    }
    for (int u = 0; u < g.n; ++u)
        if (!p.in_subtree[u]) p.rest.push_back(u);
    return p;
}

enum class PathStatus { Found, Unreachable };

struct ReplacementPath {
    int vertex = -1;       // v_i
    int fault_edge = -1;   // the tree edge entering v_i
    int entry_vertex = -1; // where the path leaves X(v_i)
    std::vector<int> edges;
    PathKey key;
    PathStatus status = PathStatus::Unreachable;
    bool tie_detected = false;
};

// Shortest X(v) -> v path in G minus the tree edge into v. Unreachable is a
// recorded outcome, not an error: it means G minus that edge admits no
// arborescence.
inline ReplacementPath replacement_path(const Graph& g, const Arborescence& t, int v) {
    ReplacementPath rp;
    rp.vertex = v;
    rp.fault_edge = t.parent_edge[v];
    TreePartition part = partition(g, t, v);
    std::vector<char> sources(g.n, 0);
    for (int u : part.rest) sources[u] = 1;
    auto result = shortest_path(g, sources, v, {rp.fault_edge}, &rp.tie_detected);
    if (!result) return rp;
    rp.status = PathStatus::Found;
    rp.entry_vertex = result->entry;
    rp.edges = result->key.edge_ids;
    rp.key = std::move(result->key);
    return rp;
}

// The fault-tolerant subgraph: the base arborescence T plus the n-1 replacement
// paths, with per-edge provenance (the least path index that contributed it).
struct EftSubgraph {
    Arborescence base_tree;
    std::vector<ReplacementPath> paths;  // index i-1 holds rho_i
    std::vector<int> edge_set;           // sorted union of T and all paths
    std::vector<int> path_union;         // sorted union of path edges only
    std::vector<int> first_path_index;   // edge id -> least i with e in rho_i, 0 if none
    bool tie_detected = false;

    int path_index_of_vertex(int v, int root) const { return v < root ? v + 1 : v; }
};

// Vertices are processed in ascending id order; path indices i = 1..n-1
// follow that order. Paths fan out across `workers` threads; provenance is
// assembled sequentially in path-index order either way.
inline std::optional<EftSubgraph> build_eft_subgraph(const Graph& g, int workers = 1) {
    auto tree = min_cost_arborescence(g);
    if (!tree) return std::nullopt;

    EftSubgraph h;
    h.base_tree = *tree;
    std::vector<int> vertices;
    for (int v = 0; v < g.n; ++v)
        if (v != g.root) vertices.push_back(v);
    h.paths.resize(vertices.size());

    auto compute_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            h.paths[i] = replacement_path(g, h.base_tree, vertices[i]);
    };
    workers = std::max(1, workers);
    if (workers == 1 || vertices.size() < 2) {
        compute_range(0, vertices.size());
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (vertices.size() + workers - 1) / workers;
        for (std::size_t b = 0; b < vertices.size(); b += chunk)
            pool.emplace_back(compute_range, b, std::min(b + chunk, vertices.size()));
        for (auto& t : pool) t.join();
    }

    h.first_path_index.assign(g.m(), 0);
    std::set<int> edge_set, path_union;
    for (int v = 0; v < g.n; ++v)
        if (v != g.root) edge_set.insert(h.base_tree.parent_edge[v]);
    for (std::size_t i = 0; i < h.paths.size(); ++i) {
        const ReplacementPath& rp = h.paths[i];
        h.tie_detected = h.tie_detected || rp.tie_detected;
        for (int eid : rp.edges) {
            edge_set.insert(eid);
            path_union.insert(eid);
            if (h.first_path_index[eid] == 0) h.first_path_index[eid] = static_cast<int>(i) + 1;
        }
    }
    h.edge_set.assign(edge_set.begin(), edge_set.end());
    h.path_union.assign(path_union.begin(), path_union.end());
    return h;
}

// Perturbed-regime build: perturbs costs from `seed`, rebuilds with fresh
// seeds while cost ties between distinct candidate paths are detected.
struct PerturbedBuild {
    Graph graph;  // the perturbed graph the subgraph was built on
    EftSubgraph sub;
    std::uint64_t seed_used = 0;
};

inline std::optional<PerturbedBuild> build_eft_perturbed(const Graph& g, std::uint64_t seed,
                                                         int workers = 1, int max_redraws = 4) {
    for (int attempt = 0; attempt <= max_redraws; ++attempt) {
        PerturbedBuild b;
        b.seed_used = seed + static_cast<std::uint64_t>(attempt);
        b.graph = perturb_costs(g, b.seed_used);
        auto sub = build_eft_subgraph(b.graph, workers);
        if (!sub) return std::nullopt;
        b.sub = std::move(*sub);
        if (!b.sub.tie_detected || attempt == max_redraws) return b;
    }
    return std::nullopt;  // unreachable
}

// Subgraph serialization: graph-core edge-list format with the original edge
// id preserved in a trailing comment column.
inline void save_subgraph(std::ostream& out, const Graph& g, const std::vector<int>& edge_ids) {
    out << g.n << ' ' << edge_ids.size() << ' ' << g.root << '\n';
    for (int id : edge_ids) {
        const Edge& e = g.edges[id];
        out << e.tail << ' ' << e.head << ' ' << format_cost(e.cost) << " # id=" << id << '\n';
    }
}

// Loads a subgraph file and maps its edges back onto g by the id comments,
// validating endpoints and cost.
inline std::vector<int> load_subgraph(std::istream& in, const Graph& g) {
    std::vector<int> ids;
    Graph sub = load_graph(in, &ids);
    if (sub.n != g.n || sub.root != g.root)
        throw std::runtime_error("subgraph header does not match the base graph");
    for (int i = 0; i < sub.m(); ++i) {
        int id = ids[i];
        if (id < 0 || id >= g.m()) throw std::runtime_error("subgraph edge id out of range");
        const Edge& base = g.edges[id];
        const Edge& e = sub.edges[i];
        if (base.tail != e.tail || base.head != e.head || base.cost != e.cost)
            throw std::runtime_error("subgraph edge " + std::to_string(id) +
                                     " does not match the base graph");
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace arborftp
