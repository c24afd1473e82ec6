#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "arborftp/graph.hpp"

namespace arborftp {

// Rooted spanning in-tree: one in-edge per non-root vertex, acyclic, every
// vertex reachable from the root.
struct Arborescence {
    std::vector<int> parent_edge;  // vertex -> edge id, -1 at the root
    Cost total_cost = 0;
};

namespace detail {

struct RollbackUf {
    std::vector<int> e;  // parent, or -(component size) at a root
    std::vector<std::pair<int, int>> hist;

    explicit RollbackUf(int n) : e(n, -1) {}

    int find(int x) const {
        while (e[x] >= 0) x = e[x];
        return x;
    }
    bool join(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (e[a] > e[b]) std::swap(a, b);
        hist.emplace_back(a, e[a]);
        hist.emplace_back(b, e[b]);
        e[a] += e[b];
        e[b] = a;
        return true;
    }
    std::size_t time() const { return hist.size(); }
    void rollback(std::size_t t) {
        while (hist.size() > t) {
            auto [i, v] = hist.back();
            hist.pop_back();
            e[i] = v;
        }
    }
};

struct DmstEdge {
    int tail = -1;
    int head = -1;
    Cost cost = 0;
    int id = -1;
};

// Mergeable priority queue of candidate in-edges with lazy cost shifting.
// Ties on shifted cost break toward the lower edge id, which keeps the
// selected arborescence deterministic.
struct EdgeHeap {
    struct Node {
        Cost w;
        Cost delta;
        int edge_id;
        int tail;
        int head;
        int l, r;
    };
    std::vector<Node> pool;

    int make(const DmstEdge& e) {
        pool.push_back({e.cost, 0, e.id, e.tail, e.head, -1, -1});
        return static_cast<int>(pool.size()) - 1;
    }
    void prop(int x) {
        Node& nd = pool[x];
        if (nd.delta == 0) return;
        nd.w += nd.delta;
        if (nd.l >= 0) pool[nd.l].delta += nd.delta;
        if (nd.r >= 0) pool[nd.r].delta += nd.delta;
        nd.delta = 0;
    }
    int merge(int a, int b) {
        if (a < 0) return b;
        if (b < 0) return a;
        prop(a);
        prop(b);
        if (std::tie(pool[a].w, pool[a].edge_id) > std::tie(pool[b].w, pool[b].edge_id))
            std::swap(a, b);
        pool[a].r = merge(b, pool[a].r);
        std::swap(pool[a].l, pool[a].r);
        return a;
    }
    int pop(int a) {
        prop(a);
        return merge(pool[a].l, pool[a].r);
    }
};

// Contraction algorithm for the minimum-cost arborescence (directed MST)
// with cycle expansion driven by rollback of the union-find history.
inline std::optional<std::vector<DmstEdge>> directed_mst(int n, int root,
                                                         const std::vector<DmstEdge>& edges) {
    RollbackUf uf(n);
    EdgeHeap H;
    std::vector<int> heap(n, -1);
    for (const DmstEdge& e : edges) heap[e.head] = H.merge(heap[e.head], H.make(e));

    std::vector<int> seen(n, -1), path(n);
    seen[root] = root;
    std::vector<DmstEdge> Q(n), in(n);
    std::vector<std::tuple<int, std::size_t, std::vector<DmstEdge>>> cycles;

    for (int s = 0; s < n; ++s) {
        int u = s, qi = 0;
        while (seen[u] < 0) {
            if (heap[u] < 0) return std::nullopt;  // some vertex unreachable
            H.prop(heap[u]);
            const auto& nd = H.pool[heap[u]];
            DmstEdge e{nd.tail, nd.head, nd.w, nd.edge_id};
            H.pool[heap[u]].delta -= nd.w;  // shift remaining candidates by -w
            heap[u] = H.pop(heap[u]);
            Q[qi] = e;
            path[qi++] = u;
            seen[u] = s;
            u = uf.find(e.tail);
            if (seen[u] == s) {  // cycle found, contract it
                int cyc = -1;
                int end = qi;
                std::size_t t = uf.time();
                int w;
                do {
                    cyc = H.merge(cyc, heap[w = path[--qi]]);
                } while (uf.join(u, w));
                u = uf.find(u);
                heap[u] = cyc;
                seen[u] = -1;
                cycles.emplace_back(u, t,
                                    std::vector<DmstEdge>(Q.begin() + qi, Q.begin() + end));
            }
        }
        for (int i = 0; i < qi; ++i) in[uf.find(Q[i].head)] = Q[i];
    }

    // Expand cycles in reverse contraction order.
    for (auto it = cycles.rbegin(); it != cycles.rend(); ++it) {
        auto& [u, t, comp] = *it;
        uf.rollback(t);
        DmstEdge in_edge = in[u];
        for (const DmstEdge& e : comp) in[uf.find(e.head)] = e;
        in[uf.find(in_edge.head)] = in_edge;
    }
    return in;
}

}  // namespace detail

// Min-cost arborescence over the edge subset `edge_ids` (all edges of g when
// omitted), rooted at g.root. Nullopt means some vertex is unreachable.
inline std::optional<Arborescence> min_cost_arborescence(const Graph& g,
                                                         std::span<const int> edge_ids) {
    if (g.n == 1) return Arborescence{{-1}, 0};
    std::vector<detail::DmstEdge> edges;
    edges.reserve(edge_ids.size());
    for (int id : edge_ids) {
        const Edge& e = g.edges[id];
        edges.push_back({e.tail, e.head, e.cost, e.id});
    }
    auto in = detail::directed_mst(g.n, g.root, edges);
    if (!in) return std::nullopt;
    Arborescence a;
    a.parent_edge.assign(g.n, -1);
    for (int v = 0; v < g.n; ++v) {
        if (v == g.root) continue;
        a.parent_edge[v] = (*in)[v].id;
        a.total_cost += g.edges[(*in)[v].id].cost;
    }
    return a;
}

inline std::optional<Arborescence> min_cost_arborescence(const Graph& g) {
    std::vector<int> all(g.m());
    for (int i = 0; i < g.m(); ++i) all[i] = i;
    return min_cost_arborescence(g, all);
}

// Exhaustive oracle: enumerates in-edge choices per vertex with cost pruning,
// keeps the cheapest acyclic assignment. Limited to n <= 10.
inline std::optional<Arborescence> brute_force_arborescence(const Graph& g) {
    if (g.n > 10)
        throw InstanceTooLarge("brute_force_arborescence: n = " + std::to_string(g.n) + " > 10");
    std::vector<int> order;
    for (int v = 0; v < g.n; ++v)
        if (v != g.root) order.push_back(v);
    std::vector<std::vector<int>> candidates(g.n);
    for (int v : order) {
        candidates[v] = g.in_edges[v];
        std::sort(candidates[v].begin(), candidates[v].end(), [&](int a, int b) {
            return std::tie(g.edges[a].cost, a) < std::tie(g.edges[b].cost, b);
        });
        if (candidates[v].empty()) return std::nullopt;
    }

    std::vector<int> choice(g.n, -1), best_choice;
    Cost best = std::numeric_limits<Cost>::max();

    auto acyclic = [&]() {
        std::vector<int> state(g.n, 0);  // 0 new, 1 on stack, 2 done
        for (int v = 0; v < g.n; ++v) {
            int u = v;
            std::vector<int> stack;
            while (u != g.root && state[u] == 0) {
                state[u] = 1;
                stack.push_back(u);
                u = g.edges[choice[u]].tail;
            }
            if (u != g.root && state[u] == 1) return false;
            for (int w : stack) state[w] = 2;
        }
        return true;
    };

    auto rec = [&](auto&& self, std::size_t idx, Cost partial) -> void {
        if (partial >= best) return;
        if (idx == order.size()) {
            if (acyclic()) {
                best = partial;
                best_choice = choice;
            }
            return;
        }
        int v = order[idx];
        for (int eid : candidates[v]) {
            choice[v] = eid;
            self(self, idx + 1, partial + g.edges[eid].cost);
        }
        choice[v] = -1;
    };
    rec(rec, 0, 0);

    if (best_choice.empty() && !order.empty()) return std::nullopt;
    Arborescence a;
    a.parent_edge.assign(g.n, -1);
    a.total_cost = g.n == 1 ? 0 : best;
    for (int v : order) a.parent_edge[v] = best_choice[v];
    return a;
}

// Nullopt means the arborescence satisfies all invariants against g;
// otherwise the report names the first violation.
inline std::optional<std::string> validate_arborescence(const Graph& g, const Arborescence& a) {
    if (static_cast<int>(a.parent_edge.size()) != g.n) return "parent map size mismatch";
    if (a.parent_edge[g.root] != -1) return "root has an in-edge";
    Cost total = 0;
    for (int v = 0; v < g.n; ++v) {
        if (v == g.root) continue;
        int eid = a.parent_edge[v];
        if (eid < 0) return "uncovered vertex " + std::to_string(v);
        if (eid >= g.m()) return "invalid edge id " + std::to_string(eid);
        if (g.edges[eid].head != v)
            return "edge " + std::to_string(eid) + " does not enter vertex " + std::to_string(v);
        total += g.edges[eid].cost;
    }
    std::vector<int> state(g.n, 0);
    for (int v = 0; v < g.n; ++v) {
        int u = v;
        std::vector<int> stack;
        while (u != g.root && state[u] == 0) {
            state[u] = 1;
            stack.push_back(u);
            u = g.edges[a.parent_edge[u]].tail;
        }
        if (u != g.root && state[u] == 1) return "cycle through vertex " + std::to_string(u);
        for (int w : stack) state[w] = 2;
    }
    if (total != a.total_cost) return "cost mismatch";
    return std::nullopt;
}

// `v parent_edge_id` lines plus a `cost=` trailer.
inline void save_arborescence(std::ostream& out, const Arborescence& a) {
    for (std::size_t v = 0; v < a.parent_edge.size(); ++v)
        if (a.parent_edge[v] >= 0) out << v << ' ' << a.parent_edge[v] << '\n';
    out << "cost=" << format_cost(a.total_cost) << '\n';
}

}  // namespace arborftp
