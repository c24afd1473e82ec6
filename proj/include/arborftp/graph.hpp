#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "arborftp/common.hpp"

namespace arborftp {

struct Edge {
    int id = -1;
    int tail = -1;
    int head = -1;
    Cost cost = 0;

    bool operator==(const Edge&) const = default;
};

class GraphFormatError : public std::runtime_error {
public:
    enum class Kind { MalformedLine, NegativeCost, EdgeIntoRoot, SelfLoop };

    GraphFormatError(Kind kind, int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), kind(kind), line(line) {}

    Kind kind;
    int line;
};

// Directed weighted multigraph with a designated root. The root has no
// incoming edge; parallel edges are permitted, self-loops are not.
struct Graph {
    int n = 0;
    int root = 0;
    std::vector<Edge> edges;
    std::vector<std::vector<int>> out_edges;  // per-vertex out-edge ids
    std::vector<std::vector<int>> in_edges;   // shared in-edge index, backs the reverse view

    int m() const { return static_cast<int>(edges.size()); }

    void rebuild_adjacency() {
        out_edges.assign(n, {});
        in_edges.assign(n, {});
        for (const Edge& e : edges) {
            out_edges[e.tail].push_back(e.id);
            in_edges[e.head].push_back(e.id);
        }
    }
};

// Read-only reverse view: every edge (a,b) appears as (b,a) with the same id
// and cost. reverse(reverse(g)) is g again. The root-has-no-in-edge invariant
// is not enforced on the flipped view.
class GraphView {
public:
    explicit GraphView(const Graph& g, bool flipped = false) : g_(&g), flipped_(flipped) {}

    int n() const { return g_->n; }
    int m() const { return g_->m(); }
    int root() const { return g_->root; }
    bool flipped() const { return flipped_; }

    Edge edge(int id) const {
        Edge e = g_->edges[id];
        if (flipped_) std::swap(e.tail, e.head);
        return e;
    }

    const std::vector<int>& out_edges(int v) const {
        return flipped_ ? g_->in_edges[v] : g_->out_edges[v];
    }
    const std::vector<int>& in_edges(int v) const {
        return flipped_ ? g_->out_edges[v] : g_->in_edges[v];
    }

    GraphView reverse() const { return GraphView(*g_, !flipped_); }

private:
    const Graph* g_;
    bool flipped_;
};

inline GraphView reverse(const Graph& g) { return GraphView(g, true); }

namespace detail {

// Trailing "# id=<k>" comment column used by subgraph serialization.
inline std::optional<int> parse_id_comment(const std::string& line) {
    auto pos = line.find('#');
    if (pos == std::string::npos) return std::nullopt;
    auto idpos = line.find("id=", pos);
    if (idpos == std::string::npos) return std::nullopt;
    return std::stoi(line.substr(idpos + 3));
}

}  // namespace detail

// Edge-list text format: `n m root`, then m lines `tail head cost`.
// '#' starts a comment. An optional trailing `# id=<k>` records the edge id
// the line had in an enclosing graph; ids are returned via original_ids.
inline Graph load_graph(std::istream& in, std::vector<int>* original_ids = nullptr) {
    using Kind = GraphFormatError::Kind;
    Graph g;
    std::string line;
    std::vector<std::string> tokens;
    int line_no = 0;
    int declared_m = -1;

    while (std::getline(in, line)) {
        ++line_no;
        if (!detail::strip_comment_and_tokens(line, tokens)) continue;
        if (declared_m < 0) {
            if (tokens.size() != 3)
                throw GraphFormatError(Kind::MalformedLine, line_no, "expected `n m root`");
            try {
                g.n = std::stoi(tokens[0]);
                declared_m = std::stoi(tokens[1]);
                g.root = std::stoi(tokens[2]);
            } catch (const std::exception&) {
                throw GraphFormatError(Kind::MalformedLine, line_no, "expected `n m root`");
            }
            if (g.n <= 0 || declared_m < 0 || g.root < 0 || g.root >= g.n)
                throw GraphFormatError(Kind::MalformedLine, line_no, "bad header values");
            continue;
        }
        if (tokens.size() != 3)
            throw GraphFormatError(Kind::MalformedLine, line_no, "expected `tail head cost`");
        Edge e;
        e.id = g.m();
        try {
            e.tail = std::stoi(tokens[0]);
            e.head = std::stoi(tokens[1]);
        } catch (const std::exception&) {
            throw GraphFormatError(Kind::MalformedLine, line_no, "bad vertex id");
        }
        if (e.tail < 0 || e.tail >= g.n || e.head < 0 || e.head >= g.n)
            throw GraphFormatError(Kind::MalformedLine, line_no, "vertex id out of range");
        if (e.tail == e.head)
            throw GraphFormatError(Kind::SelfLoop, line_no, "self-loop rejected");
        if (e.head == g.root)
            throw GraphFormatError(Kind::EdgeIntoRoot, line_no, "edge into root rejected");
        try {
            e.cost = parse_cost(tokens[2], /*allow_negative=*/false);
        } catch (const CostParseError& err) {
            std::string what = err.what();
            if (what.find("negative") != std::string::npos)
                throw GraphFormatError(Kind::NegativeCost, line_no, what);
            throw GraphFormatError(Kind::MalformedLine, line_no, what);
        }
        g.edges.push_back(e);
        if (original_ids) {
            auto oid = detail::parse_id_comment(line);
            original_ids->push_back(oid.value_or(e.id));
        }
    }
    if (declared_m < 0) throw GraphFormatError(Kind::MalformedLine, 0, "empty input");
    if (g.m() != declared_m)
        throw GraphFormatError(Kind::MalformedLine, line_no,
                               "edge count mismatch: header says " + std::to_string(declared_m) +
                                   ", got " + std::to_string(g.m()));
    g.rebuild_adjacency();
    return g;
}

inline Graph load_graph_file(const std::string& path, std::vector<int>* original_ids = nullptr) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    return load_graph(in, original_ids);
}

inline void save_graph(std::ostream& out, const Graph& g, bool with_ids = false) {
    out << g.n << ' ' << g.m() << ' ' << g.root << '\n';
    for (const Edge& e : g.edges) {
        out << e.tail << ' ' << e.head << ' ' << format_cost(e.cost);
        if (with_ids) out << " # id=" << e.id;
        out << '\n';
    }
}

// cost'(e) = cost(e)*scale + delta_e with delta_e in [1, max(1, scale/n)].
// Any simple path has fewer than n edges, so the deltas on it sum to less
// than scale and the perturbation never reorders paths whose unscaled costs
// differ. Original costs are recovered by integer division by scale.
inline Graph perturb_costs(const Graph& g, std::uint64_t seed, Cost scale = Cost{1} << 20) {
    Graph out = g;
    SplitMix64 rng(seed ^ 0x5eed5eed5eed5eedULL);
    Cost delta_max = std::max<Cost>(1, scale / std::max(1, g.n));
    constexpr Cost kMax = std::numeric_limits<Cost>::max();
    for (Edge& e : out.edges) {
        if (e.cost > (kMax - scale) / scale)
            throw OverflowError("scaled cost exceeds 64-bit range");
        e.cost = e.cost * scale + rng.next_in(1, delta_max);
    }
    return out;
}

// Total order on paths: (cost, hop count, lexicographic edge-id sequence).
// Concatenation is monotone in each argument, so subpaths of a key-minimal
// path are key-minimal.
struct PathKey {
    Cost cost = 0;
    int hops = 0;
    std::vector<int> edge_ids;

    friend std::strong_ordering operator<=>(const PathKey& a, const PathKey& b) {
        if (auto c = a.cost <=> b.cost; c != 0) return c;
        if (auto c = a.hops <=> b.hops; c != 0) return c;
        return a.edge_ids <=> b.edge_ids;
    }
    bool operator==(const PathKey&) const = default;
};

struct PathResult {
    PathKey key;
    std::vector<int> vertices;  // entry vertex first, target last
    int entry = -1;
};

// Single-target tree of key-minimal paths toward `target`, computed as
// Dijkstra on the reverse view. next_edge[v] is the first edge of the
// forward path v -> target (-1 at the target and at unreachable vertices).
struct SpTree {
    int target = -1;
    std::vector<Cost> dist;
    std::vector<int> hops;
    std::vector<int> next_edge;
    bool tie_detected = false;

    bool reachable(int v) const { return v == target || next_edge[v] >= 0; }

    PathResult path_from(int v) const {
        PathResult r;
        r.entry = v;
        r.key.cost = dist[v];
        r.key.hops = hops[v];
        r.vertices.push_back(v);
        while (v != target) {
            int e = next_edge[v];
            r.key.edge_ids.push_back(e);
            v = head_of[e];
            r.vertices.push_back(v);
        }
        return r;
    }

    std::vector<int> head_of;  // edge id -> head vertex, for path extraction
};

namespace detail {

// Label order used during relaxation. Comparing the first forward edge id is
// consistent with full lexicographic PathKey order: candidate labels at a
// vertex that tie on (cost, hops) differ in their first edge, and the suffix
// behind a fixed first edge is already key-minimal when its head is settled.
struct DijkstraLabel {
    Cost cost;
    int hops;
    int via_edge;

    friend std::strong_ordering operator<=>(const DijkstraLabel&, const DijkstraLabel&) = default;
};

}  // namespace detail

template <typename BannedPred>
inline SpTree shortest_path_tree_to(const Graph& g, int target, BannedPred banned,
                                    const std::vector<char>* stop_mask = nullptr) {
    constexpr Cost kInf = std::numeric_limits<Cost>::max();
    SpTree tree;
    tree.target = target;
    tree.dist.assign(g.n, kInf);
    tree.hops.assign(g.n, 0);
    tree.next_edge.assign(g.n, -1);
    tree.head_of.resize(g.m());
    for (const Edge& e : g.edges) tree.head_of[e.id] = e.head;

    std::vector<detail::DijkstraLabel> label(g.n, {kInf, 0, -1});
    std::vector<char> settled(g.n, 0);

    struct QItem {
        detail::DijkstraLabel lab;
        int vertex;
        bool operator>(const QItem& o) const {
            if (lab != o.lab) return lab > o.lab;
            return vertex > o.vertex;
        }
    };
    std::priority_queue<QItem, std::vector<QItem>, std::greater<QItem>> pq;

    label[target] = {0, 0, -1};
    tree.dist[target] = 0;
    pq.push({label[target], target});

    while (!pq.empty()) {
        auto [lab, u] = pq.top();
        pq.pop();
        if (settled[u] || lab != label[u]) continue;
        settled[u] = 1;
        tree.dist[u] = lab.cost;
        tree.hops[u] = lab.hops;
        tree.next_edge[u] = lab.via_edge;
        if (stop_mask && (*stop_mask)[u]) break;
        for (int eid : g.in_edges[u]) {
            const Edge& e = g.edges[eid];
            if (banned(eid)) continue;
            int w = e.tail;
            detail::DijkstraLabel cand{lab.cost + e.cost, lab.hops + 1, eid};
            if (cand.cost == label[w].cost && label[w].via_edge >= 0) tree.tie_detected = true;
            if (settled[w]) continue;
            if (cand < label[w]) {
                label[w] = cand;
                pq.push({cand, w});
            }
        }
    }
    return tree;
}

// Key-minimal path from any vertex of `sources` to `target` in G minus the
// banned edges, or nullopt when unreachable. Runs Dijkstra from the target in
// the reverse graph and stops at the first settled source vertex.
inline std::optional<PathResult> shortest_path(const Graph& g, const std::vector<char>& sources,
                                               int target, const std::vector<int>& banned,
                                               bool* tie_detected = nullptr) {
    auto is_banned = [&banned](int eid) {
        return std::find(banned.begin(), banned.end(), eid) != banned.end();
    };
    if (sources[target]) {
        PathResult r;
        r.entry = target;
        r.vertices.push_back(target);
        return r;
    }
    SpTree tree = shortest_path_tree_to(g, target, is_banned, &sources);
    if (tie_detected) *tie_detected = *tie_detected || tree.tie_detected;
    int best = -1;
    for (int v = 0; v < g.n; ++v)
        if (sources[v] && tree.reachable(v) && tree.dist[v] != std::numeric_limits<Cost>::max()) {
            // At most one source is settled thanks to the early exit; keep the
            // scan anyway so a full tree also answers correctly.
            detail::DijkstraLabel lv{tree.dist[v], tree.hops[v], tree.next_edge[v]};
            if (best < 0 ||
                lv < detail::DijkstraLabel{tree.dist[best], tree.hops[best], tree.next_edge[best]})
                best = v;
        }
    if (best < 0) return std::nullopt;
    return tree.path_from(best);
}

}  // namespace arborftp
