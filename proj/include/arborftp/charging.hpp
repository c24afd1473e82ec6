#pragma once

#include <map>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "arborftp/eft.hpp"

namespace arborftp {

class MissingProvenance : public std::runtime_error {
public:
    MissingProvenance() : std::runtime_error("subgraph was built without path provenance") {}
};

// color(e) = least path index i with e in rho_i; 0 means uncolored.
struct ColorAssignment {
    std::vector<int> color;            // edge id -> color
    std::vector<long long> per_color;  // c_i, indexed by color (entry 0 unused)
};

inline ColorAssignment color_edges(const EftSubgraph& h) {
    if (h.first_path_index.empty() && !h.path_union.empty()) throw MissingProvenance();
    ColorAssignment ca;
    ca.color = h.first_path_index;
    ca.per_color.assign(h.paths.size() + 1, 0);
    for (int eid : h.path_union) ++ca.per_color[ca.color[eid]];
    return ca;
}

enum class ChargeClass { Intersecting, NonIntersecting };

struct ChargeEntry {
    int color = 0;
    ChargeClass cls = ChargeClass::Intersecting;
};

struct ChargeLedger {
    std::map<std::pair<int, int>, std::vector<ChargeEntry>> charges;
    std::vector<long long> pairs_per_color;  // indexed by color
};

// Pairs charged by one path, given which of its edges carry the path's own
// color: (x_p, x_q) for every fresh out-edge position p and fresh in-edge
// position q with p < q. The path is given as its vertex sequence; fresh[j]
// flags the edge leaving vertices[j].
inline std::vector<std::pair<int, int>> charged_pairs_on_path(const std::vector<int>& vertices,
                                                              const std::vector<char>& fresh) {
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t p = 0; p + 1 < vertices.size(); ++p) {
        if (!fresh[p]) continue;
        for (std::size_t q = p; q + 1 < vertices.size(); ++q)
            if (fresh[q]) pairs.emplace_back(vertices[p], vertices[q + 1]);
    }
    return pairs;
}

namespace detail {

// Memoized single-target shortest-path trees under the build graph's costs,
// used to recover the canonical SP(x,y) for charge classification.
class SpTreeCache {
public:
    explicit SpTreeCache(const Graph& g) : g_(&g) {}

    const SpTree& tree_to(int target) {
        auto it = cache_.find(target);
        if (it != cache_.end()) return it->second;
        auto tree = shortest_path_tree_to(*g_, target, [](int) { return false; });
        return cache_.emplace(target, std::move(tree)).first->second;
    }

    // Edge ids of SP(x,y); nullopt if y is unreachable from x.
    std::optional<std::vector<int>> sp_edges(int x, int y) {
        const SpTree& t = tree_to(y);
        if (x != y && !t.reachable(x)) return std::nullopt;
        std::vector<int> edges;
        int v = x;
        while (v != y) {
            int e = t.next_edge[v];
            edges.push_back(e);
            v = t.head_of[e];
        }
        return edges;
    }

private:
    const Graph* g_;
    std::unordered_map<int, SpTree> cache_;
};

inline bool edge_sets_intersect(const std::vector<int>& a, const std::vector<int>& b) {
    std::unordered_set<int> set(a.begin(), a.end());
    for (int e : b)
        if (set.count(e)) return true;
    return false;
}

}  // namespace detail

// Scans every path's vertex pairs, records charges per the three-condition
// definition, and classifies each charged (pair, color) as intersecting or
// non-intersecting against the canonical SP(x,y) in g. g must be the graph
// the subgraph was built on (the perturbed one under the perturbation regime).
inline ChargeLedger compute_charges(const Graph& g, const EftSubgraph& h,
                                    const ColorAssignment& ca) {
    ChargeLedger ledger;
    ledger.pairs_per_color.assign(h.paths.size() + 1, 0);
    detail::SpTreeCache sp_cache(g);

    for (std::size_t pi = 0; pi < h.paths.size(); ++pi) {
        const ReplacementPath& rp = h.paths[pi];
        if (rp.status != PathStatus::Found) continue;
        int color = static_cast<int>(pi) + 1;

        // vertices of rho_i and the positions of its color-i edges
        std::vector<int> vertices{rp.entry_vertex};
        for (int eid : rp.edges) vertices.push_back(g.edges[eid].head);
        std::vector<char> fresh(rp.edges.size(), 0);
        for (std::size_t j = 0; j < rp.edges.size(); ++j)
            fresh[j] = ca.color[rp.edges[j]] == color;

        for (std::size_t p = 0; p + 1 < vertices.size(); ++p) {
            if (!fresh[p]) continue;
            std::vector<int> subpath;  // edges of rho_i[x, .] grown incrementally
            for (std::size_t q = p; q + 1 < vertices.size(); ++q) {
                subpath.push_back(rp.edges[q]);
                if (!fresh[q]) continue;
                int x = vertices[p], y = vertices[q + 1];
                ++ledger.pairs_per_color[color];
                auto sp = sp_cache.sp_edges(x, y);
                ChargeClass cls = sp && detail::edge_sets_intersect(*sp, subpath)
                                      ? ChargeClass::Intersecting
                                      : ChargeClass::NonIntersecting;
                ledger.charges[{x, y}].push_back({color, cls});
            }
        }
    }
    return ledger;
}

struct ChargeBoundReport {
    bool ok = true;
    int max_charges = 0;
    std::pair<int, int> violating_pair{-1, -1};
    std::vector<ChargeEntry> violating_entries;
    std::string reason;
};

// Every pair may carry at most three colors: at most one non-intersecting
// plus at most two intersecting. Also enforces the per-color pair ceiling
// c_i(c_i+1)/2.
inline ChargeBoundReport check_charge_bound(const ChargeLedger& ledger,
                                            const ColorAssignment& ca) {
    ChargeBoundReport report;
    for (const auto& [pair, entries] : ledger.charges) {
        int inter = 0, noninter = 0;
        for (const ChargeEntry& e : entries)
            (e.cls == ChargeClass::Intersecting ? inter : noninter) += 1;
        report.max_charges = std::max(report.max_charges, static_cast<int>(entries.size()));
        if (entries.size() > 3 || noninter > 1 || inter > 2) {
            report.ok = false;
            report.violating_pair = pair;
            report.violating_entries = entries;
            report.reason = "pair (" + std::to_string(pair.first) + "," +
                            std::to_string(pair.second) + ") carries " +
                            std::to_string(entries.size()) + " colors (" + std::to_string(inter) +
                            " intersecting, " + std::to_string(noninter) + " non-intersecting)";
            return report;
        }
    }
    for (std::size_t i = 1; i < ca.per_color.size(); ++i) {
        long long ci = ca.per_color[i];
        if (i < ledger.pairs_per_color.size() &&
            ledger.pairs_per_color[i] > ci * (ci + 1) / 2) {
            report.ok = false;
            report.reason = "color " + std::to_string(i) + " charged " +
                            std::to_string(ledger.pairs_per_color[i]) +
                            " pairs, above c_i(c_i+1)/2 = " + std::to_string(ci * (ci + 1) / 2);
            return report;
        }
    }
    return report;
}

struct SizeBoundReport {
    bool ok = true;
    long long path_union_edges = 0;
    long long bound_cube = 0;  // 6 n^3, compared against |union|^2
};

// |union of rho_i|^2 <= 6 n^3, checked in integers.
inline SizeBoundReport check_size_bound(const EftSubgraph& h, int n) {
    SizeBoundReport r;
    r.path_union_edges = static_cast<long long>(h.path_union.size());
    r.bound_cube = 6LL * n * n * n;
    r.ok = r.path_union_edges * r.path_union_edges <= r.bound_cube;
    return r;
}

struct DisjointUniquenessReport {
    bool ok = true;
    std::pair<int, int> pair{-1, -1};
    int index_i = 0, index_j = 0;
    std::string reason;
};

// For every pair (x,y): any two path subpaths rho_i[x,y], rho_j[x,y] that are
// both edge-disjoint from SP(x,y) must be identical. Quadratic pair scan,
// meant for n <= 50 diagnostics under the perturbation regime.
inline DisjointUniquenessReport check_disjoint_uniqueness(const Graph& g, const EftSubgraph& h) {
    DisjointUniquenessReport report;
    detail::SpTreeCache sp_cache(g);

    // position of each vertex on each path (-1 when absent)
    std::vector<std::vector<int>> pos(h.paths.size(), std::vector<int>(g.n, -1));
    for (std::size_t pi = 0; pi < h.paths.size(); ++pi) {
        const ReplacementPath& rp = h.paths[pi];
        if (rp.status != PathStatus::Found) continue;
        int v = rp.entry_vertex, at = 0;
        pos[pi][v] = at++;
        for (int eid : rp.edges) pos[pi][g.edges[eid].head] = at++;
    }

    for (int x = 0; x < g.n; ++x) {
        for (int y = 0; y < g.n; ++y) {
            if (x == y) continue;
            std::optional<std::vector<int>> witness;
            int witness_index = 0;
            std::optional<std::vector<int>> sp;
            bool sp_known = false;
            for (std::size_t pi = 0; pi < h.paths.size(); ++pi) {
                if (h.paths[pi].status != PathStatus::Found) continue;
                int px = pos[pi][x], py = pos[pi][y];
                if (px < 0 || py < 0 || px >= py) continue;
                std::vector<int> subpath(h.paths[pi].edges.begin() + px,
                                         h.paths[pi].edges.begin() + py);
                if (!sp_known) {
                    sp = sp_cache.sp_edges(x, y);
                    sp_known = true;
                }
                if (sp && detail::edge_sets_intersect(*sp, subpath)) continue;
                if (!witness) {
                    witness = std::move(subpath);
                    witness_index = static_cast<int>(pi) + 1;
                } else if (*witness != subpath) {
                    report.ok = false;
                    report.pair = {x, y};
                    report.index_i = witness_index;
                    report.index_j = static_cast<int>(pi) + 1;
                    report.reason = "distinct SP-disjoint subpaths for (" + std::to_string(x) +
                                    "," + std::to_string(y) + ")";
                    return report;
                }
            }
        }
    }
    return report;
}

}  // namespace arborftp
