#pragma once

#include <algorithm>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "arborftp/matroid.hpp"

namespace arborftp {

// Union of k+1 successive greedy bases: B_i is a min-cost basis of the
// ground set with B_1..B_{i-1} removed. Layers are pairwise disjoint; later
// layers may shrink as the rank of the remaining ground drops.
struct FtpSet {
    std::vector<Basis> layers;
    std::vector<int> union_elems;  // sorted
    int k = 0;
};

inline FtpSet build_ftp(const Matroid& m, std::span<const Cost> costs, int k) {
    FtpSet s;
    s.k = k;
    std::vector<int> ground(m.ground_size());
    std::iota(ground.begin(), ground.end(), 0);
    for (int i = 0; i < k + 1; ++i) {
        Basis b = greedy_min_cost_basis(m, ground, costs);
        std::vector<int> remaining;
        std::set_difference(ground.begin(), ground.end(), b.elements.begin(), b.elements.end(),
                            std::back_inserter(remaining));
        ground = std::move(remaining);
        s.layers.push_back(std::move(b));
    }
    for (const Basis& b : s.layers)
        s.union_elems.insert(s.union_elems.end(), b.elements.begin(), b.elements.end());
    std::sort(s.union_elems.begin(), s.union_elems.end());
    return s;
}

struct FtpVerifyResult {
    bool ok = true;
    std::vector<int> counterexample;  // first failing fault set F
    Basis basis_in_s;
    Basis basis_in_e;
};

namespace detail {

template <typename Visit>
inline bool for_each_subset_up_to(int m, int k, Visit visit) {
    std::vector<int> subset;
    auto rec = [&](auto&& self, int next) -> bool {
        if (!visit(subset)) return false;
        if (static_cast<int>(subset.size()) == k) return true;
        for (int e = next; e < m; ++e) {
            subset.push_back(e);
            if (!self(self, e + 1)) return false;
            subset.pop_back();
        }
        return true;
    };
    return rec(rec, 0);
}

inline std::vector<int> set_minus(std::span<const int> a, std::span<const int> b) {
    std::vector<int> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace detail

// Ground-truth check of the k-FTP property by exhaustive fault enumeration:
// for every F with |F| <= k, the greedy min-cost basis over S\F must match
// the one over E\F in both cost and rank. Hard-capped, never sampled.
inline FtpVerifyResult verify_ftp(const Matroid& m, std::span<const Cost> costs,
                                  std::span<const int> s, int k) {
    if (m.ground_size() > 18 || k > 3)
        throw InstanceTooLarge("verify_ftp: enumeration budget is m <= 18, k <= 3");
    std::vector<int> ground(m.ground_size());
    std::iota(ground.begin(), ground.end(), 0);
    std::vector<int> sorted_s(s.begin(), s.end());
    std::sort(sorted_s.begin(), sorted_s.end());

    FtpVerifyResult result;
    detail::for_each_subset_up_to(m.ground_size(), k, [&](const std::vector<int>& fault_set) {
        std::vector<int> faults = fault_set;
        std::sort(faults.begin(), faults.end());
        Basis in_e = greedy_min_cost_basis(m, detail::set_minus(ground, faults), costs);
        Basis in_s = greedy_min_cost_basis(m, detail::set_minus(sorted_s, faults), costs);
        if (in_s.elements.size() != in_e.elements.size() || in_s.cost != in_e.cost) {
            result.ok = false;
            result.counterexample = faults;
            result.basis_in_s = std::move(in_s);
            result.basis_in_e = std::move(in_e);
            return false;
        }
        return true;
    });
    return result;
}

// Processes faults one at a time. A fault inside layer L_i pulls the swap
// element from L_{i+1}, whose departure is itself treated as a failure one
// level down, and so on. Returns the final first layer, which must be a
// min-cost basis of the ground set minus all faults.
inline Basis simulate_failure_cascade(const Matroid& m, std::span<const Cost> costs,
                                      const FtpSet& ftp, std::span<const int> faults) {
    std::vector<std::vector<int>> layers;
    for (const Basis& b : ftp.layers) layers.push_back(b.elements);
    std::vector<char> failed(m.ground_size(), 0);

    auto ground_for_level = [&](std::size_t level) {
        // Elements not failed and not held by layers above `level`.
        std::vector<char> held(m.ground_size(), 0);
        for (std::size_t i = 0; i < level; ++i)
            for (int e : layers[i]) held[e] = 1;
        std::vector<int> ground;
        for (int e = 0; e < m.ground_size(); ++e)
            if (!failed[e] && !held[e]) ground.push_back(e);
        return ground;
    };

    auto fail_element = [&](auto&& self, int f, std::size_t level) -> void {
        if (level >= layers.size()) return;
        auto it = std::lower_bound(layers[level].begin(), layers[level].end(), f);
        if (it == layers[level].end() || *it != f) {
            self(self, f, level + 1);
            return;
        }
        layers[level].erase(it);
        std::vector<int> ground = ground_for_level(level);
        if (!in_span(m, ground, f)) return;  // rank dropped: the shrunk layer is already min-cost
        // The last layer is never repaired. It only degrades when the chain
        // has already consumed the whole fault budget, after which no later
        // fault will consult it.
        if (level + 1 >= layers.size()) return;
        int best = -1;
        for (int b : layers[level + 1]) {
            if (best >= 0 && std::pair(costs[b], b) >= std::pair(costs[best], best)) continue;
            std::vector<int> trial = layers[level];
            trial.insert(std::lower_bound(trial.begin(), trial.end(), b), b);
            if (m.is_independent(trial)) best = b;
        }
        if (best < 0)
            throw InternalContradiction("no swap element in the next layer for " +
                                        std::to_string(f));
        layers[level].insert(std::lower_bound(layers[level].begin(), layers[level].end(), best),
                             best);
        self(self, best, level + 1);  // the departure of `best` is a failure one level down
    };

    if (static_cast<int>(faults.size()) > ftp.k)
        throw InstanceTooLarge("simulate_failure_cascade: more faults than the fault budget k");
    for (int f : faults) {
        if (f < 0 || f >= m.ground_size()) continue;
        if (failed[f]) continue;
        failed[f] = 1;
        fail_element(fail_element, f, 0);
    }

    Basis out;
    out.elements = layers[0];
    for (int e : out.elements) out.cost += costs[e];
    return out;
}

// Lower-bound instance: a random spanning tree on n vertices
// with distinct seeded costs, every edge replicated k times with equal costs
// per copy group. Any k-FTP of this multigraph must keep all k copies of
// every tree edge, i.e. at least k(n-1) elements.
struct LowerBoundInstance {
    std::unique_ptr<GraphicMatroid> matroid;
    std::vector<Cost> costs;
    int n = 0;
    int k = 0;
};

inline LowerBoundInstance lower_bound_multigraph(int n, int k, std::uint64_t seed) {
    SplitMix64 rng(seed ^ 0xf7a5f7a5f7a5f7a5ULL);
    std::vector<std::pair<int, int>> base;
    for (int v = 1; v < n; ++v) {
        int u = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(v)));
        base.emplace_back(u, v);
    }
    // distinct costs: a seeded permutation of 1..n-1, scaled
    std::vector<Cost> pool;
    for (int i = 1; i < n; ++i) pool.push_back(static_cast<Cost>(i) * kCostScale);
    for (std::size_t i = pool.size(); i > 1; --i)
        std::swap(pool[i - 1], pool[rng.next_below(i)]);

    LowerBoundInstance inst;
    inst.n = n;
    inst.k = k;
    std::vector<std::pair<int, int>> ends;
    for (std::size_t e = 0; e < base.size(); ++e) {
        for (int copy = 0; copy < k; ++copy) {
            ends.push_back(base[e]);
            inst.costs.push_back(pool[e]);
        }
    }
    inst.matroid = std::make_unique<GraphicMatroid>(n, std::move(ends));
    return inst;
}

// One layer per line, element ids space-separated.
inline void save_ftp(std::ostream& out, const FtpSet& s) {
    for (const Basis& b : s.layers) {
        for (std::size_t i = 0; i < b.elements.size(); ++i)
            out << (i ? " " : "") << b.elements[i];
        out << '\n';
    }
}

inline std::vector<int> load_ftp_elements(std::istream& in) {
    std::vector<int> elems;
    std::string raw;
    std::vector<std::string> tokens;
    while (std::getline(in, raw)) {
        if (!detail::strip_comment_and_tokens(raw, tokens)) continue;
        for (const std::string& tok : tokens) elems.push_back(std::stoi(tok));
    }
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    return elems;
}

}  // namespace arborftp
