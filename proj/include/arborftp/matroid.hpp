#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "arborftp/common.hpp"

namespace arborftp {

// Independence-oracle view of a matroid on ground set [0, ground_size).
// Element sets are passed as sorted id vectors.
class Matroid {
public:
    virtual ~Matroid() = default;
    virtual int ground_size() const = 0;
    virtual bool is_independent(const std::vector<int>& elements) const = 0;
    virtual std::string kind() const = 0;
};

// Forests of an undirected multigraph; independence via union-find reset per
// query. Self-loops are permanent circuits.
class GraphicMatroid : public Matroid {
public:
    GraphicMatroid(int vertices, std::vector<std::pair<int, int>> ends)
        : vertices_(vertices), ends_(std::move(ends)) {}

    int ground_size() const override { return static_cast<int>(ends_.size()); }
    std::string kind() const override { return "graphic"; }
    int vertices() const { return vertices_; }
    const std::vector<std::pair<int, int>>& ends() const { return ends_; }

    bool is_independent(const std::vector<int>& elements) const override {
        std::vector<int> parent(vertices_);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (int e : elements) {
            auto [u, v] = ends_[e];
            int ru = find(u), rv = find(v);
            if (ru == rv) return false;
            parent[ru] = rv;
        }
        return true;
    }

private:
    int vertices_;
    std::vector<std::pair<int, int>> ends_;
};

class UniformMatroid : public Matroid {
public:
    UniformMatroid(int k, int m) : k_(k), m_(m) {}
    int ground_size() const override { return m_; }
    std::string kind() const override { return "uniform"; }
    bool is_independent(const std::vector<int>& elements) const override {
        return static_cast<int>(elements.size()) <= k_;
    }

private:
    int k_, m_;
};

class PartitionMatroid : public Matroid {
public:
    PartitionMatroid(std::vector<int> block_of, std::vector<int> capacity)
        : block_of_(std::move(block_of)), capacity_(std::move(capacity)) {}

    int ground_size() const override { return static_cast<int>(block_of_.size()); }
    std::string kind() const override { return "partition"; }
    bool is_independent(const std::vector<int>& elements) const override {
        std::vector<int> used(capacity_.size(), 0);
        for (int e : elements)
            if (++used[block_of_[e]] > capacity_[block_of_[e]]) return false;
        return true;
    }

private:
    std::vector<int> block_of_;
    std::vector<int> capacity_;
};

// Independence family given by generator sets: a set is independent iff it is
// a subset of some listed set. Downward closure holds by construction; the
// exchange axiom is the caller's responsibility (see audit_axioms).
class ExplicitMatroid : public Matroid {
public:
    ExplicitMatroid(int m, std::vector<std::uint32_t> generators)
        : m_(m), generators_(std::move(generators)) {}

    int ground_size() const override { return m_; }
    std::string kind() const override { return "explicit"; }
    bool is_independent(const std::vector<int>& elements) const override {
        std::uint32_t mask = 0;
        for (int e : elements) mask |= 1u << e;
        for (std::uint32_t gen : generators_)
            if ((mask & ~gen) == 0) return true;
        return mask == 0;
    }

private:
    int m_;
    std::vector<std::uint32_t> generators_;
};

struct Basis {
    std::vector<int> elements;  // sorted
    Cost cost = 0;
};

// Greedy over (cost, element id) ascending; exact for matroids. Returns a
// min-cost basis of the restriction M|ground. Matroid costs may be negative.
inline Basis greedy_min_cost_basis(const Matroid& m, std::span<const int> ground,
                                   std::span<const Cost> cost) {
    std::vector<int> order(ground.begin(), ground.end());
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return std::pair(cost[a], a) < std::pair(cost[b], b); });
    Basis b;
    std::vector<int> trial;
    for (int e : order) {
        trial = b.elements;
        trial.insert(std::lower_bound(trial.begin(), trial.end(), e), e);
        if (m.is_independent(trial)) {
            b.elements = trial;
            b.cost += cost[e];
        }
    }
    return b;
}

inline int rank_of(const Matroid& m, std::span<const int> s) {
    std::vector<Cost> zero(m.ground_size(), 0);
    return static_cast<int>(greedy_min_cost_basis(m, s, zero).elements.size());
}

inline bool in_span(const Matroid& m, std::span<const int> s, int x) {
    for (int e : s)
        if (e == x) return true;
    std::vector<int> with(s.begin(), s.end());
    with.insert(std::lower_bound(with.begin(), with.end(), x), x);
    std::sort(with.begin(), with.end());
    return rank_of(m, with) == rank_of(m, s);
}

class InternalContradiction : public std::runtime_error {
public:
    explicit InternalContradiction(const std::string& what) : std::runtime_error(what) {}
};

struct SwapResult {
    bool needed = false;
    int element = -1;
};

// Swap search after the failure of f in B1 (a min-cost basis of M|ground):
// if the rank of ground - f drops, B1 - f already is a min-cost basis;
// otherwise the cheapest b in B2 keeping B1 - f + b independent restores a
// min-cost basis of M|(ground - f).
inline SwapResult find_swap_element(const Matroid& m, std::span<const int> ground,
                                    const Basis& b1, int f, const Basis& b2,
                                    std::span<const Cost> cost) {
    std::vector<int> ground_minus_f;
    ground_minus_f.reserve(ground.size());
    for (int e : ground)
        if (e != f) ground_minus_f.push_back(e);
    if (rank_of(m, ground_minus_f) < rank_of(m, ground)) return {false, -1};

    std::vector<int> base;
    for (int e : b1.elements)
        if (e != f) base.push_back(e);

    int best = -1;
    for (int b : b2.elements) {
        if (best >= 0 && std::pair(cost[b], b) >= std::pair(cost[best], best)) continue;
        std::vector<int> trial = base;
        trial.insert(std::lower_bound(trial.begin(), trial.end(), b), b);
        if (m.is_independent(trial)) best = b;
    }
    if (best < 0)
        throw InternalContradiction("no swap element found despite full rank after losing " +
                                    std::to_string(f));
    return {true, best};
}

// Exhaustive axiom check (downward closure + exchange) for ground sets up to
// 12 elements. Nullopt means both axioms hold; otherwise names the violation.
inline std::optional<std::string> audit_axioms(const Matroid& m) {
    int n = m.ground_size();
    if (n > 12) throw InstanceTooLarge("audit_axioms: ground set larger than 12");
    auto members = [&](std::uint32_t mask) {
        std::vector<int> out;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) out.push_back(i);
        return out;
    };
    std::uint32_t full = (1u << n) - 1;
    std::vector<char> indep(full + 1, 0);
    for (std::uint32_t mask = 0; mask <= full; ++mask)
        indep[mask] = m.is_independent(members(mask));
    if (!indep[0]) return "empty set is dependent";
    for (std::uint32_t mask = 0; mask <= full; ++mask) {
        if (!indep[mask]) continue;
        for (int i = 0; i < n; ++i)
            if ((mask & (1u << i)) && !indep[mask & ~(1u << i)])
                return "downward closure fails at mask " + std::to_string(mask);
    }
    for (std::uint32_t x = 0; x <= full; ++x) {
        if (!indep[x]) continue;
        for (std::uint32_t y = 0; y <= full; ++y) {
            if (!indep[y] || std::popcount(y) <= std::popcount(x)) continue;
            bool found = false;
            for (int i = 0; i < n && !found; ++i)
                if ((y & (1u << i)) && !(x & (1u << i)) && indep[x | (1u << i)]) found = true;
            if (!found)
                return "exchange fails for masks " + std::to_string(x) + "," + std::to_string(y);
        }
    }
    return std::nullopt;
}

class MatroidFormatError : public std::runtime_error {
public:
    explicit MatroidFormatError(const std::string& what) : std::runtime_error(what) {}
};

struct MatroidInstance {
    std::unique_ptr<Matroid> matroid;
    std::vector<Cost> costs;
};

// Matroid file format:
//   graphic            -- then `n m root` + m edge lines (root ignored,
//                         edge-line costs used unless a costs section follows)
//   uniform k m
//   partition m b      -- then b lines `capacity e1 e2 ...`
//   explicit m         -- then one independent set per line until `costs`/EOF
// An optional `costs` line followed by one value per element overrides costs.
inline MatroidInstance load_matroid(std::istream& in) {
    std::vector<std::vector<std::string>> lines;
    std::string raw;
    std::vector<std::string> tokens;
    while (std::getline(in, raw))
        if (detail::strip_comment_and_tokens(raw, tokens)) lines.push_back(tokens);
    if (lines.empty()) throw MatroidFormatError("empty matroid file");

    MatroidInstance inst;
    std::size_t at = 0;
    const std::string& head = lines[at][0];

    auto read_costs_section = [&](int m) {
        if (at < lines.size() && lines[at][0] == "costs") {
            ++at;
            std::vector<Cost> costs;
            while (at < lines.size()) {
                for (const std::string& tok : lines[at]) costs.push_back(parse_cost(tok, true));
                ++at;
            }
            if (static_cast<int>(costs.size()) != m)
                throw MatroidFormatError("costs section must list one value per element");
            inst.costs = std::move(costs);
        }
        if (static_cast<int>(inst.costs.size()) != m)
            throw MatroidFormatError("missing costs for matroid elements");
    };

    if (head == "graphic") {
        ++at;
        if (at >= lines.size() || lines[at].size() != 3)
            throw MatroidFormatError("graphic: expected `n m root` header");
        int n = std::stoi(lines[at][0]);
        int m = std::stoi(lines[at][1]);
        ++at;
        std::vector<std::pair<int, int>> ends;
        std::vector<Cost> edge_costs;
        for (int i = 0; i < m; ++i, ++at) {
            if (at >= lines.size() || lines[at].size() != 3)
                throw MatroidFormatError("graphic: expected `tail head cost` edge line");
            int u = std::stoi(lines[at][0]);
            int v = std::stoi(lines[at][1]);
            if (u < 0 || u >= n || v < 0 || v >= n)
                throw MatroidFormatError("graphic: vertex id out of range");
            ends.emplace_back(u, v);
            edge_costs.push_back(parse_cost(lines[at][2], true));
        }
        inst.matroid = std::make_unique<GraphicMatroid>(n, std::move(ends));
        inst.costs = std::move(edge_costs);
        read_costs_section(m);
    } else if (head == "uniform") {
        if (lines[at].size() != 3) throw MatroidFormatError("uniform: expected `uniform k m`");
        int k = std::stoi(lines[at][1]);
        int m = std::stoi(lines[at][2]);
        ++at;
        inst.matroid = std::make_unique<UniformMatroid>(k, m);
        read_costs_section(m);
    } else if (head == "partition") {
        if (lines[at].size() != 3) throw MatroidFormatError("partition: expected `partition m b`");
        int m = std::stoi(lines[at][1]);
        int blocks = std::stoi(lines[at][2]);
        ++at;
        std::vector<int> block_of(m, -1), capacity(blocks, 0);
        for (int b = 0; b < blocks; ++b, ++at) {
            if (at >= lines.size() || lines[at].empty())
                throw MatroidFormatError("partition: missing block line");
            capacity[b] = std::stoi(lines[at][0]);
            for (std::size_t j = 1; j < lines[at].size(); ++j) {
                int e = std::stoi(lines[at][j]);
                if (e < 0 || e >= m || block_of[e] != -1)
                    throw MatroidFormatError("partition: bad element " + lines[at][j]);
                block_of[e] = b;
            }
        }
        for (int e = 0; e < m; ++e)
            if (block_of[e] < 0)
                throw MatroidFormatError("partition: element " + std::to_string(e) +
                                         " not assigned to a block");
        inst.matroid = std::make_unique<PartitionMatroid>(std::move(block_of), std::move(capacity));
        read_costs_section(m);
    } else if (head == "explicit") {
        if (lines[at].size() != 2) throw MatroidFormatError("explicit: expected `explicit m`");
        int m = std::stoi(lines[at][1]);
        if (m > 20) throw MatroidFormatError("explicit: ground set too large");
        ++at;
        std::vector<std::uint32_t> gens;
        while (at < lines.size() && lines[at][0] != "costs") {
            std::uint32_t mask = 0;
            for (const std::string& tok : lines[at]) {
                int e = std::stoi(tok);
                if (e < 0 || e >= m) throw MatroidFormatError("explicit: element out of range");
                mask |= 1u << e;
            }
            gens.push_back(mask);
            ++at;
        }
        inst.matroid = std::make_unique<ExplicitMatroid>(m, std::move(gens));
        read_costs_section(m);
    } else {
        throw MatroidFormatError("unknown matroid kind: " + head);
    }
    return inst;
}

}  // namespace arborftp
