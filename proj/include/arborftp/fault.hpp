#pragma once

#include <chrono>
#include <optional>
#include <thread>
#include <vector>

#include "arborftp/arborescence.hpp"
#include "arborftp/eft.hpp"

namespace arborftp {

class UnknownEdge : public std::runtime_error {
public:
    explicit UnknownEdge(int id) : std::runtime_error("unknown edge id " + std::to_string(id)) {}
};

// Signals an implementation bug: the sandwich inequality or the feasibility
// equivalence failed on a certified query. Never an expected outcome.
class CertificationFailure : public std::runtime_error {
public:
    CertificationFailure(int fault, std::optional<Arborescence> interim,
                         std::optional<Arborescence> exact)
        : std::runtime_error("certification failed for fault " + std::to_string(fault)),
          fault(fault),
          interim(std::move(interim)),
          exact(std::move(exact)) {}

    int fault;
    std::optional<Arborescence> interim;
    std::optional<Arborescence> exact;
};

struct FaultQueryResult {
    int fault = -1;
    bool tree_fault = false;
    std::optional<Arborescence> interim;   // nullopt when H - f has no arborescence
    std::optional<Cost> exact_cost;        // set by certify
    std::optional<Rational> ratio;         // interim / exact, exact arithmetic
};

namespace detail {

inline Cost tree_cost_under(const Graph& g, const Arborescence& a) {
    Cost total = 0;
    for (int v = 0; v < g.n; ++v)
        if (a.parent_edge[v] >= 0) total += g.edges[a.parent_edge[v]].cost;
    return total;
}

inline std::vector<int> without_edge(const std::vector<int>& ids, int f) {
    std::vector<int> out;
    out.reserve(ids.size());
    for (int id : ids)
        if (id != f) out.push_back(id);
    return out;
}

}  // namespace detail

// Interim arborescence after the failure of edge f. Faults outside the base
// tree short-circuit to T itself: T is still a min-cost arborescence of G-f.
// Costs are always taken from g, so a subgraph built under perturbed costs
// answers queries in the original cost scale.
inline FaultQueryResult query_fault(const Graph& g, const EftSubgraph& h, int f) {
    if (f < 0 || f >= g.m()) throw UnknownEdge(f);
    FaultQueryResult r;
    r.fault = f;
    const Edge& fe = g.edges[f];
    r.tree_fault = fe.head != g.root && h.base_tree.parent_edge[fe.head] == f;
    if (!r.tree_fault) {
        Arborescence t = h.base_tree;
        t.total_cost = detail::tree_cost_under(g, t);
        r.interim = std::move(t);
        return r;
    }
    auto interim = min_cost_arborescence(g, detail::without_edge(h.edge_set, f));
    if (interim) {
        interim->total_cost = detail::tree_cost_under(g, *interim);
        r.interim = std::move(*interim);
    }
    return r;
}

// query_fault plus an exact min-cost arborescence of G - f; asserts the
// sandwich exact <= interim <= 2*exact and that feasibility matches.
inline FaultQueryResult certify(const Graph& g, const EftSubgraph& h, int f) {
    FaultQueryResult r = query_fault(g, h, f);
    std::vector<int> surviving;
    surviving.reserve(g.m());
    for (int id = 0; id < g.m(); ++id)
        if (id != f) surviving.push_back(id);
    auto exact = min_cost_arborescence(g, surviving);

    if (exact.has_value() != r.interim.has_value())
        throw CertificationFailure(f, r.interim, exact);
    if (!exact) return r;

    Cost ec = exact->total_cost;
    Cost ic = r.interim->total_cost;
    if (!(ec <= ic && ic <= 2 * ec)) throw CertificationFailure(f, r.interim, exact);
    r.exact_cost = ec;
    r.ratio = ec == 0 ? Rational{1, 1} : Rational::make(ic, ec);
    return r;
}

struct FaultSweepRow {
    int fault = -1;
    bool feasible = false;
    bool tree_fault = false;
    Cost interim_cost = 0;
    Cost exact_cost = 0;
    Rational ratio{1, 1};
    long long t_h_micros = 0;
    long long t_g_micros = 0;
};

struct FaultSweepSummary {
    std::vector<FaultSweepRow> rows;  // in fault-id order
    Rational max_ratio{0, 1};
    double mean_ratio = 0.0;
    int infeasible_count = 0;
};

// Certify every edge of g (or only the base-tree edges) and aggregate.
inline FaultSweepSummary sweep_all_faults(const Graph& g, const EftSubgraph& h,
                                          bool tree_edges_only = false, int workers = 1) {
    std::vector<int> faults;
    for (int f = 0; f < g.m(); ++f) {
        const Edge& e = g.edges[f];
        bool in_tree = e.head != g.root && h.base_tree.parent_edge[e.head] == f;
        if (!tree_edges_only || in_tree) faults.push_back(f);
    }

    FaultSweepSummary summary;
    summary.rows.resize(faults.size());
    auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            int f = faults[i];
            FaultSweepRow row;
            row.fault = f;

            auto t0 = std::chrono::steady_clock::now();
            FaultQueryResult q = query_fault(g, h, f);
            auto t1 = std::chrono::steady_clock::now();
            row.t_h_micros =
                std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count();

            t0 = std::chrono::steady_clock::now();
            std::vector<int> surviving;
            for (int id = 0; id < g.m(); ++id)
                if (id != f) surviving.push_back(id);
            auto exact = min_cost_arborescence(g, surviving);
            t1 = std::chrono::steady_clock::now();
            row.t_g_micros =
                std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count();

            if (exact.has_value() != q.interim.has_value())
                throw CertificationFailure(f, q.interim, exact);
            row.tree_fault = q.tree_fault;
            row.feasible = q.interim.has_value();
            if (q.interim && exact) {
                Cost ec = exact->total_cost;
                Cost ic = q.interim->total_cost;
                if (!(ec <= ic && ic <= 2 * ec))
                    throw CertificationFailure(f, q.interim, exact);
                row.interim_cost = ic;
                row.exact_cost = ec;
                row.ratio = ec == 0 ? Rational{1, 1} : Rational::make(ic, ec);
            }
            summary.rows[i] = row;
        }
    };
    workers = std::max(1, workers);
    if (workers == 1 || faults.size() < 2) {
        run_range(0, faults.size());
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (faults.size() + workers - 1) / workers;
        for (std::size_t b = 0; b < faults.size(); b += chunk)
            pool.emplace_back(run_range, b, std::min(b + chunk, faults.size()));
        for (auto& t : pool) t.join();
    }

    double sum = 0.0;
    int counted = 0;
    for (const FaultSweepRow& row : summary.rows) {
        if (!row.feasible) {
            ++summary.infeasible_count;
            continue;
        }
        double r = static_cast<double>(row.ratio.num) / static_cast<double>(row.ratio.den);
        sum += r;
        ++counted;
        if (static_cast<long double>(row.ratio.num) * summary.max_ratio.den >
            static_cast<long double>(summary.max_ratio.num) * row.ratio.den)
            summary.max_ratio = row.ratio;
    }
    summary.mean_ratio = counted ? sum / counted : 0.0;
    return summary;
}

}  // namespace arborftp
