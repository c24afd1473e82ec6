// Acceptance gate: one line per criterion, PASS or FAIL, exit 0 only if all
// checked criteria pass. Everything is exact integer arithmetic with zero
// tolerance except criterion 9, which is informational timing output.

#include <chrono>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "arborftp/charging.hpp"
#include "arborftp/fault.hpp"
#include "arborftp/ftp.hpp"
#include "arborftp/gen.hpp"

using namespace arborftp;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& text) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, text.c_str());
    if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct SmallCase {
    Graph g;
    EftSubgraph h;
};

struct LargeCase {
    Graph g;
    PerturbedBuild build;
};

std::vector<SmallCase> make_small_suite() {
    std::vector<SmallCase> out;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        int n = 2 + static_cast<int>(seed % 8);  // n in [2, 9]
        double density = 0.2 + 0.1 * static_cast<double>(seed % 7);
        Graph g = gen_random_graph(n, density, 12, seed);
        auto h = build_eft_subgraph(g);
        if (!h) continue;  // the generator plants a backbone; never expected
        out.push_back({std::move(g), std::move(*h)});
    }
    return out;
}

std::vector<LargeCase> make_large_suite() {
    std::vector<LargeCase> out;
    const int sizes[] = {50, 100, 200};
    const double densities[] = {0.3, 0.15, 0.08};
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        int idx = static_cast<int>(seed % 3);
        Graph g = gen_random_graph(sizes[idx], densities[idx], 100, seed * 101 + 13);
        auto b = build_eft_perturbed(g, seed);
        if (!b) continue;
        out.push_back({std::move(g), std::move(*b)});
    }
    return out;
}

// Exhaustive shortest-path oracle: minimal cost of a simple path from any
// source to target avoiding `banned`, with cost-based pruning.
std::optional<Cost> brute_best_cost(const Graph& g, const std::vector<char>& sources, int target,
                                    int banned) {
    std::optional<Cost> best;
    std::vector<char> visited(g.n, 0);
    auto dfs = [&](auto&& self, int v, Cost cost) -> void {
        if (best && cost >= *best) return;
        if (v == target) {
            best = cost;
            return;
        }
        visited[v] = 1;
        for (int eid : g.out_edges[v]) {
            if (eid == banned) continue;
            const Edge& e = g.edges[eid];
            if (visited[e.head]) continue;
            self(self, e.head, cost + e.cost);
        }
        visited[v] = 0;
    };
    for (int s = 0; s < g.n; ++s)
        if (sources[s]) dfs(dfs, s, 0);
    return best;
}

void criterion_1_2_5(const std::vector<SmallCase>& small, const std::vector<LargeCase>& large) {
    auto t0 = Clock::now();
    long long faults_checked = 0;
    bool sandwich_ok = true;
    bool feasibility_ok = true;
    std::string detail;
    try {
        for (const SmallCase& c : small) {
            FaultSweepSummary s = sweep_all_faults(c.g, c.h);  // throws on violation
            faults_checked += static_cast<long long>(s.rows.size());
        }
        for (const LargeCase& c : large) {
            FaultSweepSummary s = sweep_all_faults(c.g, c.build.sub);
            faults_checked += static_cast<long long>(s.rows.size());
        }
    } catch (const CertificationFailure& e) {
        sandwich_ok = false;
        feasibility_ok = false;
        detail = std::string(" (") + e.what() + ")";
    }
    double secs = seconds_since(t0);
    report(1, sandwich_ok && secs < 120.0,
           "sandwich exact <= interim <= 2*exact held on " + std::to_string(faults_checked) +
               " fault queries over " + std::to_string(small.size() + large.size()) +
               " graphs, zero tolerance, " + std::to_string(secs) + " s" + detail);

    bool size_ok = true;
    long long worst_sq = 0, worst_bound = 1;
    for (const LargeCase& c : large) {
        SizeBoundReport r = check_size_bound(c.build.sub, c.g.n);
        size_ok = size_ok && r.ok;
        if (r.path_union_edges * r.path_union_edges * worst_bound >= worst_sq * r.bound_cube) {
            worst_sq = r.path_union_edges * r.path_union_edges;
            worst_bound = r.bound_cube;
        }
    }
    report(2, size_ok,
           "|union of replacement paths|^2 <= 6 n^3 on " + std::to_string(large.size()) +
               " perturbed builds (worst " + std::to_string(worst_sq) + " vs " +
               std::to_string(worst_bound) + ")");

    // criterion 5 is certified inside every sweep above (feasibility of H - f
    // must equal feasibility of G - f); recount it explicitly on the small set
    long long infeasible = 0;
    for (const SmallCase& c : small) {
        for (int f = 0; f < c.g.m(); ++f) {
            std::vector<int> all;
            for (int id = 0; id < c.g.m(); ++id)
                if (id != f) all.push_back(id);
            bool g_ok = min_cost_arborescence(c.g, all).has_value();
            FaultQueryResult q = query_fault(c.g, c.h, f);
            if (g_ok != q.interim.has_value()) {
                feasibility_ok = false;
                break;
            }
            if (!g_ok) ++infeasible;
        }
    }
    report(5, feasibility_ok,
           "H - f admits an arborescence exactly when G - f does (" +
               std::to_string(infeasible) + " infeasible faults exercised)");
}

void criterion_3() {
    auto t0 = Clock::now();
    bool ok = true;
    int builds = 0;
    int max_charges = 0;
    std::string detail;

    // fixed fixture: a fully fresh four-edge path charges exactly ten pairs
    auto pairs = charged_pairs_on_path({0, 1, 2, 3, 4}, {1, 1, 1, 1});
    if (pairs.size() != 10) {
        ok = false;
        detail = " (path fixture charged " + std::to_string(pairs.size()) + " pairs, wanted 10)";
    }

    for (std::uint64_t seed = 0; seed < 200 && ok; ++seed) {
        Graph g;
        if (seed < 150) {
            g = gen_random_graph(5 + static_cast<int>(seed % 36), 0.5, 40, seed * 7 + 3);
        } else if (seed < 190) {
            g = gen_random_graph(50 + static_cast<int>(seed % 5) * 12, 0.1, 60, seed * 7 + 3);
        } else {
            g = gen_random_graph(200, 0.03, 80, seed * 7 + 3);
        }
        auto b = build_eft_perturbed(g, seed);
        if (!b) continue;
        ++builds;
        ColorAssignment ca = color_edges(b->sub);
        ChargeLedger ledger = compute_charges(b->graph, b->sub, ca);
        ChargeBoundReport r = check_charge_bound(ledger, ca);
        max_charges = std::max(max_charges, r.max_charges);
        if (!r.ok) {
            ok = false;
            detail = " (" + r.reason + ")";
        }
    }
    report(3, ok,
           "every vertex pair charged at most 3 colors (max seen " +
               std::to_string(max_charges) + ") across " + std::to_string(builds) +
               " perturbed builds, " + std::to_string(seconds_since(t0)) + " s" + detail);
}

void criterion_4(const std::vector<SmallCase>& small) {
    bool ok = true;
    long long paths = 0;
    for (const SmallCase& c : small) {
        for (const ReplacementPath& rp : c.h.paths) {
            TreePartition p = partition(c.g, c.h.base_tree, rp.vertex);
            std::vector<char> sources(c.g.n, 0);
            for (int u : p.rest) sources[u] = 1;
            auto want = brute_best_cost(c.g, sources, rp.vertex, rp.fault_edge);
            bool found = rp.status == PathStatus::Found;
            if (found != want.has_value() || (found && rp.key.cost != *want)) {
                ok = false;
                break;
            }
            ++paths;
        }
        if (!ok) break;
    }
    report(4, ok,
           "every replacement path matches the exhaustive shortest-path oracle (" +
               std::to_string(paths) + " paths over all n <= 9 instances)");
}

std::vector<std::pair<std::unique_ptr<Matroid>, std::vector<Cost>>> matroid_zoo() {
    std::vector<std::pair<std::unique_ptr<Matroid>, std::vector<Cost>>> zoo;
    auto add = [&](std::unique_ptr<Matroid> m, std::uint64_t seed) {
        SplitMix64 rng(seed);
        std::vector<Cost> costs(m->ground_size());
        for (Cost& c : costs) c = rng.next_in(1, 40) * kCostScale;
        zoo.emplace_back(std::move(m), std::move(costs));
    };
    add(std::make_unique<GraphicMatroid>(
            4, std::vector<std::pair<int, int>>{
                   {0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {0, 1}, {2, 3}}),
        1);
    add(std::make_unique<GraphicMatroid>(
            5, std::vector<std::pair<int, int>>{
                   {0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {0, 2}, {1, 3}, {2, 4}, {1, 4}, {0, 3}}),
        2);
    add(std::make_unique<UniformMatroid>(3, 10), 3);
    add(std::make_unique<PartitionMatroid>(std::vector<int>{0, 0, 0, 1, 1, 1, 2, 2, 2},
                                           std::vector<int>{1, 2, 1}),
        4);
    add(std::make_unique<ExplicitMatroid>(
            4, std::vector<std::uint32_t>{0b0111, 0b1011, 0b1101, 0b1110}),
        5);
    for (int k = 1; k <= 3; ++k) {
        LowerBoundInstance inst = lower_bound_multigraph(4, k, 7);
        zoo.emplace_back(std::move(inst.matroid), std::move(inst.costs));
    }
    return zoo;
}

void criterion_6_7() {
    auto zoo = matroid_zoo();
    bool verify_ok = true, cascade_ok = true;
    int verified = 0;
    long long cascades = 0;
    std::string detail6, detail7;
    auto t0 = Clock::now();
    for (const auto& [m, costs] : zoo) {
        for (int k = 1; k <= 3; ++k) {
            FtpSet s = build_ftp(*m, costs, k);
            FtpVerifyResult r = verify_ftp(*m, costs, s.union_elems, k);
            if (!r.ok) {
                verify_ok = false;
                detail6 = " (" + m->kind() + " k=" + std::to_string(k) + " failed)";
            }
            ++verified;

            detail::for_each_subset_up_to(m->ground_size(), k, [&](const std::vector<int>& f) {
                Basis after = simulate_failure_cascade(*m, costs, s, f);
                std::vector<int> ground;
                for (int e = 0; e < m->ground_size(); ++e)
                    if (std::find(f.begin(), f.end(), e) == f.end()) ground.push_back(e);
                Basis want = greedy_min_cost_basis(*m, ground, costs);
                ++cascades;
                if (after.cost != want.cost || after.elements.size() != want.elements.size()) {
                    cascade_ok = false;
                    detail7 = " (" + m->kind() + " k=" + std::to_string(k) + ", fault set size " +
                              std::to_string(f.size()) + ")";
                    return false;
                }
                return true;
            });
        }
    }
    double secs = seconds_since(t0);
    report(6, verify_ok && secs < 180.0,
           "union of k+1 greedy bases verified as a k-FTP for " + std::to_string(verified) +
               " (matroid, k) combinations, " + std::to_string(secs) + " s" + detail6);
    report(7, cascade_ok,
           "failure cascade reproduced the greedy optimum on " + std::to_string(cascades) +
               " fault sets" + detail7);
}

void criterion_8() {
    LowerBoundInstance inst = lower_bound_multigraph(3, 2, 0);
    int m = inst.matroid->ground_size();  // 2 tree edges x 2 copies = 4
    int best = -1;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        std::vector<int> s;
        for (int e = 0; e < m; ++e)
            if (mask & (1u << e)) s.push_back(e);
        if (best >= 0 && static_cast<int>(s.size()) >= best) continue;
        if (verify_ftp(*inst.matroid, inst.costs, s, 2).ok) best = static_cast<int>(s.size());
    }
    report(8, best == 4 && best == inst.k * (inst.n - 1),
           "exhaustive search over the n=3, k=2 multigraph: minimum verified 2-FTP has " +
               std::to_string(best) + " elements = k(n-1)");
}

void criterion_9() {
    // informational only: asymptotic claims are not validated here
    Graph g = gen_random_graph(200, 0.05, 100, 99);
    auto b = build_eft_perturbed(g, 0);
    if (!b) {
        report(9, true, "benchmark skipped (infeasible instance)");
        return;
    }
    int tree_edges = g.n - 1;
    auto t0 = Clock::now();
    long long q = 0;
    for (int v = 0; v < g.n; ++v) {
        if (v == g.root) continue;
        query_fault(g, b->sub, b->sub.base_tree.parent_edge[v]);
        ++q;
    }
    double t_h = seconds_since(t0) / static_cast<double>(q);
    t0 = Clock::now();
    for (int v = 0; v < g.n; ++v) {
        if (v == g.root) continue;
        std::vector<int> all;
        for (int id = 0; id < g.m(); ++id)
            if (id != b->sub.base_tree.parent_edge[v]) all.push_back(id);
        min_cost_arborescence(g, all);
    }
    double t_g = seconds_since(t0) / static_cast<double>(q);
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "informational: n=200 m=%d |H|=%zu, mean tree-fault query %.1f us in H vs "
                  "%.1f us full recompute (no asymptotic claim checked)",
                  g.m(), b->sub.edge_set.size(), t_h * 1e6, t_g * 1e6);
    report(9, true, std::string(buf) + " [" + std::to_string(tree_edges) + " faults]");
}

}  // namespace

int main() {
    auto t0 = Clock::now();
    std::vector<SmallCase> small = make_small_suite();
    std::vector<LargeCase> large = make_large_suite();

    criterion_1_2_5(small, large);
    criterion_3();
    criterion_4(small);
    criterion_6_7();
    criterion_8();
    criterion_9();

    std::printf("%s: %d criterion(s) failed, total %.1f s\n", failures ? "FAIL" : "OK", failures,
                seconds_since(t0));
    return failures ? 1 : 0;
}
