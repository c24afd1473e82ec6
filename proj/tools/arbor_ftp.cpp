// arbor-ftp: build sparse single-edge-fault-tolerant subgraphs for low-cost
// arborescences, answer fault queries with certified ratios, run the charging
// diagnostics, and build/verify fault-tolerant preservers for matroid bases.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "arborftp/arborescence.hpp"
#include "arborftp/charging.hpp"
#include "arborftp/eft.hpp"
#include "arborftp/fault.hpp"
#include "arborftp/ftp.hpp"
#include "arborftp/gen.hpp"
#include "arborftp/graph.hpp"
#include "arborftp/matroid.hpp"

namespace {

using namespace arborftp;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    return in;
}

// Rebuilds the query-side view of a serialized subgraph: the edge id set plus
// a base arborescence recomputed inside it.
EftSubgraph subgraph_from_file(const Graph& g, const std::string& path) {
    auto in = open_in(path);
    std::vector<int> ids = load_subgraph(in, g);
    auto tree = min_cost_arborescence(g, ids);
    if (!tree) throw std::runtime_error("subgraph admits no arborescence");
    EftSubgraph h;
    h.base_tree = *tree;
    h.edge_set = std::move(ids);
    return h;
}

MatroidInstance matroid_from_file(const std::string& path) {
    auto in = open_in(path);
    return load_matroid(in);
}

int cmd_gen(int n, double density, int cost_max, std::uint64_t seed, const std::string& out_path) {
    Graph g = gen_random_graph(n, density, cost_max, seed);
    auto out = open_out(out_path);
    out << "# seed=" << seed << " density=" << density << " cost_max=" << cost_max << '\n';
    save_graph(out, g);
    std::cout << "generated n=" << g.n << " m=" << g.m() << " -> " << out_path << '\n';
    return kExitOk;
}

int cmd_build(const std::string& graph_path, std::uint64_t seed, bool perturb, int workers,
              const std::string& out_path, const std::string& prov_path) {
    Graph g = load_graph_file(graph_path);
    EftSubgraph h;
    std::uint64_t seed_used = seed;
    if (perturb) {
        auto built = build_eft_perturbed(g, seed, workers);
        if (!built) {
            std::cerr << "graph admits no arborescence\n";
            return kExitViolation;
        }
        h = std::move(built->sub);
        seed_used = built->seed_used;
    } else {
        auto built = build_eft_subgraph(g, workers);
        if (!built) {
            std::cerr << "graph admits no arborescence\n";
            return kExitViolation;
        }
        h = std::move(*built);
    }
    auto out = open_out(out_path);
    out << "# seed=" << seed_used << " perturb=" << (perturb ? 1 : 0) << '\n';
    save_subgraph(out, g, h.edge_set);
    if (!prov_path.empty()) {
        auto prov = open_out(prov_path);
        prov << "edge_id\tfirst_path_index\n";
        for (int eid : h.path_union) prov << eid << '\t' << h.first_path_index[eid] << '\n';
    }
    int unreachable = 0;
    for (const auto& rp : h.paths)
        if (rp.status == PathStatus::Unreachable) ++unreachable;
    std::cout << "built subgraph: n=" << g.n << " tree_edges=" << g.n - 1
              << " total_edges=" << h.edge_set.size() << " path_union=" << h.path_union.size()
              << " unreachable_paths=" << unreachable << " seed=" << seed_used << '\n';
    return kExitOk;
}

int cmd_query(const std::string& graph_path, const std::string& subgraph_path, int fault,
              bool do_certify) {
    Graph g = load_graph_file(graph_path);
    EftSubgraph h = subgraph_from_file(g, subgraph_path);
    FaultQueryResult r = do_certify ? certify(g, h, fault) : query_fault(g, h, fault);
    if (!r.interim) {
        std::cout << "fault=" << fault << " infeasible\n";
        return kExitOk;
    }
    std::cout << "fault=" << fault << (r.tree_fault ? " tree" : " non-tree")
              << " interim_cost=" << format_cost(r.interim->total_cost);
    if (r.exact_cost)
        std::cout << " exact_cost=" << format_cost(*r.exact_cost) << " ratio=" << r.ratio->num
                  << "/" << r.ratio->den;
    std::cout << '\n';
    save_arborescence(std::cout, *r.interim);
    return kExitOk;
}

int cmd_sweep(const std::string& graph_path, const std::string& subgraph_path,
              const std::string& report_path, bool tree_only, int workers) {
    Graph g = load_graph_file(graph_path);
    EftSubgraph h = subgraph_from_file(g, subgraph_path);
    FaultSweepSummary summary = sweep_all_faults(g, h, tree_only, workers);
    if (!report_path.empty()) {
        auto out = open_out(report_path);
        out << "fault_id\tinterim_cost\texact_cost\tratio_num\tratio_den\tt_H_micros\tt_G_micros"
               "\tfeasible\n";
        for (const auto& row : summary.rows)
            out << row.fault << '\t' << row.interim_cost << '\t' << row.exact_cost << '\t'
                << row.ratio.num << '\t' << row.ratio.den << '\t' << row.t_h_micros << '\t'
                << row.t_g_micros << '\t' << (row.feasible ? 1 : 0) << '\n';
    }
    std::cout << "faults=" << summary.rows.size() << " max_ratio=" << summary.max_ratio.num << "/"
              << summary.max_ratio.den << " mean_ratio=" << summary.mean_ratio
              << " infeasible=" << summary.infeasible_count << '\n';
    return kExitOk;
}

int cmd_analyze(const std::string& graph_path, std::uint64_t seed, int workers,
                const std::string& report_path) {
    Graph g = load_graph_file(graph_path);
    auto built = build_eft_perturbed(g, seed, workers);
    if (!built) {
        std::cerr << "graph admits no arborescence\n";
        return kExitViolation;
    }
    ColorAssignment ca = color_edges(built->sub);
    ChargeLedger ledger = compute_charges(built->graph, built->sub, ca);
    ChargeBoundReport charge = check_charge_bound(ledger, ca);
    SizeBoundReport size = check_size_bound(built->sub, g.n);

    if (!report_path.empty()) {
        auto out = open_out(report_path);
        out << "# seed=" << built->seed_used << '\n';
        out << "x\ty\tcolors\tclasses\n";
        for (const auto& [pair, entries] : ledger.charges) {
            out << pair.first << '\t' << pair.second << '\t';
            for (std::size_t i = 0; i < entries.size(); ++i)
                out << (i ? "," : "") << entries[i].color;
            out << '\t';
            for (std::size_t i = 0; i < entries.size(); ++i)
                out << (i ? "," : "")
                    << (entries[i].cls == ChargeClass::Intersecting ? "intersecting"
                                                                    : "non-intersecting");
            out << '\n';
        }
    }
    std::cout << "seed=" << built->seed_used << " path_union=" << size.path_union_edges
              << " size_bound_ok=" << (size.ok ? 1 : 0) << " max_charges=" << charge.max_charges
              << " charge_bound_ok=" << (charge.ok ? 1 : 0) << '\n';
    if (!charge.ok) std::cout << "violation: " << charge.reason << '\n';
    return charge.ok && size.ok ? kExitOk : kExitViolation;
}

int cmd_matroid_build(const std::string& matroid_path, int k, const std::string& out_path) {
    MatroidInstance inst = matroid_from_file(matroid_path);
    FtpSet s = build_ftp(*inst.matroid, inst.costs, k);
    auto out = open_out(out_path);
    save_ftp(out, s);
    int rank = rank_of(*inst.matroid, s.layers[0].elements);
    std::cout << "k=" << k << " layers=" << s.layers.size() << " |S|=" << s.union_elems.size()
              << " k*rank=" << static_cast<long long>(k) * rank << '\n';
    return kExitOk;
}

int cmd_matroid_verify(const std::string& matroid_path, const std::string& set_path, int k) {
    MatroidInstance inst = matroid_from_file(matroid_path);
    auto in = open_in(set_path);
    std::vector<int> s = load_ftp_elements(in);
    FtpVerifyResult result = verify_ftp(*inst.matroid, inst.costs, s, k);
    if (result.ok) {
        std::cout << "ok: S is a " << k << "-FTP (|S|=" << s.size() << ")\n";
        return kExitOk;
    }
    std::cout << "counterexample F={";
    for (std::size_t i = 0; i < result.counterexample.size(); ++i)
        std::cout << (i ? "," : "") << result.counterexample[i];
    std::cout << "}: basis cost in S\\F = " << format_cost(result.basis_in_s.cost) << " (size "
              << result.basis_in_s.elements.size() << "), in E\\F = "
              << format_cost(result.basis_in_e.cost) << " (size "
              << result.basis_in_e.elements.size() << ")\n";
    return kExitViolation;
}

int cmd_matroid_lower_bound(int n, int k, std::uint64_t seed) {
    LowerBoundInstance inst = lower_bound_multigraph(n, k, seed);
    FtpSet s = build_ftp(*inst.matroid, inst.costs, k);
    FtpVerifyResult result = verify_ftp(*inst.matroid, inst.costs, s.union_elems, k);
    long long bound = static_cast<long long>(k) * (n - 1);
    std::cout << "seed=" << seed << " ground=" << inst.matroid->ground_size()
              << " |S|=" << s.union_elems.size() << " k(n-1)=" << bound
              << " verified=" << (result.ok ? 1 : 0) << '\n';
    return result.ok && static_cast<long long>(s.union_elems.size()) >= bound ? kExitOk
                                                                              : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse fault-tolerant subgraphs for min-cost arborescences and matroid bases"};
    app.require_subcommand(1);

    std::string graph_path, subgraph_path, out_path, report_path, prov_path, matroid_path,
        set_path;
    std::uint64_t seed = 0;
    int workers = 1, fault = 0, k = 1, n = 2, cost_max = 100;
    double density = 0.5;
    bool perturb = false, do_certify = false, all_edges = false;

    auto* gen = app.add_subcommand("gen", "generate a seeded random graph");
    gen->add_option("--n", n)->required();
    gen->add_option("--density", density);
    gen->add_option("--cost-max", cost_max);
    gen->add_option("--seed", seed);
    gen->add_option("--out", out_path)->required();

    auto* build = app.add_subcommand("build", "build the fault-tolerant subgraph");
    build->add_option("--graph", graph_path)->required();
    build->add_option("--seed", seed);
    build->add_option("--out", out_path)->required();
    build->add_option("--provenance", prov_path);
    build->add_option("--workers", workers);
    build->add_flag("--perturb", perturb, "build under seeded cost perturbation");

    auto* query = app.add_subcommand("query", "answer a single-edge-fault query");
    query->add_option("--graph", graph_path)->required();
    query->add_option("--subgraph", subgraph_path)->required();
    query->add_option("--fault", fault)->required();
    query->add_flag("--certify", do_certify, "also compute the exact cost and ratio");

    auto* sweep = app.add_subcommand("sweep", "certify every fault and emit a report");
    sweep->add_option("--graph", graph_path)->required();
    sweep->add_option("--subgraph", subgraph_path)->required();
    sweep->add_option("--report", report_path);
    sweep->add_option("--workers", workers);
    sweep->add_flag("--all-edges", all_edges, "sweep non-tree edges too (default)");
    sweep->add_flag("--tree-only", perturb, "sweep base-tree edges only");

    auto* analyze = app.add_subcommand("analyze", "run the charging diagnostics");
    analyze->add_option("--graph", graph_path)->required();
    analyze->add_option("--seed", seed);
    analyze->add_option("--workers", workers);
    analyze->add_option("--charging-report", report_path);

    auto* matroid = app.add_subcommand("matroid", "fault-tolerant preservers for matroid bases");
    matroid->require_subcommand(1);
    auto* mbuild = matroid->add_subcommand("build", "union of k+1 greedy bases");
    mbuild->add_option("--matroid", matroid_path)->required();
    mbuild->add_option("--k", k)->required();
    mbuild->add_option("--out", out_path)->required();
    auto* mverify = matroid->add_subcommand("verify", "exhaustive k-FTP check");
    mverify->add_option("--matroid", matroid_path)->required();
    mverify->add_option("--set", set_path)->required();
    mverify->add_option("--k", k)->required();
    auto* mlower = matroid->add_subcommand("lower-bound", "replicated-tree lower-bound instance");
    mlower->add_option("--n", n)->required();
    mlower->add_option("--k", k)->required();
    mlower->add_option("--seed", seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen->parsed()) return cmd_gen(n, density, cost_max, seed, out_path);
        if (build->parsed())
            return cmd_build(graph_path, seed, perturb, workers, out_path, prov_path);
        if (query->parsed()) return cmd_query(graph_path, subgraph_path, fault, do_certify);
        if (sweep->parsed())
            return cmd_sweep(graph_path, subgraph_path, report_path, perturb, workers);
        if (analyze->parsed()) return cmd_analyze(graph_path, seed, workers, report_path);
        if (matroid->parsed()) {
            if (mbuild->parsed()) return cmd_matroid_build(matroid_path, k, out_path);
            if (mverify->parsed()) return cmd_matroid_verify(matroid_path, set_path, k);
            if (mlower->parsed()) return cmd_matroid_lower_bound(n, k, seed);
        }
    } catch (const CertificationFailure& e) {
        std::cerr << "certification failure: " << e.what() << '\n';
        return kExitViolation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
