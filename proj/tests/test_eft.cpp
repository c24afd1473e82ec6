#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "arborftp/eft.hpp"
#include "arborftp/gen.hpp"

using namespace arborftp;

namespace {

Graph graph_from(const std::string& text) {
    std::istringstream in(text);
    return load_graph(in);
}

const char* kReference =
    "3 4 0\n"
    "0 1 1\n"
    "0 2 5\n"
    "1 2 1\n"
    "2 1 2\n";

}  // namespace

TEST_CASE("partition splits the tree at a vertex") {
    Graph g = graph_from(
        "5 4 0\n"
        "0 1 1\n"
        "1 2 1\n"
        "2 3 1\n"
        "0 4 1\n");
    auto t = min_cost_arborescence(g);
    REQUIRE(t);
    TreePartition p = partition(g, *t, 1);
    CHECK(p.subtree == std::vector<int>{1, 2, 3});
    CHECK(p.rest == std::vector<int>{0, 4});
    CHECK(p.in_subtree[2]);
    CHECK_FALSE(p.in_subtree[4]);

    TreePartition leaf = partition(g, *t, 3);
    CHECK(leaf.subtree == std::vector<int>{3});
    CHECK(leaf.rest.size() == 4);
}

TEST_CASE("replacement paths of the reference instance") {
    Graph g = graph_from(kReference);
    auto t = min_cost_arborescence(g);
    REQUIRE(t);

    ReplacementPath r1 = replacement_path(g, *t, 1);
    CHECK(r1.fault_edge == 0);
    REQUIRE(r1.status == PathStatus::Found);
    CHECK(r1.entry_vertex == 0);
    CHECK(r1.edges == std::vector<int>{1, 3});
    CHECK(r1.key.cost == 7 * kCostScale);

    ReplacementPath r2 = replacement_path(g, *t, 2);
    CHECK(r2.fault_edge == 2);
    REQUIRE(r2.status == PathStatus::Found);
    CHECK(r2.entry_vertex == 0);
    CHECK(r2.edges == std::vector<int>{1});
    CHECK(r2.key.cost == 5 * kCostScale);
}

TEST_CASE("replacement path enters the detached subtree only at its end") {
    // ensures the path source set is the root-side component, not just the root
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Graph g = gen_random_graph(4 + static_cast<int>(seed % 5), 0.45, 10, seed * 7 + 2);
        auto t = min_cost_arborescence(g);
        REQUIRE(t);
        for (int v = 0; v < g.n; ++v) {
            if (v == g.root) continue;
            ReplacementPath rp = replacement_path(g, *t, v);
            if (rp.status != PathStatus::Found) continue;
            TreePartition p = partition(g, *t, v);
            CHECK_FALSE(p.in_subtree[rp.entry_vertex]);
            // interior vertices stay in the subtree: a rest-side interior
            // vertex would be a strictly closer entry point
            for (std::size_t j = 0; j + 1 < rp.edges.size(); ++j)
                CHECK(p.in_subtree[g.edges[rp.edges[j]].head]);
            REQUIRE(!rp.edges.empty());
            CHECK(g.edges[rp.edges.back()].head == v);
            for (int eid : rp.edges) CHECK(eid != rp.fault_edge);
        }
    }
}

TEST_CASE("build on the reference instance") {
    Graph g = graph_from(kReference);
    auto h = build_eft_subgraph(g);
    REQUIRE(h);
    CHECK(h->base_tree.total_cost == 2 * kCostScale);
    CHECK(h->edge_set == std::vector<int>{0, 1, 2, 3});
    CHECK(h->path_union == std::vector<int>{1, 3});
    CHECK(h->first_path_index[1] == 1);
    CHECK(h->first_path_index[3] == 1);
    CHECK(h->first_path_index[0] == 0);
    CHECK(h->first_path_index[2] == 0);
    CHECK(h->path_index_of_vertex(1, g.root) == 1);
    CHECK(h->path_index_of_vertex(2, g.root) == 2);
}

TEST_CASE("unreachable replacement is recorded, not fatal") {
    Graph g = graph_from("2 1 0\n0 1 3\n");  // losing the only edge disconnects 1
    auto h = build_eft_subgraph(g);
    REQUIRE(h);
    REQUIRE(h->paths.size() == 1);
    CHECK(h->paths[0].status == PathStatus::Unreachable);
    CHECK(h->path_union.empty());
    CHECK(h->edge_set == std::vector<int>{0});
}

TEST_CASE("infeasible graph yields nullopt") {
    Graph g = graph_from("3 1 0\n0 1 1\n");
    CHECK_FALSE(build_eft_subgraph(g).has_value());
    CHECK_FALSE(build_eft_perturbed(g, 0).has_value());
}

TEST_CASE("worker count does not change the result") {
    Graph g = gen_random_graph(40, 0.2, 25, 11);
    auto h1 = build_eft_subgraph(g, 1);
    auto h4 = build_eft_subgraph(g, 4);
    REQUIRE(h1);
    REQUIRE(h4);
    CHECK(h1->edge_set == h4->edge_set);
    CHECK(h1->first_path_index == h4->first_path_index);
    for (std::size_t i = 0; i < h1->paths.size(); ++i)
        CHECK(h1->paths[i].edges == h4->paths[i].edges);
}

TEST_CASE("perturbed build reports the seed and clears ties") {
    Graph g = graph_from(
        "3 3 0\n"
        "0 1 1\n"
        "1 2 1\n"
        "0 2 2\n");  // two equal-cost 0->2 routes
    auto b = build_eft_perturbed(g, 5);
    REQUIRE(b);
    CHECK_FALSE(b->sub.tie_detected);
    CHECK(b->seed_used >= 5);
    // perturbed costs recover the original scale
    for (int i = 0; i < g.m(); ++i)
        CHECK(b->graph.edges[i].cost / (Cost{1} << 20) == g.edges[i].cost);
}

TEST_CASE("subgraph serialization round-trips against the base graph") {
    Graph g = gen_random_graph(15, 0.3, 30, 21);
    auto h = build_eft_subgraph(g);
    REQUIRE(h);
    std::ostringstream out;
    save_subgraph(out, g, h->edge_set);
    std::istringstream in(out.str());
    std::vector<int> ids = load_subgraph(in, g);
    CHECK(ids == h->edge_set);
}

TEST_CASE("subgraph loader rejects mismatched files") {
    Graph g = graph_from(kReference);
    auto h = build_eft_subgraph(g);
    REQUIRE(h);
    std::ostringstream out;
    save_subgraph(out, g, h->edge_set);

    Graph other = graph_from("4 1 0\n0 1 1\n");
    std::istringstream in1(out.str());
    CHECK_THROWS(load_subgraph(in1, other));

    std::string tampered = out.str();
    tampered.replace(tampered.find("0 1 1"), 5, "0 1 9");
    std::istringstream in2(tampered);
    CHECK_THROWS(load_subgraph(in2, g));
}

TEST_CASE("edge set always contains the base tree and all path edges") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Graph g = gen_random_graph(12, 0.35, 15, seed * 13 + 3);
        auto h = build_eft_subgraph(g);
        REQUIRE(h);
        for (int v = 0; v < g.n; ++v)
            if (v != g.root)
                CHECK(std::binary_search(h->edge_set.begin(), h->edge_set.end(),
                                         h->base_tree.parent_edge[v]));
        for (const ReplacementPath& rp : h->paths)
            for (int eid : rp.edges) {
                CHECK(std::binary_search(h->edge_set.begin(), h->edge_set.end(), eid));
                CHECK(std::binary_search(h->path_union.begin(), h->path_union.end(), eid));
                CHECK(h->first_path_index[eid] >= 1);
            }
    }
}
