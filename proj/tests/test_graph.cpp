#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "sapt/graph.hpp"
#include "sapt/graph_gen.hpp"
#include "sapt/weights.hpp"

using namespace sapt;

TEST_CASE("load_edge_list builds P3 and preserves order") {
    const Graph g = load_edge_list("src,dst\na,b\nb,c");
    REQUIRE(g.order() == 3);
    CHECK(g.edges.size() == 2);
    CHECK(g.ids[0] == "a");
    CHECK(g.ids[1] == "b");
    CHECK(g.ids[2] == "c");
    CHECK(g.index_of("c") == 2);
}

TEST_CASE("load_edge_list rejects bad input with row numbers") {
    CHECK_THROWS_WITH(load_edge_list("src,dst\na,a"),
                      Catch::Matchers::ContainsSubstring("self-loop at row 2"));
    CHECK_THROWS_WITH(load_edge_list("src,dst\na"), Catch::Matchers::ContainsSubstring("row 2"));
    CHECK_THROWS_AS(load_edge_list("foo,bar\na,b"), input_error);
    // CRLF and duplicate rows are tolerated
    const Graph g = load_edge_list("src,dst\r\na,b\r\nb,a\r\n");
    CHECK(g.order() == 2);
    CHECK(g.edges.size() == 1);
}

TEST_CASE("knn_weights: P3 at k = 1 is the adjacency, k = 2 saturates") {
    const Graph g = load_edge_list("src,dst\na,b\nb,c");
    const WeightMatrix w1 = knn_weights(g, 1);
    CHECK(w1.degree == std::vector<int>{1, 2, 1});
    CHECK(w1.at(0, 1));
    CHECK_FALSE(w1.at(0, 2));
    const WeightMatrix w2 = knn_weights(g, 2);
    CHECK(w2.degree == std::vector<int>{2, 2, 2});
    for (int i = 0; i < 3; ++i) {
        CHECK_FALSE(w2.at(i, i));
        for (int j = 0; j < 3; ++j) {
            if (i != j) CHECK(w2.at(i, j));
        }
    }
}

TEST_CASE("knn_weights: star K_{1,4} degrees at k = 1") {
    const Graph g = load_edge_list("src,dst\nc,l1\nc,l2\nc,l3\nc,l4");
    const WeightMatrix w = knn_weights(g, 1);
    CHECK(w.degree[0] == 4);
    for (int i = 1; i < 5; ++i) CHECK(w.degree[static_cast<std::size_t>(i)] == 1);
    CHECK(classify_vertex(w, 0) == ConnectivityClass::HighConnected); // 4 > 5/2
    CHECK(classify_vertex(w, 1) == ConnectivityClass::LowConnected);
}

TEST_CASE("classify_vertex: degenerate rows") {
    const Graph g = load_edge_list("src,dst\na,b\nb,c");
    const WeightMatrix w2 = knn_weights(g, 2);
    for (int i = 0; i < 3; ++i) CHECK(classify_vertex(w2, i) == ConnectivityClass::Degenerate);
}

TEST_CASE("knn_weights rejects disconnected graphs naming a pair") {
    const Graph g = load_edge_list("src,dst\na,b\nc,d");
    CHECK_THROWS_WITH(knn_weights(g, 1), Catch::Matchers::ContainsSubstring("no path between"));
}

TEST_CASE("weight matrix structural invariants and k-monotonicity") {
    const Graph g = planar_triangulation(40, 7);
    WeightMatrix prev;
    for (int k = 1; k <= 4; ++k) {
        const WeightMatrix w = knn_weights(g, k);
        for (int i = 0; i < w.n; ++i) {
            CHECK_FALSE(w.at(i, i)); // zero trace
            int recount = 0;
            for (int j = 0; j < w.n; ++j) {
                recount += w.at(i, j) ? 1 : 0;
                CHECK(w.at(i, j) == w.at(j, i)); // symmetry
            }
            CHECK(recount == w.degree[static_cast<std::size_t>(i)]);
        }
        if (k > 1) {
            for (int i = 0; i < w.n; ++i) {
                for (int j = 0; j < w.n; ++j) {
                    if (prev.at(i, j)) CHECK(w.at(i, j)); // entrywise monotone in k
                }
            }
        }
        prev = w;
    }
    // k >= diameter: all off-diagonal ones, everything degenerate
    const WeightMatrix wd = knn_weights(g, g.order());
    for (int i = 0; i < wd.n; ++i) {
        CHECK(wd.degree[static_cast<std::size_t>(i)] == wd.n - 1);
        CHECK(classify_vertex(wd, i) == ConnectivityClass::Degenerate);
    }
}

TEST_CASE("ring and grid generators") {
    const Graph r = ring_graph(8);
    CHECK(r.order() == 8);
    CHECK(r.edges.size() == 8);
    const WeightMatrix wr = knn_weights(r, 1);
    for (int i = 0; i < 8; ++i) CHECK(wr.degree[static_cast<std::size_t>(i)] == 2);

    const Graph gg = grid_graph(3, 4);
    CHECK(gg.order() == 12);
    CHECK(gg.edges.size() == 3 * 3 + 2 * 4); // horizontal + vertical
}

TEST_CASE("planar triangulation: edge-count audit, connectivity, determinism") {
    const int n = 338;
    const Graph g = planar_triangulation(n, 42);
    REQUIRE(g.order() == n);
    // planar triangulation: n-1 <= E <= 3n-6
    CHECK(g.edges.size() >= static_cast<std::size_t>(n - 1));
    CHECK(g.edges.size() <= static_cast<std::size_t>(3 * n - 6));
    const WeightMatrix w = knn_weights(g, 1); // throws if disconnected
    int max_deg = 0;
    for (int i = 0; i < n; ++i) max_deg = std::max(max_deg, w.degree[static_cast<std::size_t>(i)]);
    CHECK(max_deg <= n / 2); // low-connectivity regime at k = 1
    // deterministic given the seed
    const Graph g2 = planar_triangulation(n, 42);
    CHECK(g.edges == g2.edges);
    const Graph g3 = planar_triangulation(n, 43);
    CHECK(g.edges != g3.edges);
    // round-trips through the CSV form
    const Graph g4 = load_edge_list(to_edge_csv(g));
    CHECK(g4.order() == n);
    CHECK(g4.edges.size() == g.edges.size());
}
