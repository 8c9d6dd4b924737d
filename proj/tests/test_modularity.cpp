#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "modcert/graph.hpp"
#include "modcert/modularity.hpp"
#include "modcert/rng.hpp"

using namespace modcert;

namespace {

MultiGraph triangle() {
    MultiGraph g(3);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(0, 2);
    return g;
}

MultiGraph two_triangles() {
    MultiGraph g(6);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(0, 2);
    g.add_edge(3, 4);
    g.add_edge(4, 5);
    g.add_edge(3, 5);
    return g;
}

VertexPartition whole(int n) {
    VertexPartition p;
    p.blocks.emplace_back(n);
    std::iota(p.blocks[0].begin(), p.blocks[0].end(), 0);
    return p;
}

VertexPartition random_partition(int n, Rng& rng) {
    const int k = 1 + static_cast<int>(rng.below(4));
    VertexPartition p;
    p.blocks.assign(k, {});
    for (int v = 0; v < n; ++v) p.blocks[rng.below(k)].push_back(v);
    std::erase_if(p.blocks, [](const auto& b) { return b.empty(); });
    return p;
}

}  // namespace

TEST_CASE("block statistics with the loop convention") {
    const auto tri = triangle();
    const std::vector<int> all{0, 1, 2};
    const auto st = block_stats(tri, all);
    CHECK(st.e_within == 3);
    CHECK(st.volume == 6);

    MultiGraph edge(2);
    edge.add_edge(0, 1);
    const std::vector<int> u{0};
    CHECK(block_stats(edge, u).e_within == 0);
    CHECK(block_stats(edge, u).volume == 1);

    MultiGraph loop(1);
    loop.add_edge(0, 0);
    const std::vector<int> v{0};
    CHECK(block_stats(loop, v).e_within == 1);
    CHECK(block_stats(loop, v).volume == 2);

    const std::vector<int> bad{5};
    CHECK_THROWS_AS(block_stats(tri, bad), std::out_of_range);
}

TEST_CASE("modularity basics") {
    const auto tri = triangle();
    CHECK(modularity(tri, whole(3)) == doctest::Approx(0.0).epsilon(1e-15));

    CHECK(modularity(MultiGraph(4), whole(4)) == 0.0);

    VertexPartition split;
    split.blocks = {{0, 1, 2}, {3, 4, 5}};
    CHECK(modularity(two_triangles(), split) == doctest::Approx(0.5).epsilon(1e-15));

    VertexPartition invalid;
    invalid.blocks = {{0, 1}};
    CHECK_THROWS_AS(modularity(tri, invalid), std::invalid_argument);
}

TEST_CASE("relative modularity") {
    const auto g = two_triangles();
    std::vector<int> all(6);
    std::iota(all.begin(), all.end(), 0);
    CHECK(relative_modularity(g, all) == doctest::Approx(0.0).epsilon(1e-15));  // 2-regular whole

    const std::vector<int> one{0, 1, 2};
    CHECK(relative_modularity(g, one) == doctest::Approx(0.5).epsilon(1e-15));

    MultiGraph k2(2);
    k2.add_edge(0, 1);
    const std::vector<int> both{0, 1};
    CHECK(relative_modularity(k2, both) == doctest::Approx(0.0).epsilon(1e-15));

    const std::vector<int> empty;
    CHECK_THROWS_AS(relative_modularity(g, empty), std::invalid_argument);
}

TEST_CASE("weighted-average identity") {
    Rng rng(404);
    for (int trial = 0; trial < 25; ++trial) {
        const auto g = sample_configuration(DegreeSequence::parse("1:4,2:4,3:4"), Rng::mix(11, trial));
        const auto p = random_partition(g.n, rng);
        const auto report = modularity_report(g, p);
        double weighted = 0.0;
        for (const auto& b : report.blocks)
            weighted += static_cast<double>(b.size) / static_cast<double>(g.n) * b.q_r;
        CHECK(std::abs(report.q - weighted) < 1e-12);
    }
}

TEST_CASE("brute force on the named small graphs") {
    MultiGraph k2(2);
    k2.add_edge(0, 1);
    const auto r2 = brute_force_qstar(k2);
    CHECK(r2.qstar == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(r2.argmax.blocks.size() == 1);  // fewest blocks among the ties

    const auto r3 = brute_force_qstar(triangle());
    CHECK(r3.qstar == doctest::Approx(0.0).epsilon(1e-15));

    MultiGraph p4(4);
    p4.add_edge(0, 1);
    p4.add_edge(1, 2);
    p4.add_edge(2, 3);
    const auto r4 = brute_force_qstar(p4);
    CHECK(r4.qstar == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    REQUIRE(r4.argmax.blocks.size() == 2);
    CHECK(r4.argmax.blocks[0] == std::vector<int>{0, 1});
    CHECK(r4.argmax.blocks[1] == std::vector<int>{2, 3});

    MultiGraph big(11);
    CHECK_THROWS_AS(brute_force_qstar(big), std::invalid_argument);
}

TEST_CASE("brute force dominates sampled partitions and never goes negative") {
    Rng rng(777);
    for (int trial = 0; trial < 10; ++trial) {
        const auto g = sample_configuration(DegreeSequence::parse("1:2,2:2,3:2"), Rng::mix(13, trial));
        const auto best = brute_force_qstar(g);
        CHECK(best.qstar >= -1e-15);
        CHECK(best.qstar >= modularity(g, best.argmax) - 1e-15);
        for (int k = 0; k < 10; ++k) {
            const auto p = random_partition(g.n, rng);
            CHECK(best.qstar >= modularity(g, p) - 1e-12);
        }
    }
}

TEST_CASE("merging two blocks changes q by the pairwise quantity") {
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = sample_configuration(DegreeSequence::parse("2:4,3:4"), Rng::mix(17, trial));
        auto p = random_partition(g.n, rng);
        if (p.blocks.size() < 2) continue;
        const auto report = modularity_report(g, p);
        // Cross edges between blocks 0 and 1.
        std::vector<int> bid(g.n, -1);
        for (std::size_t b = 0; b < p.blocks.size(); ++b)
            for (int v : p.blocks[b]) bid[v] = static_cast<int>(b);
        std::int64_t cross = 0;
        for (const auto& [u, v] : g.edges)
            if ((bid[u] == 0 && bid[v] == 1) || (bid[u] == 1 && bid[v] == 0)) ++cross;
        const double m = static_cast<double>(g.edge_count());
        const double vol0 = static_cast<double>(report.blocks[0].volume);
        const double vol1 = static_cast<double>(report.blocks[1].volume);
        const double predicted = static_cast<double>(cross) / m - vol0 * vol1 / (2.0 * m * m);

        VertexPartition merged;
        merged.blocks.push_back(p.blocks[0]);
        merged.blocks.back().insert(merged.blocks.back().end(), p.blocks[1].begin(), p.blocks[1].end());
        for (std::size_t b = 2; b < p.blocks.size(); ++b) merged.blocks.push_back(p.blocks[b]);
        CHECK(std::abs(modularity(g, merged) - report.q - predicted) < 1e-12);
    }
}

namespace {

MultiGraph path_graph(int n) {
    MultiGraph g(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

MultiGraph random_tree(int n, std::uint64_t seed, int max_degree) {
    Rng rng(seed);
    MultiGraph g(n);
    for (int v = 1; v < n; ++v) {
        int u;
        do {
            u = static_cast<int>(rng.below(v));
        } while (g.degree[u] >= max_degree);
        g.add_edge(u, v);
    }
    return g;
}

void check_blocks_connected(const MultiGraph& g, const VertexPartition& p) {
    const auto adj = g.adjacency();
    for (const auto& block : p.blocks) {
        std::vector<std::uint8_t> in(g.n, 0);
        for (int v : block) in[v] = 1;
        std::vector<int> stack{block[0]};
        std::vector<std::uint8_t> seen(g.n, 0);
        seen[block[0]] = 1;
        std::size_t reached = 1;
        while (!stack.empty()) {
            const int x = stack.back();
            stack.pop_back();
            for (std::int64_t i = adj.offset[x]; i < adj.offset[x + 1]; ++i) {
                const int w = adj.neighbor[i];
                if (in[w] && !seen[w]) {
                    seen[w] = 1;
                    ++reached;
                    stack.push_back(w);
                }
            }
        }
        CHECK(reached == block.size());
    }
}

}  // namespace

TEST_CASE("tree partition window on a path of 16") {
    const auto p = tree_partition(path_graph(16), 16);
    p.validate(16);
    check_blocks_connected(path_graph(16), p);
    for (const auto& b : p.blocks) {
        CHECK(b.size() >= 4);   // floor(sqrt(16))
        CHECK(b.size() <= 8);   // 2 * ceil(sqrt(16)), path has max degree 2
    }
}

TEST_CASE("tree partition base case keeps small trees whole") {
    const auto p = tree_partition(path_graph(7), 16);  // 7 <= 2*ceil(sqrt(16))
    CHECK(p.blocks.size() == 1);
    CHECK(p.blocks[0].size() == 7);
}

TEST_CASE("tree partition of random 200-vertex trees with max degree 3") {
    for (int trial = 0; trial < 5; ++trial) {
        const auto tree = random_tree(200, 1000 + trial, 3);
        const auto p = tree_partition(tree, 200);
        p.validate(200);
        check_blocks_connected(tree, p);
        const auto lo = static_cast<std::size_t>(std::floor(std::sqrt(200.0)));
        const auto hi = static_cast<std::size_t>(3 * std::ceil(std::sqrt(200.0)));
        for (const auto& b : p.blocks) {
            CHECK(b.size() >= lo);
            CHECK(b.size() <= hi);
        }
    }
}

TEST_CASE("tree partition rejects cycles and undersized trees") {
    MultiGraph c4(4);
    for (int i = 0; i < 4; ++i) c4.add_edge(i, (i + 1) % 4);
    CHECK_THROWS_AS(tree_partition(c4, 16), std::invalid_argument);
    CHECK_THROWS_AS(tree_partition(path_graph(2), 100), std::invalid_argument);
}

TEST_CASE("component baseline examples") {
    const auto two_tri = component_baseline(two_triangles());
    CHECK(two_tri.partition.blocks.size() == 2);
    CHECK(two_tri.q == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(two_tri.q >= two_tri.guarantee);

    // Perfect matching on n = 100: 50 edge components, q = 1 - 2/n.
    MultiGraph matching(100);
    for (int i = 0; i < 100; i += 2) matching.add_edge(i, i + 1);
    const auto match_res = component_baseline(matching);
    CHECK(match_res.q == doctest::Approx(0.98).epsilon(1e-12));

    MultiGraph isolated(3);
    isolated.add_edge(0, 1);
    CHECK_THROWS_AS(component_baseline(isolated), std::invalid_argument);
}

TEST_CASE("component baseline splits one large cycle inside the window") {
    const int n = 10000;
    MultiGraph cyc(n);
    for (int i = 0; i < n; ++i) cyc.add_edge(i, (i + 1) % n);
    const auto res = component_baseline(cyc);
    res.partition.validate(n);
    for (const auto& b : res.partition.blocks) {
        CHECK(b.size() >= 100);
        CHECK(b.size() <= 200);
    }
    CHECK(res.q >= res.guarantee);
    CHECK(res.q > 1.0 - 5.0 / std::sqrt(static_cast<double>(n)));
    CHECK(res.q < 1.0);
}
