#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "modcert/graph.hpp"
#include "modcert/modularity.hpp"
#include "modcert/ode_lower.hpp"
#include "modcert/phase_sim.hpp"
#include "modcert/rng.hpp"

using namespace modcert;

namespace {

PhaseSimOptions opts_for(std::int64_t n, double eps, std::uint64_t seed) {
    PhaseSimOptions o;
    o.n = n;
    o.eps = eps;
    o.seed = seed;
    return o;
}

// Triangle incidence count (each triangle contributes once per edge); used
// only as a distribution fingerprint, so no normalization is needed.
std::int64_t count_triangles(const MultiGraph& g) {
    const auto adj = g.adjacency();
    std::int64_t count = 0;
    for (const auto& [u, v] : g.edges) {
        if (u == v) continue;
        for (std::int64_t i = adj.offset[u]; i < adj.offset[u + 1]; ++i) {
            const int w = adj.neighbor[i];
            if (w == u || w == v) continue;
            for (std::int64_t j = adj.offset[v]; j < adj.offset[v + 1]; ++j)
                if (adj.neighbor[j] == w) ++count;
        }
    }
    return count;
}

std::int64_t boundary_edges(const MultiGraph& g, const std::vector<std::uint8_t>& mask) {
    std::int64_t b = 0;
    for (const auto& [u, v] : g.edges) b += (mask[u] != mask[v]);
    return b;
}

}  // namespace

TEST_CASE("same seed reproduces the whole run") {
    const auto r1 = run_phase_simulation(opts_for(2000, 0.037562, 99));
    const auto r2 = run_phase_simulation(opts_for(2000, 0.037562, 99));
    CHECK(r1.q == r2.q);
    CHECK(r1.v3 == r2.v3);
    CHECK(r1.vbar3 == r2.vbar3);
    CHECK(r1.phase0_edges == r2.phase0_edges);
    const auto r3 = run_phase_simulation(opts_for(2000, 0.037562, 100));
    CHECK(r1.q != r3.q);
}

TEST_CASE("single-vertex phase 0") {
    // ceil(eps n) = 1: the component is one vertex with no explored edges.
    const auto r = run_phase_simulation(opts_for(200, 0.004, 5));
    CHECK(r.phase0_edges == 0.0);
}

TEST_CASE("exact conservation laws at small n") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        PhaseExploration sim(opts_for(100, 0.037562, seed));
        sim.run_phase0();
        sim.run_phase1();
        const auto& r = sim.result();
        CHECK(r.h_end == 0);
        const double x0_at_p2 = r.x0_end;
        sim.run_phase2();
        CHECK(r.z0_end + r.z1_end == doctest::Approx(r.t2_steps).epsilon(1e-15));
        sim.run_phase3();
        // W counts partition the untouched vertices exactly.
        CHECK(r.w_end[0] + r.w_end[1] + r.w_end[2] + r.w_end[3] ==
              doctest::Approx(x0_at_p2).epsilon(1e-15));
        sim.close_cherries();
        sim.assemble_and_score();
        CHECK(r.q <= 1.0);
    }
}

TEST_CASE("counter monotonicity along recorded trajectories") {
    auto opts = opts_for(20000, 0.037562, 3);
    const auto r = run_phase_simulation(opts);
    for (std::size_t i = 1; i < r.traj1.size(); ++i) {
        CHECK(r.traj1[i][1] <= r.traj1[i - 1][1]);  // X0 nonincreasing
        CHECK(r.traj1[i][4] >= r.traj1[i - 1][4]);  // A nondecreasing
    }
    for (std::size_t i = 1; i < r.traj2.size(); ++i) {
        CHECK(r.traj2[i][1] >= r.traj2[i - 1][1]);  // Z0 nondecreasing
        CHECK(r.traj2[i][2] >= r.traj2[i - 1][2]);  // Z1 nondecreasing
    }
    for (std::size_t i = 1; i < r.traj3.size(); ++i) {
        CHECK(r.traj3[i][3] >= r.traj3[i - 1][3]);  // W2 nondecreasing
        CHECK(r.traj3[i][4] >= r.traj3[i - 1][4]);  // W3 nondecreasing
    }
}

TEST_CASE("closure only improves the component and respects the 4x budget") {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        PhaseExploration sim(opts_for(20000, 0.037562, seed));
        sim.run_phase0();
        sim.run_phase1();
        sim.run_phase2();
        sim.run_phase3();
        const auto c3 = sim.c3_mask();
        sim.close_cherries();
        const auto& r = sim.result();
        CHECK(r.qrbar3 >= r.qr3 - 1e-12);
        CHECK(r.cbar_within_4x);
        CHECK_FALSE(r.cherry_guard_hit);

        // Every absorbed cherry strictly shrinks the boundary.
        const auto g = sim.realized_graph();
        const auto b3 = boundary_edges(g, c3);
        const auto bbar = boundary_edges(g, sim.cbar3_mask());
        CHECK(bbar <= b3 - r.closure_absorbed);

        // No absorbable cherry remains outside.
        std::vector<int> into(g.n, 0);
        for (const auto& [u, v] : g.edges) {
            if (sim.cbar3_mask()[u] && !sim.cbar3_mask()[v]) ++into[v];
            if (sim.cbar3_mask()[v] && !sim.cbar3_mask()[u]) ++into[u];
        }
        for (int v = 0; v < g.n; ++v)
            if (!sim.cbar3_mask()[v]) CHECK(into[v] <= 1);
    }
}

TEST_CASE("assembled partition is valid, windowed, and matches its report") {
    PhaseExploration sim(opts_for(20000, 0.037562, 12));
    sim.run_phase0();
    sim.run_phase1();
    sim.run_phase2();
    sim.run_phase3();
    sim.close_cherries();
    sim.assemble_and_score();
    const auto& r = sim.result();
    const auto g = sim.realized_graph();

    // Rebuild the deterministic remainder partition and verify the score.
    const auto rem = partition_remainder(g, sim.cbar3_mask(), g.n);
    VertexPartition partition;
    std::vector<int> cbar;
    for (int v = 0; v < g.n; ++v)
        if (sim.cbar3_mask()[v]) cbar.push_back(v);
    partition.blocks.push_back(cbar);
    for (const auto& b : rem.blocks) partition.blocks.push_back(b);
    partition.validate(g.n);
    CHECK(modularity(g, partition) == doctest::Approx(r.q).epsilon(1e-15));
    CHECK(r.blocks_outside_window == 0);

    // Weighted-average identity on the assembled partition.
    const auto report = modularity_report(g, partition);
    double weighted = 0.0;
    for (const auto& b : report.blocks)
        weighted += static_cast<double>(b.size) / static_cast<double>(g.n) * b.q_r;
    CHECK(std::abs(report.q - weighted) < 1e-12);

    // Blocks of the remainder partition induce connected subgraphs.
    const auto adj = g.adjacency();
    for (const auto& block : rem.blocks) {
        std::vector<std::uint8_t> in(g.n, 0);
        for (int v : block) in[v] = 1;
        std::vector<int> stack{block[0]};
        std::set<int> seen{block[0]};
        while (!stack.empty()) {
            const int x = stack.back();
            stack.pop_back();
            for (std::int64_t i = adj.offset[x]; i < adj.offset[x + 1]; ++i) {
                const int w = adj.neighbor[i];
                if (in[w] && !seen.count(w)) {
                    seen.insert(w);
                    stack.push_back(w);
                }
            }
        }
        CHECK(seen.size() == block.size());
    }
}

TEST_CASE("deferred decisions reproduce the plain sampler distribution") {
    // Triangle counts from phase-explored-then-completed graphs against
    // direct configuration samples, compared with a two-sample chi-square.
    const int n = 100, trials = 10000;
    std::map<std::int64_t, int> left, right;
    const auto seq = DegreeSequence::parse("3:100");
    for (int i = 0; i < trials; ++i) {
        PhaseExploration sim(opts_for(n, 0.037562, Rng::mix(1234, i)));
        sim.run_phase0();
        sim.run_phase1();
        sim.run_phase2();
        sim.run_phase3();
        sim.complete_matching();
        left[count_triangles(sim.realized_graph())] += 1;
        right[count_triangles(sample_configuration(seq, Rng::mix(4321, i)))] += 1;
    }
    // Merge sparse bins (combined count < 20) into their neighbor.
    std::map<std::int64_t, std::pair<int, int>> bins;
    for (const auto& [k, v] : left) bins[k].first += v;
    for (const auto& [k, v] : right) bins[k].second += v;
    std::vector<std::pair<int, int>> merged;
    std::pair<int, int> acc{0, 0};
    for (const auto& [k, v] : bins) {
        acc.first += v.first;
        acc.second += v.second;
        if (acc.first + acc.second >= 20) {
            merged.push_back(acc);
            acc = {0, 0};
        }
    }
    if (acc.first + acc.second > 0) {
        if (merged.empty()) merged.push_back(acc);
        else {
            merged.back().first += acc.first;
            merged.back().second += acc.second;
        }
    }
    REQUIRE(merged.size() >= 2);
    double chi2 = 0.0;
    for (const auto& [a, b] : merged) {
        const double d = static_cast<double>(a - b);
        chi2 += d * d / static_cast<double>(a + b);
    }
    // Wilson-Hilferty 0.999 quantile for df = bins - 1.
    const double df = static_cast<double>(merged.size() - 1);
    const double z = 3.090232;
    const double base = 1.0 - 2.0 / (9.0 * df) + z * std::sqrt(2.0 / (9.0 * df));
    const double threshold = df * base * base * base;
    CHECK(chi2 < threshold);
}

TEST_CASE("urn simulation edge cases") {
    CHECK(simulate_urns(1000, 0, 1) == 0);
    CHECK(simulate_urns(1000, 1000, 1) == 1000);  // 2b = 2a fills every urn
    CHECK_THROWS_AS(simulate_urns(10, 11, 1), std::invalid_argument);

    const auto filled = simulate_urns(5000, 3000, 7);
    const double expected = urn_fraction(5000.0, 3000.0);
    CHECK(std::abs(static_cast<double>(filled) - expected) / expected < 0.025);
}

TEST_CASE("terminal fractions track the closed forms at moderate n") {
    const double eps = 0.037562;
    const auto r = run_phase_simulation(opts_for(50000, eps, 31));
    const auto p1 = phase1_of(eps);
    const auto p2 = t2_of(eps);
    const auto sched = schedule_of(eps);
    CHECK(std::abs(r.phase0_edges - t0_of(eps)) < 0.01);
    CHECK(std::abs(r.x0_end - p1.x0) < 0.01);
    CHECK(std::abs(r.x1_end - p1.x1) < 0.01);
    CHECK(std::abs(r.z0_end - p2.z0) < 0.01);
    CHECK(std::abs(r.v3 - sched.v3) < 0.01);
    CHECK(std::abs(r.qr3 - sched.qr) < 0.02);
}

TEST_CASE("invalid options are rejected") {
    CHECK_THROWS_AS(run_phase_simulation(opts_for(100, 0.95, 1)), std::invalid_argument);
    CHECK_THROWS_AS(run_phase_simulation(opts_for(1, 0.1, 1)), std::invalid_argument);
}
