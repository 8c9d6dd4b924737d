#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "modcert/graph.hpp"
#include "modcert/modularity.hpp"
#include "modcert/rng.hpp"

namespace modcert {

// Executes the phased exploration of a lazily revealed 3-regular
// configuration model (principle of deferred decisions): half-edges are
// matched only when tested, and the unmatched ones form the reservoir.
struct PhaseSimOptions {
    std::int64_t n = 0;
    double eps = 0.037562;
    std::uint64_t seed = 1;
    bool record_trajectories = true;
    // Snapshot cadence: every ceil(n / snapshot_div) steps.
    std::int64_t snapshot_div = 1000;
};

struct PhaseSimResult {
    std::int64_t n = 0;
    double eps = 0;
    std::uint64_t seed = 0;

    // Phase 0: vertices explored and edges revealed (fractions of n).
    double phase0_edges = 0;

    // Phase 1 terminal fractions and exact terminal H.
    double x0_end = 0, x1_end = 0, x23_end = 0, a_end = 0;
    double t1_steps = 0;
    std::int64_t h_end = 0;

    // Phase 2.
    double z0_end = 0, z1_end = 0, t2_steps = 0;
    double absorbed2_frac = 0;

    // Phase 3.
    std::array<double, 4> w_end{};
    double t3_steps = 0;
    double v3 = 0, e3 = 0, qr3 = 0;

    // Cherry closure.
    double vbar3 = 0, ebar3 = 0, qrbar3 = 0;
    std::int64_t closure_absorbed = 0;
    bool cherry_guard_hit = false;
    bool cbar_within_4x = false;

    // Final partition.
    double q = 0;
    std::int64_t block_count = 0;
    std::int64_t blocks_outside_window = 0;
    std::int64_t leftover_blocks = 0;
    std::int64_t min_big_block = 0, max_big_block = 0;

    // Trajectories: (t, values...) per phase, scaled by n.
    std::vector<std::array<double, 2>> traj0;  // t, explored
    std::vector<std::array<double, 6>> traj1;  // t, x0, x1, x23, a, h
    std::vector<std::array<double, 3>> traj2;  // t, z0, z1
    std::vector<std::array<double, 5>> traj3;  // t, w0, w1, w2, w3
};

// Staged exploration; stages must be run in order. Exposed so tests can
// exercise individual phases; run_phase_simulation drives the whole pipeline.
class PhaseExploration {
public:
    PhaseExploration(const PhaseSimOptions& opts);

    void run_phase0();
    void run_phase1();
    void run_phase2();
    void run_phase3();
    void close_cherries();
    void assemble_and_score();

    const PhaseSimResult& result() const { return res_; }
    PhaseSimResult& result() { return res_; }

    // Completes the matching uniformly; after this the realized multigraph is
    // fully known. close_cherries calls it automatically.
    void complete_matching();
    MultiGraph realized_graph() const;

    const std::vector<std::uint8_t>& c3_mask() const { return in_c3_; }
    const std::vector<std::uint8_t>& cbar3_mask() const { return in_cbar_; }

private:
    enum class Vs : std::uint8_t { Unseen = 0, Pendant = 1, Component = 2 };

    int owner(int h) const { return h / 3; }
    void pool_remove(int h);
    int draw_partner(int h);
    void mark_component(int v);

    PhaseSimOptions opts_;
    PhaseSimResult res_;
    Rng rng_;
    std::int64_t n_ = 0;
    std::int64_t stride_ = 1;

    std::vector<int> partner_;
    std::vector<int> pool_, pos_;
    std::vector<Vs> state_;
    std::vector<std::uint8_t> in_c2_, in_c3_, in_cbar_;
    std::vector<int> comp_open_;
    std::vector<int> cpos_;
    std::vector<int> pendants_;

    std::int64_t explored_ = 0;
    std::int64_t phase0_steps_ = 0;
    std::int64_t x0_ = 0, x1_ = 0, x23_ = 0, a_new_ = 0, h_left_ = 0;
    std::int64_t phase1_steps_ = 0;
    std::int64_t z0_ = 0, z1_ = 0, absorbed2_count_ = 0;
    std::int64_t e_c2_ = 0, v_c2_ = 0;
    std::int64_t v3_count_ = 0, e3_count_ = 0;
    std::int64_t vbar_count_ = 0, ebar_count_ = 0;
    bool matching_complete_ = false;
    int stage_ = 0;
};

PhaseSimResult run_phase_simulation(const PhaseSimOptions& opts);

// Throws 2*b_count balls into a_count two-slot urns, each ball landing in a
// slot chosen uniformly among the free ones; returns the number of urns with
// at least one ball.
std::int64_t simulate_urns(std::int64_t a_count, std::int64_t b_count, std::uint64_t seed);

// Partitions the vertices outside `exclude` into connected blocks with sizes
// in [floor(sqrt(n)), 3*ceil(sqrt(n))] (components at most that size stay
// whole). Blocks are grown as balls around vertex-disjoint short cycles so
// that most blocks retain a cycle; leftovers merge into adjacent blocks and
// oversized blocks are re-split through a spanning tree.
struct RemainderPartition {
    std::vector<std::vector<int>> blocks;
    std::int64_t leftover_blocks = 0;        // small components kept whole
    std::int64_t outside_window = 0;         // blocks violating the size window
};
RemainderPartition partition_remainder(const MultiGraph& g, const std::vector<std::uint8_t>& exclude,
                                       std::int64_t window_ref_n);

}  // namespace modcert
