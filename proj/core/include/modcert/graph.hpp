#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "modcert/rng.hpp"

namespace modcert {

// Exact per-n degree counts: counts[d] vertices of degree d.
// Degree 0 is rejected and the total number of half-edges must be even.
struct DegreeSequence {
    std::map<int, std::int64_t> counts;

    std::int64_t vertex_count() const;
    std::int64_t half_edge_count() const;
    int max_degree() const;
    void validate() const;

    // Per-vertex degrees; vertex ids are assigned by descending degree, then id.
    std::vector<int> expand() const;

    // Parses "deg:count,deg:count,...", e.g. "1:4,2:2".
    static DegreeSequence parse(const std::string& spec);

    // Realizes limiting probabilities at size n by largest-remainder rounding,
    // then fixes parity by moving one vertex from the lowest odd degree class
    // with positive count to the next degree up.
    static DegreeSequence from_profile(const std::map<int, double>& probs, std::int64_t n);
};

// Undirected multigraph: vertices 0..n-1 plus a multiset of edges.
// Loops (u == u) are allowed; a loop contributes 2 to its vertex degree and
// counts as a single edge.
struct MultiGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // stored with u <= v
    std::vector<int> degree;

    MultiGraph() = default;
    explicit MultiGraph(int n_vertices) : n(n_vertices), degree(n_vertices, 0) {}

    void add_edge(int u, int v);
    std::int64_t edge_count() const { return static_cast<std::int64_t>(edges.size()); }

    // CSR adjacency; a loop appears twice in its vertex's row. Entries carry
    // the edge index so callers can track multiplicity.
    struct Adjacency {
        std::vector<std::int64_t> offset;
        std::vector<int> neighbor;
        std::vector<int> edge_id;

        std::int64_t deg(int v) const { return offset[v + 1] - offset[v]; }
    };
    Adjacency adjacency() const;
};

// Disjoint blocks covering V = {0..n-1}; the object modularity is evaluated on.
struct VertexPartition {
    std::vector<std::vector<int>> blocks;

    std::int64_t block_count() const { return static_cast<std::int64_t>(blocks.size()); }
    void validate(int n) const;
};

// Uniform configuration-model sample: half-edges grouped by vertex, matched by
// repeatedly pairing the lowest unmatched half-edge with a uniformly chosen
// unmatched one. Deterministic given the seed.
MultiGraph sample_configuration(const DegreeSequence& seq, std::uint64_t seed);
MultiGraph sample_configuration(const DegreeSequence& seq, Rng& rng);

// Rejection sampling of a simple graph (no loops, no multi-edges); uniform
// over simple graphs with the given degrees. Throws if the retry budget is
// exhausted.
MultiGraph sample_simple(const DegreeSequence& seq, std::uint64_t seed, int max_retries = 1000);

// Connected components as a partition; blocks ordered by lowest vertex id.
VertexPartition connected_components(const MultiGraph& g);

// Maximal subgraph of minimum degree >= 2, via repeated deletion of vertices
// of degree zero and one. Vertex ids are preserved: `graph` has the host's n
// with non-core vertices isolated, and `in_core` marks the retained set.
struct TwoCoreResult {
    MultiGraph graph;
    std::vector<std::uint8_t> in_core;
    std::int64_t core_size() const;
};
TwoCoreResult two_core(const MultiGraph& g);

// Smooths every degree-2 vertex (replacing it by an edge between its two
// neighbors) and deletes components that reduce to an isolated vertex with at
// most one loop. Input must have no vertex of degree exactly 1; degree-0
// vertices are treated as absent. Ids are preserved.
struct SmoothResult {
    MultiGraph graph;
    std::vector<std::uint8_t> retained;
};
SmoothResult smooth_degree_two(const MultiGraph& g);

// Edge-list text format: header "#n <count>", then one "u v" per line
// (0-based, loops as "u u").
void write_edge_list(const MultiGraph& g, std::ostream& out);
MultiGraph read_edge_list(std::istream& in);

// Partition text format: one block per line, vertex ids space-separated.
void write_partition(const VertexPartition& p, std::ostream& out);
VertexPartition read_partition(std::istream& in);

}  // namespace modcert
