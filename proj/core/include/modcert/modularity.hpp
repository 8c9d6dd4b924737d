#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "modcert/graph.hpp"

namespace modcert {

// Within-block edge count (multiplicity; a loop inside counts once) and
// volume (degree sum; a loop contributes 2).
struct BlockStats {
    std::int64_t e_within = 0;
    std::int64_t volume = 0;
};
BlockStats block_stats(const MultiGraph& g, std::span<const int> block);

// q(A) = sum e(A_i)/m - sum vol(A_i)^2 / 4m^2; an edgeless graph scores 0.
double modularity(const MultiGraph& g, const VertexPartition& partition);

// q_r(A) = (n/|A|) (e(A)/m - vol(A)^2/4m^2).
double relative_modularity(const MultiGraph& g, std::span<const int> block);

struct ModularityReport {
    double q = 0.0;
    struct Block {
        std::int64_t size = 0;
        std::int64_t e_within = 0;
        std::int64_t volume = 0;
        double q_r = 0.0;
    };
    std::vector<Block> blocks;
};
ModularityReport modularity_report(const MultiGraph& g, const VertexPartition& partition);

// Exhaustive maximum over all set partitions (restricted-growth-string order).
// Modularity is compared as the exact integer 4m*sum(e_i) - sum(vol_i^2), so
// ties are exact; ties break toward fewer blocks, then the earlier growth
// string. Default n_limit 10 (Bell(10) = 115975 partitions).
struct BruteForceResult {
    double qstar = 0.0;
    VertexPartition argmax;
};
BruteForceResult brute_force_qstar(const MultiGraph& g, int n_limit = 10);

// Tree partition into connected subtrees of order between floor(sqrt(n)) and
// Delta*ceil(sqrt(n)), n = size_ref_n and Delta the tree's max degree. Splits
// recursively at the edge maximizing min(side, side), ties by edge index.
VertexPartition tree_partition(const MultiGraph& tree, std::int64_t size_ref_n);

// Partition into connected components, splitting components larger than
// Delta*ceil(sqrt(n)) through a BFS spanning tree. The returned guarantee
// 2(n-|CC|)/(dn) - Delta^3 ceil(sqrt(n))/(n d^2) - 2(2/d)/sqrt(n) is checked
// against the achieved modularity.
struct BaselineResult {
    VertexPartition partition;
    double q = 0.0;
    double guarantee = 0.0;
};
BaselineResult component_baseline(const MultiGraph& g);

// BFS spanning tree of the vertices reachable from `root` inside `allowed`
// (empty mask = all vertices). Ids are preserved.
MultiGraph bfs_spanning_tree(const MultiGraph& g, int root, const std::vector<std::uint8_t>& allowed);

}  // namespace modcert
