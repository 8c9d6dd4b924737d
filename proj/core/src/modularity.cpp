#include "modcert/modularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace modcert {

BlockStats block_stats(const MultiGraph& g, std::span<const int> block) {
    std::vector<std::uint8_t> in(g.n, 0);
    BlockStats stats;
    for (int v : block) {
        if (v < 0 || v >= g.n) throw std::out_of_range("block_stats: vertex id out of range");
        in[v] = 1;
        stats.volume += g.degree[v];
    }
    for (const auto& [u, v] : g.edges)
        if (in[u] && in[v]) ++stats.e_within;
    return stats;
}

namespace {

struct PartitionStats {
    std::vector<std::int64_t> e_within;
    std::vector<std::int64_t> volume;
    std::vector<std::int64_t> size;
};

PartitionStats partition_stats(const MultiGraph& g, const VertexPartition& partition) {
    partition.validate(g.n);
    const auto k = partition.blocks.size();
    std::vector<int> block_of(g.n, -1);
    PartitionStats st;
    st.e_within.assign(k, 0);
    st.volume.assign(k, 0);
    st.size.assign(k, 0);
    for (std::size_t b = 0; b < k; ++b)
        for (int v : partition.blocks[b]) {
            block_of[v] = static_cast<int>(b);
            st.volume[b] += g.degree[v];
            st.size[b] += 1;
        }
    for (const auto& [u, v] : g.edges)
        if (block_of[u] == block_of[v]) ++st.e_within[block_of[u]];
    return st;
}

}  // namespace

double modularity(const MultiGraph& g, const VertexPartition& partition) {
    const auto st = partition_stats(g, partition);
    const double m = static_cast<double>(g.edge_count());
    if (m == 0.0) return 0.0;
    double e_sum = 0.0, vol2_sum = 0.0;
    for (std::size_t b = 0; b < st.e_within.size(); ++b) {
        e_sum += static_cast<double>(st.e_within[b]);
        vol2_sum += static_cast<double>(st.volume[b]) * static_cast<double>(st.volume[b]);
    }
    return e_sum / m - vol2_sum / (4.0 * m * m);
}

double relative_modularity(const MultiGraph& g, std::span<const int> block) {
    if (block.empty()) throw std::invalid_argument("relative_modularity: empty block");
    const double m = static_cast<double>(g.edge_count());
    if (m == 0.0) throw std::invalid_argument("relative_modularity: graph has no edges");
    const auto stats = block_stats(g, block);
    const double a = static_cast<double>(block.size());
    const double vol = static_cast<double>(stats.volume);
    return (static_cast<double>(g.n) / a) *
           (static_cast<double>(stats.e_within) / m - vol * vol / (4.0 * m * m));
}

ModularityReport modularity_report(const MultiGraph& g, const VertexPartition& partition) {
    const auto st = partition_stats(g, partition);
    const double m = static_cast<double>(g.edge_count());
    ModularityReport report;
    double e_sum = 0.0, vol2_sum = 0.0;
    for (std::size_t b = 0; b < st.e_within.size(); ++b) {
        ModularityReport::Block blk;
        blk.size = st.size[b];
        blk.e_within = st.e_within[b];
        blk.volume = st.volume[b];
        if (m > 0.0) {
            const double vol = static_cast<double>(blk.volume);
            blk.q_r = (static_cast<double>(g.n) / static_cast<double>(blk.size)) *
                      (static_cast<double>(blk.e_within) / m - vol * vol / (4.0 * m * m));
        }
        report.blocks.push_back(blk);
        e_sum += static_cast<double>(st.e_within[b]);
        vol2_sum += static_cast<double>(st.volume[b]) * static_cast<double>(st.volume[b]);
    }
    report.q = (m > 0.0) ? e_sum / m - vol2_sum / (4.0 * m * m) : 0.0;
    return report;
}

BruteForceResult brute_force_qstar(const MultiGraph& g, int n_limit) {
    if (g.n > n_limit) throw std::invalid_argument("brute_force_qstar: n exceeds limit");
    const int n = g.n;
    if (g.edge_count() == 0) {
        BruteForceResult res;
        res.qstar = 0.0;
        std::vector<int> all(n);
        for (int v = 0; v < n; ++v) all[v] = v;
        res.argmax.blocks.push_back(all);
        return res;
    }
    const std::int64_t m = g.edge_count();

    // Restricted growth strings in lexicographic order. Modularity compares
    // as the exact integer 4m*sum(e_b) - sum(vol_b^2) (common denominator
    // 4m^2), so the maximum and tie-breaks are exact.
    std::vector<int> a(n, 0), bmax(n, 0);
    std::vector<std::int64_t> e_b(n), vol_b(n);
    std::int64_t best_score = std::numeric_limits<std::int64_t>::min();
    int best_blocks = 0;
    std::vector<int> best_a;
    for (;;) {
        const int k = *std::max_element(a.begin(), a.end()) + 1;
        std::fill(e_b.begin(), e_b.begin() + k, 0);
        std::fill(vol_b.begin(), vol_b.begin() + k, 0);
        for (int v = 0; v < n; ++v) vol_b[a[v]] += g.degree[v];
        for (const auto& [u, v] : g.edges)
            if (a[u] == a[v]) ++e_b[a[u]];
        std::int64_t score = 0;
        for (int b = 0; b < k; ++b) score += 4 * m * e_b[b] - vol_b[b] * vol_b[b];
        if (score > best_score || (score == best_score && k < best_blocks)) {
            best_score = score;
            best_blocks = k;
            best_a = a;
        }
        // Next growth string: increment the rightmost position that can grow.
        int i = n - 1;
        while (i > 0 && a[i] > bmax[i - 1]) --i;
        if (i == 0) break;
        a[i] += 1;
        bmax[i] = std::max(bmax[i - 1], a[i]);
        for (int j = i + 1; j < n; ++j) {
            a[j] = 0;
            bmax[j] = bmax[i];
        }
    }

    BruteForceResult res;
    res.qstar = static_cast<double>(best_score) / (4.0 * static_cast<double>(m) * static_cast<double>(m));
    res.argmax.blocks.assign(best_blocks, {});
    for (int v = 0; v < n; ++v) res.argmax.blocks[best_a[v]].push_back(v);
    return res;
}

MultiGraph bfs_spanning_tree(const MultiGraph& g, int root, const std::vector<std::uint8_t>& allowed) {
    const auto adj = g.adjacency();
    MultiGraph tree(g.n);
    std::vector<std::uint8_t> seen(g.n, 0);
    std::vector<int> queue{root};
    seen[root] = 1;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        const int x = queue[qi];
        for (std::int64_t i = adj.offset[x]; i < adj.offset[x + 1]; ++i) {
            const int w = adj.neighbor[i];
            if (seen[w] || (!allowed.empty() && !allowed[w])) continue;
            seen[w] = 1;
            tree.add_edge(x, w);
            queue.push_back(w);
        }
    }
    return tree;
}

namespace {

struct CompactTree {
    MultiGraph tree;           // local ids 0..k-1
    std::vector<int> to_host;  // local -> host id
};

// Re-labels the non-isolated vertices of a host-sized forest/tree to dense ids.
CompactTree compact_nonisolated(const MultiGraph& g) {
    CompactTree ct;
    std::vector<int> local(g.n, -1);
    for (int v = 0; v < g.n; ++v)
        if (g.degree[v] > 0) {
            local[v] = static_cast<int>(ct.to_host.size());
            ct.to_host.push_back(v);
        }
    ct.tree = MultiGraph(static_cast<int>(ct.to_host.size()));
    for (const auto& [u, v] : g.edges) ct.tree.add_edge(local[u], local[v]);
    return ct;
}

}  // namespace

VertexPartition tree_partition(const MultiGraph& tree, std::int64_t size_ref_n) {
    const int n = tree.n;
    if (tree.edge_count() != n - 1)
        throw std::invalid_argument("tree_partition: input is not a tree (edge count)");
    const auto adj = tree.adjacency();
    {
        std::vector<std::uint8_t> seen(n, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int reached = 1;
        while (!stack.empty()) {
            const int x = stack.back();
            stack.pop_back();
            for (std::int64_t i = adj.offset[x]; i < adj.offset[x + 1]; ++i) {
                const int w = adj.neighbor[i];
                if (!seen[w]) {
                    seen[w] = 1;
                    ++reached;
                    stack.push_back(w);
                }
            }
        }
        if (reached != n) throw std::invalid_argument("tree_partition: input is not connected");
    }
    const auto lo = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(size_ref_n))));
    const auto hi_unit = static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(size_ref_n))));
    const int delta = *std::max_element(tree.degree.begin(), tree.degree.end());
    const std::int64_t hi = static_cast<std::int64_t>(delta) * hi_unit;
    if (n < lo) throw std::invalid_argument("tree_partition: tree smaller than floor(sqrt(n))");

    VertexPartition out;
    std::vector<int> stamp(n, -1);
    int epoch = 0;
    std::vector<std::vector<int>> work{[&] {
        std::vector<int> all(n);
        for (int v = 0; v < n; ++v) all[v] = v;
        return all;
    }()};

    std::vector<int> parent(n), parent_edge(n), order(n), sz(n);
    while (!work.empty()) {
        std::vector<int> vs = std::move(work.back());
        work.pop_back();
        if (static_cast<std::int64_t>(vs.size()) <= hi) {
            out.blocks.push_back(std::move(vs));
            continue;
        }
        const int cur = epoch++;
        for (int v : vs) stamp[v] = cur;
        const int root = *std::min_element(vs.begin(), vs.end());
        // Rooted traversal: subtree sizes for every in-subset tree edge.
        int head = 0, count = 0;
        order[count++] = root;
        parent[root] = -1;
        parent_edge[root] = -1;
        while (head < count) {
            const int x = order[head++];
            for (std::int64_t i = adj.offset[x]; i < adj.offset[x + 1]; ++i) {
                const int w = adj.neighbor[i];
                if (stamp[w] != cur || w == parent[x]) continue;
                if (w == x) continue;
                parent[w] = x;
                parent_edge[w] = adj.edge_id[i];
                order[count++] = w;
            }
        }
        for (int i = 0; i < count; ++i) sz[order[i]] = 1;
        for (int i = count - 1; i >= 1; --i) sz[parent[order[i]]] += sz[order[i]];
        // Select the edge maximizing min(side, side); ties by edge index.
        const auto total = static_cast<std::int64_t>(vs.size());
        std::int64_t best_min = -1;
        int best_edge = -1, best_child = -1;
        for (int i = 1; i < count; ++i) {
            const int v = order[i];
            const std::int64_t side = sz[v];
            const std::int64_t mn = std::min(side, total - side);
            if (mn > best_min || (mn == best_min && parent_edge[v] < best_edge)) {
                best_min = mn;
                best_edge = parent_edge[v];
                best_child = v;
            }
        }
        if (best_child < 0) throw std::logic_error("tree_partition: no splitting edge");
        // Split into subtree(best_child) and the rest.
        std::vector<int> side1;
        side1.reserve(static_cast<std::size_t>(sz[best_child]));
        std::vector<int> stack{best_child};
        std::vector<std::uint8_t> taken(0);
        stamp[best_child] = cur + 1000000000;  // temporary mark distinct from cur
        side1.push_back(best_child);
        while (!stack.empty()) {
            const int x = stack.back();
            stack.pop_back();
            for (std::int64_t i = adj.offset[x]; i < adj.offset[x + 1]; ++i) {
                const int w = adj.neighbor[i];
                if (stamp[w] != cur || w == parent[x]) continue;
                if (parent[w] != x) continue;
                stamp[w] = cur + 1000000000;
                side1.push_back(w);
                stack.push_back(w);
            }
        }
        std::vector<int> side2;
        side2.reserve(vs.size() - side1.size());
        for (int v : vs)
            if (stamp[v] == cur) side2.push_back(v);
        work.push_back(std::move(side1));
        work.push_back(std::move(side2));
    }
    return out;
}

BaselineResult component_baseline(const MultiGraph& g) {
    for (int v = 0; v < g.n; ++v)
        if (g.degree[v] == 0)
            throw std::invalid_argument("component_baseline: isolated vertex present");
    const auto comps = connected_components(g);
    const int delta = *std::max_element(g.degree.begin(), g.degree.end());
    const double n = static_cast<double>(g.n);
    const double d = 2.0 * static_cast<double>(g.edge_count()) / n;
    const auto hi_unit = static_cast<std::int64_t>(std::ceil(std::sqrt(n)));
    const std::int64_t hi = static_cast<std::int64_t>(delta) * hi_unit;

    BaselineResult result;
    for (const auto& comp : comps.blocks) {
        if (static_cast<std::int64_t>(comp.size()) <= hi) {
            result.partition.blocks.push_back(comp);
            continue;
        }
        std::vector<std::uint8_t> allowed(g.n, 0);
        for (int v : comp) allowed[v] = 1;
        const int root = *std::min_element(comp.begin(), comp.end());
        const auto spanning = bfs_spanning_tree(g, root, allowed);
        const auto ct = compact_nonisolated(spanning);
        const auto local_parts = tree_partition(ct.tree, g.n);
        for (const auto& local_block : local_parts.blocks) {
            std::vector<int> block;
            block.reserve(local_block.size());
            for (int v : local_block) block.push_back(ct.to_host[v]);
            result.partition.blocks.push_back(std::move(block));
        }
    }
    result.q = modularity(g, result.partition);
    const double cc = static_cast<double>(comps.blocks.size());
    result.guarantee = 2.0 * (n - cc) / (d * n) -
                       std::pow(static_cast<double>(delta), 3) * static_cast<double>(hi_unit) / (n * d * d) -
                       2.0 * (2.0 / d) / std::sqrt(n);
    if (result.q < result.guarantee)
        throw std::logic_error("component_baseline: achieved modularity below the guaranteed bound");
    return result;
}

}  // namespace modcert
