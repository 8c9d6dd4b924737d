#include "modcert/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace modcert {

std::int64_t DegreeSequence::vertex_count() const {
    std::int64_t n = 0;
    for (const auto& [d, c] : counts) n += c;
    return n;
}

std::int64_t DegreeSequence::half_edge_count() const {
    std::int64_t total = 0;
    for (const auto& [d, c] : counts) total += static_cast<std::int64_t>(d) * c;
    return total;
}

int DegreeSequence::max_degree() const {
    int best = 0;
    for (const auto& [d, c] : counts)
        if (c > 0) best = std::max(best, d);
    return best;
}

void DegreeSequence::validate() const {
    for (const auto& [d, c] : counts) {
        if (d <= 0) throw std::invalid_argument("degree sequence: degree must be positive");
        if (c <= 0) throw std::invalid_argument("degree sequence: count must be positive");
    }
    if (half_edge_count() % 2 != 0) throw std::invalid_argument("degree sequence: odd degree sum");
}

std::vector<int> DegreeSequence::expand() const {
    std::vector<int> degs;
    degs.reserve(static_cast<std::size_t>(vertex_count()));
    for (auto it = counts.rbegin(); it != counts.rend(); ++it)
        for (std::int64_t k = 0; k < it->second; ++k) degs.push_back(it->first);
    return degs;
}

DegreeSequence DegreeSequence::parse(const std::string& spec) {
    DegreeSequence seq;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("degree sequence: malformed token '" + item + "'");
        int degree = 0;
        std::int64_t count = 0;
        try {
            degree = std::stoi(item.substr(0, colon));
            count = std::stoll(item.substr(colon + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("degree sequence: malformed token '" + item + "'");
        }
        if (degree <= 0) throw std::invalid_argument("degree sequence: degree must be positive");
        if (count <= 0) throw std::invalid_argument("degree sequence: count must be positive");
        seq.counts[degree] += count;
    }
    if (seq.counts.empty()) throw std::invalid_argument("degree sequence: empty spec");
    seq.validate();
    return seq;
}

DegreeSequence DegreeSequence::from_profile(const std::map<int, double>& probs, std::int64_t n) {
    if (n <= 0) throw std::invalid_argument("profile: n must be positive");
    double total = 0.0;
    for (const auto& [d, p] : probs) {
        if (d <= 0) throw std::invalid_argument("profile: degree must be positive");
        if (p < 0.0) throw std::invalid_argument("profile: negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("profile: probabilities must sum to 1");

    // Largest-remainder rounding of p_i * n to integer counts summing to n.
    std::map<int, std::int64_t> counts;
    std::vector<std::pair<double, int>> remainders;  // (-frac, degree)
    std::int64_t assigned = 0;
    for (const auto& [d, p] : probs) {
        const double exact = p * static_cast<double>(n);
        const auto floor_val = static_cast<std::int64_t>(std::floor(exact));
        counts[d] = floor_val;
        assigned += floor_val;
        remainders.push_back({-(exact - static_cast<double>(floor_val)), d});
    }
    std::sort(remainders.begin(), remainders.end());
    std::int64_t leftover = n - assigned;
    for (std::size_t i = 0; leftover > 0; i = (i + 1) % remainders.size(), --leftover)
        counts[remainders[i].second] += 1;

    DegreeSequence seq;
    for (const auto& [d, c] : counts)
        if (c > 0) seq.counts[d] = c;

    // Parity fix: move one vertex from the lowest odd degree class up a degree.
    if (seq.half_edge_count() % 2 != 0) {
        int odd = -1;
        for (const auto& [d, c] : seq.counts)
            if (d % 2 == 1 && c > 0) {
                odd = d;
                break;
            }
        if (odd < 0) throw std::logic_error("profile: odd half-edge total with no odd degree class");
        seq.counts[odd] -= 1;
        if (seq.counts[odd] == 0) seq.counts.erase(odd);
        seq.counts[odd + 1] += 1;
    }
    seq.validate();
    return seq;
}

void MultiGraph::add_edge(int u, int v) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw std::out_of_range("add_edge: vertex id out of range");
    if (u > v) std::swap(u, v);
    edges.push_back({u, v});
    degree[u] += (u == v) ? 2 : 1;
    if (u != v) degree[v] += 1;
}

MultiGraph::Adjacency MultiGraph::adjacency() const {
    Adjacency adj;
    adj.offset.assign(n + 1, 0);
    for (int v = 0; v < n; ++v) adj.offset[v + 1] = adj.offset[v] + degree[v];
    adj.neighbor.resize(static_cast<std::size_t>(adj.offset[n]));
    adj.edge_id.resize(static_cast<std::size_t>(adj.offset[n]));
    std::vector<std::int64_t> cursor(adj.offset.begin(), adj.offset.end() - 1);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto [u, v] = edges[e];
        adj.neighbor[cursor[u]] = v;
        adj.edge_id[cursor[u]++] = static_cast<int>(e);
        adj.neighbor[cursor[v]] = u;
        adj.edge_id[cursor[v]++] = static_cast<int>(e);
    }
    return adj;
}

void VertexPartition::validate(int n) const {
    std::vector<std::uint8_t> seen(n, 0);
    std::int64_t covered = 0;
    for (const auto& block : blocks) {
        if (block.empty()) throw std::invalid_argument("partition: empty block");
        for (int v : block) {
            if (v < 0 || v >= n) throw std::invalid_argument("partition: vertex id out of range");
            if (seen[v]) throw std::invalid_argument("partition: blocks not disjoint");
            seen[v] = 1;
            ++covered;
        }
    }
    if (covered != n) throw std::invalid_argument("partition: blocks do not cover V");
}

namespace {

// Uniform perfect matching of the half-edge list: repeatedly match the lowest
// unmatched half-edge with a uniform unmatched partner.
std::vector<int> match_half_edges(std::int64_t total, Rng& rng) {
    std::vector<int> partner(total, -1);
    std::vector<int> pool(total);
    std::vector<int> pos(total);
    std::iota(pool.begin(), pool.end(), 0);
    std::iota(pos.begin(), pos.end(), 0);
    auto pool_remove = [&](int h) {
        const int i = pos[h];
        const int last = pool.back();
        pool[i] = last;
        pos[last] = i;
        pool.pop_back();
    };
    int next = 0;
    while (!pool.empty()) {
        while (partner[next] >= 0) ++next;
        pool_remove(next);
        const int p = pool[rng.below(pool.size())];
        pool_remove(p);
        partner[next] = p;
        partner[p] = next;
    }
    return partner;
}

}  // namespace

MultiGraph sample_configuration(const DegreeSequence& seq, Rng& rng) {
    seq.validate();
    const auto degs = seq.expand();
    const int n = static_cast<int>(degs.size());
    std::vector<int> owner;
    owner.reserve(static_cast<std::size_t>(seq.half_edge_count()));
    for (int v = 0; v < n; ++v)
        for (int k = 0; k < degs[v]; ++k) owner.push_back(v);

    const auto partner = match_half_edges(static_cast<std::int64_t>(owner.size()), rng);
    MultiGraph g(n);
    g.edges.reserve(owner.size() / 2);
    for (std::size_t h = 0; h < owner.size(); ++h)
        if (static_cast<std::size_t>(partner[h]) > h) g.add_edge(owner[h], owner[partner[h]]);
    return g;
}

MultiGraph sample_configuration(const DegreeSequence& seq, std::uint64_t seed) {
    Rng rng(seed);
    return sample_configuration(seq, rng);
}

MultiGraph sample_simple(const DegreeSequence& seq, std::uint64_t seed, int max_retries) {
    Rng rng(seed);
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        MultiGraph g = sample_configuration(seq, rng);
        bool simple = true;
        std::set<std::pair<int, int>> seen;
        for (const auto& [u, v] : g.edges) {
            if (u == v || !seen.insert({u, v}).second) {
                simple = false;
                break;
            }
        }
        if (simple) return g;
    }
    throw std::runtime_error("sample_simple: rejection budget exceeded");
}

VertexPartition connected_components(const MultiGraph& g) {
    const auto adj = g.adjacency();
    VertexPartition parts;
    std::vector<std::uint8_t> seen(g.n, 0);
    std::vector<int> stack;
    for (int s = 0; s < g.n; ++s) {
        if (seen[s]) continue;
        seen[s] = 1;
        std::vector<int> block{s};
        stack.push_back(s);
        while (!stack.empty()) {
            const int x = stack.back();
            stack.pop_back();
            for (std::int64_t i = adj.offset[x]; i < adj.offset[x + 1]; ++i) {
                const int w = adj.neighbor[i];
                if (!seen[w]) {
                    seen[w] = 1;
                    block.push_back(w);
                    stack.push_back(w);
                }
            }
        }
        parts.blocks.push_back(std::move(block));
    }
    return parts;
}

std::int64_t TwoCoreResult::core_size() const {
    std::int64_t c = 0;
    for (auto b : in_core) c += b;
    return c;
}

TwoCoreResult two_core(const MultiGraph& g) {
    const auto adj = g.adjacency();
    std::vector<int> deg(g.degree);
    std::vector<std::uint8_t> removed(g.n, 0);
    std::vector<int> queue;
    for (int v = 0; v < g.n; ++v)
        if (deg[v] <= 1) {
            removed[v] = 1;
            queue.push_back(v);
        }
    std::vector<std::uint8_t> edge_dead(g.edges.size(), 0);
    while (!queue.empty()) {
        const int v = queue.back();
        queue.pop_back();
        for (std::int64_t i = adj.offset[v]; i < adj.offset[v + 1]; ++i) {
            const int e = adj.edge_id[i];
            if (edge_dead[e]) continue;
            edge_dead[e] = 1;
            const int w = adj.neighbor[i];
            deg[v] -= (w == v) ? 2 : 1;
            if (w != v) {
                deg[w] -= 1;
                if (!removed[w] && deg[w] <= 1) {
                    removed[w] = 1;
                    queue.push_back(w);
                }
            }
        }
    }
    TwoCoreResult result;
    result.graph = MultiGraph(g.n);
    result.in_core.assign(g.n, 0);
    for (int v = 0; v < g.n; ++v)
        if (!removed[v]) result.in_core[v] = 1;
    for (const auto& [u, v] : g.edges)
        if (result.in_core[u] && result.in_core[v]) result.graph.add_edge(u, v);
    return result;
}

SmoothResult smooth_degree_two(const MultiGraph& g) {
    for (int v = 0; v < g.n; ++v)
        if (g.degree[v] == 1)
            throw std::invalid_argument("smooth_degree_two: input has a vertex of degree one");

    // Mutable adjacency as multisets of neighbors; a loop at v appears as two
    // entries of v in adj[v], so degree(v) == adj[v].size() throughout.
    std::vector<std::vector<int>> adj(g.n);
    for (const auto& [u, v] : g.edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    auto erase_one = [&](int from, int value) {
        auto& row = adj[from];
        for (std::size_t i = 0; i < row.size(); ++i)
            if (row[i] == value) {
                row[i] = row.back();
                row.pop_back();
                return;
            }
        throw std::logic_error("smooth_degree_two: adjacency inconsistency");
    };

    std::vector<std::uint8_t> dead(g.n, 0);
    std::vector<int> queue;
    for (int v = 0; v < g.n; ++v) {
        if (adj[v].empty()) dead[v] = 1;  // absent vertex
        else if (adj[v].size() == 2) queue.push_back(v);
    }
    while (!queue.empty()) {
        const int v = queue.back();
        queue.pop_back();
        if (dead[v] || adj[v].size() != 2) continue;
        const int a = adj[v][0];
        const int b = adj[v][1];
        if (a == v) {
            // Lone loop: the component reduced to an isolated vertex; delete it.
            adj[v].clear();
            dead[v] = 1;
            continue;
        }
        adj[v].clear();
        dead[v] = 1;
        erase_one(a, v);
        erase_one(b, v);
        adj[a].push_back(b);
        adj[b].push_back(a);
        if (!dead[a] && adj[a].size() == 2) queue.push_back(a);
        if (a != b && !dead[b] && adj[b].size() == 2) queue.push_back(b);
    }

    SmoothResult result;
    result.graph = MultiGraph(g.n);
    result.retained.assign(g.n, 0);
    for (int v = 0; v < g.n; ++v)
        if (!dead[v] && !adj[v].empty()) result.retained[v] = 1;
    for (int v = 0; v < g.n; ++v) {
        if (!result.retained[v]) continue;
        std::int64_t self = 0;
        for (int w : adj[v]) {
            if (w == v) ++self;
            else if (w > v) result.graph.add_edge(v, w);
        }
        for (std::int64_t k = 0; k < self / 2; ++k) result.graph.add_edge(v, v);
    }
    return result;
}

void write_edge_list(const MultiGraph& g, std::ostream& out) {
    out << "#n " << g.n << "\n";
    for (const auto& [u, v] : g.edges) out << u << " " << v << "\n";
}

MultiGraph read_edge_list(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("#n ", 0) != 0)
        throw std::invalid_argument("edge list: missing '#n <count>' header");
    MultiGraph g(std::stoi(line.substr(3)));
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        int u = 0, v = 0;
        if (!(ls >> u >> v)) throw std::invalid_argument("edge list: malformed line '" + line + "'");
        g.add_edge(u, v);
    }
    return g;
}

void write_partition(const VertexPartition& p, std::ostream& out) {
    for (const auto& block : p.blocks) {
        for (std::size_t i = 0; i < block.size(); ++i) out << (i ? " " : "") << block[i];
        out << "\n";
    }
}

VertexPartition read_partition(std::istream& in) {
    VertexPartition p;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::vector<int> block;
        int v = 0;
        while (ls >> v) block.push_back(v);
        if (!block.empty()) p.blocks.push_back(std::move(block));
    }
    return p;
}

}  // namespace modcert
