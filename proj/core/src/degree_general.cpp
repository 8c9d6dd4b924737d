#include "modcert/degree_general.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "modcert/modularity.hpp"
#include "modcert/phase_sim.hpp"
#include "modcert/rng.hpp"

namespace modcert {

double DegreeProfile::m_value() const {
    double m = 0.0;
    for (const auto& [d, p] : probs) m += d * p;
    return m;
}

double DegreeProfile::q_value() const {
    double q = 0.0;
    for (const auto& [d, p] : probs) q += static_cast<double>(d) * (d - 2.0) * p;
    return q;
}

int DegreeProfile::max_degree() const {
    int best = 0;
    for (const auto& [d, p] : probs)
        if (p > 0.0) best = std::max(best, d);
    return best;
}

void DegreeProfile::validate() const {
    double total = 0.0;
    for (const auto& [d, p] : probs) {
        if (d <= 0) throw std::invalid_argument("profile: degree must be positive");
        if (p < 0.0) throw std::invalid_argument("profile: negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("profile: probabilities must sum to 1");
}

DegreeProfile DegreeProfile::parse(const std::string& spec) {
    DegreeProfile profile;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("profile: malformed token '" + item + "'");
        try {
            const int degree = std::stoi(item.substr(0, colon));
            const double p = std::stod(item.substr(colon + 1));
            profile.probs[degree] += p;
        } catch (const std::exception&) {
            throw std::invalid_argument("profile: malformed token '" + item + "'");
        }
    }
    profile.validate();
    return profile;
}

CriterionResult criterion(const DegreeProfile& profile) {
    profile.validate();
    CriterionResult res;
    res.q = profile.q_value();
    res.m = profile.m_value();
    if (res.q < -1e-12) res.regime = Regime::subcritical;
    else if (res.q > 1e-12) res.regime = Regime::supercritical;
    else res.regime = Regime::critical;
    return res;
}

namespace {

// Exact multinomial for small t (fits in long double via 128-bit integer),
// lgamma otherwise.
double multinomial(int t, const std::vector<int>& parts) {
    if (t <= 30) {
        unsigned __int128 value = 1;
        int consumed = 0;
        for (int part : parts)
            for (int j = 1; j <= part; ++j) {
                value = value * static_cast<unsigned>(++consumed) / static_cast<unsigned>(j);
            }
        return static_cast<double>(value);
    }
    double lg = std::lgamma(t + 1.0);
    for (int part : parts) lg -= std::lgamma(part + 1.0);
    return std::exp(lg);
}

}  // namespace

SubcriticalConstant subcritical_constant(const DegreeProfile& profile, int t_max) {
    profile.validate();
    const auto crit = criterion(profile);
    if (crit.regime != Regime::subcritical)
        throw std::invalid_argument("subcritical_constant: Q must be negative");
    if (t_max < 2) throw std::invalid_argument("subcritical_constant: t_max must be >= 2");
    const double m = crit.m;
    const int delta = profile.max_degree();
    std::vector<double> log_w(delta + 1, -1e300);  // log(i p_i / M)
    for (const auto& [d, p] : profile.probs)
        if (p > 0.0) log_w[d] = std::log(static_cast<double>(d) * p / m);

    // Tree sequences for total order t: t_1 = t - sum_{i>=2} t_i with the
    // constraint sum_{i>=2} (i-1) t_i = t - 2; enumerated in colex order over
    // (t_2, ..., t_Delta).
    double total = 0.0;
    std::vector<int> t_i(delta + 1, 0);
    for (int t = 2; t <= t_max; ++t) {
        double t_sum = 0.0;
        std::vector<int> parts;
        // Recursive enumeration over degrees 2..Delta.
        auto rec = [&](auto&& self, int degree, int remaining, int used, double logw_acc) -> void {
            if (degree > delta) {
                if (remaining != 0) return;
                const int t1 = t - used;
                if (t1 < 0) return;
                if (t1 > 0 && log_w[1] <= -1e299) return;
                parts.clear();
                parts.push_back(t1);
                for (int d = 2; d <= delta; ++d) parts.push_back(t_i[d]);
                const double lw = logw_acc + (t1 > 0 ? t1 * log_w[1] : 0.0);
                t_sum += multinomial(t, parts) * std::exp(lw);
                return;
            }
            const bool usable = log_w[degree] > -1e299;
            for (int k = 0;; ++k) {
                const int weight = k * (degree - 1);
                if (weight > remaining) break;
                if (k > 0 && !usable) break;
                t_i[degree] = k;
                self(self, degree + 1, remaining - weight, used + k,
                     logw_acc + (k > 0 ? k * log_w[degree] : 0.0));
            }
            t_i[degree] = 0;
        };
        rec(rec, 2, t - 2, 0, 0.0);
        total += 4.0 * (static_cast<double>(t) - 1.0) / static_cast<double>(t) * t_sum;
    }

    // Geometric tail from the Chernoff bound on tree-sequence probability;
    // valid once t exceeds 4 M / (-Q).
    double min_rate = 1e300;
    for (const auto& [d, p] : profile.probs)
        if (p > 0.0 && d != 2) min_rate = std::min(min_rate, static_cast<double>(d) * p / (24.0 * m));
    const double rho = std::exp(-min_rate);
    const double t_valid = 4.0 * m / (-crit.q);
    SubcriticalConstant out;
    out.c = total;
    out.t_max = t_max;
    if (static_cast<double>(t_max) < t_valid) {
        out.tail_bound = std::numeric_limits<double>::infinity();
    } else {
        out.tail_bound = 4.0 * delta * std::pow(rho, t_max + 1) / (1.0 - rho);
    }
    return out;
}

double subcritical_delta2_closed_form(double p1) {
    if (p1 <= 0.0 || p1 > 1.0) throw std::invalid_argument("delta2 closed form: p1 must be in (0, 1]");
    return 2.0 * (4.0 - 3.0 * p1) / p1;
}

SubcriticalEmpirical subcritical_empirical(const DegreeProfile& profile, std::int64_t n, int trials,
                                           std::uint64_t seed) {
    const auto crit = criterion(profile);
    if (crit.regime != Regime::subcritical)
        throw std::invalid_argument("subcritical_empirical: Q must be negative");
    const auto seq = DegreeSequence::from_profile(profile.probs, n);
    SubcriticalEmpirical out;
    out.per_trial.reserve(trials);
    for (int trial = 0; trial < trials; ++trial) {
        const auto g = sample_configuration(seq, Rng::mix(seed, trial));
        const auto comp = connected_components(g);
        const double q = modularity(g, comp);
        out.per_trial.push_back(crit.m * static_cast<double>(n) * (1.0 - q));
    }
    double sum = 0.0;
    for (double v : out.per_trial) sum += v;
    out.c_hat = sum / static_cast<double>(trials);
    return out;
}

std::vector<int> build_s_set(const MultiGraph& core, double eps_prime, std::uint64_t seed) {
    if (eps_prime <= 0.0) throw std::invalid_argument("build_s_set: eps_prime must be positive");
    const auto target =
        static_cast<std::int64_t>(std::ceil(eps_prime * static_cast<double>(core.n)));
    std::int64_t core_vertices = 0;
    for (int v = 0; v < core.n; ++v) core_vertices += core.degree[v] > 0;
    if (core_vertices < target) throw std::invalid_argument("build_s_set: core smaller than eps_prime * n");

    Rng rng(seed);
    const auto adj = core.adjacency();
    // Start vertex proportional to degree: pick a uniform half-edge.
    const std::int64_t total_deg = 2 * core.edge_count();
    const auto pick = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(total_deg)));
    int v0 = 0;
    {
        std::int64_t acc = 0;
        for (int v = 0; v < core.n; ++v) {
            acc += core.degree[v];
            if (pick < acc) {
                v0 = v;
                break;
            }
        }
    }
    std::vector<std::uint8_t> in_s(core.n, 0);
    std::vector<int> s_set{v0};
    in_s[v0] = 1;
    // FIFO exploration of open half-edges sticking out of S.
    std::queue<std::pair<int, std::int64_t>> open;  // (vertex, adjacency cursor)
    open.push({v0, adj.offset[v0]});
    std::int64_t found = 1;
    while (found < target) {
        if (open.empty()) throw std::runtime_error("build_s_set: exploration exhausted before target");
        auto [v, cur] = open.front();
        open.pop();
        if (cur < adj.offset[v + 1]) {
            const int w = adj.neighbor[cur];
            if (cur + 1 < adj.offset[v + 1]) open.push({v, cur + 1});
            if (!in_s[w]) {
                in_s[w] = 1;
                s_set.push_back(w);
                ++found;
                open.push({w, adj.offset[w]});
            }
        }
    }
    return s_set;
}

std::vector<int> absorb_chains(const MultiGraph& core, const std::vector<int>& s_set, int ell) {
    if (ell < 2 || ell % 2 != 0) throw std::invalid_argument("absorb_chains: ell must be even and >= 2");
    const auto adj = core.adjacency();
    std::vector<std::uint8_t> in_s(core.n, 0);
    for (int v : s_set) in_s[v] = 1;
    const int half = ell / 2;

    // Exploration marks from each original seed: root id, depth, parent.
    std::vector<int> mark_root(core.n, -1), mark_depth(core.n, 0), mark_parent(core.n, -1);
    std::vector<int> row(s_set);
    std::sort(row.begin(), row.end());

    auto absorb_path_up = [&](int from) {
        // Walk the recorded parents absorbing until an S vertex is reached.
        int x = from;
        while (x >= 0 && !in_s[x]) {
            in_s[x] = 1;
            x = mark_parent[x];
        }
    };

    std::vector<int> queue;
    for (const int root : row) {
        queue.clear();
        queue.push_back(root);
        mark_root[root] = root;
        mark_depth[root] = 0;
        mark_parent[root] = -1;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            const int x = queue[qi];
            if (mark_depth[x] >= half) continue;
            for (std::int64_t i = adj.offset[x]; i < adj.offset[x + 1]; ++i) {
                const int w = adj.neighbor[i];
                if (w == x) continue;
                if (in_s[w]) {
                    // Chain root -> ... -> x -> w with interior outside S.
                    if (x != root) absorb_path_up(x);
                    continue;
                }
                if (mark_root[w] == root) continue;  // already reached from this seed
                if (mark_root[w] >= 0 && mark_depth[w] + mark_depth[x] + 1 <= ell) {
                    // Meet-in-the-middle chain through two exploration trees.
                    absorb_path_up(w);
                    if (x != root) absorb_path_up(x);
                    continue;
                }
                if (mark_root[w] >= 0) continue;
                mark_root[w] = root;
                mark_depth[w] = mark_depth[x] + 1;
                mark_parent[w] = x;
                queue.push_back(w);
            }
        }
    }
    std::vector<int> aprime;
    for (int v = 0; v < core.n; ++v)
        if (in_s[v]) aprime.push_back(v);
    return aprime;
}

std::vector<int> pull_back_trees(const MultiGraph& host, const std::vector<std::uint8_t>& core_mask,
                                 const std::vector<int>& aprime) {
    const auto adj = host.adjacency();
    std::vector<std::uint8_t> in_a(host.n, 0);
    for (int v : aprime) in_a[v] = 1;
    std::vector<int> amax(aprime);
    std::vector<int> queue(aprime);
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        const int x = queue[qi];
        for (std::int64_t i = adj.offset[x]; i < adj.offset[x + 1]; ++i) {
            const int w = adj.neighbor[i];
            if (in_a[w] || core_mask[w]) continue;
            in_a[w] = 1;
            amax.push_back(w);
            queue.push_back(w);
        }
    }
    return amax;
}

SupercriticalRun supercritical_pipeline(const DegreeProfile& profile, std::int64_t n, double eps_prime,
                                        int ell, std::uint64_t seed) {
    const auto crit = criterion(profile);
    if (crit.regime != Regime::supercritical)
        throw std::invalid_argument("supercritical_pipeline: Q must be positive");
    const auto seq = DegreeSequence::from_profile(profile.probs, n);
    const auto g = sample_configuration(seq, seed);
    const auto comps = connected_components(g);

    std::size_t giant = 0;
    for (std::size_t i = 1; i < comps.blocks.size(); ++i)
        if (comps.blocks[i].size() > comps.blocks[giant].size()) giant = i;
    const auto& cmax = comps.blocks[giant];

    const auto core_all = two_core(g);
    // 2-core restricted to the giant component.
    MultiGraph core(g.n);
    std::vector<std::uint8_t> in_giant(g.n, 0);
    for (int v : cmax) in_giant[v] = 1;
    for (const auto& [u, v] : core_all.graph.edges)
        if (in_giant[u] && in_giant[v]) core.add_edge(u, v);

    std::int64_t core_size = 0;
    for (int v = 0; v < g.n; ++v) core_size += core.degree[v] > 0;
    const auto target = static_cast<std::int64_t>(std::ceil(eps_prime * static_cast<double>(g.n)));
    if (core_size < target)
        throw std::invalid_argument("supercritical_pipeline: eps_prime too large for the giant 2-core");

    const auto s_set = build_s_set(core, eps_prime, Rng::mix(seed, 0x5eed));
    const auto aprime = absorb_chains(core, s_set, ell);
    std::vector<std::uint8_t> core_mask(g.n, 0);
    for (int v = 0; v < g.n; ++v) core_mask[v] = core.degree[v] > 0;
    const auto amax = pull_back_trees(g, core_mask, aprime);

    SupercriticalRun run;
    run.eps_prime = eps_prime;
    run.ell = ell;
    run.s_size = static_cast<std::int64_t>(s_set.size());
    run.aprime_size = static_cast<std::int64_t>(aprime.size());
    run.amax_size = static_cast<std::int64_t>(amax.size());
    run.e_amax = block_stats(g, amax).e_within;
    run.density_margin = static_cast<double>(run.e_amax - run.amax_size) * static_cast<double>(g.n) /
                         (static_cast<double>(run.amax_size) * static_cast<double>(run.amax_size));

    // Partition: A_max, the partitioned rest of the giant, and one block per
    // small component.
    std::vector<std::uint8_t> exclude(g.n, 1);
    for (int v : cmax) exclude[v] = 0;
    for (int v : amax) exclude[v] = 1;
    const auto rem = partition_remainder(g, exclude, g.n);
    run.complement_components = [&] {
        // Connected components of C_max minus A_max.
        std::vector<std::uint8_t> in_amax(g.n, 0);
        for (int v : amax) in_amax[v] = 1;
        const auto adj = g.adjacency();
        std::vector<std::uint8_t> seen(g.n, 0);
        std::int64_t count = 0;
        std::vector<int> stack;
        for (int v : cmax) {
            if (in_amax[v] || seen[v]) continue;
            ++count;
            seen[v] = 1;
            stack.push_back(v);
            while (!stack.empty()) {
                const int x = stack.back();
                stack.pop_back();
                for (std::int64_t i = adj.offset[x]; i < adj.offset[x + 1]; ++i) {
                    const int w = adj.neighbor[i];
                    if (!in_amax[w] && in_giant[w] && !seen[w]) {
                        seen[w] = 1;
                        stack.push_back(w);
                    }
                }
            }
        }
        return count;
    }();

    VertexPartition partition;
    partition.blocks.push_back(amax);
    for (const auto& b : rem.blocks) partition.blocks.push_back(b);
    for (std::size_t i = 0; i < comps.blocks.size(); ++i)
        if (i != giant) partition.blocks.push_back(comps.blocks[i]);
    run.q_achieved = modularity(g, partition);

    run.mu_hat = static_cast<double>(comps.blocks.size()) / static_cast<double>(g.n);
    run.m_hat = 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.n);
    run.baseline = 2.0 * (1.0 - run.mu_hat) / run.m_hat;
    return run;
}

}  // namespace modcert
