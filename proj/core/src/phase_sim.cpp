#include "modcert/phase_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace modcert {

PhaseExploration::PhaseExploration(const PhaseSimOptions& opts)
    : opts_(opts), rng_(opts.seed), n_(opts.n) {
    if (n_ < 2) throw std::invalid_argument("phase sim: n must be at least 2");
    if (opts.eps <= 0.0 || opts.eps >= 0.9)
        throw std::invalid_argument("phase sim: eps must be in (0, 0.9)");
    res_.n = n_;
    res_.eps = opts.eps;
    res_.seed = opts.seed;
    stride_ = std::max<std::int64_t>(1, n_ / std::max<std::int64_t>(1, opts.snapshot_div));

    const std::int64_t total = 3 * n_;
    partner_.assign(total, -1);
    pool_.resize(total);
    pos_.resize(total);
    std::iota(pool_.begin(), pool_.end(), 0);
    std::iota(pos_.begin(), pos_.end(), 0);
    state_.assign(n_, Vs::Unseen);
    cpos_.assign(total, -1);
}

void PhaseExploration::pool_remove(int h) {
    const int i = pos_[h];
    const int last = pool_.back();
    pool_[i] = last;
    pos_[last] = i;
    pool_.pop_back();
    pos_[h] = -1;
}

int PhaseExploration::draw_partner(int h) {
    pool_remove(h);
    const int p = pool_[rng_.below(pool_.size())];
    pool_remove(p);
    partner_[h] = p;
    partner_[p] = h;
    return p;
}

void PhaseExploration::mark_component(int v) {
    state_[v] = Vs::Component;
    for (int h = 3 * v; h < 3 * v + 3; ++h)
        if (partner_[h] < 0) {
            cpos_[h] = static_cast<int>(comp_open_.size());
            comp_open_.push_back(h);
        }
}

void PhaseExploration::run_phase0() {
    if (stage_ != 0) throw std::logic_error("phase sim: phases out of order");
    stage_ = 1;
    const auto target = static_cast<std::int64_t>(std::ceil(opts_.eps * static_cast<double>(n_)));
    auto open_remove = [&](int h) {
        const int i = cpos_[h];
        if (i < 0) return;
        const int last = comp_open_.back();
        comp_open_[i] = last;
        cpos_[last] = i;
        comp_open_.pop_back();
        cpos_[h] = -1;
    };

    const int v0 = static_cast<int>(rng_.below(n_));
    mark_component(v0);
    explored_ = 1;
    if (opts_.record_trajectories)
        res_.traj0.push_back({0.0, static_cast<double>(explored_) / static_cast<double>(n_)});
    while (explored_ < target) {
        if (comp_open_.empty()) {
            // Exploration exhausted its component: jump to a uniform
            // unexplored vertex and keep going.
            int v;
            do {
                v = static_cast<int>(rng_.below(n_));
            } while (state_[v] == Vs::Component);
            mark_component(v);
            ++explored_;
            continue;
        }
        const int h = comp_open_[rng_.below(comp_open_.size())];
        open_remove(h);
        const int p = draw_partner(h);
        open_remove(p);
        ++phase0_steps_;
        const int w = owner(p);
        if (state_[w] != Vs::Component) {
            mark_component(w);
            ++explored_;
        }
        if (opts_.record_trajectories && phase0_steps_ % stride_ == 0)
            res_.traj0.push_back({static_cast<double>(phase0_steps_) / static_cast<double>(n_),
                                  static_cast<double>(explored_) / static_cast<double>(n_)});
    }
    res_.phase0_edges = static_cast<double>(phase0_steps_) / static_cast<double>(n_);
}

void PhaseExploration::run_phase1() {
    if (stage_ != 1) throw std::logic_error("phase sim: phases out of order");
    stage_ = 2;
    std::vector<int> queue(comp_open_);
    std::sort(queue.begin(), queue.end());
    comp_open_.clear();
    x0_ = n_ - explored_;
    x1_ = 0;
    x23_ = 0;
    a_new_ = 0;
    h_left_ = static_cast<std::int64_t>(queue.size());
    const double dn = static_cast<double>(n_);
    auto snapshot = [&](std::int64_t step) {
        res_.traj1.push_back({static_cast<double>(step) / dn, static_cast<double>(x0_) / dn,
                              static_cast<double>(x1_) / dn, static_cast<double>(x23_) / dn,
                              static_cast<double>(a_new_) / dn, static_cast<double>(h_left_) / dn});
    };
    if (opts_.record_trajectories) snapshot(0);
    std::size_t cursor = 0;
    std::int64_t step = 0;
    while (h_left_ > 0) {
        while (cursor < queue.size() && partner_[queue[cursor]] >= 0) ++cursor;
        if (cursor >= queue.size()) throw std::logic_error("phase 1: queue exhausted with H > 0");
        const int h = queue[cursor++];
        const int p = draw_partner(h);
        ++step;
        const int w = owner(p);
        switch (state_[w]) {
            case Vs::Unseen:
                state_[w] = Vs::Pendant;
                --x0_;
                ++x1_;
                h_left_ -= 1;
                break;
            case Vs::Pendant: {
                // Cherry: the pendant's second edge lands; it joins the
                // component and its last open half-edge enters the test set.
                state_[w] = Vs::Component;
                --x1_;
                ++x23_;
                for (int hh = 3 * w; hh < 3 * w + 3; ++hh)
                    if (partner_[hh] < 0) queue.push_back(hh);
                break;
            }
            case Vs::Component:
                ++a_new_;
                h_left_ -= 2;
                break;
        }
        if (opts_.record_trajectories && step % stride_ == 0) snapshot(step);
    }
    if (opts_.record_trajectories) snapshot(step);
    phase1_steps_ = step;
    res_.x0_end = static_cast<double>(x0_) / dn;
    res_.x1_end = static_cast<double>(x1_) / dn;
    res_.x23_end = static_cast<double>(x23_) / dn;
    res_.a_end = static_cast<double>(a_new_) / dn;
    res_.t1_steps = static_cast<double>(step) / dn;
    res_.h_end = h_left_;
    pendants_.clear();
    for (int v = 0; v < n_; ++v)
        if (state_[v] == Vs::Pendant) pendants_.push_back(v);
}

void PhaseExploration::run_phase2() {
    if (stage_ != 2) throw std::logic_error("phase sim: phases out of order");
    stage_ = 3;
    in_c2_.assign(n_, 0);
    std::vector<int> queue;
    queue.reserve(2 * pendants_.size());
    for (int v : pendants_)
        for (int h = 3 * v; h < 3 * v + 3; ++h)
            if (partner_[h] < 0) queue.push_back(h);
    const double dn = static_cast<double>(n_);
    auto snapshot = [&](std::int64_t step) {
        res_.traj2.push_back({static_cast<double>(step) / dn, static_cast<double>(z0_) / dn,
                              static_cast<double>(z1_) / dn});
    };
    if (opts_.record_trajectories) snapshot(0);
    std::int64_t step = 0;
    for (const int h : queue) {
        if (partner_[h] >= 0) continue;
        const int p = draw_partner(h);
        ++step;
        const int w = owner(p);
        if (state_[w] == Vs::Pendant) {
            // Length-3 chain: both interior vertices join C2.
            ++z1_;
            in_c2_[w] = 1;
            in_c2_[owner(h)] = 1;
        } else {
            ++z0_;
        }
        if (opts_.record_trajectories && step % stride_ == 0) snapshot(step);
    }
    if (opts_.record_trajectories) snapshot(step);
    res_.z0_end = static_cast<double>(z0_) / dn;
    res_.z1_end = static_cast<double>(z1_) / dn;
    res_.t2_steps = static_cast<double>(step) / dn;
    absorbed2_count_ = 0;
    for (int v : pendants_) absorbed2_count_ += in_c2_[v];
    res_.absorbed2_frac = static_cast<double>(absorbed2_count_) / dn;
    // C2 = component + absorbed pendants; its edge count follows the phase
    // bookkeeping: phase-0 edges + new internal edges + two per cherry, plus
    // one back-edge per absorbed pendant and the chain edges themselves.
    v_c2_ = explored_ + x23_ + absorbed2_count_;
    e_c2_ = phase0_steps_ + a_new_ + 2 * x23_ + absorbed2_count_ + z1_;
}

void PhaseExploration::run_phase3() {
    if (stage_ != 3) throw std::logic_error("phase sim: phases out of order");
    stage_ = 4;
    const double dn = static_cast<double>(n_);
    std::vector<std::uint8_t> hits(n_, 0);
    std::array<std::int64_t, 4> w_count{x0_, 0, 0, 0};
    auto snapshot = [&](std::int64_t step) {
        res_.traj3.push_back({static_cast<double>(step) / dn, static_cast<double>(w_count[0]) / dn,
                              static_cast<double>(w_count[1]) / dn, static_cast<double>(w_count[2]) / dn,
                              static_cast<double>(w_count[3]) / dn});
    };
    if (opts_.record_trajectories) snapshot(0);
    // Replay the already-drawn partners of the unabsorbed pendants' half-edges
    // in deterministic order; by exchangeability of the uniform matching this
    // is distributed exactly as the two-stage reveal.
    std::int64_t step = 0;
    for (int v : pendants_) {
        if (in_c2_[v]) continue;
        for (int h = 3 * v; h < 3 * v + 3; ++h) {
            const int p = partner_[h];
            if (p < 0) throw std::logic_error("phase 3: pendant half-edge left unmatched");
            const int w = owner(p);
            if (state_[w] != Vs::Unseen) continue;  // the back-edge into C1
            ++step;
            const int k = hits[w];
            if (k < 3) {
                --w_count[k];
                ++w_count[k + 1];
                hits[w] = static_cast<std::uint8_t>(k + 1);
            }
            if (opts_.record_trajectories && step % stride_ == 0) snapshot(step);
        }
    }
    if (opts_.record_trajectories) snapshot(step);
    res_.t3_steps = static_cast<double>(step) / dn;
    for (int i = 0; i < 4; ++i) res_.w_end[i] = static_cast<double>(w_count[i]) / dn;

    // C3 = C2 + cherry centers (unseen vertices hit at least twice) + the
    // pendants those centers connect back to.
    in_c3_.assign(n_, 0);
    for (int v = 0; v < n_; ++v)
        if (state_[v] == Vs::Component || in_c2_[v]) in_c3_[v] = 1;
    v3_count_ = v_c2_;
    e3_count_ = e_c2_;
    for (int v = 0; v < n_; ++v)
        if (state_[v] == Vs::Unseen && hits[v] >= 2) {
            in_c3_[v] = 1;
            ++v3_count_;
            e3_count_ += hits[v];
        }
    for (int v : pendants_) {
        if (in_c2_[v]) continue;
        bool linked = false;
        for (int h = 3 * v; h < 3 * v + 3; ++h) {
            const int w = owner(partner_[h]);
            if (state_[w] == Vs::Unseen && hits[w] >= 2) linked = true;
        }
        if (linked) {
            in_c3_[v] = 1;
            ++v3_count_;
            e3_count_ += 1;  // its back-edge into C1
        }
    }
    res_.v3 = static_cast<double>(v3_count_) / dn;
    res_.e3 = static_cast<double>(e3_count_) / dn;
    res_.qr3 = 2.0 * res_.e3 / (3.0 * res_.v3) - res_.v3;
}

void PhaseExploration::complete_matching() {
    if (matching_complete_) return;
    while (!pool_.empty()) {
        const int h = pool_[0];
        pool_remove(h);
        const int p = pool_[rng_.below(pool_.size())];
        pool_remove(p);
        partner_[h] = p;
        partner_[p] = h;
    }
    matching_complete_ = true;
}

MultiGraph PhaseExploration::realized_graph() const {
    if (!matching_complete_) throw std::logic_error("realized_graph: matching not complete");
    MultiGraph g(static_cast<int>(n_));
    g.edges.reserve(static_cast<std::size_t>(3 * n_ / 2));
    for (int h = 0; h < 3 * n_; ++h)
        if (partner_[h] > h) g.add_edge(owner(h), owner(partner_[h]));
    return g;
}

void PhaseExploration::close_cherries() {
    if (stage_ != 4) throw std::logic_error("phase sim: phases out of order");
    stage_ = 5;
    complete_matching();
    in_cbar_ = in_c3_;
    std::vector<std::uint8_t> in_cnt(n_, 0);
    for (int h = 0; h < 3 * n_; ++h) {
        const int v = owner(h);
        if (in_cbar_[v]) continue;
        const int w = owner(partner_[h]);
        if (w != v && in_cbar_[w] && in_cnt[v] < 3) ++in_cnt[v];
    }
    std::vector<int> queue;
    for (int v = 0; v < n_; ++v)
        if (!in_cbar_[v] && in_cnt[v] >= 2) queue.push_back(v);
    vbar_count_ = v3_count_;
    ebar_count_ = e3_count_;
    const double limit = static_cast<double>(n_) / 3.0 - 1.0;
    res_.cherry_guard_hit = false;
    std::size_t head = 0;
    while (head < queue.size()) {
        const int v = queue[head++];
        if (in_cbar_[v] || in_cnt[v] < 2) continue;
        if (static_cast<double>(vbar_count_) > limit) {
            res_.cherry_guard_hit = true;
            break;
        }
        in_cbar_[v] = 1;
        ++vbar_count_;
        ebar_count_ += in_cnt[v];
        for (int h = 3 * v; h < 3 * v + 3; ++h) {
            const int w = owner(partner_[h]);
            if (w != v && !in_cbar_[w] && in_cnt[w] < 3) {
                ++in_cnt[w];
                if (in_cnt[w] >= 2) queue.push_back(w);
            }
        }
    }
    res_.closure_absorbed = vbar_count_ - v3_count_;
    const double dn = static_cast<double>(n_);
    res_.vbar3 = static_cast<double>(vbar_count_) / dn;
    res_.ebar3 = static_cast<double>(ebar_count_) / dn;
    res_.qrbar3 = 2.0 * res_.ebar3 / (3.0 * res_.vbar3) - res_.vbar3;
    res_.cbar_within_4x = vbar_count_ <= 4 * v3_count_;
}

void PhaseExploration::assemble_and_score() {
    if (stage_ != 5) throw std::logic_error("phase sim: phases out of order");
    stage_ = 6;
    const MultiGraph g = realized_graph();
    const auto rem = partition_remainder(g, in_cbar_, n_);

    VertexPartition partition;
    std::vector<int> cbar_block;
    for (int v = 0; v < n_; ++v)
        if (in_cbar_[v]) cbar_block.push_back(v);
    partition.blocks.push_back(std::move(cbar_block));
    std::int64_t min_big = n_, max_big = 0;
    for (const auto& b : rem.blocks) {
        min_big = std::min(min_big, static_cast<std::int64_t>(b.size()));
        max_big = std::max(max_big, static_cast<std::int64_t>(b.size()));
        partition.blocks.push_back(b);
    }
    res_.q = modularity(g, partition);
    res_.block_count = partition.block_count();
    res_.blocks_outside_window = rem.outside_window;
    res_.leftover_blocks = rem.leftover_blocks;
    res_.min_big_block = min_big;
    res_.max_big_block = max_big;
}

PhaseSimResult run_phase_simulation(const PhaseSimOptions& opts) {
    PhaseExploration sim(opts);
    sim.run_phase0();
    sim.run_phase1();
    sim.run_phase2();
    sim.run_phase3();
    sim.close_cherries();
    sim.assemble_and_score();
    return sim.result();
}

std::int64_t simulate_urns(std::int64_t a_count, std::int64_t b_count, std::uint64_t seed) {
    if (a_count < 0 || b_count < 0) throw std::invalid_argument("simulate_urns: negative counts");
    if (b_count > a_count) throw std::invalid_argument("simulate_urns: more balls than slots");
    Rng rng(seed);
    std::vector<std::int64_t> slot(2 * a_count);
    for (std::int64_t i = 0; i < 2 * a_count; ++i) slot[i] = i / 2;
    std::vector<std::uint8_t> filled(a_count, 0);
    std::int64_t live = 2 * a_count;
    for (std::int64_t ball = 0; ball < 2 * b_count; ++ball) {
        const auto i = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(live)));
        filled[slot[i]] = 1;
        slot[i] = slot[live - 1];
        --live;
    }
    std::int64_t count = 0;
    for (auto f : filled) count += f;
    return count;
}

namespace {

// Truncated BFS from `start` looking for the first cycle within depth `cap`;
// returns the cycle's vertices or empty. Excluded or already-claimed vertices
// act as absent.
std::vector<int> find_short_cycle(const MultiGraph::Adjacency& adj, int start, int cap,
                                  const std::vector<std::uint8_t>& excluded,
                                  const std::vector<std::uint8_t>& claimed, std::vector<int>& par,
                                  std::vector<int>& dep, std::vector<int>& touched) {
    par[start] = start;  // sentinel: root's parent is itself
    dep[start] = 0;
    touched.push_back(start);
    std::vector<int> queue{start};
    std::vector<int> cyc;
    for (std::size_t qi = 0; qi < queue.size() && cyc.empty(); ++qi) {
        const int x = queue[qi];
        if (dep[x] >= cap) continue;
        int skip_parent = (x == start) ? -1 : par[x];
        for (std::int64_t i = adj.offset[x]; i < adj.offset[x + 1]; ++i) {
            const int w = adj.neighbor[i];
            if (excluded[w] || claimed[w] || w == x) continue;
            if (w == skip_parent) {
                // One tree edge back to the parent is expected; a second edge
                // to the same parent is a genuine 2-cycle (multi-edge).
                skip_parent = -1;
                continue;
            }
            if (par[w] >= 0) {
                // Cycle: climb both endpoints to the meet point.
                std::vector<int> left{x}, right{w};
                int ax = x, aw = w;
                while (dep[ax] > dep[aw]) {
                    ax = par[ax];
                    left.push_back(ax);
                }
                while (dep[aw] > dep[ax]) {
                    aw = par[aw];
                    right.push_back(aw);
                }
                while (ax != aw) {
                    ax = par[ax];
                    left.push_back(ax);
                    aw = par[aw];
                    right.push_back(aw);
                }
                cyc = left;
                for (auto it = right.rbegin(); it != right.rend(); ++it)
                    if (*it != ax) cyc.push_back(*it);
                break;
            }
            par[w] = x;
            dep[w] = dep[x] + 1;
            touched.push_back(w);
            queue.push_back(w);
        }
    }
    for (int v : touched) par[v] = -1;
    touched.clear();
    return cyc;
}

}  // namespace

RemainderPartition partition_remainder(const MultiGraph& g, const std::vector<std::uint8_t>& exclude,
                                       std::int64_t window_ref_n) {
    const auto adj = g.adjacency();
    const double ref = static_cast<double>(window_ref_n);
    const auto lo = static_cast<std::int64_t>(std::floor(std::sqrt(ref)));
    const auto hi = 3 * static_cast<std::int64_t>(std::ceil(std::sqrt(ref)));

    RemainderPartition out;
    std::vector<std::uint8_t> excluded(exclude);
    if (excluded.empty()) excluded.assign(g.n, 0);

    // Remainder components.
    std::vector<int> comp_id(g.n, -1);
    std::vector<std::vector<int>> comps;
    for (int s = 0; s < g.n; ++s) {
        if (excluded[s] || comp_id[s] >= 0) continue;
        const int id = static_cast<int>(comps.size());
        std::vector<int> comp{s};
        comp_id[s] = id;
        for (std::size_t qi = 0; qi < comp.size(); ++qi) {
            const int x = comp[qi];
            for (std::int64_t i = adj.offset[x]; i < adj.offset[x + 1]; ++i) {
                const int w = adj.neighbor[i];
                if (!excluded[w] && comp_id[w] < 0) {
                    comp_id[w] = id;
                    comp.push_back(w);
                }
            }
        }
        comps.push_back(std::move(comp));
    }

    auto push_block = [&](std::vector<int>&& b, bool leftover) {
        const auto sz = static_cast<std::int64_t>(b.size());
        if (leftover) ++out.leftover_blocks;
        else if (sz < lo || sz > hi) ++out.outside_window;
        out.blocks.push_back(std::move(b));
    };

    std::vector<int> par(g.n, -1), dep(g.n, 0), touched;
    std::vector<std::uint8_t> claimed(g.n, 0);
    std::vector<int> cell_of(g.n, -1);

    for (auto& comp : comps) {
        if (static_cast<std::int64_t>(comp.size()) <= hi) {
            push_block(std::move(comp), true);
            continue;
        }
        // Vertex-disjoint short cycles probed across the component. Each cycle
        // seeds one Voronoi cell, so every cell keeps a whole cycle inside.
        std::vector<std::vector<int>> cycles;
        for (const int s : comp) {  // disjoint cycles are the scarce resource: probe everywhere
            if (claimed[s]) continue;
            auto cyc = find_short_cycle(adj, s, 10, excluded, claimed, par, dep, touched);
            if (cyc.empty()) continue;
            for (int v : cyc) claimed[v] = 1;
            cycles.push_back(std::move(cyc));
        }
        std::vector<std::vector<int>> cells;
        std::vector<int> frontier;
        for (std::size_t ci = 0; ci < cycles.size(); ++ci) {
            std::vector<int> cell;
            for (int v : cycles[ci]) {
                cell_of[v] = static_cast<int>(ci);
                cell.push_back(v);
                frontier.push_back(v);
            }
            cells.push_back(std::move(cell));
        }
        // Multi-source BFS: unclaimed vertices join the nearest cycle's cell.
        for (std::size_t qi = 0; qi < frontier.size(); ++qi) {
            const int x = frontier[qi];
            for (std::int64_t i = adj.offset[x]; i < adj.offset[x + 1]; ++i) {
                const int w = adj.neighbor[i];
                if (excluded[w] || cell_of[w] >= 0) continue;
                cell_of[w] = cell_of[x];
                cells[cell_of[x]].push_back(w);
                frontier.push_back(w);
            }
        }
        // Cycle-free pockets (no cell reached them) become their own cells.
        for (int s : comp) {
            if (cell_of[s] >= 0) continue;
            const int id = static_cast<int>(cells.size());
            std::vector<int> pocket{s};
            cell_of[s] = id;
            for (std::size_t qi = 0; qi < pocket.size(); ++qi) {
                const int x = pocket[qi];
                for (std::int64_t i = adj.offset[x]; i < adj.offset[x + 1]; ++i) {
                    const int w = adj.neighbor[i];
                    if (!excluded[w] && cell_of[w] < 0) {
                        cell_of[w] = id;
                        pocket.push_back(w);
                    }
                }
            }
            cells.push_back(std::move(pocket));
        }
        // Merge undersized cells into their smallest neighbor, preferring a
        // partner that keeps the union inside the window.
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t ci = 0; ci < cells.size(); ++ci) {
                auto& c = cells[ci];
                if (c.empty() || static_cast<std::int64_t>(c.size()) >= lo) continue;
                int best = -1, best_fit = -1;
                for (int x : c) {
                    for (std::int64_t i = adj.offset[x]; i < adj.offset[x + 1]; ++i) {
                        const int w = adj.neighbor[i];
                        if (excluded[w]) continue;
                        const int j = cell_of[w];
                        if (j < 0 || j == static_cast<int>(ci) || cells[j].empty()) continue;
                        if (best < 0 || cells[j].size() < cells[best].size()) best = j;
                        const bool fits = static_cast<std::int64_t>(cells[j].size() + c.size()) <= hi;
                        if (fits && (best_fit < 0 || cells[j].size() < cells[best_fit].size()))
                            best_fit = j;
                    }
                }
                const int target = best_fit >= 0 ? best_fit : best;
                if (target < 0) continue;
                for (int v : c) cell_of[v] = target;
                cells[target].insert(cells[target].end(), c.begin(), c.end());
                c.clear();
                changed = true;
            }
        }
        // Oversized blocks are split through a spanning tree; the lemma window
        // keeps every piece within [lo, delta_tree * ceil(sqrt(n))].
        for (auto& b : cells) {
            if (b.empty()) continue;
            if (static_cast<std::int64_t>(b.size()) <= hi) {
                push_block(std::move(b), false);
                continue;
            }
            std::vector<std::uint8_t> allowed(g.n, 0);
            for (int v : b) allowed[v] = 1;
            const int root = *std::min_element(b.begin(), b.end());
            const auto spanning = bfs_spanning_tree(g, root, allowed);
            std::vector<int> to_host;
            std::vector<int> local(g.n, -1);
            for (int v = 0; v < g.n; ++v)
                if (spanning.degree[v] > 0) {
                    local[v] = static_cast<int>(to_host.size());
                    to_host.push_back(v);
                }
            MultiGraph tree(static_cast<int>(to_host.size()));
            for (const auto& [u, v] : spanning.edges) tree.add_edge(local[u], local[v]);
            for (const auto& lb : tree_partition(tree, window_ref_n).blocks) {
                std::vector<int> block;
                block.reserve(lb.size());
                for (int v : lb) block.push_back(to_host[v]);
                push_block(std::move(block), false);
            }
        }
    }
    return out;
}

}  // namespace modcert
