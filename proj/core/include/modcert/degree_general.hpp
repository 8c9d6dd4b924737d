#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "modcert/graph.hpp"

namespace modcert {

// Limiting degree probabilities p_i (degrees >= 1, sum 1).
struct DegreeProfile {
    std::map<int, double> probs;

    double m_value() const;  // M = sum i p_i
    double q_value() const;  // Q = sum i (i-2) p_i
    int max_degree() const;
    void validate() const;
    static DegreeProfile parse(const std::string& spec);  // "1:0.3,3:0.7"
};

enum class Regime { subcritical, critical, supercritical };

struct CriterionResult {
    double q = 0;
    double m = 0;
    Regime regime = Regime::critical;
};
CriterionResult criterion(const DegreeProfile& profile);

// Subcritical constant c(p, Delta) as the tree-sequence series
//   c = 4 sum_{t>=2} sum_{tree seq, sum t_i = t} ((t-1)/t) multinomial
//       prod (i p_i / M)^{t_i},
// truncated at t <= t_max, with a geometric tail bound from the Chernoff
// decay exp(-min_{i != 2, p_i>0} i p_i t / (24 M)).
struct SubcriticalConstant {
    double c = 0;
    double tail_bound = 0;
    int t_max = 0;
};
SubcriticalConstant subcritical_constant(const DegreeProfile& profile, int t_max);

// Closed form for max degree 2: c = 2 (4 - 3 p1) / p1.
double subcritical_delta2_closed_form(double p1);

// Monte Carlo oracle: c_hat = mean over trials of M n (1 - q), where q is the
// modularity of the connected-components partition of a configuration sample.
struct SubcriticalEmpirical {
    double c_hat = 0;
    std::vector<double> per_trial;
};
SubcriticalEmpirical subcritical_empirical(const DegreeProfile& profile, std::int64_t n, int trials,
                                           std::uint64_t seed);

// Degree-biased seed exploration of a 2-core: explores half-edges until
// ceil(eps_prime * core.n) vertices are reached.
std::vector<int> build_s_set(const MultiGraph& core, double eps_prime, std::uint64_t seed);

// Absorbs S-chains of length at most ell (endpoints in S, interior outside)
// discovered while exploring the ell/2-neighborhoods of the seed vertices.
std::vector<int> absorb_chains(const MultiGraph& core, const std::vector<int>& s_set, int ell);

// Re-attaches the pendant trees deleted by the 2-core construction to the
// A'_max vertices they hang from.
std::vector<int> pull_back_trees(const MultiGraph& host, const std::vector<std::uint8_t>& core_mask,
                                 const std::vector<int>& aprime);

struct SupercriticalRun {
    double eps_prime = 0;
    int ell = 0;
    std::int64_t s_size = 0;
    std::int64_t aprime_size = 0;
    std::int64_t amax_size = 0;
    std::int64_t e_amax = 0;
    double density_margin = 0;  // (e - |A|) n / |A|^2
    std::int64_t complement_components = 0;
    double q_achieved = 0;
    double baseline = 0;  // 2 (1 - mu_hat) / M_hat
    double mu_hat = 0;
    double m_hat = 0;
};
SupercriticalRun supercritical_pipeline(const DegreeProfile& profile, std::int64_t n, double eps_prime,
                                        int ell, std::uint64_t seed);

}  // namespace modcert
