#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace modcert {

// First-moment certificate that no vertex set of a random 3-regular graph has
// relative modularity above the target. Every constant is derived from the
// single target value; the printed-constant flags record agreement with the
// values reported to six decimals.
struct UpperParams {
    double target = 0.789998;
    double tree_growth_c = 2.483253;  // unlabelled-tree growth constant (Otter)

    double density_slack() const { return target - 2.0 / 3.0; }
    double extra_edge_rate() const { return 1.5 * target - 1.0; }
};

// Exponential growth rate of the expected number of cuts (B, V \ B) with
// |B| = eps n and beta n crossing edges. Natural log; the beta -> 0 boundary
// is taken by the x log x -> 0 limit.
double f_exponent(double beta, double eps);

// Closed-form beta-derivative of f, and the polynomial inequality equivalent
// to df/dbeta >= 0 on the admissible range.
double df_dbeta(double beta, double eps);
double df_deps(double beta, double eps);
bool inequality_holds(double beta, double eps);

// Maximizing boundary count: beta*(eps) = (1 - 3(slack + eps)) eps, clamped
// at zero.
double beta_star(double eps, const UpperParams& params = {});

// g(eps) = f(beta*(eps), eps) and its analytic chain-rule derivative.
double g_of(double eps, const UpperParams& params = {});
double g_prime(double eps, const UpperParams& params = {});

// Sign changes of g' located by scanning a grid and bisecting each bracket.
std::vector<double> gprime_sign_changes(double lo, double hi, double grid_step,
                                        const UpperParams& params = {});

// Unique positive root of 2 C^(1/rate) x = 3 - 2x.
double small_set_eps0(const UpperParams& params = {});

// Union-bound tails for small candidate sets: the per-s bound
// 2 C^s s^(-3/2) ((s+1)/(3n-2s-1))^(rate*s - 1) summed over s in
// [11, max(11, ln n)] and over [ln n, eps0 n].
double small_set_per_s_bound(std::int64_t s, std::int64_t n, const UpperParams& params = {});
std::pair<double, double> small_set_tail(std::int64_t n, const UpperParams& params = {});

struct UpperBoundCertificate {
    double target = 0;
    double density_slack = 0;
    double extra_edge_rate = 0;
    double tree_growth_c = 0;
    double eps0 = 0;
    double grid_step = 0;
    double max_g = 0;  // Lipschitz-padded maximum of g over [eps0, 1/2]
    std::vector<double> gprime_sign_changes;
    std::pair<double, double> small_set_sums{0, 0};  // at the reference n
    std::int64_t reference_n = 0;
    bool small_set_sums_decreasing = false;
    bool printed_constants_match = false;
    bool valid = false;
    std::string reason;
};

// Certifies g < 0 on [eps0, 1/2] on a grid with interval padding from the
// analytic derivative and an estimated second-derivative bound, and evaluates
// the small-set tails on a decade ladder up to reference_n.
UpperBoundCertificate certify_upper(double grid_step = 1e-4, const UpperParams& params = {},
                                    std::int64_t reference_n = 1000000);

}  // namespace modcert
