#include "modcert/upper_bound.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "modcert/ode_lower.hpp"

namespace modcert {

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

const double kLog3 = std::log(3.0);

void check_domain(double beta, double eps) {
    if (eps <= 0.0 || eps > 0.5) throw std::invalid_argument("f_exponent: eps must be in (0, 1/2]");
    if (beta < 0.0 || beta >= std::min(eps, 1.0 - eps))
        throw std::invalid_argument("f_exponent: beta must be in [0, min(eps, 1-eps))");
}

}  // namespace

double f_exponent(double beta, double eps) {
    check_domain(beta, eps);
    return 2.0 * beta * kLog3 + 0.5 * xlogx(3.0 * eps - beta) + 0.5 * xlogx(3.0 - 3.0 * eps - beta) -
           xlogx(beta) - xlogx(eps - beta) - xlogx(1.0 - eps - beta) - 1.5 * kLog3;
}

double df_dbeta(double beta, double eps) {
    check_domain(beta, eps);
    if (beta <= 0.0) throw std::invalid_argument("df_dbeta: interior beta required");
    return 2.0 * kLog3 - 0.5 * std::log(3.0 * eps - beta) - 0.5 * std::log(3.0 - 3.0 * eps - beta) -
           std::log(beta) + std::log(eps - beta) + std::log(1.0 - eps - beta);
}

double df_deps(double beta, double eps) {
    return 1.5 * std::log(3.0 * eps - beta) - 1.5 * std::log(3.0 - 3.0 * eps - beta) -
           std::log(eps - beta) + std::log(1.0 - eps - beta);
}

bool inequality_holds(double beta, double eps) {
    const double lhs = 81.0 * (eps - beta) * (eps - beta) * (1.0 - eps - beta) * (1.0 - eps - beta);
    const double rhs = (3.0 * eps - beta) * (3.0 - 3.0 * eps - beta) * beta * beta;
    return lhs >= rhs;
}

double beta_star(double eps, const UpperParams& params) {
    return std::max(0.0, (1.0 - 3.0 * (params.density_slack() + eps)) * eps);
}

double g_of(double eps, const UpperParams& params) { return f_exponent(beta_star(eps, params), eps); }

double g_prime(double eps, const UpperParams& params) {
    const double b = beta_star(eps, params);
    if (b <= 0.0) return df_deps(0.0, eps);
    const double bprime = 1.0 - 3.0 * params.density_slack() - 6.0 * eps;
    return df_dbeta(b, eps) * bprime + df_deps(b, eps);
}

std::vector<double> gprime_sign_changes(double lo, double hi, double grid_step,
                                        const UpperParams& params) {
    std::vector<double> found;
    double prev_x = lo;
    double prev = g_prime(lo, params);
    for (double x = lo + grid_step; x < hi; x += grid_step) {
        const double cur = g_prime(x, params);
        if ((prev < 0.0) != (cur < 0.0)) {
            found.push_back(bisect_root([&](double t) { return g_prime(t, params); }, prev_x, x, 1e-12));
        }
        prev = cur;
        prev_x = x;
    }
    return found;
}

double small_set_eps0(const UpperParams& params) {
    const double k = std::pow(params.tree_growth_c, 1.0 / params.extra_edge_rate());
    return bisect_root([&](double x) { return 2.0 * k * x - (3.0 - 2.0 * x); }, 1e-12, 1.0, 1e-14);
}

double small_set_per_s_bound(std::int64_t s, std::int64_t n, const UpperParams& params) {
    const double rate = params.extra_edge_rate();
    const double c = params.tree_growth_c;
    const double sd = static_cast<double>(s);
    const double nd = static_cast<double>(n);
    // log of 2 C^s s^(-3/2) ((s+1)/(3n-2s-1))^(rate*s-1), evaluated in log
    // space to dodge overflow.
    const double log_val = std::log(2.0) + sd * std::log(c) - 1.5 * std::log(sd) +
                           (rate * sd - 1.0) * (std::log(sd + 1.0) - std::log(3.0 * nd - 2.0 * sd - 1.0));
    return std::exp(log_val);
}

std::pair<double, double> small_set_tail(std::int64_t n, const UpperParams& params) {
    if (n < 100) throw std::invalid_argument("small_set_tail: n must be at least 100");
    const double log_n = std::log(static_cast<double>(n));
    const auto low_top = std::max<std::int64_t>(11, static_cast<std::int64_t>(std::floor(log_n)));
    double sum_low = 0.0;
    for (std::int64_t s = 11; s <= low_top; ++s) sum_low += small_set_per_s_bound(s, n, params);
    const double eps0 = small_set_eps0(params);
    const auto high_top = static_cast<std::int64_t>(std::floor(eps0 * static_cast<double>(n)));
    double sum_high = 0.0;
    for (std::int64_t s = static_cast<std::int64_t>(std::ceil(log_n)); s <= high_top; ++s)
        sum_high += small_set_per_s_bound(s, n, params);
    return {sum_low, sum_high};
}

UpperBoundCertificate certify_upper(double grid_step, const UpperParams& params,
                                    std::int64_t reference_n) {
    if (grid_step > 1e-4) throw std::invalid_argument("certify_upper: grid_step must be <= 1e-4");
    UpperBoundCertificate cert;
    cert.target = params.target;
    cert.density_slack = params.density_slack();
    cert.extra_edge_rate = params.extra_edge_rate();
    cert.tree_growth_c = params.tree_growth_c;
    cert.grid_step = grid_step;
    cert.eps0 = small_set_eps0(params);
    cert.reference_n = reference_n;
    cert.printed_constants_match = std::abs(cert.density_slack - 0.123331) <= 1e-6 &&
                                   std::abs(cert.extra_edge_rate - 0.184997) <= 1e-6;

    cert.gprime_sign_changes = gprime_sign_changes(1e-5, 0.5, 1e-4, params);

    // Grid over [eps0, 1/2]: values and analytic derivatives.
    const double lo = cert.eps0;
    const double hi = 0.5;
    const auto steps = static_cast<std::int64_t>(std::ceil((hi - lo) / grid_step));
    std::vector<double> xs(steps + 1), gs(steps + 1), gp(steps + 1);
    for (std::int64_t i = 0; i <= steps; ++i) {
        xs[i] = std::min(lo + static_cast<double>(i) * grid_step, hi);
        gs[i] = g_of(xs[i], params);
        gp[i] = g_prime(xs[i], params);
    }
    // Per-interval padding: a Taylor step from the nearer endpoint plus a
    // local curvature term estimated from the derivative difference. Local
    // estimates keep the kink at the beta clamp from poisoning the whole grid.
    double max_g = -1e300;
    for (std::int64_t i = 0; i + 1 <= steps; ++i) {
        const double h = xs[i + 1] - xs[i];
        const double pad =
            h * (std::min(std::abs(gp[i]), std::abs(gp[i + 1])) + std::abs(gp[i + 1] - gp[i]));
        max_g = std::max(max_g, std::max(gs[i], gs[i + 1]) + pad);
    }
    cert.max_g = max_g;

    // Small-set tails must shrink along a decade ladder ending at reference_n.
    cert.small_set_sums = small_set_tail(reference_n, params);
    cert.small_set_sums_decreasing = true;
    std::pair<double, double> prev{1e300, 1e300};
    for (std::int64_t n = 1000; n <= reference_n; n *= 10) {
        const auto cur = small_set_tail(n, params);
        if (cur.first >= prev.first || cur.second >= prev.second) cert.small_set_sums_decreasing = false;
        prev = cur;
    }

    cert.valid = max_g < 0.0 && cert.small_set_sums_decreasing;
    if (!cert.valid) {
        if (max_g >= 0.0)
            cert.reason = "padded grid maximum of g is not negative (grid too coarse or target too low)";
        else
            cert.reason = "small-set tail sums are not decreasing in n";
    }
    return cert;
}

}  // namespace modcert
