#include "modcert/ode_lower.hpp"

#include <cmath>
#include <stdexcept>

namespace modcert {

namespace {
constexpr double kSevenEighths = 7.0 / 8.0;

double cbrt_pow(double base, double num) {
    // (base)^(num/3) for base >= 0.
    return std::pow(base, num / 3.0);
}
}  // namespace

double t0_of(double eps) {
    if (eps < 0.0 || eps >= 1.0) throw std::invalid_argument("t0_of: eps must be in [0, 1)");
    return 1.5 * (1.0 - cbrt_pow(1.0 - eps, 2.0));
}

double phase0_x_at(double t) { return 1.0 - std::pow(1.0 - 2.0 * t / 3.0, 1.5); }

double phase1_t1_of(double eps) {
    if (eps < 0.0 || eps >= kSevenEighths)
        throw std::invalid_argument("phase1: eps must be in [0, 7/8)");
    return 1.5 * (4.0 * cbrt_pow(1.0 - eps, 1.0) - 3.0 * cbrt_pow(1.0 - eps, 2.0) - 1.0);
}

namespace {
// r(t) = 1 - 2t/(3 - 2 t0), the shared decay variable of phase 1.
double phase1_r(double eps, double t) { return 1.0 - 2.0 * t / (3.0 - 2.0 * t0_of(eps)); }
}  // namespace

double phase1_x0_at(double eps, double t) {
    const double r = phase1_r(eps, t);
    return (1.0 - eps) * std::pow(r, 1.5);
}

double phase1_x1_at(double eps, double t) {
    const double r = phase1_r(eps, t);
    return 3.0 * (1.0 - eps) * (r - std::pow(r, 1.5));
}

double phase1_x2_at(double eps, double t) {
    const double t0 = t0_of(eps);
    const double r = phase1_r(eps, t);
    return 6.0 * (1.0 - eps) * t / (3.0 - 2.0 * t0) + 2.0 * (1.0 - eps) * (std::pow(r, 1.5) - 1.0);
}

double phase1_a_at(double eps, double t) {
    const double t0 = t0_of(eps);
    const double r = phase1_r(eps, t);
    return (2.0 * eps - 0.5 - t0) - (3.0 * eps - 1.5 - t0) * r - (1.0 - eps) * std::pow(r, 1.5);
}

double phase1_h_at(double eps, double t) {
    const double t0 = t0_of(eps);
    const double r = phase1_r(eps, t);
    return (6.0 * eps - 3.0 - 2.0 * t0) * r + 3.0 * (1.0 - eps) * std::pow(r, 1.5);
}

Phase1Values phase1_of(double eps) {
    Phase1Values out;
    out.t1 = phase1_t1_of(eps);
    out.x0 = phase1_x0_at(eps, out.t1);
    out.x1 = phase1_x1_at(eps, out.t1);
    out.x2 = phase1_x2_at(eps, out.t1);
    out.a = phase1_a_at(eps, out.t1);
    if (std::abs(phase1_h_at(eps, out.t1)) > 1e-12)
        throw std::logic_error("phase1: h(t1) does not vanish");
    return out;
}

double phase2_z0_at(double eps, double t) {
    const double t0 = t0_of(eps);
    const auto p1 = phase1_of(eps);
    const double denom = 3.0 - 2.0 * t0 - 2.0 * p1.t1;
    return 3.0 * p1.x0 * (1.0 - std::sqrt(1.0 - 2.0 * t / denom));
}

Phase2Values t2_of(double eps) {
    if (eps <= 0.0 || eps >= kSevenEighths)
        throw std::invalid_argument("t2_of: eps must be in (0, 7/8)");
    const double t0 = t0_of(eps);
    const auto p1 = phase1_of(eps);
    const double p = 3.0 * p1.x0 + 2.0 * p1.x1;
    const double q_den = 3.0 - 2.0 * t0 - 2.0 * p1.t1;
    const double x0sq = p1.x0 * p1.x0;
    const double disc = 81.0 * x0sq * x0sq - 36.0 * x0sq * p * q_den + 36.0 * x0sq * q_den * q_den;
    if (disc < 0.0) throw std::logic_error("t2_of: negative discriminant");
    Phase2Values out;
    out.t2 = p / 2.0 - (9.0 * x0sq + std::sqrt(disc)) / (4.0 * q_den);  // smaller root
    out.z0 = phase2_z0_at(eps, out.t2);
    out.z1 = out.t2 - out.z0;
    return out;
}

namespace {
struct Phase3Context {
    double x0t1 = 0;  // x0(t1), the fraction of untouched vertices
    double a3 = 0;    // pendant vertices remaining outside C2
    double t3 = 0;
};

Phase3Context phase3_context(double eps) {
    const auto p1 = phase1_of(eps);
    if (p1.x1 <= 0.0) throw std::invalid_argument("phase3: x1(t1) must be positive (eps = 0 rejected)");
    const auto p2 = t2_of(eps);
    Phase3Context ctx;
    ctx.x0t1 = p1.x0;
    const double absorbed = p2.z1 * (2.0 * p1.x1 - p2.z1) / p1.x1;
    ctx.a3 = p1.x1 - absorbed;
    ctx.t3 = 2.0 * ctx.a3;
    return ctx;
}

double w_formula(double x0t1, double t, int i) {
    const double s = 3.0 * x0t1;
    const double denom = 9.0 * x0t1 * x0t1;
    switch (i) {
        case 0: return (s - t) * (s - t) * (s - t) / (3.0 * denom);
        case 1: return t * (t - s) * (t - s) / denom;
        case 2: return t * t * (s - t) / denom;
        case 3: return t * t * t / (3.0 * denom);
        default: throw std::invalid_argument("phase3_w_at: i must be 0..3");
    }
}
}  // namespace

double phase3_t3_of(double eps) { return phase3_context(eps).t3; }

double phase3_w_at(double eps, double t, int i) {
    return w_formula(phase3_context(eps).x0t1, t, i);
}

Phase3Values phase3_of(double eps) {
    const auto ctx = phase3_context(eps);
    Phase3Values out;
    out.t3 = ctx.t3;
    out.w0 = w_formula(ctx.x0t1, ctx.t3, 0);
    out.w1 = w_formula(ctx.x0t1, ctx.t3, 1);
    out.w2 = w_formula(ctx.x0t1, ctx.t3, 2);
    out.w3 = w_formula(ctx.x0t1, ctx.t3, 3);
    return out;
}

PhaseSchedule schedule_of(double eps) {
    if (eps <= 0.0 || eps >= kSevenEighths)
        throw std::invalid_argument("schedule_of: eps must be in (0, 7/8)");
    PhaseSchedule s;
    s.eps = eps;
    s.t0 = t0_of(eps);
    const auto p1 = phase1_of(eps);
    s.t1 = p1.t1;
    s.x0_t1 = p1.x0;
    s.x1_t1 = p1.x1;
    s.x2_t1 = p1.x2;
    s.a_t1 = p1.a;
    const auto p2 = t2_of(eps);
    s.t2 = p2.t2;
    s.z0_t2 = p2.z0;
    s.z1_t2 = p2.z1;
    s.absorbed2 = urn_fraction(p1.x1, p2.z1);
    const auto p3 = phase3_of(eps);
    s.t3 = p3.t3;
    s.w0_t3 = p3.w0;
    s.w1_t3 = p3.w1;
    s.w2_t3 = p3.w2;
    s.w3_t3 = p3.w3;
    s.v2 = eps + p1.x2 + s.absorbed2;
    s.e2 = s.t0 + p1.a + 2.0 * p1.x2 + s.absorbed2 + p2.z1;
    const double a3 = p1.x1 - s.absorbed2;
    const double b3 = p3.w2 + 1.5 * p3.w3;
    s.absorbed3 = urn_fraction(a3, b3);
    s.v3 = s.v2 + p3.w2 + p3.w3 + s.absorbed3;
    s.e3 = s.e2 + 2.0 * p3.w2 + 3.0 * p3.w3 + s.absorbed3;
    s.qr = 2.0 * s.e3 / (3.0 * s.v3) - s.v3;

    // Consistency checks forced by the defining equations.
    if (std::abs(s.z0_t2 - (2.0 * s.t2 - 2.0 * s.x1_t1)) > 1e-12)
        throw std::logic_error("schedule_of: phase-2 stopping condition violated");
    if (std::abs(s.w0_t3 + s.w1_t3 + s.w2_t3 + s.w3_t3 - s.x0_t1) > 1e-12)
        throw std::logic_error("schedule_of: phase-3 mass not conserved");
    if (std::abs(s.z0_t2 + s.z1_t2 - s.t2) > 1e-12)
        throw std::logic_error("schedule_of: z0 + z1 != t2");
    return s;
}

double lower_bound_of(double eps) {
    const auto s = schedule_of(eps);
    return 2.0 / 3.0 + (s.qr - 2.0 / 3.0) * s.v3;
}

double golden_section_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0))
        throw std::invalid_argument("bisect_root: no sign change on the bracket");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double optimize_eps(double lo, double hi, double tol) {
    if (!(lo <= hi)) throw std::invalid_argument("optimize_eps: lo > hi");
    if (lo <= 0.0 || hi >= kSevenEighths)
        throw std::invalid_argument("optimize_eps: bracket must lie in (0, 7/8)");
    if (lo == hi) return lo;
    constexpr double kGridStep = 1e-3;
    double best_x = lo, best_f = -1e300;
    for (double x = lo; x <= hi + 1e-15; x += kGridStep) {
        const double xx = std::min(x, hi);
        const double fx = lower_bound_of(xx);
        if (!std::isfinite(fx)) throw std::runtime_error("optimize_eps: non-finite objective");
        if (fx > best_f) {
            best_f = fx;
            best_x = xx;
        }
    }
    const double a = std::max(lo, best_x - kGridStep);
    const double b = std::min(hi, best_x + kGridStep);
    return golden_section_max([](double x) { return lower_bound_of(x); }, a, b, tol);
}

LowerBoundCertificate lower_certificate(double lo, double hi, double tol) {
    LowerBoundCertificate cert;
    cert.eps_star = optimize_eps(lo, hi, tol);
    const auto s = schedule_of(cert.eps_star);
    cert.qr_star = s.qr;
    cert.v3_star = s.v3;
    cert.bound = 2.0 / 3.0 + (s.qr - 2.0 / 3.0) * s.v3;
    cert.eps_below_seven_eighths = cert.eps_star < kSevenEighths;
    cert.cherry_budget_ok = 4.0 * cert.v3_star < 1.0 / 3.0;
    cert.reported_rounding_ok = std::abs(4.0 * cert.v3_star - 0.179136) <= 1e-4;
    cert.valid = cert.eps_below_seven_eighths && cert.cherry_budget_ok;
    return cert;
}

double urn_fraction(double a, double b) {
    if (b < 0.0 || b > a) throw std::invalid_argument("urn_fraction: need 0 <= b <= a");
    if (a == 0.0) return 0.0;
    return b * (2.0 * a - b) / a;
}

double urn_n0(double a, double t) { return a * (1.0 - t / (2.0 * a)) * (1.0 - t / (2.0 * a)); }

}  // namespace modcert
