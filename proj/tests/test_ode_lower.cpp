#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "modcert/ode_lower.hpp"
#include "rk4.hpp"

using namespace modcert;

TEST_CASE("t0 closed form") {
    CHECK(t0_of(0.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(t0_of(7.0 / 8.0) == doctest::Approx(9.0 / 8.0).epsilon(1e-14));  // (1/8)^(2/3) = 1/4
    CHECK_THROWS_AS(t0_of(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(t0_of(1.0), std::invalid_argument);

    // RK4 oracle: integrate x' = (3 - 3x)/(3 - 2t) to t0(eps); x must hit eps.
    const double eps = 0.037562;
    const auto y = rk4_integrate(
        [](double t, const std::vector<double>& x) {
            return std::vector<double>{(3.0 - 3.0 * x[0]) / (3.0 - 2.0 * t)};
        },
        {0.0}, t0_of(eps), 1e-5);
    CHECK(std::abs(y[0] - eps) < 1e-8);
    CHECK(std::abs(phase0_x_at(t0_of(eps)) - eps) < 1e-12);
}

TEST_CASE("phase 1 exact endpoints") {
    const auto zero = phase1_of(0.0);
    CHECK(zero.t1 == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(zero.x0 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(zero.x1 == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(zero.x2 == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(zero.a == doctest::Approx(0.0).epsilon(1e-14));

    // At eps = 7/8 the two roots coincide at t1 = 3/8.
    CHECK(phase1_t1_of(0.874999999) == doctest::Approx(3.0 / 8.0).epsilon(1e-6));
    CHECK_THROWS_AS(phase1_t1_of(7.0 / 8.0), std::invalid_argument);
}

namespace {

// Coupled phase-1 system for the RK4 oracle: (x0, x1, x2, a, h).
std::vector<double> phase1_rhs(double eps, double t, const std::vector<double>& y) {
    const double denom = 3.0 - 2.0 * t0_of(eps) - 2.0 * t;
    const double x0p = -3.0 * y[0] / denom;
    const double x1p = (3.0 * y[0] - 2.0 * y[1]) / denom;
    const double x2p = 2.0 * y[1] / denom;
    const double ap = y[4] / denom;
    const double hp = -1.0 + x2p - ap;
    return {x0p, x1p, x2p, ap, hp};
}

}  // namespace

TEST_CASE("phase 1 closed forms match the RK4 oracle") {
    for (const double eps : {0.037562, 0.2, 0.6}) {
        const auto p1 = phase1_of(eps);
        const double h0 = 3.0 * (eps + std::pow(1.0 - eps, 2.0 / 3.0) - 1.0);
        const auto y = rk4_integrate(
            [&](double t, const std::vector<double>& v) { return phase1_rhs(eps, t, v); },
            {1.0 - eps, 0.0, 0.0, 0.0, h0}, p1.t1, 1e-5);
        CHECK(std::abs(y[0] - p1.x0) < 1e-6);
        CHECK(std::abs(y[1] - p1.x1) < 1e-6);
        CHECK(std::abs(y[2] - p1.x2) < 1e-6);
        CHECK(std::abs(y[3] - p1.a) < 1e-6);
        CHECK(std::abs(y[4]) < 1e-6);  // h(t1) = 0
    }
}

TEST_CASE("phase 2 defining equation, Vieta, and bisection oracle") {
    for (const double eps : {0.01, 0.037562, 0.2, 0.5}) {
        const auto p1 = phase1_of(eps);
        const auto p2 = t2_of(eps);
        CHECK(std::abs(p2.z0 - (2.0 * p2.t2 - 2.0 * p1.x1)) < 1e-12);
        CHECK(std::abs(p2.z0 + p2.z1 - p2.t2) < 1e-14);

        // Vieta: t- t+ = (P^2 - 9 x0^2)/4.
        const double p = 3.0 * p1.x0 + 2.0 * p1.x1;
        const double qd = 3.0 - 2.0 * t0_of(eps) - 2.0 * p1.t1;
        const double x0sq = p1.x0 * p1.x0;
        const double disc = std::sqrt(81.0 * x0sq * x0sq - 36.0 * x0sq * p * qd + 36.0 * x0sq * qd * qd);
        const double t_minus = p / 2.0 - (9.0 * x0sq + disc) / (4.0 * qd);
        const double t_plus = p / 2.0 - (9.0 * x0sq - disc) / (4.0 * qd);
        CHECK(t_minus < t_plus);
        CHECK(std::abs(t_minus * t_plus - (p * p - 9.0 * x0sq) / 4.0) < 1e-10);
        CHECK(p2.t2 == doctest::Approx(t_minus).epsilon(1e-14));
    }

    // Bisection on the stopping condition reproduces t2 to 1e-10.
    const double eps = 0.037562;
    const auto p1 = phase1_of(eps);
    const auto p2 = t2_of(eps);
    const double root = bisect_root(
        [&](double t) { return phase2_z0_at(eps, t) - (2.0 * t - 2.0 * p1.x1); }, 1e-9,
        p2.t2 + 1e-3, 1e-12);
    CHECK(std::abs(root - p2.t2) < 1e-10);
}

TEST_CASE("phase 3 conservation identities and RK4 oracle") {
    for (const double eps : {0.037562, 0.3}) {
        const auto p1 = phase1_of(eps);
        const auto p3 = phase3_of(eps);
        CHECK(std::abs(p3.w0 + p3.w1 + p3.w2 + p3.w3 - p1.x0) < 1e-12);
        CHECK(std::abs(3.0 * p3.w0 + 2.0 * p3.w1 + p3.w2 - (3.0 * p1.x0 - p3.t3)) < 1e-12);

        const double s = 3.0 * p1.x0;
        const auto w = rk4_integrate(
            [&](double t, const std::vector<double>& v) {
                const double denom = s - t;
                return std::vector<double>{-3.0 * v[0] / denom, (3.0 * v[0] - 2.0 * v[1]) / denom,
                                           (2.0 * v[1] - v[2]) / denom, v[2] / denom};
            },
            {p1.x0, 0.0, 0.0, 0.0}, p3.t3, 1e-5);
        CHECK(std::abs(w[0] - p3.w0) < 1e-6);
        CHECK(std::abs(w[1] - p3.w1) < 1e-6);
        CHECK(std::abs(w[2] - p3.w2) < 1e-6);
        CHECK(std::abs(w[3] - p3.w3) < 1e-6);
    }
    CHECK_THROWS_AS(phase3_of(0.0), std::invalid_argument);
}

TEST_CASE("phase 2 z0 closed form matches its RK4 oracle") {
    for (const double eps : {0.037562, 0.4}) {
        const auto p1 = phase1_of(eps);
        const auto p2 = t2_of(eps);
        const double denom0 = 3.0 - 2.0 * t0_of(eps) - 2.0 * p1.t1;
        const auto z = rk4_integrate(
            [&](double t, const std::vector<double>& v) {
                return std::vector<double>{(3.0 * p1.x0 - v[0]) / (denom0 - 2.0 * t)};
            },
            {0.0}, p2.t2, 1e-5);
        CHECK(std::abs(z[0] - p2.z0) < 1e-6);
    }
}

TEST_CASE("schedule reproduces the reported optimum values") {
    const auto s = schedule_of(0.037562);
    CHECK(std::abs(s.v3 - 0.044783) < 1e-5);
    CHECK(std::abs(s.qr - 0.674701) < 1e-5);

    // Near zero exploration the component is almost a tree: qr -> 2/3.
    const auto tiny = schedule_of(1e-6);
    CHECK(std::abs(tiny.qr - 2.0 / 3.0) < 1e-3);

    for (const auto& field : {s.t0, s.t1, s.t2, s.t3, s.x0_t1, s.x1_t1, s.x2_t1, s.a_t1, s.z0_t2,
                              s.z1_t2, s.w0_t3, s.w1_t3, s.w2_t3, s.w3_t3, s.v3, s.e3}) {
        CHECK(field >= 0.0);
        CHECK(field <= 3.0);
    }
}

TEST_CASE("phase-1 shape properties") {
    for (const double eps : {0.05, 0.2, 0.5, 0.8}) {
        const double t1 = phase1_t1_of(eps);
        double prev_x0 = 1e9, prev_x2 = -1.0, prev_a = -1.0;
        for (int i = 0; i <= 50; ++i) {
            const double t = t1 * static_cast<double>(i) / 50.0;
            CHECK(phase1_h_at(eps, t) >= -1e-12);
            const double x0 = phase1_x0_at(eps, t);
            const double x2 = phase1_x2_at(eps, t);
            const double a = phase1_a_at(eps, t);
            CHECK(x0 <= prev_x0 + 1e-12);
            CHECK(x2 >= prev_x2 - 1e-12);
            CHECK(a >= prev_a - 1e-12);
            prev_x0 = x0;
            prev_x2 = x2;
            prev_a = a;
        }
    }
}

TEST_CASE("optimizer finds the reported optimum and is stable") {
    const double star = optimize_eps(1e-4, 0.8745, 1e-7);
    CHECK(std::abs(star - 0.037562) < 1e-5);

    CHECK(std::abs(optimize_eps(0.03, 0.05, 1e-7) - star) < 1e-5);
    CHECK(optimize_eps(0.25, 0.25, 1e-7) == 0.25);

    // Bracket perturbation does not move the interior maximizer.
    CHECK(std::abs(optimize_eps(0.0101, 0.8645, 1e-7) - star) < 1e-5);
    CHECK_THROWS_AS(optimize_eps(0.05, 0.03, 1e-7), std::invalid_argument);
}

TEST_CASE("lower-bound certificate") {
    const auto cert = lower_certificate();
    CHECK(std::abs(cert.bound - 0.667026) < 1e-5);
    CHECK(cert.valid);
    CHECK(cert.cherry_budget_ok);
    CHECK(4.0 * cert.v3_star < 1.0 / 3.0);
    CHECK(std::abs(4.0 * cert.v3_star - 0.179136) < 1e-4);
    CHECK(std::abs(cert.bound - 2.0 / 3.0 - (cert.qr_star - 2.0 / 3.0) * cert.v3_star) < 1e-12);
}

TEST_CASE("urn formula") {
    CHECK(urn_fraction(0.7, 0.0) == doctest::Approx(0.0));
    CHECK(urn_fraction(0.7, 0.7) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(urn_fraction(1.0, 0.5) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK_THROWS_AS(urn_fraction(1.0, 1.5), std::invalid_argument);
    CHECK(urn_n0(0.5, 0.0) == doctest::Approx(0.5));
}

TEST_CASE("both phase-2 roots stay ordered below seven eighths") {
    for (double eps = 0.01; eps < 0.875; eps += 0.02) {
        const auto p1 = phase1_of(eps);
        const double p = 3.0 * p1.x0 + 2.0 * p1.x1;
        const double qd = 3.0 - 2.0 * t0_of(eps) - 2.0 * p1.t1;
        const double x0sq = p1.x0 * p1.x0;
        const double disc = std::sqrt(81.0 * x0sq * x0sq - 36.0 * x0sq * p * qd + 36.0 * x0sq * qd * qd);
        const double t_minus = p / 2.0 - (9.0 * x0sq + disc) / (4.0 * qd);
        const double t_plus = p / 2.0 - (9.0 * x0sq - disc) / (4.0 * qd);
        CHECK(t_minus < t_plus);
        CHECK(t_minus > 0.0);
    }
}
