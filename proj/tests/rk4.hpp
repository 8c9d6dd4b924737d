#pragma once

#include <functional>
#include <vector>

// Fixed-step classical Runge-Kutta integrator used as the independent oracle
// for the closed-form phase solutions. Integrates y' = f(t, y) from t = 0 to
// t_end with step h (final partial step included).
inline std::vector<double> rk4_integrate(
    const std::function<std::vector<double>(double, const std::vector<double>&)>& f,
    std::vector<double> y, double t_end, double h) {
    double t = 0.0;
    const auto axpy = [](const std::vector<double>& y0, const std::vector<double>& k, double c) {
        std::vector<double> out(y0.size());
        for (std::size_t i = 0; i < y0.size(); ++i) out[i] = y0[i] + c * k[i];
        return out;
    };
    while (t < t_end) {
        const double step = std::min(h, t_end - t);
        const auto k1 = f(t, y);
        const auto k2 = f(t + step / 2, axpy(y, k1, step / 2));
        const auto k3 = f(t + step / 2, axpy(y, k2, step / 2));
        const auto k4 = f(t + step, axpy(y, k3, step));
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] += step / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        t += step;
    }
    return y;
}
