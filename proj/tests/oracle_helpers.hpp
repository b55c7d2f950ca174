#pragma once

// Independent numerical oracles used only by the test suite: finite
// differences, Romberg quadrature, and a deterministic frame generator.

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include <stirap/types.hpp>

namespace oracle {

template <class F>
double central_diff(F&& f, double t, double h = 1e-6) {
    return (f(t + h) - f(t - h)) / (2.0 * h);
}

template <class F>
double central_diff2(F&& f, double t, double h = 1e-5) {
    return (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h);
}

// Romberg integration on [a,b]; plenty for the smooth integrands we
// cross-check (quadrature module has its own error control).
template <class F>
double romberg(F&& f, double a, double b, int levels = 18, double tol = 1e-13) {
    std::vector<double> prev(1), cur;
    prev[0] = 0.5 * (b - a) * (f(a) + f(b));
    double h = b - a;
    std::size_t n = 1;
    for (int k = 1; k < levels; ++k) {
        h *= 0.5;
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += f(a + h * (2.0 * i + 1.0));
        cur.assign(k + 1, 0.0);
        cur[0] = 0.5 * prev[0] + h * s;
        double p4 = 4.0;
        for (int j = 1; j <= k; ++j) {
            cur[j] = cur[j - 1] + (cur[j - 1] - prev[j - 1]) / (p4 - 1.0);
            p4 *= 4.0;
        }
        if (k > 3 && std::abs(cur[k] - prev[k - 1]) < tol * (1.0 + std::abs(cur[k])))
            return cur[k];
        prev = cur;
        n *= 2;
    }
    return prev.back();
}

// Deterministic random mixing frames for eigen-residual sweeps.
inline std::vector<stirap::MixingFrame<double>> random_frames(int count, unsigned seed = 20260814) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> th(0.05, 1.52), thd(-5.0, 5.0),
        thdd(-30.0, 30.0), om(0.5, 50.0), omd(-20.0, 20.0);
    std::vector<stirap::MixingFrame<double>> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        stirap::MixingFrame<double> f{};
        f.t = 0.0;
        f.theta = th(gen);
        f.theta_dot = thd(gen);
        f.theta_ddot = thdd(gen);
        f.omega = om(gen);
        f.omega_dot = omd(gen);
        f.omega_tilde = std::hypot(f.omega, 2.0 * f.theta_dot);
        out.push_back(f);
    }
    return out;
}

}  // namespace oracle
