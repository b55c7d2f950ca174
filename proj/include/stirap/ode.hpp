#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include <stirap/errors.hpp>
#include <stirap/types.hpp>

namespace stirap {

// Dormand-Prince 5(4) with PI-free step control and local extrapolation.
// Advances y in place from t0 to t1; rhs has signature rhs(t, y, dy).
template <typename S, typename RHS>
void integrate_dopri5(RHS&& rhs, State<S>& y, S t0, S t1, const IntegratorSettings<S>& set,
                      S scale) {
    if (!(t1 > t0)) return;

    constexpr S a21 = S(1) / S(5);
    constexpr S a31 = S(3) / S(40), a32 = S(9) / S(40);
    constexpr S a41 = S(44) / S(45), a42 = S(-56) / S(15), a43 = S(32) / S(9);
    constexpr S a51 = S(19372) / S(6561), a52 = S(-25360) / S(2187), a53 = S(64448) / S(6561),
                a54 = S(-212) / S(729);
    constexpr S a61 = S(9017) / S(3168), a62 = S(-355) / S(33), a63 = S(46732) / S(5247),
                a64 = S(49) / S(176), a65 = S(-5103) / S(18656);
    constexpr S b1 = S(35) / S(384), b3 = S(500) / S(1113), b4 = S(125) / S(192),
                b5 = S(-2187) / S(6784), b6 = S(11) / S(84);
    constexpr S e1 = S(5179) / S(57600), e3 = S(7571) / S(16695), e4 = S(393) / S(640),
                e5 = S(-92097) / S(339200), e6 = S(187) / S(2100), e7 = S(1) / S(40);
    constexpr S c2 = S(1) / S(5), c3 = S(3) / S(10), c4 = S(4) / S(5), c5 = S(8) / S(9);

    const S h_floor = S(1e-14) * std::abs(scale);
    S t = t0;
    S h = (t1 - t0) / S(100);
    if (set.max_step > S(0)) h = std::min(h, set.max_step);

    State<S> k1, k2, k3, k4, k5, k6, k7, tmp, y5;

    while (t < t1) {
        h = std::min(h, t1 - t);
        if (!(h > S(0))) break;

        rhs(t, y, k1);
        tmp = y + h * a21 * k1;
        rhs(t + c2 * h, tmp, k2);
        tmp = y + h * (a31 * k1 + a32 * k2);
        rhs(t + c3 * h, tmp, k3);
        tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        rhs(t + c4 * h, tmp, k4);
        tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        rhs(t + c5 * h, tmp, k5);
        tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        rhs(t + h, tmp, k6);
        y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        rhs(t + h, y5, k7);
        tmp = y + h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        S err = S(0);
        for (int i = 0; i < 3; ++i) {
            const S sc =
                set.abs_tol + set.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            const S d = std::abs(y5[i] - tmp[i]);
            err += (d / sc) * (d / sc);
        }
        err = std::sqrt(err / S(3));

        S fac;
        if (!std::isfinite(err))
            fac = S(0.2);
        else if (err > S(0))
            fac = std::clamp(S(0.9) * std::pow(err, S(-0.2)), S(0.2), S(5));
        else
            fac = S(5);

        if (std::isfinite(err) && err <= S(1)) {
            t += h;
            y = y5;
            h *= fac;
        } else {
            h *= fac;
            if (h < h_floor)
                throw StepFailure("step size underflow near t = " + std::to_string(t) +
                                  "; the state is changing faster than the tolerances allow");
        }
        if (set.max_step > S(0)) h = std::min(h, set.max_step);
    }
}

// Classic fixed-step fourth-order scheme, mostly for cross-checks.
template <typename S, typename RHS>
void rk4_fixed(RHS&& rhs, State<S>& y, S t0, S t1, int steps) {
    if (steps < 1) throw ValidationError("fixed-step integration needs at least one step");
    const S h = (t1 - t0) / S(steps);
    State<S> k1, k2, k3, k4, tmp;
    for (int i = 0; i < steps; ++i) {
        const S t = t0 + h * S(i);
        rhs(t, y, k1);
        tmp = y + (h / S(2)) * k1;
        rhs(t + h / S(2), tmp, k2);
        tmp = y + (h / S(2)) * k2;
        rhs(t + h / S(2), tmp, k3);
        tmp = y + h * k3;
        rhs(t + h, tmp, k4);
        y += (h / S(6)) * (k1 + S(2) * k2 + S(2) * k3 + k4);
    }
}

}  // namespace stirap
