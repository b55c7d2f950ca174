#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include <stirap/errors.hpp>
#include <stirap/types.hpp>

namespace stirap {

namespace detail {

template <typename S>
S ipow(S x, int e) {
    S r = S(1);
    for (int k = 0; k < e; ++k) r *= x;
    return r;
}

}  // namespace detail

template <typename S>
void validate(const PulseConfig<S>& cfg) {
    if (!(cfg.tau > S(0))) throw ValidationError("pulse width tau must be positive");
    if (cfg.n < 1 || cfg.n > 8) throw ValidationError("envelope power n must be between 1 and 8");
    if (!(cfg.omega_p0 > S(0))) throw ValidationError("pump peak amplitude must be positive");
    if (!(cfg.omega_s0 > S(0))) throw ValidationError("Stokes peak amplitude must be positive");
    if (cfg.gamma < S(0)) throw ValidationError("loss rate gamma must be nonnegative");
    if (cfg.t_d < S(0)) throw ValidationError("pulse delay must be nonnegative");
}

// cos^n bump of full width tau, identically zero outside the open support.
template <typename S>
S envelope(int n, S tau, S t) {
    const S half = tau / S(2);
    if (!(std::abs(t) < half)) return S(0);
    return detail::ipow(std::cos(std::numbers::pi_v<S> * t / tau), n);
}

// One-sided derivative convention: the interior formula applies up to and
// including the support edge, so edge frames stay finite for every n.
template <typename S>
S envelope_dot(int n, S tau, S t) {
    const S half = tau / S(2);
    if (std::abs(t) > half) return S(0);
    const S x = std::numbers::pi_v<S> * t / tau;
    return -(S(n) * std::numbers::pi_v<S> / tau) * detail::ipow(std::cos(x), n - 1) * std::sin(x);
}

template <typename S>
S envelope_ddot(int n, S tau, S t) {
    const S half = tau / S(2);
    if (std::abs(t) > half) return S(0);
    const S x = std::numbers::pi_v<S> * t / tau;
    const S c = std::cos(x);
    const S s = std::sin(x);
    const S k = std::numbers::pi_v<S> / tau;
    S out = -S(n) * detail::ipow(c, n);
    if (n >= 2) out += S(n) * S(n - 1) * detail::ipow(c, n - 2) * s * s;
    return k * k * out;
}

// Instantaneous pump and Stokes Rabi frequencies; Stokes leads by t_d.
template <typename S>
std::pair<S, S> rabi_pair(const PulseConfig<S>& cfg, S t) {
    return {cfg.omega_p0 * envelope(cfg.n, cfg.tau, t - cfg.t_d / S(2)),
            cfg.omega_s0 * envelope(cfg.n, cfg.tau, t + cfg.t_d / S(2))};
}

template <typename S>
InteractionWindow<S> interaction_window(const PulseConfig<S>& cfg) {
    return {-(cfg.tau - cfg.t_d) / S(2), (cfg.tau - cfg.t_d) / S(2), cfg.t_d < cfg.tau};
}

// Union of both supports: where at least one field can be on.
template <typename S>
std::pair<S, S> field_span(const PulseConfig<S>& cfg) {
    return {-cfg.tau / S(2) - cfg.t_d / S(2), cfg.tau / S(2) + cfg.t_d / S(2)};
}

template <typename S>
MixingFrame<S> mixing_frame(const PulseConfig<S>& cfg, S t) {
    const S wp = cfg.omega_p0 * envelope(cfg.n, cfg.tau, t - cfg.t_d / S(2));
    const S ws = cfg.omega_s0 * envelope(cfg.n, cfg.tau, t + cfg.t_d / S(2));
    if (wp == S(0) && ws == S(0))
        throw DegenerateField("both fields vanish at t = " + std::to_string(t) +
                              "; the mixing angle is undefined there");
    const S wpd = cfg.omega_p0 * envelope_dot(cfg.n, cfg.tau, t - cfg.t_d / S(2));
    const S wsd = cfg.omega_s0 * envelope_dot(cfg.n, cfg.tau, t + cfg.t_d / S(2));
    const S wpdd = cfg.omega_p0 * envelope_ddot(cfg.n, cfg.tau, t - cfg.t_d / S(2));
    const S wsdd = cfg.omega_s0 * envelope_ddot(cfg.n, cfg.tau, t + cfg.t_d / S(2));

    const S q = wp * wp + ws * ws;
    const S w = wpd * ws - wp * wsd;

    MixingFrame<S> f;
    f.t = t;
    f.theta = std::atan2(wp, ws);
    f.theta_dot = w / q;
    f.theta_ddot = (wpdd * ws - wp * wsdd) / q - S(2) * w * (wp * wpd + ws * wsd) / (q * q);
    f.omega = std::sqrt(q);
    f.omega_dot = (wp * wpd + ws * wsd) / f.omega;
    f.omega_tilde = std::hypot(f.omega, S(2) * f.theta_dot);
    return f;
}

// 1 / (tau * peak total Rabi frequency): small means slow driving.
template <typename S>
S adiabaticity(const PulseConfig<S>& cfg) {
    validate(cfg);
    const auto span = field_span(cfg);
    const auto total = [&](S t) {
        auto [p, s] = rabi_pair(cfg, t);
        return std::hypot(p, s);
    };

    const int grid = 2000;
    const S width = span.second - span.first;
    int best = 0;
    S peak = S(-1);
    for (int k = 0; k <= grid; ++k) {
        const S t = span.first + width * S(k) / S(grid);
        const S v = total(t);
        if (v > peak) {
            peak = v;
            best = k;
        }
    }

    // refine between the neighbours of the best sample
    S a = span.first + width * S(std::max(0, best - 1)) / S(grid);
    S b = span.first + width * S(std::min(grid, best + 1)) / S(grid);
    for (int it = 0; it < 200; ++it) {
        const S m1 = a + (b - a) / S(3);
        const S m2 = b - (b - a) / S(3);
        if (total(m1) < total(m2))
            a = m1;
        else
            b = m2;
    }
    peak = std::max(peak, total((a + b) / S(2)));
    return S(1) / (cfg.tau * peak);
}

}  // namespace stirap
