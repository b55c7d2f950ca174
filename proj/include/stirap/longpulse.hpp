#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>

#include <stirap/pulses.hpp>
#include <stirap/quadrature.hpp>
#include <stirap/types.hpp>

namespace stirap {

// Dark-channel drain rate right after the window opens: the quasistationary
// value plus a ringdown of the bright/excited pair, written as a sum of
// decaying exponentials so nothing overflows in the overdamped regime.
template <typename S>
S hd2_transient(const TransientParams<S>& p) {
    const S q = p.omega_i * p.omega_i;
    const S a2 = p.alpha * p.alpha;
    const S stat = -S(2) * p.gamma * a2 / q;

    const std::complex<S> w = std::sqrt(std::complex<S>(q - p.gamma * p.gamma / S(4), S(0)));
    const std::complex<S> i(S(0), S(1));
    const std::complex<S> sp = std::complex<S>(-p.gamma / S(4), S(0)) + i * w / S(2);
    const std::complex<S> sm = std::complex<S>(-p.gamma / S(4), S(0)) - i * w / S(2);
    const std::complex<S> ep = std::exp(sp * p.t_prime);
    const std::complex<S> em = std::exp(sm * p.t_prime);

    const S cos_damped = ((ep + em) / S(2)).real();
    S sinw_damped;  // sin(w t'/2)/w folded with the same decay
    if (std::abs(w) * p.t_prime < S(1e-12))
        sinw_damped = (p.t_prime / S(2)) * std::exp(-p.gamma * p.t_prime / S(4));
    else
        sinw_damped = ((ep - em) / (S(2) * i * w)).real();

    const S coeff = a2 * (p.gamma * p.gamma - S(2) * q) / q;
    return stat - stat * cos_damped + coeff * sinw_damped;
}

// Settled drain rates per unit time once the pair follows the fields:
// leading term and its first shape correction.
template <typename S>
std::pair<S, S> hd_quasistationary(const MixingFrame<S>& f, S gamma) {
    const S q = f.omega * f.omega;
    const S d = f.theta_dot;
    const S h1 = -S(2) * gamma * d * d / q;
    const S h2 = S(4) * d * d * f.omega_dot * (q - S(2) * gamma * gamma) / (q * q * f.omega) +
                 S(4) * d * f.theta_ddot * (gamma * gamma - q) / (q * q);
    return {h1, h2};
}

// Transfer probability from the exponentiated dark-channel drain.  Valid when
// the pair relaxes quickly compared with the pulse, i.e. strong loss.
template <typename S>
TransferResult<S> n3_long(const PulseConfig<S>& cfg, bool force = false) {
    validate(cfg);
    const auto w = interaction_window(cfg);
    if (!w.overlap)
        throw PreconditionViolated("the pulses never overlap, so there is no transfer window");

    TransferResult<S> r;
    r.method = "long";
    r.epsilon = adiabaticity(cfg);
    r.has_exponent = true;

    const S gt = cfg.gamma * cfg.tau;
    if (gt < S(5)) {
        if (!force)
            throw PreconditionViolated(
                "the drain expansion needs gamma*tau >= 5; pass force to evaluate anyway");
        r.notes.push_back("gamma*tau = " + std::to_string(gt) +
                          " is below the validity threshold of the drain expansion");
    } else if (gt < S(10)) {
        r.notes.push_back("gamma*tau = " + std::to_string(gt) +
                          " is marginal for the drain expansion");
    }

    const auto fi = mixing_frame(cfg, w.t_i);
    S alpha = fi.theta_dot;
    if (std::abs(alpha) * cfg.tau < S(1e-12)) alpha = S(0);  // soft turn-on, no velocity jump
    const S qi = fi.omega * fi.omega;
    r.exp_transient =
        S(8) * alpha * alpha * (cfg.gamma * cfg.gamma - qi) / (qi * qi);

    const auto first = integrate_adaptive(
        [&](S t) {
            const auto f = mixing_frame(cfg, t);
            return f.theta_dot * f.theta_dot / (f.omega * f.omega);
        },
        w.t_i, w.t_f, S(1e-13));
    r.exp_first = -S(4) * cfg.gamma * first.value;

    const auto second = integrate_adaptive(
        [&](S t) { return hd_quasistationary(mixing_frame(cfg, t), cfg.gamma).second; }, w.t_i,
        w.t_f, S(1e-13));
    r.exp_second = S(2) * second.value;

    r.n3 = std::exp(r.exp_transient + r.exp_first + r.exp_second);
    return r;
}

// Fully closed form of the same exponent for matched cosine pulses delayed by
// half their width.  The shape correction vanishes by symmetry there.
template <typename S>
S n3_long_closed(S omega0, S tau, S gamma, bool include_transient = true) {
    const S pi2 = std::numbers::pi_v<S> * std::numbers::pi_v<S>;
    const S q = omega0 * omega0;
    S e = -S(2) * gamma * pi2 / (q * tau);
    if (include_transient) e += S(8) * pi2 * (gamma * gamma - q) / (q * q * tau * tau);
    return std::exp(e);
}

}  // namespace stirap
