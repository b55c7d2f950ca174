#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

namespace stirap {

template <typename S>
using State = Eigen::Matrix<std::complex<S>, 3, 1>;

template <typename S>
using Matrix3 = Eigen::Matrix<std::complex<S>, 3, 3>;

// Pulse pair definition.  Both envelopes are cos^n bumps of full width tau;
// the Stokes pulse leads the pump by t_d (counterintuitive ordering).
template <typename S>
struct PulseConfig {
    int n = 1;          // envelope power
    S tau = S(1);       // full pulse width
    S t_d = S(0.5);     // Stokes-to-pump delay
    S omega_p0 = S(0);  // pump peak Rabi frequency
    S omega_s0 = S(0);  // Stokes peak Rabi frequency
    S gamma = S(0);     // loss rate out of the intermediate level
};

// Overlap window where both fields are on.
template <typename S>
struct InteractionWindow {
    S t_i = S(0);
    S t_f = S(0);
    bool overlap = false;
};

// Mixing angle and field magnitudes with their time derivatives at one instant.
template <typename S>
struct MixingFrame {
    S t = S(0);
    S theta = S(0);
    S theta_dot = S(0);
    S theta_ddot = S(0);
    S omega = S(0);        // sqrt(omega_p^2 + omega_s^2)
    S omega_dot = S(0);
    S omega_tilde = S(0);  // sqrt(omega^2 + 4 theta_dot^2)
};

template <typename S>
struct IntegratorSettings {
    S rel_tol = S(1e-11);
    S abs_tol = S(1e-13);
    S max_step = S(0);     // 0 means uncapped
    int sample_count = 0;  // 0 means endpoints only
};

template <typename S>
struct Trajectory {
    PulseConfig<S> config;
    IntegratorSettings<S> settings;
    std::vector<S> times;
    std::vector<State<S>> states;
};

// Amplitudes in the rotated (bright, excited, dark) basis.
template <typename S>
struct BedState {
    std::complex<S> c_b;
    std::complex<S> c_e;
    std::complex<S> c_d;
};

// Final transfer probability plus provenance of how it was obtained.
template <typename S>
struct TransferResult {
    S n3 = S(0);
    std::string method;
    S epsilon = S(0);  // 1 / (tau * peak total Rabi frequency)
    S phase = S(0);    // accumulated splitting phase, when the method uses one
    bool has_exponent = false;
    S exp_transient = S(0);
    S exp_first = S(0);
    S exp_second = S(0);
    std::vector<std::string> notes;
};

// Instantaneous eigenbasis at a given order of the superadiabatic ladder.
// Columns are ordered by eigenvalue: minus, null, plus.
template <typename S>
struct AdiabaticBasis {
    int order = 0;
    Matrix3<S> vectors;
    Eigen::Matrix<S, 3, 1> eigenvalues;
};

template <typename S>
struct PhaseIntegral {
    S value = S(0);
    S error = S(0);
};

// Edge-symmetry diagnostic: residual of the stationary-deficit condition.
template <typename S>
struct OptimalityReport {
    int order = 0;
    S residual = S(0);
    S scale = S(0);
    bool optimal = false;
};

// Inputs for the turn-on relaxation term of the dissipative expansion.
template <typename S>
struct TransientParams {
    S omega_i = S(0);  // total Rabi frequency at the window edge
    S alpha = S(0);    // mixing angle velocity at the window edge
    S gamma = S(0);
    S t_prime = S(0);  // time elapsed since the window opened
};

}  // namespace stirap
