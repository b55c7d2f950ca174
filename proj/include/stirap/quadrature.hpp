#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include <stirap/errors.hpp>

namespace stirap {

template <typename S>
struct QuadratureResult {
    S value = S(0);
    S error = S(0);
    long evaluations = 0;
};

namespace detail {

// 15-point Kronrod extension of 7-point Gauss on [-1, 1].
template <typename S>
struct Gk15Nodes {
    static constexpr S xgk[8] = {
        S(0.99145537112081263920685469752633), S(0.94910791234275852452618968404785),
        S(0.86486442335976907278971278864093), S(0.74153118559939443986386477328079),
        S(0.58608723546769113029414483825873), S(0.40584515137739716690660641207696),
        S(0.20778495500789846760068940377324), S(0.0)};
    static constexpr S wgk[8] = {
        S(0.02293532201052922496373200805897), S(0.06309209262997855329070066318921),
        S(0.10479001032225018383987632254152), S(0.14065325971552591874518959051024),
        S(0.16900472663926790282658342659855), S(0.19035057806478540991325640242101),
        S(0.20443294007529889241416199923465), S(0.20948214108472782801299917489171)};
    static constexpr S wg[4] = {
        S(0.12948496616886969327061143267908), S(0.27970539148927666790146777142378),
        S(0.38183005050511894495036977548898), S(0.41795918367346938775510204081633)};
};

template <typename S, typename F>
std::pair<S, S> gk15(F& f, S a, S b) {
    using N = Gk15Nodes<S>;
    const S mid = (a + b) / S(2);
    const S hl = (b - a) / S(2);
    const S fc = f(mid);
    S k15 = N::wgk[7] * fc;
    S g7 = N::wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const S fp = f(mid + hl * N::xgk[j]);
        const S fm = f(mid - hl * N::xgk[j]);
        k15 += N::wgk[j] * (fp + fm);
        if (j % 2 == 1) g7 += N::wg[j / 2] * (fp + fm);
    }
    return {hl * k15, std::abs(hl * (k15 - g7))};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod bisection with an absolute target.
template <typename F, typename S>
QuadratureResult<S> integrate_adaptive(F&& f, S a, S b, S abs_tol, long max_evals = 1000000) {
    QuadratureResult<S> out;
    if (a == b) return out;

    struct Seg {
        S a, b, tol;
    };
    std::vector<Seg> work{{a, b, std::abs(abs_tol)}};
    const S floor_width = S(1e-15) * (std::abs(a) + std::abs(b) + S(1));

    while (!work.empty()) {
        const Seg seg = work.back();
        work.pop_back();
        auto [v, e] = detail::gk15(f, seg.a, seg.b);
        out.evaluations += 15;
        if (out.evaluations > max_evals)
            throw QuadratureFailure("integrand needed more than " + std::to_string(max_evals) +
                                    " evaluations; it may oscillate faster than the requested "
                                    "tolerance can resolve");
        if (e <= seg.tol || (seg.b - seg.a) < floor_width) {
            out.value += v;
            out.error += e;
        } else {
            const S m = (seg.a + seg.b) / S(2);
            work.push_back({seg.a, m, seg.tol / S(2)});
            work.push_back({m, seg.b, seg.tol / S(2)});
        }
    }
    return out;
}

}  // namespace stirap
