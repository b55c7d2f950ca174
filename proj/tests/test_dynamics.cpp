#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include <stirap/dynamics.hpp>

#include "oracle_helpers.hpp"

namespace st = stirap;
using Cfg = st::PulseConfig<double>;
using State = st::State<double>;
using std::numbers::pi;

namespace {
Cfg exact_case(double omega0, double gamma = 0.0) { return {1, 1.0, 0.5, omega0, omega0, gamma}; }

State ground() {
    State s;
    s << 1.0, 0.0, 0.0;
    return s;
}
}  // namespace

TEST_CASE("hamiltonian entries") {
    const auto cfg = exact_case(20.0, 40.0);
    // outside all pulse supports every coupling is off
    auto h0 = st::hamiltonian(cfg, 5.0);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            if (r != 1 || c != 1) CHECK(std::abs(h0(r, c)) == 0.0);
    CHECK(h0(1, 1) == std::complex<double>(0.0, -20.0));

    // pump peak coincides with the Stokes zero: pure half-Rabi coupling
    Cfg pump{1, 1.0, 0.5, 2.0, 2.0, 0.0};
    auto h1 = st::hamiltonian(pump, 0.25);
    CHECK(h1(0, 1) == std::complex<double>(1.0, 0.0));
    CHECK(h1(1, 0) == std::complex<double>(1.0, 0.0));
    CHECK(std::abs(h1(1, 2)) == 0.0);
    CHECK(std::abs(h1(1, 1)) == 0.0);
}

TEST_CASE("state |1> is inert under the Stokes-only lead-in") {
    const auto cfg = exact_case(20.0);
    auto span = st::field_span(cfg);
    auto w = st::interaction_window(cfg);
    auto traj = st::propagate(cfg, span.first, w.t_i, ground());
    CHECK(traj.states.back()[0] == std::complex<double>(1.0, 0.0));
    CHECK(traj.states.back()[1] == std::complex<double>(0.0, 0.0));
    CHECK(traj.states.back()[2] == std::complex<double>(0.0, 0.0));
}

TEST_CASE("matched-pair transfer values from the integrator") {
    CHECK(std::abs((st::n3_ode(exact_case(5.0)).n3) - (0.016585349315965)) < 1e-9);
    CHECK(std::abs((st::n3_ode(exact_case(10.0)).n3) - (0.192683674998841)) < 1e-9);
    CHECK(std::abs((st::n3_ode(exact_case(20.0)).n3) - (0.912921487705687)) < 1e-9);
    CHECK(std::abs((st::n3_ode(exact_case(40.0)).n3) - (0.916747614785670)) < 1e-9);
}

TEST_CASE("transfer with decay") {
    CHECK(std::abs((st::n3_ode(exact_case(20.0, 10.0)).n3) - (0.5271033802823346)) < 1e-8);
    CHECK(std::abs((st::n3_ode(exact_case(20.0, 40.0)).n3) - (0.18294135765634498)) < 1e-8);
}

TEST_CASE("steeper envelope, moderate adiabaticity") {
    Cfg n2{2, 1.0, 0.5, 20.0, 20.0, 0.0};
    CHECK(std::abs((st::n3_ode(n2).n3) - (0.20179796994776786)) < 1e-8);
    Cfg r5{2, 1.0, 0.5, 30.0, 150.0, 0.0};
    CHECK(std::abs((st::n3_ode(r5).n3) - (0.5705120530958215)) < 1e-7);
}

TEST_CASE("norm conservation without decay") {
    for (double w : {20.0, 100.0}) {
        auto cfg = exact_case(w);
        auto span = st::field_span(cfg);
        auto traj = st::propagate(cfg, span.first, span.second, ground());
        CHECK(std::abs(traj.states.back().squaredNorm() - 1.0) < 1e-9);
    }
}

TEST_CASE("norm decreases monotonically with decay") {
    auto cfg = exact_case(20.0, 40.0);
    auto span = st::field_span(cfg);
    st::IntegratorSettings<double> set;
    set.sample_count = 400;
    auto traj = st::propagate(cfg, span.first, span.second, ground(), set);
    double prev = 1.0 + 1e-15;
    for (const auto& s : traj.states) {
        const double n = s.squaredNorm();
        CHECK(n <= prev + 1e-9);
        prev = n;
    }
}

TEST_CASE("target population is frozen once the Stokes pulse dies") {
    auto cfg = exact_case(20.0, 40.0);
    auto span = st::field_span(cfg);
    auto w = st::interaction_window(cfg);
    st::IntegratorSettings<double> set;
    auto at_tf = st::propagate(cfg, span.first, w.t_f, ground(), set).states.back();
    auto at_end = st::propagate(cfg, span.first, span.second, ground(), set).states.back();
    CHECK(std::abs((std::norm(at_tf[2])) - (std::norm(at_end[2]))) < 1e-9);
}

TEST_CASE("halving the tolerance moves n3 by less than ten tolerances") {
    auto cfg = exact_case(20.0);
    st::IntegratorSettings<double> a, b;
    a.rel_tol = 1e-8;
    b.rel_tol = 5e-9;
    const double da = st::n3_ode(cfg, a).n3;
    const double db = st::n3_ode(cfg, b).n3;
    CHECK(std::abs(da - db) < 10.0 * a.rel_tol);
}

TEST_CASE("populations") {
    State s;
    s << 1.0, 0.0, 0.0;
    auto p = st::populations(s);
    CHECK(p[0] == 1.0);
    CHECK(p[1] == 0.0);
    s << 0.0, 0.0, std::complex<double>(0.0, 1.0);
    CHECK(st::populations(s)[2] == doctest::Approx(1.0).epsilon(1e-15));
    s << std::sqrt(0.5), 0.0, std::complex<double>(0.0, std::sqrt(0.5));
    p = st::populations(s);
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p[2] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("bright/excited/dark transform and its inverse") {
    const auto cfg = exact_case(20.0);
    // initial state is dark at the pump turn-on
    auto bed = st::to_bed(cfg, -0.25, ground());
    CHECK(std::abs(bed.c_d - 1.0) < 1e-14);
    CHECK(std::abs(bed.c_b) < 1e-14);
    CHECK(std::abs(bed.c_e) < 1e-14);

    // the target state is dark at the Stokes turn-off
    State tgt;
    tgt << 0.0, 0.0, -1.0;
    CHECK(std::abs(st::to_bed(cfg, 0.25, tgt).c_d - 1.0) < 1e-14);

    std::mt19937 gen(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        State s;
        s << std::complex<double>(u(gen), u(gen)), std::complex<double>(u(gen), u(gen)),
            std::complex<double>(u(gen), u(gen));
        const double t = 0.24 * u(gen);
        auto back = st::from_bed(cfg, t, st::to_bed(cfg, t, s));
        CHECK((back - s).norm() < 1e-14);
        // the basis change is orthogonal: norms agree
        auto b = st::to_bed(cfg, t, s);
        const double bn = std::norm(b.c_b) + std::norm(b.c_e) + std::norm(b.c_d);
        CHECK(bn == doctest::Approx(s.squaredNorm()).epsilon(1e-10));
    }
}

TEST_CASE("bed-basis generator for the matched pair is time independent") {
    const auto cfg = exact_case(20.0, 40.0);
    auto h1 = st::bed_hamiltonian(cfg, 0.0);
    auto h2 = st::bed_hamiltonian(cfg, 0.1);
    CHECK((h1 - h2).norm() < 1e-11);
    CHECK(h1(0, 1) == std::complex<double>(10.0, 0.0));
    CHECK(std::abs(h1(0, 2) - std::complex<double>(0.0, pi)) < 1e-13);
    CHECK(std::abs(h1(2, 0) - std::complex<double>(0.0, -pi)) < 1e-13);
    CHECK(h1(1, 1) == std::complex<double>(0.0, -20.0));
    CHECK(std::abs(h1(2, 2)) == 0.0);
    // dark state decouples when the mixing angle stops moving
    Cfg slow{2, 1.0, 0.5, 20.0, 20.0, 0.0};
    auto h3 = st::bed_hamiltonian(slow, -0.25);  // theta_dot = 0 at the window edge
    CHECK(std::abs(h3(0, 2)) < 1e-12);
    CHECK(std::abs(h3(2, 0)) < 1e-12);
}

TEST_CASE("bare and bright/excited/dark propagation agree") {
    for (double g : {0.0, 10.0, 40.0}) {
        auto cfg = exact_case(20.0, g);
        const double bare = st::n3_ode(cfg).n3;
        const double bed = st::n3_ode_bed(cfg).n3;
        CHECK(std::abs(bare - bed) < 1e-8);
    }
}

TEST_CASE("eta variables") {
    st::BedState<double> b{0.0, 0.0, 1.0};
    auto e = st::eta_from_bed(b);
    CHECK(std::abs(e[0]) == 0.0);
    CHECK(std::abs(e[1]) == 0.0);
    CHECK(std::abs(e[2]) == 0.0);

    b = {0.1, 0.0, 1.0};
    CHECK(std::abs(st::eta_from_bed(b)[0] - 0.1) < 1e-15);

    b = {0.5, 0.5, 1e-13};
    CHECK_THROWS_AS((void)st::eta_from_bed(b), st::DarkDepleted);

    // n3 = exp(2 Re eta_d) coincides with |C_d|^2 at the Stokes turn-off
    auto cfg = exact_case(20.0);
    auto span = st::field_span(cfg);
    auto w = st::interaction_window(cfg);
    auto psi = st::propagate(cfg, span.first, w.t_f, ground()).states.back();
    auto bed = st::to_bed(cfg, w.t_f, psi);
    auto eta = st::eta_from_bed(bed);
    CHECK(std::exp(2.0 * eta[2].real()) ==
          doctest::Approx(std::norm(bed.c_d)).epsilon(1e-12));
}

TEST_CASE("trajectory sampling and CSV export") {
    auto cfg = exact_case(20.0);
    auto span = st::field_span(cfg);
    st::IntegratorSettings<double> set;
    set.sample_count = 101;
    auto traj = st::propagate(cfg, span.first, span.second, ground(), set);
    REQUIRE(traj.times.size() == 101);
    CHECK(traj.times.front() == span.first);
    CHECK(traj.times.back() == span.second);
    for (std::size_t i = 1; i < traj.times.size(); ++i) CHECK(traj.times[i] > traj.times[i - 1]);
    CHECK(traj.states.front()[0] == std::complex<double>(1.0, 0.0));

    std::ostringstream os;
    st::write_trajectory_csv(traj, os);
    const std::string out = os.str();
    CHECK(out.rfind("t,re_c1,im_c1,re_c2,im_c2,re_c3,im_c3,n1,n2,n3\n", 0) == 0);
    CHECK(std::count(out.begin(), out.end(), '\n') == 102);
    CHECK(out.find('\r') == std::string::npos);
}
