#include <cmath>
#include <numbers>

#include "doctest.h"

#include "cxk/complex_core.hpp"
#include "cxk/errors.hpp"
#include "cxk/metrics.hpp"
#include "cxk/rng.hpp"
#include "cxk/sim.hpp"

using namespace cxk;

namespace {

constexpr double kPi = std::numbers::pi;

RealVec random_phases(std::size_t n, std::uint64_t seed) {
    SplitMix64 g(seed);
    RealVec th(n);
    for (auto& v : th) v = g.uniform(-kPi, kPi);
    return th;
}

ComplexMatrix system_matrix(const Network& net, const OscParams& params) {
    ComplexMatrix m(net.size());
    for (std::size_t k = 0; k < net.size(); ++k) {
        for (std::size_t j = 0; j < net.size(); ++j) m(k, j) = params.sigma * net.a(k, j);
        m(k, k) += Complex(0.0, params.omega[k]);
    }
    return m;
}

}  // namespace

TEST_CASE("sim config validation") {
    SimConfig c;
    CHECK_NOTHROW(c.validate());
    c.dt = 0.0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = {};
    c.t_end = 1e-4;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = {};
    c.record_stride = 0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = {};
    c.boundary_layer_delta = -1.0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("uncontrolled flow matches the matrix exponential") {
    const Network net = erdos_renyi(15, 0.3, 3);
    const OscParams params{RealVec(15, 1.5), 0.2};
    const RealVec th = random_phases(15, 4);
    const ComplexState x0 = ComplexState::from_polar(RealVec(15, 1.0), th);
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    cfg.record_stride = 100;
    const ComplexTrajectory traj = run_complex(x0, net, params, NoControl{}, cfg);
    REQUIRE(traj.samples() == 11);
    CHECK(traj.times.back() == doctest::Approx(1.0));
    const ComplexVec want = matexp(system_matrix(net, params), 1.0).apply(x0.x);
    for (std::size_t k = 0; k < 15; ++k) CHECK(std::abs(traj.states.back()[k] - want[k]) < 1e-10);
}

TEST_CASE("record stride keeps the final sample") {
    const Network net = Network::complete(3);
    const OscParams params{RealVec(3, 1.0), 0.1};
    SimConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 1.05;
    cfg.record_stride = 10;
    const PhaseTrajectory traj = run_real(RealVec{0.0, 0.1, 0.2}, net, params, cfg);
    CHECK(traj.samples() == 12);
    CHECK(traj.times.back() == doctest::Approx(1.05));
    CHECK(traj.times[1] == doctest::Approx(0.1));
}

TEST_CASE("switched feedforward replays the real model on the unit circle") {
    const Network net = erdos_renyi(40, 0.2, 5);
    SplitMix64 g(6);
    OscParams params{RealVec(40), 0.3};
    for (auto& w : params.omega) w = g.uniform(5.0, 7.0);
    const RealVec th = random_phases(40, 7);
    SimConfig cfg;
    cfg.t_end = 2.0;
    cfg.record_stride = 50;
    const ComplexTrajectory traj = run_complex(ComplexState::from_polar(RealVec(40, 1.0), th), net, params,
                                               SwitchedFeedforward{}, cfg);
    const PhaseTrajectory real = run_real(th, net, params, cfg);
    const MetricSeries series = compute_series(traj, &real);
    for (double v : modulus_deviation(traj)) CHECK(v < 1e-10);
    for (double e : *series.e_abs) CHECK(e < 1e-9);
}

TEST_CASE("unwrap guard policies") {
    // 2000 rad/s at dt = 1e-3 advances each phase by 2 rad per step.
    const Network net = Network::complete(2);
    const OscParams params{RealVec(2, 2000.0), 0.1};
    const ComplexState x0 = ComplexState::from_polar(RealVec(2, 1.0), RealVec{0.0, 0.5});
    SimConfig cfg;
    cfg.t_end = 0.01;
    CHECK_THROWS_AS(run_complex(x0, net, params, NoControl{}, cfg), UnwrapAmbiguityError);
    cfg.unwrap = UnwrapPolicy::Record;
    const ComplexTrajectory traj = run_complex(x0, net, params, NoControl{}, cfg);
    std::size_t trips = 0;
    for (const auto& e : traj.events) trips += e.kind == EventKind::GuardTrip;
    CHECK(trips > 0);
}

TEST_CASE("hybrid baseline resets every window and preserves tracked phases") {
    const Network net = erdos_renyi(20, 0.3, 8);
    const OscParams params{RealVec(20, 2.0 * kPi), 0.25};
    const ComplexState x0 = ComplexState::from_polar(RealVec(20, 1.0), random_phases(20, 9));
    SimConfig cfg;
    cfg.t_end = 1.0;
    cfg.record_stride = 10;
    const ComplexTrajectory traj = run_complex(x0, net, params, HybridReset{0.1}, cfg);
    CHECK(traj.resets.size() == 10);
    const ComplexVec first = matexp(system_matrix(net, params), 0.1).apply(x0.x);
    for (std::size_t k = 0; k < 20; ++k) CHECK(std::abs(traj.resets.front().before[k] - first[k]) < 1e-10);
    for (const auto& r : traj.resets) {
        CHECK(r.lift_after == r.lift_before);
        for (std::size_t k = 0; k < 20; ++k) {
            CHECK(std::abs(r.after[k]) == doctest::Approx(1.0).epsilon(1e-15));
            CHECK(std::abs(std::arg(r.after[k]) - std::arg(r.before[k])) < 1e-15);
        }
    }
    CHECK_THROWS_AS(run_complex(x0, net, params, HybridReset{0.00015}, cfg), ValidationError);
}

TEST_CASE("complex sliding mode reaches the locking manifold") {
    const Network net = erdos_renyi(30, 0.2, 10);
    const OscParams params{RealVec(30, 2.0 * kPi), 0.25};
    SplitMix64 g(11);
    RealVec mod(30);
    for (auto& m : mod) m = g.uniform(0.0, 2.0);
    const ComplexState x0 = ComplexState::from_polar(mod, random_phases(30, 12));
    SimConfig cfg;
    cfg.t_end = 2.0;
    cfg.record_stride = 10;
    cfg.unwrap = UnwrapPolicy::Record;
    const double wb = 4.0 * kPi;
    const ComplexSmc ctl{RealVec(30, 50.0), wb};
    const ComplexTrajectory traj = run_complex(x0, net, params, ctl, cfg);
    const auto reach = detect_reaching(traj, PrescribedLock{wb}, default_reaching_tol(50.0, cfg.dt));
    REQUIRE(reach);
    const SmcDiagnostics d = gain_margin(ctl.gains, params, 30, wb, x0.x);
    CHECK(*reach <= d.reaching_bound);
}

TEST_CASE("reaching detection on a synthetic trajectory") {
    ComplexTrajectory traj;
    for (int i = 0; i <= 10; ++i) {
        traj.times.push_back(0.1 * i);
        const double r = i < 4 ? 2.0 - 0.25 * i : (i == 6 ? 1.01 : 1.0);
        traj.states.push_back({Complex(r, 0.0)});
    }
    CHECK(*detect_reaching(traj, UnitModulus{}, 1e-3) == doctest::Approx(0.7));
    CHECK(*detect_reaching(traj, UnitModulus{}, 0.05) == doctest::Approx(0.4));
    traj.states.back() = {Complex(3.0, 0.0)};
    CHECK_FALSE(detect_reaching(traj, UnitModulus{}, 1e-3));
    CHECK(default_reaching_tol(10.0, 1e-3) == doctest::Approx(0.02));
    CHECK(default_reaching_tol(0.1, 1e-3) == doctest::Approx(1e-3));
}

TEST_CASE("runs are deterministic") {
    const Network net = erdos_renyi(25, 0.2, 13);
    const OscParams params{RealVec(25, 2.0 * kPi), 0.25};
    SplitMix64 g(14);
    RealVec mod(25);
    for (auto& m : mod) m = g.uniform(0.2, 2.0);
    const ComplexState x0 = ComplexState::from_polar(mod, random_phases(25, 15));
    SimConfig cfg;
    cfg.t_end = 0.5;
    const auto a = run_complex(x0, net, params, FeedforwardSmc{10.0}, cfg);
    const auto b = run_complex(x0, net, params, FeedforwardSmc{10.0}, cfg);
    CHECK(a.states == b.states);
    CHECK(a.unwrapped_args == b.unwrapped_args);
}
