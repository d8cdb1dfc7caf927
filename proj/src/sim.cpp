#include "cxk/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cxk/complex_core.hpp"

namespace cxk {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

constexpr double kUnwrapGuard = 0.5 * std::numbers::pi;

// Control from a precomputed coupling field c = sigma A x.
ComplexVec control_from_field(const ControllerSpec& spec, std::span<const Complex> x, double t,
                              std::span<const Complex> field, double delta) {
    ComplexVec u(x.size());
    std::visit(overloaded{[](const NoControl&) {}, [](const HybridReset&) {},
                          [&](const SwitchedFeedforward&) {
                              require_nondegenerate(x, "switched_ff");
                              detail::add_switched_ff(x, field, u);
                          },
                          [&](const FeedforwardSmc& c) {
                              require_nondegenerate(x, "ff_smc");
                              detail::add_switched_ff(x, field, u);
                              for (std::size_t k = 0; k < x.size(); ++k) {
                                  u[k] -= c.alpha * rsign(std::abs(x[k]) - 1.0, delta) * csign(x[k]);
                              }
                          },
                          [&](const ComplexSmc& c) { u = u_complex_smc(x, t, c.gains, c.omega_bar, delta); },
                          [&](const Roberts& c) { u = u_roberts(x, c.mu); }},
               spec);
    return u;
}

class ClosedLoop {
public:
    ClosedLoop(const Network& net, const OscParams& params, const ControllerSpec& spec, double delta)
        : net_(net), params_(params), spec_(spec), delta_(delta) {}

    ComplexVec operator()(double t, const ComplexVec& x) const {
        const ComplexVec field = coupling_field(x, net_, params_.sigma);
        ComplexVec dx = control_from_field(spec_, x, t, field, delta_);
        for (std::size_t k = 0; k < x.size(); ++k) dx[k] += field[k] + Complex(0.0, params_.omega[k]) * x[k];
        return dx;
    }

private:
    const Network& net_;
    const OscParams& params_;
    const ControllerSpec& spec_;
    double delta_;
};

class Recorder {
public:
    Recorder(ComplexTrajectory& traj, const SimConfig& cfg, const ControllerSpec& spec, const Network& net,
             const OscParams& params)
        : traj_(traj), cfg_(cfg), spec_(spec), net_(net), params_(params) {}

    void sample(double t, const ComplexState& s) {
        traj_.times.push_back(t);
        traj_.states.push_back(s.x);
        traj_.unwrapped_args.push_back(s.unwrapped_args);
        if (cfg_.record_controls) {
            traj_.controls.push_back(evaluate_control(spec_, s.x, t, net_, params_, cfg_.boundary_layer_delta));
        }
    }

private:
    ComplexTrajectory& traj_;
    const SimConfig& cfg_;
    const ControllerSpec& spec_;
    const Network& net_;
    const OscParams& params_;
};

// Advances the lift to the new principal arguments of `s.x`.
void update_lift(ComplexState& s, double t, const SimConfig& cfg, ComplexTrajectory& traj,
                 std::vector<bool>& degenerate_seen) {
    for (std::size_t k = 0; k < s.x.size(); ++k) {
        if (std::abs(s.x[k]) < kDegenerateMagnitude) {
            if (!degenerate_seen[k]) {
                degenerate_seen[k] = true;
                traj.events.push_back({t, EventKind::GuardTrip, "degenerate magnitude at oscillator " +
                                                                    std::to_string(k) + "; phase held"});
            }
            continue;
        }
        const double prev = s.unwrapped_args[k];
        const double next = unwrap_one(prev, principal_arg(s.x[k]));
        if (std::abs(next - prev) >= kUnwrapGuard) {
            const std::string what = "oscillator " + std::to_string(k) + " phase moved " +
                                     std::to_string(next - prev) + " rad in one step at t=" + std::to_string(t);
            if (cfg.unwrap == UnwrapPolicy::Strict) throw UnwrapAmbiguityError("run_complex: " + what);
            traj.events.push_back({t, EventKind::GuardTrip, "unwrap ambiguity: " + what});
        }
        s.unwrapped_args[k] = next;
    }
}

void check_inputs(std::size_t state_size, const Network& net, const OscParams& params, const SimConfig& cfg) {
    cfg.validate();
    params.validate(net.size());
    if (state_size != net.size()) throw ValidationError("initial state length differs from network size");
}

}  // namespace

void SimConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("sim.dt must be positive");
    if (!(t_end >= dt) || !std::isfinite(t_end)) throw ValidationError("sim.t_end must be >= dt");
    if (record_stride < 1) throw ValidationError("sim.record_stride must be >= 1");
    if (!(boundary_layer_delta >= 0.0)) throw ValidationError("sim.boundary_layer_delta must be >= 0");
}

const char* event_name(EventKind kind) noexcept {
    switch (kind) {
        case EventKind::Reset: return "reset";
        case EventKind::Reach: return "reach";
        case EventKind::GuardTrip: return "guard_trip";
    }
    return "unknown";
}

ComplexVec evaluate_control(const ControllerSpec& spec, std::span<const Complex> x, double t, const Network& net,
                            const OscParams& params, double delta) {
    return control_from_field(spec, x, t, coupling_field(x, net, params.sigma), delta);
}

ComplexTrajectory run_complex(const ComplexState& x0, const Network& net, const OscParams& params,
                              const ControllerSpec& spec, const SimConfig& cfg) {
    check_inputs(x0.size(), net, params, cfg);
    validate(spec, net.size());
    if (x0.unwrapped_args.size() != x0.size()) throw ValidationError("initial lift length differs from state");
    if (!detail::all_finite(x0.x)) throw NonFiniteStateError("run_complex: non-finite initial state");

    const std::size_t n = net.size();
    const std::size_t steps = cfg.steps();
    ComplexTrajectory traj;
    traj.times.reserve(steps / cfg.record_stride + 2);
    Recorder recorder(traj, cfg, spec, net, params);
    std::vector<bool> degenerate_seen(n, false);

    ComplexState state = x0;
    recorder.sample(0.0, state);

    const auto* hybrid = std::get_if<HybridReset>(&spec);
    std::size_t window_steps = 0;
    ComplexMatrix step_propagator;
    if (hybrid != nullptr) {
        const double ratio = hybrid->window / cfg.dt;
        window_steps = static_cast<std::size_t>(std::llround(ratio));
        if (window_steps == 0 || std::abs(ratio - static_cast<double>(window_steps)) > 1e-9 * ratio) {
            throw ValidationError("hybrid_reset: window must be a positive integer multiple of dt");
        }
        ComplexMatrix m(n);
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t j = 0; j < n; ++j) m(k, j) = params.sigma * net.a(k, j);
            m(k, k) += Complex(0.0, params.omega[k]);
        }
        step_propagator = matexp(m, cfg.dt);
    }

    const ClosedLoop loop(net, params, spec, cfg.boundary_layer_delta);
    for (std::size_t i = 1; i <= steps; ++i) {
        const double t_prev = static_cast<double>(i - 1) * cfg.dt;
        const double t = static_cast<double>(i) * cfg.dt;
        if (hybrid != nullptr) {
            state.x = step_propagator.apply(state.x);
            if (!detail::all_finite(state.x)) throw NonFiniteStateError("run_complex: non-finite state in flow");
        } else {
            state.x = rk4_step(loop, state.x, t_prev, cfg.dt);
        }
        update_lift(state, t, cfg, traj, degenerate_seen);

        if (hybrid != nullptr && i % window_steps == 0) {
            ComplexState jumped = hybrid_reset_jump(state);
            std::string detail;
            for (std::size_t k = 0; k < n; ++k) {
                if (state.x[k] == Complex{}) detail += " zero component " + std::to_string(k) + " kept at 0;";
            }
            traj.events.push_back({t, EventKind::Reset, detail});
            if (!detail.empty()) traj.events.push_back({t, EventKind::GuardTrip, "reset:" + detail});
            traj.resets.push_back({t, state.x, jumped.x, state.unwrapped_args, jumped.unwrapped_args});
            state = std::move(jumped);
        }

        if (i % cfg.record_stride == 0 || i == steps) recorder.sample(t, state);
    }
    return traj;
}

PhaseTrajectory run_real(std::span<const double> theta0, const Network& net, const OscParams& params,
                         const SimConfig& cfg) {
    check_inputs(theta0.size(), net, params, cfg);
    RealVec theta(theta0.begin(), theta0.end());
    if (!detail::all_finite(theta)) throw NonFiniteStateError("run_real: non-finite initial phases");

    const std::size_t steps = cfg.steps();
    PhaseTrajectory traj;
    traj.times.reserve(steps / cfg.record_stride + 2);
    traj.times.push_back(0.0);
    traj.phases.push_back(theta);

    const auto rhs = [&](double, const RealVec& th) { return rhs_real(th, net, params); };
    for (std::size_t i = 1; i <= steps; ++i) {
        theta = rk4_step(rhs, theta, static_cast<double>(i - 1) * cfg.dt, cfg.dt);
        if (i % cfg.record_stride == 0 || i == steps) {
            traj.times.push_back(static_cast<double>(i) * cfg.dt);
            traj.phases.push_back(theta);
        }
    }
    return traj;
}

double surface_residual(const Surface& surface, std::span<const Complex> x, double t) {
    double worst = 0.0;
    if (const auto* lock = std::get_if<PrescribedLock>(&surface)) {
        const Complex target = std::polar(1.0, lock->omega_bar * t);
        for (const auto& v : x) worst = std::max(worst, std::abs(v - target));
    } else {
        for (const auto& v : x) worst = std::max(worst, std::abs(std::abs(v) - 1.0));
    }
    return worst;
}

std::optional<double> detect_reaching(const ComplexTrajectory& traj, const Surface& surface, double tol) {
    const std::size_t m = traj.samples();
    if (m == 0) throw ValidationError("detect_reaching: empty trajectory");
    // Walk back from the end to the last sample that is off the surface.
    std::size_t i = m;
    while (i > 0 && surface_residual(surface, traj.states[i - 1], traj.times[i - 1]) <= tol) --i;
    if (i == m) return std::nullopt;
    return traj.times[i];
}

double default_reaching_tol(double gain, double dt) noexcept { return std::max(1e-3, 2.0 * gain * dt); }

}  // namespace cxk
