#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cxk/controllers.hpp"
#include "cxk/dynamics.hpp"
#include "cxk/errors.hpp"
#include "cxk/network.hpp"
#include "cxk/types.hpp"

namespace cxk {

enum class UnwrapPolicy {
    Strict,  // UnwrapAmbiguityError if a tracked phase moves >= pi/2 in one step
    Record,  // log a guard_trip event and take the nearest representative
};

struct SimConfig {
    double dt = 1e-3;
    double t_end = 10.0;
    std::size_t record_stride = 1;
    double boundary_layer_delta = 0.0;
    UnwrapPolicy unwrap = UnwrapPolicy::Strict;
    bool record_controls = false;

    std::size_t steps() const noexcept { return static_cast<std::size_t>(std::llround(t_end / dt)); }
    void validate() const;
};

enum class EventKind { Reset, Reach, GuardTrip };
const char* event_name(EventKind kind) noexcept;

struct Event {
    double time;
    EventKind kind;
    std::string detail;
};

/// Hybrid baseline jump, as applied: the state right before and after.
struct ResetRecord {
    double time;
    ComplexVec before;
    ComplexVec after;
    RealVec lift_before;
    RealVec lift_after;
};

struct ComplexTrajectory {
    RealVec times;
    std::vector<ComplexVec> states;
    std::vector<RealVec> unwrapped_args;
    std::vector<ComplexVec> controls;  // empty unless SimConfig::record_controls
    std::vector<Event> events;
    std::vector<ResetRecord> resets;  // hybrid baseline only

    std::size_t samples() const noexcept { return times.size(); }
};

struct PhaseTrajectory {
    RealVec times;
    std::vector<RealVec> phases;

    std::size_t samples() const noexcept { return times.size(); }
};

namespace detail {

template <class T>
bool all_finite(const std::vector<T>& v) {
    for (const auto& e : v) {
        if constexpr (std::is_same_v<T, Complex>) {
            if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) return false;
        } else {
            if (!std::isfinite(e)) return false;
        }
    }
    return true;
}

template <class T>
void axpy_into(std::vector<T>& out, const std::vector<T>& y, double a, const std::vector<T>& k) {
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + a * k[i];
}

}  // namespace detail

/// One classical RK4 step of dy/dt = rhs(t, y). Complex states are advanced
/// on their real and imaginary parts jointly (plain complex arithmetic).
/// Throws NonFiniteStateError if the result is not finite.
template <class T, class Rhs>
std::vector<T> rk4_step(Rhs&& rhs, const std::vector<T>& y, double t, double dt) {
    const std::vector<T> k1 = rhs(t, y);
    std::vector<T> tmp(y.size());
    detail::axpy_into(tmp, y, 0.5 * dt, k1);
    const std::vector<T> k2 = rhs(t + 0.5 * dt, tmp);
    detail::axpy_into(tmp, y, 0.5 * dt, k2);
    const std::vector<T> k3 = rhs(t + 0.5 * dt, tmp);
    detail::axpy_into(tmp, y, dt, k3);
    const std::vector<T> k4 = rhs(t + dt, tmp);

    std::vector<T> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        out[i] = y[i] + (dt / 6.0) * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
    }
    if (!detail::all_finite(out)) throw NonFiniteStateError("rk4_step: non-finite state at t=" + std::to_string(t + dt));
    return out;
}

/// Control input of `spec` at (x, t). NoControl and HybridReset give zero.
ComplexVec evaluate_control(const ControllerSpec& spec, std::span<const Complex> x, double t, const Network& net,
                            const OscParams& params, double delta = 0.0);

/// Closed loop under `spec` from x0. Flow controllers use fixed-step RK4
/// with the control re-evaluated at every stage; the hybrid baseline is
/// propagated analytically with a cached exp(M dt) and jumps every window.
ComplexTrajectory run_complex(const ComplexState& x0, const Network& net, const OscParams& params,
                              const ControllerSpec& spec, const SimConfig& cfg);

PhaseTrajectory run_real(std::span<const double> theta0, const Network& net, const OscParams& params,
                         const SimConfig& cfg);

struct UnitModulus {};
struct PrescribedLock {
    double omega_bar;
};
using Surface = std::variant<UnitModulus, PrescribedLock>;

double surface_residual(const Surface& surface, std::span<const Complex> x, double t);

/// First sample time after which the residual stays <= tol for all later
/// samples; nullopt if the final sample is still off the surface.
std::optional<double> detect_reaching(const ComplexTrajectory& traj, const Surface& surface, double tol);

/// Default tolerance max(1e-3, 2 gain dt).
double default_reaching_tol(double gain, double dt) noexcept;

}  // namespace cxk
