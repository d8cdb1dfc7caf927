#pragma once

#include <numbers>
#include <span>

#include "cxk/network.hpp"
#include "cxk/types.hpp"

namespace cxk {

/// Oscillator phases of the real model, natively unwrapped.
struct RealPhaseState {
    RealVec theta;
};

/// Complex state plus a continuous lift of its arguments. The lift is
/// advanced by the integrator after every accepted step.
struct ComplexState {
    ComplexVec x;
    RealVec unwrapped_args;

    /// x_k = moduli_k * e^{i phases_k}; the lift starts at `phases` exactly.
    static ComplexState from_polar(std::span<const double> moduli, std::span<const double> phases);
    /// Lift initialised to the principal arguments.
    static ComplexState from_complex(ComplexVec x);

    std::size_t size() const noexcept { return x.size(); }
};

RealVec rhs_real(std::span<const double> theta, const Network& net, const OscParams& params);

/// (i diag(omega) + sigma A) x.
ComplexVec rhs_complex_open(std::span<const Complex> x, const Network& net, const OscParams& params);

ComplexVec rhs_complex_controlled(std::span<const Complex> x, std::span<const Complex> u, const Network& net,
                                  const OscParams& params);

struct PolarRates {
    RealVec radial;   // d|x_k|/dt
    RealVec angular;  // d(phi_k)/dt
};

/// Modulus/argument decomposition of the controlled system, evaluated in
/// polar form from f, g and the polar parts of u.
PolarRates radial_and_angular_rates(std::span<const Complex> x, std::span<const Complex> u, const Network& net,
                                    const OscParams& params);

/// Nearest representative of `new_principal` (mod 2 pi) to `prev_args`.
/// Throws UnwrapAmbiguityError when a component moves by max_jump or more.
RealVec unwrap_step(std::span<const double> prev_args, std::span<const double> new_principal,
                    double max_jump = std::numbers::pi);
double unwrap_one(double prev, double new_principal) noexcept;

}  // namespace cxk
