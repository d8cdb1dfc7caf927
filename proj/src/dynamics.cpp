#include "cxk/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cxk/complex_core.hpp"
#include "cxk/errors.hpp"

namespace cxk {

ComplexState ComplexState::from_polar(std::span<const double> moduli, std::span<const double> phases) {
    if (moduli.size() != phases.size()) throw ValidationError("from_polar: length mismatch");
    ComplexState s;
    s.x.resize(moduli.size());
    s.unwrapped_args.assign(phases.begin(), phases.end());
    for (std::size_t k = 0; k < moduli.size(); ++k) s.x[k] = std::polar(moduli[k], phases[k]);
    return s;
}

ComplexState ComplexState::from_complex(ComplexVec x) {
    ComplexState s;
    s.unwrapped_args = modarg(x).args;
    s.x = std::move(x);
    return s;
}

// sum_j a_kj sin(theta_j - theta_k) = Im(e^{-i theta_k} sum_j a_kj e^{i theta_j}),
// which turns the O(N^2) sine evaluations into one dense product.
RealVec rhs_real(std::span<const double> theta, const Network& net, const OscParams& params) {
    const std::size_t n = net.size();
    ComplexVec z(n);
    for (std::size_t k = 0; k < n; ++k) z[k] = Complex(std::cos(theta[k]), std::sin(theta[k]));
    const ComplexVec c = coupling_field(z, net, params.sigma);
    RealVec out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = params.omega[k] + (std::conj(z[k]) * c[k]).imag();
    return out;
}

ComplexVec rhs_complex_open(std::span<const Complex> x, const Network& net, const OscParams& params) {
    ComplexVec out = coupling_field(x, net, params.sigma);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += Complex(0.0, params.omega[k]) * x[k];
    return out;
}

ComplexVec rhs_complex_controlled(std::span<const Complex> x, std::span<const Complex> u, const Network& net,
                                  const OscParams& params) {
    ComplexVec out = rhs_complex_open(x, net, params);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += u[k];
    return out;
}

PolarRates radial_and_angular_rates(std::span<const Complex> x, std::span<const Complex> u, const Network& net,
                                    const OscParams& params) {
    const RealVec f = coupling_f(x, net, params);
    const RealVec g = coupling_g(x, net, params);
    PolarRates out{RealVec(x.size()), RealVec(x.size())};
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double mod_x = std::abs(x[k]);
        const double mod_u = std::abs(u[k]);
        const double rel = principal_arg(u[k]) - principal_arg(x[k]);
        out.radial[k] = f[k] + mod_u * std::cos(rel);
        out.angular[k] = g[k] + (mod_u / mod_x) * std::sin(rel);
    }
    return out;
}

double unwrap_one(double prev, double new_principal) noexcept {
    const double delta = std::remainder(new_principal - prev, 2.0 * std::numbers::pi);
    return prev + delta;
}

RealVec unwrap_step(std::span<const double> prev_args, std::span<const double> new_principal, double max_jump) {
    if (prev_args.size() != new_principal.size()) throw ValidationError("unwrap_step: length mismatch");
    RealVec out(prev_args.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = unwrap_one(prev_args[k], new_principal[k]);
        if (std::abs(out[k] - prev_args[k]) >= max_jump) {
            throw UnwrapAmbiguityError("unwrap_step: component " + std::to_string(k) + " moved " +
                                       std::to_string(out[k] - prev_args[k]) + " rad in one step");
        }
    }
    return out;
}

}  // namespace cxk
