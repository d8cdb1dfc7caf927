#pragma once

#include <span>
#include <string>
#include <variant>

#include "cxk/dynamics.hpp"
#include "cxk/network.hpp"
#include "cxk/types.hpp"

namespace cxk {

struct NoControl {};

/// Radial cancellation u_k = -f_k(x) e^{i phi_k}: keeps every modulus fixed
/// so unit-modulus trajectories replay the real model exactly.
struct SwitchedFeedforward {};

/// Switched feedforward plus a radial sliding term of amplitude alpha that
/// drives all moduli to one in finite time.
struct FeedforwardSmc {
    double alpha;
};

/// u = -diag(K) csign(x - e^{i omega_bar t} 1): phase locking at omega_bar.
struct ComplexSmc {
    RealVec gains;
    double omega_bar;
};

/// Linear state feedback u = -diag(mu) x.
struct Roberts {
    RealVec mu;
};

/// Linear flow between periodic projections onto the unit circle.
struct HybridReset {
    double window;
};

using ControllerSpec = std::variant<NoControl, SwitchedFeedforward, FeedforwardSmc, ComplexSmc, Roberts, HybridReset>;

std::string controller_name(const ControllerSpec& spec);

/// Throws ValidationError for alpha <= 0, window <= 0, non-positive gains or
/// vector parameters whose length differs from n.
void validate(const ControllerSpec& spec, std::size_t n);

ComplexVec u_switched_ff(std::span<const Complex> x, const Network& net, const OscParams& params);

ComplexVec u_ff_smc(std::span<const Complex> x, const Network& net, const OscParams& params, double alpha,
                    double delta = 0.0);

ComplexVec u_complex_smc(std::span<const Complex> x, double t, std::span<const double> gains, double omega_bar,
                         double delta = 0.0);

/// Generic sliding law -diag(K) csign(s) for a caller-supplied switching
/// function value s.
ComplexVec u_sliding(std::span<const Complex> s, std::span<const double> gains, double delta = 0.0);

/// s(x, t) = x - e^{i omega_bar t} 1.
ComplexVec switching_function(std::span<const Complex> x, double t, double omega_bar);

/// Equivalent control keeping s = x - e^{i omega_bar t} 1 at zero:
/// i omega_bar e^{i omega_bar t} 1 - (i diag(omega) + sigma A) x.
ComplexVec equivalent_control(std::span<const Complex> x, double t, const Network& net, const OscParams& params,
                              double omega_bar);

/// Componentwise gain threshold |omega_i| + |omega_bar| + sigma (N - 1).
RealVec gain_threshold(const OscParams& params, std::size_t n, double omega_bar);

struct SmcDiagnostics {
    ComplexVec s;           // switching function at x0, t = 0
    RealVec u_eq_bound;     // componentwise bound on |u_eq| over the manifold
    double epsilon1 = 1.0;  // |D_ii| lower bound; D = I here
    double epsilon2 = 0.0;  // min K - (||omega||_inf + omega_bar + sigma (N - 1))
    double reaching_bound = 0.0;  // sqrt(2)/epsilon2 ||x0 - 1||_2, +inf if violated
    bool condition_violated = false;
};

SmcDiagnostics gain_margin(std::span<const double> gains, const OscParams& params, std::size_t n, double omega_bar,
                           std::span<const Complex> x0);

ComplexVec u_roberts(std::span<const Complex> x, std::span<const double> mu);

/// mu = sigma * degrees. Only valid for identical frequencies on a connected
/// graph; throws PreconditionError otherwise.
RealVec roberts_mu_degree(const Network& net, const OscParams& params);

struct RobertsSpectrum {
    bool valid = false;
    Complex marginal_eigenvalue{};
    double modulus_spread = 0.0;       // max - min |v_k| of the marginal eigenvector
    std::size_t marginal_count = 0;    // eigenvalues with |Re| <= tol
    double max_other_real = 0.0;       // largest real part among the rest
};

/// Spectral check of i diag(omega) - diag(mu) + sigma A.
RobertsSpectrum verify_roberts_spectrum(const Network& net, const OscParams& params, std::span<const double> mu,
                                        double tol = 1e-6);

/// Jump map of the hybrid baseline: x+ = csign(x). The lift is carried over
/// unchanged, so tracked phases are preserved exactly.
ComplexState hybrid_reset_jump(const ComplexState& state);

namespace detail {

/// u += -Re(conj(csign x_k) c_k) csign(x_k) given the coupling field
/// c = sigma A x, i.e. the switched feedforward term without recomputing c.
void add_switched_ff(std::span<const Complex> x, std::span<const Complex> field, ComplexVec& u);

}  // namespace detail

}  // namespace cxk
