#include "cxk/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cxk/complex_core.hpp"
#include "cxk/errors.hpp"

namespace cxk {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void require_len(std::size_t got, std::size_t n, const char* what) {
    if (got != n) {
        throw ValidationError(std::string(what) + " has " + std::to_string(got) + " entries, expected " +
                              std::to_string(n));
    }
}

}  // namespace

std::string controller_name(const ControllerSpec& spec) {
    return std::visit(overloaded{[](const NoControl&) { return std::string("none"); },
                                 [](const SwitchedFeedforward&) { return std::string("switched_ff"); },
                                 [](const FeedforwardSmc&) { return std::string("ff_smc"); },
                                 [](const ComplexSmc&) { return std::string("complex_smc"); },
                                 [](const Roberts&) { return std::string("roberts"); },
                                 [](const HybridReset&) { return std::string("hybrid_reset"); }},
                      spec);
}

void validate(const ControllerSpec& spec, std::size_t n) {
    std::visit(overloaded{[](const NoControl&) {}, [](const SwitchedFeedforward&) {},
                          [](const FeedforwardSmc& c) {
                              if (!(c.alpha > 0.0) || !std::isfinite(c.alpha)) {
                                  throw ValidationError("ff_smc: alpha must be positive");
                              }
                          },
                          [n](const ComplexSmc& c) {
                              require_len(c.gains.size(), n, "complex_smc.K");
                              for (double k : c.gains) {
                                  if (!(k > 0.0) || !std::isfinite(k)) {
                                      throw ValidationError("complex_smc: gains must be positive");
                                  }
                              }
                              if (!std::isfinite(c.omega_bar)) throw ValidationError("complex_smc: omega_bar");
                          },
                          [n](const Roberts& c) {
                              require_len(c.mu.size(), n, "roberts.mu");
                              for (double m : c.mu) {
                                  if (!std::isfinite(m)) throw ValidationError("roberts: mu must be finite");
                              }
                          },
                          [](const HybridReset& c) {
                              if (!(c.window > 0.0) || !std::isfinite(c.window)) {
                                  throw ValidationError("hybrid_reset: window must be positive");
                              }
                          }},
               spec);
}

// Modulus |f_k| with phase phi_k + pi (f_k > 0) or
// phi_k (f_k < 0) is exactly -f_k e^{i phi_k}.
ComplexVec u_switched_ff(std::span<const Complex> x, const Network& net, const OscParams& params) {
    require_nondegenerate(x, "u_switched_ff");
    ComplexVec u(x.size());
    detail::add_switched_ff(x, coupling_field(x, net, params.sigma), u);
    return u;
}

void detail::add_switched_ff(std::span<const Complex> x, std::span<const Complex> field, ComplexVec& u) {
    for (std::size_t k = 0; k < x.size(); ++k) {
        const Complex dir = csign(x[k]);
        const double f = (std::conj(dir) * field[k]).real();
        u[k] -= f * dir;
    }
}

ComplexVec u_ff_smc(std::span<const Complex> x, const Network& net, const OscParams& params, double alpha,
                    double delta) {
    ComplexVec u = u_switched_ff(x, net, params);
    for (std::size_t k = 0; k < x.size(); ++k) {
        u[k] -= alpha * rsign(std::abs(x[k]) - 1.0, delta) * csign(x[k]);
    }
    return u;
}

ComplexVec switching_function(std::span<const Complex> x, double t, double omega_bar) {
    const Complex target = std::polar(1.0, omega_bar * t);
    ComplexVec s(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) s[k] = x[k] - target;
    return s;
}

ComplexVec u_sliding(std::span<const Complex> s, std::span<const double> gains, double delta) {
    ComplexVec u(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) u[k] = -gains[k] * csign(s[k], delta);
    return u;
}

ComplexVec u_complex_smc(std::span<const Complex> x, double t, std::span<const double> gains, double omega_bar,
                         double delta) {
    return u_sliding(switching_function(x, t, omega_bar), gains, delta);
}

ComplexVec equivalent_control(std::span<const Complex> x, double t, const Network& net, const OscParams& params,
                              double omega_bar) {
    const Complex ds_dt = Complex(0.0, omega_bar) * std::polar(1.0, omega_bar * t);
    ComplexVec u = rhs_complex_open(x, net, params);
    for (auto& v : u) v = ds_dt - v;
    return u;
}

RealVec gain_threshold(const OscParams& params, std::size_t n, double omega_bar) {
    const double common = std::abs(omega_bar) + params.sigma * static_cast<double>(n - 1);
    RealVec out(params.omega.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::abs(params.omega[i]) + common;
    return out;
}

SmcDiagnostics gain_margin(std::span<const double> gains, const OscParams& params, std::size_t n, double omega_bar,
                           std::span<const Complex> x0) {
    SmcDiagnostics d;
    d.u_eq_bound = gain_threshold(params, n, omega_bar);
    d.s = switching_function(x0, 0.0, omega_bar);

    double omega_inf = 0.0;
    for (double w : params.omega) omega_inf = std::max(omega_inf, std::abs(w));
    const double k_min = gains.empty() ? 0.0 : *std::min_element(gains.begin(), gains.end());
    d.epsilon2 = k_min - (omega_inf + std::abs(omega_bar) + params.sigma * static_cast<double>(n - 1));
    d.condition_violated = !(d.epsilon2 > 0.0);

    double s_norm = 0.0;
    for (const auto& v : d.s) s_norm += std::norm(v);
    s_norm = std::sqrt(s_norm);
    d.reaching_bound = d.condition_violated ? std::numeric_limits<double>::infinity()
                                            : std::numbers::sqrt2 / (d.epsilon1 * d.epsilon2) * s_norm;
    return d;
}

ComplexVec u_roberts(std::span<const Complex> x, std::span<const double> mu) {
    ComplexVec u(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) u[k] = -mu[k] * x[k];
    return u;
}

RealVec roberts_mu_degree(const Network& net, const OscParams& params) {
    if (params.omega.size() != net.size()) throw PreconditionError("roberts_mu_degree: omega length mismatch");
    const auto [lo, hi] = std::minmax_element(params.omega.begin(), params.omega.end());
    if (*hi - *lo > 1e-12) {
        throw PreconditionError("roberts_mu_degree: the degree construction needs identical natural frequencies");
    }
    if (!net.is_connected()) throw PreconditionError("roberts_mu_degree: network is not connected");
    RealVec mu(net.size());
    for (std::size_t k = 0; k < mu.size(); ++k) mu[k] = params.sigma * static_cast<double>(net.degrees()[k]);
    return mu;
}

RobertsSpectrum verify_roberts_spectrum(const Network& net, const OscParams& params, std::span<const double> mu,
                                        double tol) {
    const std::size_t n = net.size();
    ComplexMatrix m(n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) m(k, j) = params.sigma * net.a(k, j);
        m(k, k) += Complex(-mu[k], params.omega[k]);
    }
    const auto pairs = eigen_spectrum(m, 1e-8);

    RobertsSpectrum out;
    out.max_other_real = -std::numeric_limits<double>::infinity();
    const EigenPair* marginal = nullptr;
    for (const auto& p : pairs) {
        if (std::abs(p.value.real()) <= tol) {
            ++out.marginal_count;
            marginal = &p;
        } else {
            out.max_other_real = std::max(out.max_other_real, p.value.real());
        }
    }
    if (marginal != nullptr) {
        out.marginal_eigenvalue = marginal->value;
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (const auto& v : marginal->vector) {
            lo = std::min(lo, std::abs(v));
            hi = std::max(hi, std::abs(v));
        }
        out.modulus_spread = hi - lo;
    }
    out.valid = out.marginal_count == 1 && out.modulus_spread <= tol && out.max_other_real < -tol;
    return out;
}

ComplexState hybrid_reset_jump(const ComplexState& state) {
    ComplexState out;
    out.x = csign(state.x);
    out.unwrapped_args = state.unwrapped_args;
    return out;
}

}  // namespace cxk
