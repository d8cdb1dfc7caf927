#pragma once

#include <optional>
#include <span>

#include "cxk/sim.hpp"
#include "cxk/types.hpp"

namespace cxk {

Complex order_parameter(std::span<const double> phases);

/// (1/N) sum |phi_k - theta_k| on unwrapped phases. Throws ValidationError
/// on a length mismatch.
double mean_abs_error(std::span<const double> phi_x, std::span<const double> theta);

/// sqrt(2)/alpha * || |x0| - 1 ||_2. Throws ValidationError for alpha <= 0.
double reaching_bound_ff_smc(std::span<const Complex> x0, double alpha);

/// sqrt(2)/epsilon2 * || x0 - 1 ||_2. Throws ValidationError for epsilon2 <= 0.
double reaching_bound_complex_smc(std::span<const Complex> x0, double epsilon2);

struct MetricSeries {
    RealVec times;
    RealVec r_mod;
    RealVec r_arg;
    std::optional<RealVec> e_abs;     // only against a matched real run
    std::optional<RealVec> freq_est;  // network-mean instantaneous frequency

    // Order parameter of the matched real run, when one exists.
    std::optional<RealVec> real_r_mod;
};

/// Order parameter and frequency of a complex run; e(t) and the real
/// order parameter when `reference` is given. The reference must start from
/// the same phases (theta0 == lift of x0 at t = 0) and share the sample
/// grid, otherwise ValidationError.
MetricSeries compute_series(const ComplexTrajectory& traj, const PhaseTrajectory* reference = nullptr);

MetricSeries compute_series(const PhaseTrajectory& traj);

struct SyncVerdict {
    bool synced;
    double tail_mean_r;
};

/// Time average (trapezoidal) of r_mod over the final `tail` seconds.
SyncVerdict sync_verdict(const MetricSeries& series, double tail, double threshold);
double tail_mean(std::span<const double> times, std::span<const double> values, double tail);

/// Per-oscillator mean angular velocity over [t_from, t_end] from the
/// unwrapped lift.
RealVec mean_frequencies(const ComplexTrajectory& traj, double t_from);

/// max_k ||x_k| - 1| per sample.
RealVec modulus_deviation(const ComplexTrajectory& traj);

/// max_k |x_k| - min_k |x_k| per sample.
RealVec modulus_spread(const ComplexTrajectory& traj);

}  // namespace cxk
