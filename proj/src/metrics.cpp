#include "cxk/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cxk/errors.hpp"

namespace cxk {

Complex order_parameter(std::span<const double> phases) {
    if (phases.empty()) return {};
    double re = 0.0;
    double im = 0.0;
    for (double th : phases) {
        re += std::cos(th);
        im += std::sin(th);
    }
    const double n = static_cast<double>(phases.size());
    return {re / n, im / n};
}

double mean_abs_error(std::span<const double> phi_x, std::span<const double> theta) {
    if (phi_x.size() != theta.size()) {
        throw ValidationError("mean_abs_error: length mismatch (" + std::to_string(phi_x.size()) + " vs " +
                              std::to_string(theta.size()) + ")");
    }
    if (phi_x.empty()) return 0.0;
    double acc = 0.0;
    for (std::size_t k = 0; k < phi_x.size(); ++k) acc += std::abs(phi_x[k] - theta[k]);
    return acc / static_cast<double>(phi_x.size());
}

double reaching_bound_ff_smc(std::span<const Complex> x0, double alpha) {
    if (!(alpha > 0.0)) throw ValidationError("reaching_bound_ff_smc: alpha must be positive");
    double acc = 0.0;
    for (const auto& v : x0) {
        const double d = std::abs(v) - 1.0;
        acc += d * d;
    }
    return std::numbers::sqrt2 / alpha * std::sqrt(acc);
}

double reaching_bound_complex_smc(std::span<const Complex> x0, double epsilon2) {
    if (!(epsilon2 > 0.0)) {
        throw ValidationError("reaching_bound_complex_smc: non-positive gain margin (gain condition violated)");
    }
    double acc = 0.0;
    for (const auto& v : x0) acc += std::norm(v - 1.0);
    return std::numbers::sqrt2 / epsilon2 * std::sqrt(acc);
}

namespace {

RealVec network_mean(const std::vector<RealVec>& phases) {
    RealVec out(phases.size());
    for (std::size_t i = 0; i < phases.size(); ++i) {
        double acc = 0.0;
        for (double v : phases[i]) acc += v;
        out[i] = phases[i].empty() ? 0.0 : acc / static_cast<double>(phases[i].size());
    }
    return out;
}

RealVec finite_difference(const RealVec& times, const RealVec& values) {
    RealVec out(times.size(), 0.0);
    if (times.size() < 2) return out;
    out[0] = (values[1] - values[0]) / (times[1] - times[0]);
    for (std::size_t i = 1; i < times.size(); ++i) {
        out[i] = (values[i] - values[i - 1]) / (times[i] - times[i - 1]);
    }
    return out;
}

void fill_order(const std::vector<RealVec>& phases, RealVec& r_mod, RealVec& r_arg) {
    r_mod.resize(phases.size());
    r_arg.resize(phases.size());
    for (std::size_t i = 0; i < phases.size(); ++i) {
        const Complex r = order_parameter(phases[i]);
        r_mod[i] = std::abs(r);
        r_arg[i] = std::arg(r);
    }
}

}  // namespace

MetricSeries compute_series(const ComplexTrajectory& traj, const PhaseTrajectory* reference) {
    MetricSeries s;
    s.times = traj.times;
    fill_order(traj.unwrapped_args, s.r_mod, s.r_arg);
    s.freq_est = finite_difference(traj.times, network_mean(traj.unwrapped_args));

    if (reference != nullptr) {
        if (reference->times != traj.times) {
            throw ValidationError("compute_series: reference run is sampled on a different grid");
        }
        const RealVec& theta0 = reference->phases.front();
        const RealVec& phi0 = traj.unwrapped_args.front();
        if (theta0.size() != phi0.size()) throw ValidationError("compute_series: reference size mismatch");
        for (std::size_t k = 0; k < theta0.size(); ++k) {
            if (std::abs(theta0[k] - phi0[k]) > 1e-12) {
                throw ValidationError("compute_series: e(t) needs matched initial phases (theta0 = arg x0)");
            }
        }
        RealVec e(traj.samples());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = mean_abs_error(traj.unwrapped_args[i], reference->phases[i]);
        s.e_abs = std::move(e);
        RealVec rr;
        RealVec ra;
        fill_order(reference->phases, rr, ra);
        s.real_r_mod = std::move(rr);
    }
    return s;
}

MetricSeries compute_series(const PhaseTrajectory& traj) {
    MetricSeries s;
    s.times = traj.times;
    fill_order(traj.phases, s.r_mod, s.r_arg);
    s.freq_est = finite_difference(traj.times, network_mean(traj.phases));
    return s;
}

double tail_mean(std::span<const double> times, std::span<const double> values, double tail) {
    if (times.empty()) throw ValidationError("tail_mean: empty series");
    const double t_end = times.back();
    const double duration = t_end - times.front();
    if (!(tail > 0.0) || tail >= duration) throw ValidationError("tail_mean: tail must lie in (0, duration)");
    const double start = t_end - tail;

    std::size_t i = 0;
    while (times[i] < start) ++i;
    // Linearly interpolated value at `start`, then trapezoids.
    double prev_t = start;
    double prev_v = values[i];
    if (i > 0) {
        const double w = (start - times[i - 1]) / (times[i] - times[i - 1]);
        prev_v = values[i - 1] + w * (values[i] - values[i - 1]);
    }
    double area = 0.0;
    for (; i < times.size(); ++i) {
        area += 0.5 * (values[i] + prev_v) * (times[i] - prev_t);
        prev_t = times[i];
        prev_v = values[i];
    }
    return area / tail;
}

SyncVerdict sync_verdict(const MetricSeries& series, double tail, double threshold) {
    const double m = tail_mean(series.times, series.r_mod, tail);
    return {m >= threshold, m};
}

RealVec mean_frequencies(const ComplexTrajectory& traj, double t_from) {
    const auto it = std::lower_bound(traj.times.begin(), traj.times.end(), t_from);
    if (it == traj.times.end() || std::next(it) == traj.times.end()) {
        throw ValidationError("mean_frequencies: window after t_from is empty");
    }
    const std::size_t i0 = static_cast<std::size_t>(it - traj.times.begin());
    const std::size_t i1 = traj.samples() - 1;
    const double span = traj.times[i1] - traj.times[i0];
    RealVec out(traj.unwrapped_args[i0].size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = (traj.unwrapped_args[i1][k] - traj.unwrapped_args[i0][k]) / span;
    }
    return out;
}

RealVec modulus_deviation(const ComplexTrajectory& traj) {
    RealVec out(traj.samples());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double worst = 0.0;
        for (const auto& v : traj.states[i]) worst = std::max(worst, std::abs(std::abs(v) - 1.0));
        out[i] = worst;
    }
    return out;
}

RealVec modulus_spread(const ComplexTrajectory& traj) {
    RealVec out(traj.samples());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (const auto& v : traj.states[i]) {
            lo = std::min(lo, std::abs(v));
            hi = std::max(hi, std::abs(v));
        }
        out[i] = hi - lo;
    }
    return out;
}

}  // namespace cxk
