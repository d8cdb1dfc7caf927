#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cxk/metrics.hpp"
#include "cxk/sim.hpp"

namespace cxk {

/// "%.17g"; lossless for doubles.
std::string format_double(double v);

/// Columns: t, x_re_*, x_im_*, mod_*, arg_unwrapped_*, r_mod, r_arg, e_abs
/// (e_abs is "nan" without a matched real run).
void write_trajectory_csv(const std::filesystem::path& path, const ComplexTrajectory& traj,
                          const MetricSeries& series);

/// Columns: t, theta_*, r_mod, r_arg.
void write_phase_csv(const std::filesystem::path& path, const PhaseTrajectory& traj, const MetricSeries& series);

struct PlotSeries {
    std::string label;
    std::string color;
    RealVec x;
    RealVec y;
};

void write_svg_chart(const std::filesystem::path& path, const std::string& title, const std::string& xlabel,
                     const std::string& ylabel, const std::vector<PlotSeries>& series);

/// One SVG panel plus a CSV sidecar each for: arguments, magnitudes, |r|
/// (with the real overlay when available) and e(t) (only with a real run).
/// Returns the files written. Throws IoError if outdir is not writable.
std::vector<std::filesystem::path> emit_plots(const ComplexTrajectory& traj, const MetricSeries& series,
                                              const std::filesystem::path& outdir);

}  // namespace cxk
