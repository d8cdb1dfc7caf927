#include "cxk/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "cxk/errors.hpp"

namespace cxk {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

void finish(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

void header_block(std::ofstream& out, const char* prefix, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) out << ',' << prefix << k;
}

}  // namespace

void write_trajectory_csv(const fs::path& path, const ComplexTrajectory& traj, const MetricSeries& series) {
    auto out = open_out(path);
    const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
    out << 't';
    header_block(out, "x_re_", n);
    header_block(out, "x_im_", n);
    header_block(out, "mod_", n);
    header_block(out, "arg_unwrapped_", n);
    out << ",r_mod,r_arg,e_abs\n";
    for (std::size_t i = 0; i < traj.samples(); ++i) {
        const auto& x = traj.states[i];
        out << format_double(traj.times[i]);
        for (const auto& v : x) out << ',' << format_double(v.real());
        for (const auto& v : x) out << ',' << format_double(v.imag());
        for (const auto& v : x) out << ',' << format_double(std::abs(v));
        for (double a : traj.unwrapped_args[i]) out << ',' << format_double(a);
        out << ',' << format_double(series.r_mod[i]) << ',' << format_double(series.r_arg[i]) << ','
            << (series.e_abs ? format_double((*series.e_abs)[i]) : std::string("nan")) << '\n';
    }
    finish(out, path);
}

void write_phase_csv(const fs::path& path, const PhaseTrajectory& traj, const MetricSeries& series) {
    auto out = open_out(path);
    const std::size_t n = traj.phases.empty() ? 0 : traj.phases.front().size();
    out << 't';
    header_block(out, "theta_", n);
    out << ",r_mod,r_arg\n";
    for (std::size_t i = 0; i < traj.samples(); ++i) {
        out << format_double(traj.times[i]);
        for (double th : traj.phases[i]) out << ',' << format_double(th);
        out << ',' << format_double(series.r_mod[i]) << ',' << format_double(series.r_arg[i]) << '\n';
    }
    finish(out, path);
}

namespace {

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

}  // namespace

void write_svg_chart(const fs::path& path, const std::string& title, const std::string& xlabel,
                     const std::string& ylabel, const std::vector<PlotSeries>& series) {
    constexpr double width = 720.0;
    constexpr double height = 440.0;
    constexpr double left = 80.0;
    constexpr double right = 20.0;
    constexpr double top = 40.0;
    constexpr double bottom = 60.0;
    constexpr std::size_t max_points = 1500;

    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -xmin;
    double ymin = xmin;
    double ymax = -xmin;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i])) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (!std::isfinite(xmin)) {
        xmin = 0.0;
        xmax = 1.0;
        ymin = 0.0;
        ymax = 1.0;
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax - ymin < 1e-12 * std::max(1.0, std::abs(ymax))) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    const double pw = width - left - right;
    const double ph = height - top - bottom;
    const auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    const auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

    auto out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << esc(title)
        << "</text>\n";
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 5.0;
        const double fy = ymin + (ymax - ymin) * i / 5.0;
        out << "<text x=\"" << px(fx) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << fmt_tick(fx)
            << "</text>\n";
        out << "<text x=\"" << left - 6 << "\" y=\"" << py(fy) + 4 << "\" text-anchor=\"end\">" << fmt_tick(fy)
            << "</text>\n";
    }
    out << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 16 << "\" text-anchor=\"middle\">" << esc(xlabel)
        << "</text>\n";
    out << "<text transform=\"translate(18," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
        << esc(ylabel) << "</text>\n";

    char buf[64];
    for (const auto& s : series) {
        const std::size_t stride = std::max<std::size_t>(1, s.x.size() / max_points);
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); i += stride) {
            if (!std::isfinite(s.y[i])) continue;
            std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(s.x[i]), py(s.y[i]));
            out << buf;
        }
        out << "\"/>\n";
    }
    double ly = top + 16;
    for (const auto& s : series) {
        if (s.label.empty()) continue;
        out << "<text x=\"" << left + pw - 8 << "\" y=\"" << ly << "\" text-anchor=\"end\" fill=\"" << s.color
            << "\">" << esc(s.label) << "</text>\n";
        ly += 16;
    }
    out << "</svg>\n";
    finish(out, path);
}

namespace {

const char* palette(std::size_t k) {
    static constexpr const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                             "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return colors[k % 10];
}

void write_columns(const fs::path& path, const std::vector<std::string>& names, const RealVec& times,
                   const std::vector<const RealVec*>& columns) {
    auto out = open_out(path);
    out << 't';
    for (const auto& name : names) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < times.size(); ++i) {
        out << format_double(times[i]);
        for (const auto* c : columns) out << ',' << format_double((*c)[i]);
        out << '\n';
    }
    finish(out, path);
}

}  // namespace

std::vector<fs::path> emit_plots(const ComplexTrajectory& traj, const MetricSeries& series, const fs::path& outdir) {
    std::error_code ec;
    fs::create_directories(outdir, ec);
    if (ec || !fs::is_directory(outdir)) throw IoError("cannot create output directory " + outdir.string());

    std::vector<fs::path> written;
    const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();

    // Per-oscillator panels share a column layout.
    std::vector<RealVec> args(n, RealVec(traj.samples()));
    std::vector<RealVec> mods(n, RealVec(traj.samples()));
    for (std::size_t i = 0; i < traj.samples(); ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            args[k][i] = traj.unwrapped_args[i][k];
            mods[k][i] = std::abs(traj.states[i][k]);
        }
    }
    const auto panel = [&](const std::string& stem, const std::string& title, const std::string& ylabel,
                           const std::vector<RealVec>& cols, const char* prefix) {
        std::vector<PlotSeries> lines;
        std::vector<std::string> names;
        std::vector<const RealVec*> ptrs;
        for (std::size_t k = 0; k < cols.size(); ++k) {
            lines.push_back({"", palette(k), traj.times, cols[k]});
            names.push_back(prefix + std::to_string(k));
            ptrs.push_back(&cols[k]);
        }
        written.push_back(outdir / (stem + ".svg"));
        write_svg_chart(written.back(), title, "t [s]", ylabel, lines);
        written.push_back(outdir / (stem + ".csv"));
        write_columns(written.back(), names, traj.times, ptrs);
    };
    panel("arguments", "Complex-state arguments", "arg x_k [rad]", args, "arg_unwrapped_");
    panel("magnitudes", "Complex-state magnitudes", "|x_k|", mods, "mod_");

    {
        std::vector<PlotSeries> lines{{"complex", "#d62728", series.times, series.r_mod}};
        std::vector<std::string> names{"r_mod"};
        std::vector<const RealVec*> ptrs{&series.r_mod};
        if (series.real_r_mod) {
            lines.push_back({"real", "#000000", series.times, *series.real_r_mod});
            names.push_back("r_mod_real");
            ptrs.push_back(&*series.real_r_mod);
        }
        written.push_back(outdir / "order_parameter.svg");
        write_svg_chart(written.back(), "Order parameter", "t [s]", "|r|", lines);
        written.push_back(outdir / "order_parameter.csv");
        write_columns(written.back(), names, series.times, ptrs);
    }
    if (series.e_abs) {
        written.push_back(outdir / "error.svg");
        write_svg_chart(written.back(), "Mean absolute phase error", "t [s]", "e [rad]",
                        {{"", "#1f77b4", series.times, *series.e_abs}});
        written.push_back(outdir / "error.csv");
        write_columns(written.back(), {"e_abs"}, series.times, {&*series.e_abs});
    }
    return written;
}

}  // namespace cxk
