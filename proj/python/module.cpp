#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>

#include "cxk/complex_core.hpp"
#include "cxk/controllers.hpp"
#include "cxk/errors.hpp"
#include "cxk/metrics.hpp"
#include "cxk/network.hpp"
#include "cxk/scenario.hpp"

namespace py = pybind11;
using namespace cxk;

namespace {

py::array_t<double> adjacency_array(const Network& net) {
    const auto n = static_cast<py::ssize_t>(net.size());
    py::array_t<double> out({n, n});
    std::copy(net.adjacency().begin(), net.adjacency().end(), out.mutable_data());
    return out;
}

Network network_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw ValidationError("adjacency must be a square matrix");
    const auto n = static_cast<std::size_t>(a.shape(0));
    return Network(n, std::vector<double>(a.data(), a.data() + n * n));
}

py::array_t<std::complex<double>> states_array(const std::vector<ComplexVec>& states) {
    const auto m = static_cast<py::ssize_t>(states.size());
    const auto n = static_cast<py::ssize_t>(states.empty() ? 0 : states.front().size());
    py::array_t<std::complex<double>> out({m, n});
    auto* p = out.mutable_data();
    for (const auto& row : states) p = std::copy(row.begin(), row.end(), p);
    return out;
}

py::array_t<double> rows_array(const std::vector<RealVec>& rows) {
    const auto m = static_cast<py::ssize_t>(rows.size());
    const auto n = static_cast<py::ssize_t>(rows.empty() ? 0 : rows.front().size());
    py::array_t<double> out({m, n});
    auto* p = out.mutable_data();
    for (const auto& row : rows) p = std::copy(row.begin(), row.end(), p);
    return out;
}

Scenario scenario_from(const std::string& text, const std::string& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
    return parse_scenario(doc, base_dir);
}

py::dict execute_scenario(const std::string& text, const std::string& base_dir) {
    const Scenario scenario = scenario_from(text, base_dir);
    std::optional<RunResult> result;
    {
        py::gil_scoped_release release;
        result = execute(scenario);
    }
    const RunResult& r = *result;
    py::dict out;
    out["summary"] = r.summary.to_json().dump();
    out["times"] = py::array_t<double>(static_cast<py::ssize_t>(r.trajectory.times.size()), r.trajectory.times.data());
    out["states"] = states_array(r.trajectory.states);
    out["unwrapped_args"] = rows_array(r.trajectory.unwrapped_args);
    out["r_mod"] = py::array_t<double>(static_cast<py::ssize_t>(r.series.r_mod.size()), r.series.r_mod.data());
    if (r.series.e_abs) {
        out["e_abs"] = py::array_t<double>(static_cast<py::ssize_t>(r.series.e_abs->size()), r.series.e_abs->data());
    }
    if (r.real) out["real_phases"] = rows_array(r.real->phases);
    out["adjacency"] = adjacency_array(r.resolved.network);
    out["omega"] = r.resolved.params.omega;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Controlled complex-valued Kuramoto simulator (C++ core)";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<SimulationError>(m, "SimulationError", PyExc_RuntimeError);
    py::register_exception<AcceptanceError>(m, "AcceptanceError", PyExc_AssertionError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    m.def(
        "erdos_renyi", [](std::size_t n, double p, std::uint64_t seed) { return adjacency_array(erdos_renyi(n, p, seed)); },
        py::arg("n"), py::arg("p"), py::arg("seed"), "Seeded G(n, p) adjacency matrix.");

    m.def("csign", py::vectorize([](std::complex<double> z) { return csign(z); }), py::arg("z"),
          "Complex signum z/|z| with csign(0) = 0.");

    m.def(
        "matexp",
        [](const py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>& a, double t) {
            if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw ValidationError("matexp needs a square matrix");
            const auto n = static_cast<std::size_t>(a.shape(0));
            ComplexMatrix mat(n);
            for (std::size_t r = 0; r < n; ++r) {
                for (std::size_t c = 0; c < n; ++c) mat(r, c) = a.at(r, c);
            }
            const ComplexMatrix e = matexp(mat, t);
            py::array_t<std::complex<double>> out({a.shape(0), a.shape(1)});
            std::copy(e.data().begin(), e.data().end(), out.mutable_data());
            return out;
        },
        py::arg("m"), py::arg("t") = 1.0, "exp(m t) by Pade scaling and squaring.");

    m.def(
        "order_parameter", [](const std::vector<double>& phases) { return order_parameter(phases); },
        py::arg("phases"));

    m.def(
        "gain_threshold",
        [](const std::vector<double>& omega, double sigma, double omega_bar) {
            const OscParams params{omega, sigma};
            params.validate(omega.size());
            return gain_threshold(params, omega.size(), omega_bar);
        },
        py::arg("omega"), py::arg("sigma"), py::arg("omega_bar"),
        "Per-oscillator gain threshold |omega_i| + |omega_bar| + sigma (N - 1).");

    m.def(
        "reaching_bound_ff_smc", [](const ComplexVec& x0, double alpha) { return cxk::reaching_bound_ff_smc(x0, alpha); },
        py::arg("x0"), py::arg("alpha"));
    m.def(
        "reaching_bound_complex_smc",
        [](const ComplexVec& x0, double epsilon2) { return cxk::reaching_bound_complex_smc(x0, epsilon2); }, py::arg("x0"),
        py::arg("epsilon2"));

    m.def(
        "roberts_spectrum",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& adjacency,
           const std::vector<double>& omega, double sigma, const std::vector<double>& mu) {
            const Network net = network_from_array(adjacency);
            const RobertsSpectrum s = verify_roberts_spectrum(net, OscParams{omega, sigma}, mu);
            py::dict d;
            d["valid"] = s.valid;
            d["marginal_eigenvalue"] = s.marginal_eigenvalue;
            d["modulus_spread"] = s.modulus_spread;
            d["marginal_count"] = s.marginal_count;
            d["max_other_real"] = s.max_other_real;
            return d;
        },
        py::arg("adjacency"), py::arg("omega"), py::arg("sigma"), py::arg("mu"));

    m.def("preset_names", &preset_names);
    m.def(
        "preset_document", [](const std::string& name) { return preset_document(name).dump(); }, py::arg("name"));
    m.def(
        "scenario_hash",
        [](const std::string& text, const std::string& base_dir) { return scenario_hash(scenario_from(text, base_dir)); },
        py::arg("scenario_json"), py::arg("base_dir") = "");
    m.def("execute", &execute_scenario, py::arg("scenario_json"), py::arg("base_dir") = "",
          "Run a scenario in memory; returns the trajectory arrays and the summary as JSON text.");
    m.def(
        "run_scenario",
        [](const std::string& text, const std::string& outdir, const std::string& base_dir) {
            return run_scenario(scenario_from(text, base_dir), outdir).to_json().dump();
        },
        py::arg("scenario_json"), py::arg("outdir"), py::arg("base_dir") = "");
}
