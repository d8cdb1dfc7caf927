#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "cxk/errors.hpp"
#include "cxk/scenario.hpp"

namespace fs = std::filesystem;

namespace {

enum ExitCode { kOk = 0, kOther = 1, kConfig = 2, kSimulation = 3, kAcceptance = 4, kIo = 5 };

fs::path default_outdir(const std::string& name) {
    const char* env = std::getenv("CXK_OUTDIR");
    const fs::path root = (env && *env) ? fs::path(env) : fs::path("out");
    return root / name;
}

void print_summary(const cxk::RunSummary& s, const fs::path& outdir) {
    std::cout << s.to_json().dump(2) << '\n';
    std::cerr << "artifacts: " << outdir.string() << '\n';
}

int run_scenario_cmd(cxk::Scenario scenario, const std::string& outdir_flag) {
    const fs::path outdir = outdir_flag.empty() ? default_outdir(scenario.name) : fs::path(outdir_flag);
    const cxk::RunSummary s = cxk::run_scenario(scenario, outdir, false);
    print_summary(s, outdir);
    if (!s.failed_checks.empty()) {
        for (const auto& f : s.failed_checks) std::cerr << "check failed: " << f << '\n';
        return kAcceptance;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Controlled complex-valued Kuramoto experiment runner"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed_override;
    std::optional<double> dt;
    std::optional<double> delta;
    app.add_option("--seed-override", seed_override, "Re-derive every seed in the scenario from this master seed");
    app.add_option("--dt", dt, "Integration step (s), overrides sim.dt");
    app.add_option("--delta", delta, "Boundary-layer width, overrides sim.boundary_layer_delta");

    std::string config;
    std::string outdir;
    std::string preset_name;

    auto* run = app.add_subcommand("run", "Run a scenario file");
    run->add_option("config", config, "Scenario JSON")->required();
    run->add_option("--outdir", outdir, "Output directory (default $CXK_OUTDIR/<name> or out/<name>)");

    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
    sweep->add_option("config", config, "Sweep JSON")->required();
    sweep->add_option("--outdir", outdir, "Output directory");

    auto* preset = app.add_subcommand("preset", "Run a built-in scenario");
    preset->add_option("name", preset_name, "Preset name")->required()->check(CLI::IsMember(cxk::preset_names()));
    preset->add_option("--outdir", outdir, "Output directory");
    auto* dump = preset->add_flag("--print", "Print the preset JSON instead of running it");

    auto* validate = app.add_subcommand("validate", "Parse a scenario and check gain conditions without simulating");
    validate->add_option("config", config, "Scenario JSON")->required();

    for (auto* sub : {run, sweep, preset, validate}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    const cxk::Overrides overrides{seed_override, dt, delta};
    try {
        if (*run) return run_scenario_cmd(cxk::load_scenario(config, overrides), outdir);
        if (*preset) {
            cxk::json doc = cxk::preset_document(preset_name);
            cxk::apply_overrides(doc, overrides);
            if (*dump) {
                std::cout << doc.dump(2) << '\n';
                return kOk;
            }
            return run_scenario_cmd(cxk::parse_scenario(doc, fs::current_path()), outdir);
        }
        if (*validate) {
            const cxk::Scenario scenario = cxk::load_scenario(config, overrides);
            const cxk::ValidationReport rep = cxk::validate_scenario(scenario);
            std::cout << "scenario " << scenario.name << " (hash " << cxk::scenario_hash(scenario) << ")\n";
            for (const auto& line : rep.lines) std::cout << "  " << line << '\n';
            return rep.ok ? kOk : kAcceptance;
        }
        if (*sweep) {
            if (overrides.seed || overrides.dt || overrides.delta) {
                throw cxk::ConfigError("--seed-override/--dt/--delta are not supported for sweeps; use sweep axes");
            }
            const fs::path dir = outdir.empty() ? default_outdir(fs::path(config).stem().string()) : fs::path(outdir);
            const auto rows = cxk::sweep_file(config, dir);
            std::size_t failed = 0;
            for (const auto& row : rows) {
                if (!row.summary) {
                    ++failed;
                    std::cerr << "run " << row.index << ": " << row.error << '\n';
                }
            }
            std::cout << rows.size() << " runs, " << failed << " errors; aggregate: " << (dir / "aggregate.csv").string()
                      << '\n';
            return kOk;
        }
    } catch (const cxk::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const cxk::SimulationError& e) {
        std::cerr << "simulation error: " << e.what() << '\n';
        return kSimulation;
    } catch (const cxk::AcceptanceError& e) {
        std::cerr << "acceptance failure: " << e.what() << '\n';
        return kAcceptance;
    } catch (const cxk::IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kOther;
    }
    return kOther;
}
