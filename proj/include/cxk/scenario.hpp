#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "cxk/controllers.hpp"
#include "cxk/metrics.hpp"
#include "cxk/network.hpp"
#include "cxk/rng.hpp"
#include "cxk/sim.hpp"

namespace cxk {

using json = nlohmann::json;

// Scenario file schema (JSON). Units: seconds, rad/s, radians.
//
//   name        string
//   network     {"type": "er", "n", "p", "seed"} | {"type": "file", "path"}
//   omega       {"type": "constant", "value"} | {"type": "normal", "mean", "std", "seed"}
//   sigma       coupling strength (> 0)
//   controller  {"type": "none" | "switched_ff"}
//               {"type": "ff_smc", "alpha"}
//               {"type": "complex_smc", "K": number | [N], "omega_bar"}
//               {"type": "roberts", "mu": "degree" | [N]}
//               {"type": "hybrid_reset", "window"}
//   init        {"type": "unit_circle", "phase_seed"}
//               {"type": "annulus", "phase_seed", "modulus_low", "modulus_high", "modulus_seed"}
//   sim         {"dt", "t_end", "record_stride", "boundary_layer_delta", "unwrap": "strict" | "record"}
//   reference   {"real_model": bool}           matched real run for e(t)
//   metrics     {"tail_fraction", "sync_threshold", "fail_threshold"}
//   outputs     subset of ["csv", "plots", "summary"]
//   checks      optional assertions, see Checks
//
// Initial phases are U(-pi, pi); moduli (annulus) U(modulus_low, modulus_high).

struct ErNetworkSpec {
    std::size_t n;
    double p;
    std::uint64_t seed;
};
struct FileNetworkSpec {
    std::filesystem::path path;
};
using NetworkSpec = std::variant<ErNetworkSpec, FileNetworkSpec>;

struct OmegaSpec {
    FrequencyDist dist;
    std::uint64_t seed = 0;
};

struct UnitCircleInit {
    std::uint64_t phase_seed;
};
struct AnnulusInit {
    std::uint64_t phase_seed;
    double modulus_low;
    double modulus_high;
    std::uint64_t modulus_seed;
};
using InitSpec = std::variant<UnitCircleInit, AnnulusInit>;

struct MetricsSpec {
    double tail_fraction = 0.25;
    double sync_threshold = 0.99;
    double fail_threshold = 0.8;
};

/// Assertions a run must satisfy; any failure exits with code 4.
struct Checks {
    std::optional<double> max_modulus_deviation;        // over all samples
    std::optional<double> post_reach_modulus_deviation;  // after detected reaching
    std::optional<double> max_e;
    std::optional<double> max_e_drift;                  // rad/s over the tail window
    std::optional<double> real_tail_r_max;
    std::optional<double> complex_tail_r_min;
    std::optional<double> freq_lock_rel;                // |mean freq - omega_bar| / omega_bar
};

struct Scenario {
    std::string name;
    NetworkSpec network;
    OmegaSpec omega;
    double sigma;
    json controller;  // resolved against the network in resolve()
    InitSpec init;
    SimConfig sim;
    bool real_reference = false;
    MetricsSpec metrics;
    bool write_csv = true;
    bool write_plots = false;
    bool write_summary = true;
    Checks checks;

    json canonical;                 // the validated document everything is parsed from
    std::filesystem::path base_dir;  // for relative network paths
};

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> dt;
    std::optional<double> delta;
};

/// Parses and validates; throws ConfigError (or a subclass) on any problem.
Scenario parse_scenario(const json& doc, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path, const Overrides& overrides = {});

/// Applies --seed-override / --dt / --delta to a scenario document. A seed
/// override replaces every seed field with an independent stream of it.
void apply_overrides(json& doc, const Overrides& overrides);

std::vector<std::string> preset_names();
/// Throws ConfigError for unknown names.
json preset_document(const std::string& name);

/// FNV-1a 64 over the canonical document (plus network file bytes), hex.
std::string scenario_hash(const Scenario& scenario);

struct ResolvedScenario {
    Network network;
    OscParams params;
    ControllerSpec controller;
    RealVec theta0;
    RealVec moduli0;
    ComplexState x0;
};

ResolvedScenario resolve(const Scenario& scenario);

struct RunSummary {
    std::string name;
    std::string hash;
    std::string controller;
    std::string rng = SplitMix64::kName;
    std::size_t n = 0;
    std::size_t edges = 0;
    bool connected = false;
    std::optional<double> reaching_time;
    std::optional<double> reaching_bound;
    std::optional<double> reaching_tol;
    double tail_mean_r = 0.0;
    std::optional<double> real_tail_mean_r;
    std::optional<double> final_e;
    std::optional<double> max_e;
    std::optional<double> steady_e;
    std::optional<double> e_drift;
    double max_modulus_deviation = 0.0;
    std::optional<double> post_reach_modulus_deviation;
    std::optional<double> freq_lock_error;
    std::optional<double> epsilon2;
    bool complex_synced = false;
    std::optional<bool> real_synced;
    std::string complex_verdict;
    std::optional<std::string> real_verdict;
    std::size_t resets = 0;
    std::size_t guard_trips = 0;
    std::vector<std::string> failed_checks;
    double wall_seconds = 0.0;

    json to_json() const;
};

struct RunResult {
    ResolvedScenario resolved;
    ComplexTrajectory trajectory;
    std::optional<PhaseTrajectory> real;
    MetricSeries series;
    RunSummary summary;
};

/// Runs the scenario in memory and evaluates its checks (recorded in
/// summary.failed_checks, not thrown).
RunResult execute(const Scenario& scenario);

/// execute() plus artifacts under `outdir`. Throws AcceptanceError after
/// writing if any check failed, unless `throw_on_failed_checks` is false.
RunSummary run_scenario(const Scenario& scenario, const std::filesystem::path& outdir,
                        bool throw_on_failed_checks = true);

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> lines;
};

/// Parse-level checks plus the gain condition of the chosen controller (and
/// the spectral check for state feedback). No simulation.
ValidationReport validate_scenario(const Scenario& scenario);

struct SweepRow {
    std::size_t index;
    std::vector<std::pair<std::string, json>> axis_values;
    std::size_t replicate;
    std::optional<RunSummary> summary;
    std::string error;
};

// Sweep file schema:
//   base         scenario document, or
//   preset       preset name
//   axes         {"controller.alpha": [1, 10, 100], ...}   dotted paths into the scenario
//   replicates   integer >= 1 (default 1)
//   master_seed  optional; replicate r re-seeds every seed field from derive_seed(master_seed, r)
//   outputs      per-run outputs (default ["summary"])
std::vector<SweepRow> sweep(const json& sweep_doc, const std::filesystem::path& outdir,
                            const std::filesystem::path& base_dir = {});
std::vector<SweepRow> sweep_file(const std::filesystem::path& path, const std::filesystem::path& outdir);

}  // namespace cxk
