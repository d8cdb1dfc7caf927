#include "cxk/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cxk/complex_core.hpp"
#include "cxk/errors.hpp"
#include "cxk/output.hpp"
#include "cxk/rng.hpp"

namespace cxk {

namespace fs = std::filesystem;

namespace {

#include "presets.inc"

// Tags for re-deriving seeds from --seed-override / a sweep master seed.
constexpr std::uint64_t kOverrideNetwork = 101;
constexpr std::uint64_t kOverrideOmega = 102;
constexpr std::uint64_t kOverridePhase = 103;
constexpr std::uint64_t kOverrideModulus = 104;

const json& member(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(where + ": missing '" + key + "'");
    return *it;
}

double number(const json& obj, const char* key, const std::string& where) {
    const json& v = member(obj, key, where);
    if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(where + "." + key + ": must be finite");
    return d;
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
    return obj.contains(key) ? number(obj, key, where) : fallback;
}

std::uint64_t seed(const json& obj, const char* key, const std::string& where) {
    const json& v = member(obj, key, where);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw ConfigError(where + "." + key + ": seeds must be non-negative integers");
}

std::string text(const json& obj, const char* key, const std::string& where) {
    const json& v = member(obj, key, where);
    if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
    return v.get<std::string>();
}

std::size_t count(const json& obj, const char* key, const std::string& where) {
    const json& v = member(obj, key, where);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
        throw ConfigError(where + "." + key + ": expected a positive integer");
    }
    return v.get<std::size_t>();
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
}

NetworkSpec parse_network(const json& j) {
    const std::string type = text(j, "type", "network");
    if (type == "er") {
        check_keys(j, {"type", "n", "p", "seed"}, "network");
        ErNetworkSpec s{count(j, "n", "network"), number(j, "p", "network"), seed(j, "seed", "network")};
        if (s.p < 0.0 || s.p > 1.0) throw ConfigError("network.p must lie in [0, 1]");
        return s;
    }
    if (type == "file") {
        check_keys(j, {"type", "path"}, "network");
        return FileNetworkSpec{text(j, "path", "network")};
    }
    throw ConfigError("network.type must be 'er' or 'file'");
}

json network_json(const NetworkSpec& spec) {
    if (const auto* er = std::get_if<ErNetworkSpec>(&spec)) {
        return {{"type", "er"}, {"n", er->n}, {"p", er->p}, {"seed", er->seed}};
    }
    return {{"type", "file"}, {"path", std::get<FileNetworkSpec>(spec).path.generic_string()}};
}

OmegaSpec parse_omega(const json& j) {
    const std::string type = text(j, "type", "omega");
    if (type == "constant") {
        check_keys(j, {"type", "value"}, "omega");
        return {ConstantDist{number(j, "value", "omega")}, 0};
    }
    if (type == "normal") {
        check_keys(j, {"type", "mean", "std", "seed"}, "omega");
        NormalDist d{number(j, "mean", "omega"), number(j, "std", "omega")};
        if (d.std < 0.0) throw ConfigError("omega.std must be >= 0");
        return {d, seed(j, "seed", "omega")};
    }
    throw ConfigError("omega.type must be 'constant' or 'normal'");
}

json omega_json(const OmegaSpec& spec) {
    if (const auto* c = std::get_if<ConstantDist>(&spec.dist)) return {{"type", "constant"}, {"value", c->value}};
    const auto& d = std::get<NormalDist>(spec.dist);
    return {{"type", "normal"}, {"mean", d.mean}, {"std", d.std}, {"seed", spec.seed}};
}

InitSpec parse_init(const json& j) {
    const std::string type = text(j, "type", "init");
    if (type == "unit_circle") {
        check_keys(j, {"type", "phase_seed"}, "init");
        return UnitCircleInit{seed(j, "phase_seed", "init")};
    }
    if (type == "annulus") {
        check_keys(j, {"type", "phase_seed", "modulus_low", "modulus_high", "modulus_seed"}, "init");
        AnnulusInit a{seed(j, "phase_seed", "init"), number(j, "modulus_low", "init"),
                      number(j, "modulus_high", "init"), seed(j, "modulus_seed", "init")};
        if (a.modulus_low < 0.0 || !(a.modulus_low < a.modulus_high)) {
            throw ConfigError("init: need 0 <= modulus_low < modulus_high");
        }
        return a;
    }
    throw ConfigError("init.type must be 'unit_circle' or 'annulus'");
}

json init_json(const InitSpec& spec) {
    if (const auto* u = std::get_if<UnitCircleInit>(&spec)) return {{"type", "unit_circle"}, {"phase_seed", u->phase_seed}};
    const auto& a = std::get<AnnulusInit>(spec);
    return {{"type", "annulus"},
            {"phase_seed", a.phase_seed},
            {"modulus_low", a.modulus_low},
            {"modulus_high", a.modulus_high},
            {"modulus_seed", a.modulus_seed}};
}

SimConfig parse_sim(const json& j) {
    check_keys(j, {"dt", "t_end", "record_stride", "boundary_layer_delta", "unwrap"}, "sim");
    SimConfig c;
    c.dt = number_or(j, "dt", c.dt, "sim");
    c.t_end = number_or(j, "t_end", c.t_end, "sim");
    if (j.contains("record_stride")) c.record_stride = count(j, "record_stride", "sim");
    c.boundary_layer_delta = number_or(j, "boundary_layer_delta", 0.0, "sim");
    if (j.contains("unwrap")) {
        const std::string u = text(j, "unwrap", "sim");
        if (u == "strict") {
            c.unwrap = UnwrapPolicy::Strict;
        } else if (u == "record") {
            c.unwrap = UnwrapPolicy::Record;
        } else {
            throw ConfigError("sim.unwrap must be 'strict' or 'record'");
        }
    }
    try {
        c.validate();
    } catch (const ValidationError& e) {
        throw ConfigError(e.what());
    }
    return c;
}

json sim_json(const SimConfig& c) {
    return {{"dt", c.dt},
            {"t_end", c.t_end},
            {"record_stride", c.record_stride},
            {"boundary_layer_delta", c.boundary_layer_delta},
            {"unwrap", c.unwrap == UnwrapPolicy::Strict ? "strict" : "record"}};
}

json parse_controller(const json& j) {
    const std::string type = text(j, "type", "controller");
    if (type == "none" || type == "switched_ff") {
        check_keys(j, {"type"}, "controller");
    } else if (type == "ff_smc") {
        check_keys(j, {"type", "alpha"}, "controller");
        if (!(number(j, "alpha", "controller") > 0.0)) throw ConfigError("controller.alpha must be positive");
    } else if (type == "complex_smc") {
        check_keys(j, {"type", "K", "omega_bar"}, "controller");
        number(j, "omega_bar", "controller");
        const json& k = member(j, "K", "controller");
        const auto positive = [](const json& v) { return v.is_number() && v.get<double>() > 0.0; };
        if (k.is_array() ? !std::all_of(k.begin(), k.end(), positive) : !positive(k)) {
            throw ConfigError("controller.K must be a positive number or an array of positive numbers");
        }
    } else if (type == "roberts") {
        check_keys(j, {"type", "mu"}, "controller");
        const json& mu = member(j, "mu", "controller");
        const bool ok = (mu.is_string() && mu.get<std::string>() == "degree") ||
                        (mu.is_array() && std::all_of(mu.begin(), mu.end(), [](const json& v) { return v.is_number(); }));
        if (!ok) throw ConfigError("controller.mu must be \"degree\" or an array of numbers");
    } else if (type == "hybrid_reset") {
        check_keys(j, {"type", "window"}, "controller");
        if (!(number(j, "window", "controller") > 0.0)) throw ConfigError("controller.window must be positive");
    } else {
        throw ConfigError("controller.type '" + type + "' is not one of none, switched_ff, ff_smc, complex_smc, "
                          "roberts, hybrid_reset");
    }
    return j;
}

Checks parse_checks(const json& j) {
    check_keys(j,
               {"max_modulus_deviation", "post_reach_modulus_deviation", "max_e", "max_e_drift", "real_tail_r_max",
                "complex_tail_r_min", "freq_lock_rel"},
               "checks");
    Checks c;
    const auto opt = [&](const char* key, std::optional<double>& out) {
        if (j.contains(key)) out = number(j, key, "checks");
    };
    opt("max_modulus_deviation", c.max_modulus_deviation);
    opt("post_reach_modulus_deviation", c.post_reach_modulus_deviation);
    opt("max_e", c.max_e);
    opt("max_e_drift", c.max_e_drift);
    opt("real_tail_r_max", c.real_tail_r_max);
    opt("complex_tail_r_min", c.complex_tail_r_min);
    opt("freq_lock_rel", c.freq_lock_rel);
    return c;
}

json checks_json(const Checks& c) {
    json j = json::object();
    const auto put = [&](const char* key, const std::optional<double>& v) {
        if (v) j[key] = *v;
    };
    put("max_modulus_deviation", c.max_modulus_deviation);
    put("post_reach_modulus_deviation", c.post_reach_modulus_deviation);
    put("max_e", c.max_e);
    put("max_e_drift", c.max_e_drift);
    put("real_tail_r_max", c.real_tail_r_max);
    put("complex_tail_r_min", c.complex_tail_r_min);
    put("freq_lock_rel", c.freq_lock_rel);
    return j;
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

}  // namespace

Scenario parse_scenario(const json& doc, const fs::path& base_dir) {
    if (!doc.is_object()) throw ConfigError("scenario: expected a JSON object");
    check_keys(doc,
               {"name", "network", "omega", "sigma", "controller", "init", "sim", "reference", "metrics", "outputs",
                "checks"},
               "scenario");
    Scenario s;
    s.base_dir = base_dir;
    s.name = doc.contains("name") ? text(doc, "name", "scenario") : std::string("scenario");
    s.network = parse_network(member(doc, "network", "scenario"));
    s.omega = parse_omega(member(doc, "omega", "scenario"));
    s.sigma = number(doc, "sigma", "scenario");
    if (!(s.sigma > 0.0)) throw ConfigError("sigma must be positive");
    s.controller = parse_controller(member(doc, "controller", "scenario"));
    s.init = parse_init(member(doc, "init", "scenario"));
    s.sim = parse_sim(doc.value("sim", json::object()));

    if (doc.contains("reference")) {
        const json& r = doc["reference"];
        check_keys(r, {"real_model"}, "reference");
        const json& flag = member(r, "real_model", "reference");
        if (!flag.is_boolean()) throw ConfigError("reference.real_model must be a boolean");
        s.real_reference = flag.get<bool>();
    }
    if (doc.contains("metrics")) {
        const json& m = doc["metrics"];
        check_keys(m, {"tail_fraction", "sync_threshold", "fail_threshold"}, "metrics");
        s.metrics.tail_fraction = number_or(m, "tail_fraction", s.metrics.tail_fraction, "metrics");
        s.metrics.sync_threshold = number_or(m, "sync_threshold", s.metrics.sync_threshold, "metrics");
        s.metrics.fail_threshold = number_or(m, "fail_threshold", s.metrics.fail_threshold, "metrics");
        if (!(s.metrics.tail_fraction > 0.0 && s.metrics.tail_fraction < 1.0)) {
            throw ConfigError("metrics.tail_fraction must lie in (0, 1)");
        }
    }
    if (doc.contains("outputs")) {
        const json& o = doc["outputs"];
        if (!o.is_array()) throw ConfigError("outputs must be an array");
        s.write_csv = s.write_plots = s.write_summary = false;
        for (const auto& item : o) {
            const std::string v = item.is_string() ? item.get<std::string>() : std::string();
            if (v == "csv") {
                s.write_csv = true;
            } else if (v == "plots") {
                s.write_plots = true;
            } else if (v == "summary") {
                s.write_summary = true;
            } else {
                throw ConfigError("outputs entries must be 'csv', 'plots' or 'summary'");
            }
        }
    }
    if (doc.contains("checks")) s.checks = parse_checks(doc["checks"]);

    json outputs = json::array();
    if (s.write_csv) outputs.push_back("csv");
    if (s.write_plots) outputs.push_back("plots");
    if (s.write_summary) outputs.push_back("summary");
    s.canonical = {{"name", s.name},
                   {"network", network_json(s.network)},
                   {"omega", omega_json(s.omega)},
                   {"sigma", s.sigma},
                   {"controller", s.controller},
                   {"init", init_json(s.init)},
                   {"sim", sim_json(s.sim)},
                   {"reference", {{"real_model", s.real_reference}}},
                   {"metrics",
                    {{"tail_fraction", s.metrics.tail_fraction},
                     {"sync_threshold", s.metrics.sync_threshold},
                     {"fail_threshold", s.metrics.fail_threshold}}},
                   {"outputs", outputs},
                   {"checks", checks_json(s.checks)}};
    return s;
}

void apply_overrides(json& doc, const Overrides& overrides) {
    if (overrides.seed) {
        const std::uint64_t master = *overrides.seed;
        if (doc.contains("network") && doc["network"].contains("seed")) {
            doc["network"]["seed"] = derive_seed(master, kOverrideNetwork);
        }
        if (doc.contains("omega") && doc["omega"].contains("seed")) doc["omega"]["seed"] = derive_seed(master, kOverrideOmega);
        if (doc.contains("init")) {
            if (doc["init"].contains("phase_seed")) doc["init"]["phase_seed"] = derive_seed(master, kOverridePhase);
            if (doc["init"].contains("modulus_seed")) doc["init"]["modulus_seed"] = derive_seed(master, kOverrideModulus);
        }
    }
    if (overrides.dt) doc["sim"]["dt"] = *overrides.dt;
    if (overrides.delta) doc["sim"]["boundary_layer_delta"] = *overrides.delta;
}

Scenario load_scenario(const fs::path& path, const Overrides& overrides) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    apply_overrides(doc, overrides);
    return parse_scenario(doc, path.parent_path());
}

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& p : kPresets) out.emplace_back(p.name);
    return out;
}

json preset_document(const std::string& name) {
    for (const auto& p : kPresets) {
        if (name == p.name) return json::parse(p.body);
    }
    throw ConfigError("unknown preset '" + name + "'");
}

std::string scenario_hash(const Scenario& scenario) {
    std::uint64_t h = fnv1a(scenario.canonical.dump());
    if (const auto* f = std::get_if<FileNetworkSpec>(&scenario.network)) {
        h = fnv1a(read_file(scenario.base_dir / f->path), h);
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ResolvedScenario resolve(const Scenario& scenario) {
    Network net = std::visit(overloaded{[](const ErNetworkSpec& s) { return erdos_renyi(s.n, s.p, s.seed); },
                                        [&](const FileNetworkSpec& s) {
                                            return load_adjacency(s.path.is_absolute() ? s.path
                                                                                       : scenario.base_dir / s.path);
                                        }},
                             scenario.network);
    const std::size_t n = net.size();
    OscParams params{sample_frequencies(n, scenario.omega.dist, scenario.omega.seed), scenario.sigma};

    const json& c = scenario.controller;
    const std::string type = c["type"].get<std::string>();
    ControllerSpec spec;
    if (type == "none") {
        spec = NoControl{};
    } else if (type == "switched_ff") {
        spec = SwitchedFeedforward{};
    } else if (type == "ff_smc") {
        spec = FeedforwardSmc{c["alpha"].get<double>()};
    } else if (type == "complex_smc") {
        RealVec gains = c["K"].is_array() ? c["K"].get<RealVec>() : RealVec(n, c["K"].get<double>());
        spec = ComplexSmc{std::move(gains), c["omega_bar"].get<double>()};
    } else if (type == "roberts") {
        spec = Roberts{c["mu"].is_string() ? roberts_mu_degree(net, params) : c["mu"].get<RealVec>()};
    } else {
        spec = HybridReset{c["window"].get<double>()};
    }
    validate(spec, n);

    RealVec theta0(n);
    RealVec moduli0(n, 1.0);
    std::visit(overloaded{[&](const UnitCircleInit& u) {
                              SplitMix64 gen(derive_seed(u.phase_seed, streams::kPhases));
                              for (auto& th : theta0) th = gen.uniform(-std::numbers::pi, std::numbers::pi);
                          },
                          [&](const AnnulusInit& a) {
                              SplitMix64 gen(derive_seed(a.phase_seed, streams::kPhases));
                              for (auto& th : theta0) th = gen.uniform(-std::numbers::pi, std::numbers::pi);
                              SplitMix64 mgen(derive_seed(a.modulus_seed, streams::kModuli));
                              for (auto& m : moduli0) m = mgen.uniform(a.modulus_low, a.modulus_high);
                          }},
               scenario.init);
    ComplexState x0 = ComplexState::from_polar(moduli0, theta0);
    return {std::move(net), std::move(params), std::move(spec), std::move(theta0), std::move(moduli0), std::move(x0)};
}

json RunSummary::to_json() const {
    json j;
    j["name"] = name;
    j["hash"] = hash;
    j["controller"] = controller;
    j["rng"] = rng;
    j["n"] = n;
    j["edges"] = edges;
    j["connected"] = connected;
    const auto opt = [&](const char* key, const std::optional<double>& v) { j[key] = v ? json(*v) : json(nullptr); };
    opt("reaching_time", reaching_time);
    opt("reaching_bound", reaching_bound);
    opt("reaching_tol", reaching_tol);
    j["tail_mean_r"] = tail_mean_r;
    opt("real_tail_mean_r", real_tail_mean_r);
    opt("final_e", final_e);
    opt("max_e", max_e);
    opt("steady_e", steady_e);
    opt("e_drift", e_drift);
    j["max_modulus_deviation"] = max_modulus_deviation;
    opt("post_reach_modulus_deviation", post_reach_modulus_deviation);
    opt("freq_lock_error", freq_lock_error);
    opt("epsilon2", epsilon2);
    j["complex_synced"] = complex_synced;
    j["real_synced"] = real_synced ? json(*real_synced) : json(nullptr);
    j["complex_verdict"] = complex_verdict;
    j["real_verdict"] = real_verdict ? json(*real_verdict) : json(nullptr);
    j["resets"] = resets;
    j["guard_trips"] = guard_trips;
    j["failed_checks"] = failed_checks;
    j["wall_seconds"] = wall_seconds;
    return j;
}

namespace {

std::string verdict_text(double r, const MetricsSpec& m) {
    if (r >= m.sync_threshold) return "synced";
    if (r < m.fail_threshold) return "not synced";
    return "partial";
}

std::string describe(const char* what, double value, const char* op, double limit) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s = %.6g violates %s %.6g", what, value, op, limit);
    return buf;
}

}  // namespace

RunResult execute(const Scenario& scenario) {
    const auto start = std::chrono::steady_clock::now();
    RunResult out{resolve(scenario), {}, std::nullopt, {}, {}};
    const auto& rs = out.resolved;
    const SimConfig& cfg = scenario.sim;

    out.trajectory = run_complex(rs.x0, rs.network, rs.params, rs.controller, cfg);
    if (scenario.real_reference) out.real = run_real(rs.theta0, rs.network, rs.params, cfg);
    out.series = compute_series(out.trajectory, out.real ? &*out.real : nullptr);

    RunSummary& s = out.summary;
    s.name = scenario.name;
    s.hash = scenario_hash(scenario);
    s.controller = controller_name(rs.controller);
    s.n = rs.network.size();
    s.edges = rs.network.edge_count();
    s.connected = rs.network.is_connected();

    const double tail = scenario.metrics.tail_fraction * cfg.t_end;
    const auto complex_verdict = sync_verdict(out.series, tail, scenario.metrics.sync_threshold);
    s.tail_mean_r = complex_verdict.tail_mean_r;
    s.complex_synced = complex_verdict.synced;
    s.complex_verdict = verdict_text(s.tail_mean_r, scenario.metrics);
    if (out.real) {
        const double r = tail_mean(out.series.times, *out.series.real_r_mod, tail);
        s.real_tail_mean_r = r;
        s.real_synced = r >= scenario.metrics.sync_threshold;
        s.real_verdict = verdict_text(r, scenario.metrics);
    }

    const RealVec dev = modulus_deviation(out.trajectory);
    s.max_modulus_deviation = *std::max_element(dev.begin(), dev.end());

    std::optional<Surface> surface;
    std::optional<double> omega_bar;
    if (const auto* c = std::get_if<FeedforwardSmc>(&rs.controller)) {
        surface = UnitModulus{};
        s.reaching_tol = default_reaching_tol(c->alpha, cfg.dt);
        s.reaching_bound = reaching_bound_ff_smc(rs.x0.x, c->alpha);
    } else if (const auto* c = std::get_if<ComplexSmc>(&rs.controller)) {
        surface = PrescribedLock{c->omega_bar};
        omega_bar = c->omega_bar;
        s.reaching_tol = default_reaching_tol(*std::min_element(c->gains.begin(), c->gains.end()), cfg.dt);
        const SmcDiagnostics diag = gain_margin(c->gains, rs.params, s.n, c->omega_bar, rs.x0.x);
        s.epsilon2 = diag.epsilon2;
        if (!diag.condition_violated) s.reaching_bound = reaching_bound_complex_smc(rs.x0.x, diag.epsilon2);
    } else if (std::holds_alternative<SwitchedFeedforward>(rs.controller)) {
        surface = UnitModulus{};
        s.reaching_tol = 1e-3;
    }
    if (surface) {
        s.reaching_time = detect_reaching(out.trajectory, *surface, *s.reaching_tol);
        if (s.reaching_time) {
            out.trajectory.events.push_back({*s.reaching_time, EventKind::Reach, ""});
            double worst = 0.0;
            for (std::size_t i = 0; i < dev.size(); ++i) {
                if (out.trajectory.times[i] >= *s.reaching_time) worst = std::max(worst, dev[i]);
            }
            s.post_reach_modulus_deviation = worst;
            if (omega_bar && *s.reaching_time < out.trajectory.times.back()) {
                const RealVec freqs = mean_frequencies(out.trajectory, *s.reaching_time);
                double err = 0.0;
                for (double f : freqs) err = std::max(err, std::abs(f - *omega_bar) / std::abs(*omega_bar));
                s.freq_lock_error = err;
            }
        }
    }

    if (out.series.e_abs) {
        const RealVec& e = *out.series.e_abs;
        s.final_e = e.back();
        s.max_e = *std::max_element(e.begin(), e.end());
        s.steady_e = tail_mean(out.series.times, e, tail);
        const double t_from = out.series.times.back() - tail;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (out.series.times[i] < t_from) continue;
            lo = std::min(lo, e[i]);
            hi = std::max(hi, e[i]);
        }
        s.e_drift = (hi - lo) / tail;
    }

    for (const auto& ev : out.trajectory.events) {
        if (ev.kind == EventKind::Reset) ++s.resets;
        if (ev.kind == EventKind::GuardTrip) ++s.guard_trips;
    }

    // Theoretical reaching bounds are asserted whenever their gain condition holds.
    if (s.reaching_bound) {
        if (!s.reaching_time) {
            if (*s.reaching_bound < cfg.t_end) s.failed_checks.push_back("surface not reached before the bound");
        } else if (*s.reaching_time > *s.reaching_bound) {
            s.failed_checks.push_back(describe("reaching_time", *s.reaching_time, "<=", *s.reaching_bound));
        }
    }
    const Checks& ch = scenario.checks;
    const auto upper = [&](const char* what, const std::optional<double>& limit, const std::optional<double>& value) {
        if (!limit) return;
        if (!value) {
            s.failed_checks.push_back(std::string(what) + " unavailable for this run");
        } else if (!(*value <= *limit)) {
            s.failed_checks.push_back(describe(what, *value, "<=", *limit));
        }
    };
    upper("max_modulus_deviation", ch.max_modulus_deviation, s.max_modulus_deviation);
    upper("post_reach_modulus_deviation", ch.post_reach_modulus_deviation, s.post_reach_modulus_deviation);
    upper("max_e", ch.max_e, s.max_e);
    upper("e_drift", ch.max_e_drift, s.e_drift);
    upper("real_tail_mean_r", ch.real_tail_r_max, s.real_tail_mean_r);
    upper("freq_lock_error", ch.freq_lock_rel, s.freq_lock_error);
    if (ch.complex_tail_r_min && !(s.tail_mean_r >= *ch.complex_tail_r_min)) {
        s.failed_checks.push_back(describe("tail_mean_r", s.tail_mean_r, ">=", *ch.complex_tail_r_min));
    }

    s.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

namespace {

void write_events(const fs::path& path, const std::vector<Event>& events) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "time,kind,detail\n";
    for (const auto& e : events) {
        std::string detail = e.detail;
        std::replace(detail.begin(), detail.end(), ',', ';');
        out << format_double(e.time) << ',' << event_name(e.kind) << ',' << detail << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

RunSummary run_scenario(const Scenario& scenario, const fs::path& outdir, bool throw_on_failed_checks) {
    std::error_code ec;
    fs::create_directories(outdir, ec);
    if (ec || !fs::is_directory(outdir)) throw IoError("cannot create output directory " + outdir.string());
    {
        std::ofstream probe(outdir / "scenario.json", std::ios::binary);
        if (!probe) throw IoError("output directory is not writable: " + outdir.string());
        probe << scenario.canonical.dump(2) << '\n';
    }

    RunResult result = execute(scenario);
    if (scenario.write_csv) {
        write_trajectory_csv(outdir / "trajectory.csv", result.trajectory, result.series);
        if (result.real) write_phase_csv(outdir / "real.csv", *result.real, compute_series(*result.real));
        write_events(outdir / "events.csv", result.trajectory.events);
        save_adjacency(result.resolved.network, outdir / "network.txt");
    }
    if (scenario.write_plots) emit_plots(result.trajectory, result.series, outdir / "plots");
    if (scenario.write_summary) {
        std::ofstream out(outdir / "summary.json", std::ios::binary);
        if (!out) throw IoError("cannot write summary.json");
        out << result.summary.to_json().dump(2) << '\n';
    }
    if (throw_on_failed_checks && !result.summary.failed_checks.empty()) {
        std::string msg = scenario.name + ": " + std::to_string(result.summary.failed_checks.size()) + " check(s) failed";
        for (const auto& f : result.summary.failed_checks) msg += "\n  - " + f;
        throw AcceptanceError(msg);
    }
    return result.summary;
}

ValidationReport validate_scenario(const Scenario& scenario) {
    ValidationReport rep;
    const ResolvedScenario rs = resolve(scenario);
    const std::size_t n = rs.network.size();
    char buf[256];
    std::snprintf(buf, sizeof(buf), "network: n=%zu edges=%zu connected=%s", n, rs.network.edge_count(),
                  rs.network.is_connected() ? "yes" : "no");
    rep.lines.emplace_back(buf);
    rep.lines.push_back("controller: " + controller_name(rs.controller));

    if (const auto* c = std::get_if<ComplexSmc>(&rs.controller)) {
        const RealVec thr = gain_threshold(rs.params, n, c->omega_bar);
        const SmcDiagnostics d = gain_margin(c->gains, rs.params, n, c->omega_bar, rs.x0.x);
        std::snprintf(buf, sizeof(buf), "gain threshold max_i = %.6f, min K = %.6f, epsilon2 = %.6f",
                      *std::max_element(thr.begin(), thr.end()), *std::min_element(c->gains.begin(), c->gains.end()),
                      d.epsilon2);
        rep.lines.emplace_back(buf);
        if (d.condition_violated) {
            rep.ok = false;
            rep.lines.emplace_back("gain condition: VIOLATED");
        } else {
            std::snprintf(buf, sizeof(buf), "gain condition: ok, reaching bound %.6f s", d.reaching_bound);
            rep.lines.emplace_back(buf);
        }
    } else if (const auto* c = std::get_if<FeedforwardSmc>(&rs.controller)) {
        std::snprintf(buf, sizeof(buf), "alpha = %.6g > 0: ok, reaching bound %.6f s", c->alpha,
                      reaching_bound_ff_smc(rs.x0.x, c->alpha));
        rep.lines.emplace_back(buf);
    } else if (const auto* c = std::get_if<Roberts>(&rs.controller)) {
        const RobertsSpectrum spec = verify_roberts_spectrum(rs.network, rs.params, c->mu);
        std::snprintf(buf, sizeof(buf),
                      "spectrum: marginal=%zu eigenvalue=(%.6g, %.6g) spread=%.3g max other Re=%.6g -> %s",
                      spec.marginal_count, spec.marginal_eigenvalue.real(), spec.marginal_eigenvalue.imag(),
                      spec.modulus_spread, spec.max_other_real, spec.valid ? "valid" : "INVALID");
        rep.lines.emplace_back(buf);
        rep.ok = spec.valid;
    } else if (const auto* c = std::get_if<HybridReset>(&rs.controller)) {
        const double ratio = c->window / scenario.sim.dt;
        const bool ok = std::llround(ratio) >= 1 && std::abs(ratio - std::round(ratio)) <= 1e-9 * ratio;
        rep.lines.emplace_back(std::string("window multiple of dt: ") + (ok ? "ok" : "NO"));
        if (!ok) throw ConfigError("hybrid_reset.window must be a positive integer multiple of sim.dt");
    }
    return rep;
}

}  // namespace cxk
