#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"

#include "cxk/errors.hpp"
#include "cxk/output.hpp"
#include "cxk/scenario.hpp"

using namespace cxk;
namespace fs = std::filesystem;

namespace {

json small_doc() {
    return json::parse(R"({
      "name": "small",
      "network": {"type": "er", "n": 12, "p": 0.4, "seed": 3},
      "omega": {"type": "constant", "value": 6.283185307179586},
      "sigma": 0.25,
      "controller": {"type": "ff_smc", "alpha": 10.0},
      "init": {"type": "annulus", "phase_seed": 1, "modulus_low": 0.5, "modulus_high": 1.5, "modulus_seed": 2},
      "sim": {"dt": 0.001, "t_end": 0.5, "record_stride": 5},
      "reference": {"real_model": true},
      "outputs": ["csv", "plots", "summary"]
    })");
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("cxk_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string hash_of(const json& doc) { return scenario_hash(parse_scenario(doc)); }

}  // namespace

TEST_CASE("scenario parsing rejects bad documents") {
    json d = small_doc();
    d["bogus"] = 1;
    CHECK_THROWS_AS(parse_scenario(d), ConfigError);

    d = small_doc();
    d.erase("sigma");
    CHECK_THROWS_AS(parse_scenario(d), ConfigError);

    d = small_doc();
    d["init"]["modulus_low"] = 1.5;
    CHECK_THROWS_AS(parse_scenario(d), ConfigError);

    d = small_doc();
    d["init"]["modulus_low"] = -0.1;
    CHECK_THROWS_AS(parse_scenario(d), ConfigError);

    d = small_doc();
    d["init"]["phase_seed"] = -4;
    CHECK_THROWS_AS(parse_scenario(d), ConfigError);

    d = small_doc();
    d["init"].erase("modulus_seed");
    CHECK_THROWS_AS(parse_scenario(d), ConfigError);

    d = small_doc();
    d["controller"] = {{"type", "pid"}};
    CHECK_THROWS_AS(parse_scenario(d), ConfigError);

    d = small_doc();
    d["controller"]["alpha"] = 0.0;
    CHECK_THROWS_AS(parse_scenario(d), ConfigError);

    d = small_doc();
    d["sim"]["dt"] = -1.0;
    CHECK_THROWS_AS(parse_scenario(d), ConfigError);

    d = small_doc();
    d["outputs"] = {"pdf"};
    CHECK_THROWS_AS(parse_scenario(d), ConfigError);

    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), ConfigError);
}

TEST_CASE("malformed JSON is a parse error") {
    const fs::path dir = scratch("badjson");
    fs::create_directories(dir);
    std::ofstream(dir / "bad.json") << "{ \"name\": ";
    CHECK_THROWS_AS(load_scenario(dir / "bad.json"), ParseError);
    fs::remove_all(dir);
}

TEST_CASE("presets parse") {
    CHECK(preset_names() == std::vector<std::string>{"fig1", "fig2", "fig3", "fig3d"});
    for (const auto& name : preset_names()) {
        const Scenario s = parse_scenario(preset_document(name));
        CHECK(s.name == name);
        CHECK(std::get<ErNetworkSpec>(s.network).n == 100);
    }
    CHECK_THROWS_AS(preset_document("fig9"), ConfigError);
}

TEST_CASE("hash binds every input") {
    const std::string base = hash_of(small_doc());
    CHECK(base.size() == 16);
    CHECK(hash_of(small_doc()) == base);

    const auto changed = [&](auto&& edit) {
        json d = small_doc();
        edit(d);
        return hash_of(d) != base;
    };
    CHECK(changed([](json& d) { d["network"]["seed"] = 4; }));
    CHECK(changed([](json& d) { d["init"]["phase_seed"] = 9; }));
    CHECK(changed([](json& d) { d["init"]["modulus_seed"] = 9; }));
    CHECK(changed([](json& d) { d["controller"]["alpha"] = 11.0; }));
    CHECK(changed([](json& d) { d["sim"]["dt"] = 0.0005; }));
    CHECK(changed([](json& d) { d["sigma"] = 0.3; }));

    // Spelling out a default does not change the hash.
    json d = small_doc();
    d["sim"]["boundary_layer_delta"] = 0.0;
    d["metrics"] = {{"tail_fraction", 0.25}};
    CHECK(hash_of(d) == base);
}

TEST_CASE("overrides shadow config fields") {
    json d = small_doc();
    apply_overrides(d, {std::uint64_t{77}, 0.002, 0.01});
    const Scenario s = parse_scenario(d);
    CHECK(s.sim.dt == 0.002);
    CHECK(s.sim.boundary_layer_delta == 0.01);
    CHECK(std::get<ErNetworkSpec>(s.network).seed == derive_seed(77, 101));
    CHECK(std::get<AnnulusInit>(s.init).phase_seed != std::get<AnnulusInit>(s.init).modulus_seed);
    CHECK(hash_of(d) != hash_of(small_doc()));
}

TEST_CASE("resolved initial conditions") {
    const ResolvedScenario rs = resolve(parse_scenario(small_doc()));
    CHECK(rs.network.size() == 12);
    for (std::size_t k = 0; k < 12; ++k) {
        CHECK(rs.moduli0[k] >= 0.5);
        CHECK(rs.moduli0[k] < 1.5);
        CHECK(rs.theta0[k] >= -std::numbers::pi);
        CHECK(rs.theta0[k] < std::numbers::pi);
        CHECK(rs.x0.unwrapped_args[k] == rs.theta0[k]);
    }
}

TEST_CASE("file networks resolve relative to the scenario") {
    const fs::path dir = scratch("filenet");
    fs::create_directories(dir);
    std::ofstream(dir / "ring.txt") << "n 4\n0 1\n1 2\n2 3\n0 3\n";
    json d = small_doc();
    d["network"] = {{"type", "file"}, {"path", "ring.txt"}};
    std::ofstream(dir / "s.json") << d.dump();
    const Scenario s = load_scenario(dir / "s.json");
    const ResolvedScenario rs = resolve(s);
    CHECK(rs.network.edge_count() == 4);
    const std::string h = scenario_hash(s);
    std::ofstream(dir / "ring.txt") << "n 4\n0 1\n1 2\n2 3\n";
    CHECK(scenario_hash(s) != h);
    fs::remove_all(dir);
}

TEST_CASE("end-to-end reruns are byte-identical") {
    const Scenario s = parse_scenario(small_doc());
    const fs::path a = scratch("rerun_a"), b = scratch("rerun_b");
    run_scenario(s, a);
    run_scenario(s, b);
    for (const char* f : {"trajectory.csv", "real.csv", "events.csv", "network.txt", "plots/error.csv",
                          "plots/order_parameter.svg"}) {
        CAPTURE(f);
        REQUIRE(fs::exists(a / f));
        CHECK(slurp(a / f) == slurp(b / f));
    }
    const std::string header = slurp(a / "trajectory.csv").substr(0, 40);
    CHECK(header.rfind("t,x_re_0,x_re_1", 0) == 0);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("plot panels") {
    const fs::path with = scratch("plots_with"), without = scratch("plots_without");
    run_scenario(parse_scenario(small_doc()), with);
    std::size_t svg = 0, csv = 0;
    for (const auto& e : fs::directory_iterator(with / "plots")) {
        svg += e.path().extension() == ".svg";
        csv += e.path().extension() == ".csv";
    }
    CHECK(svg == 4);
    CHECK(csv == 4);

    json d = small_doc();
    d["reference"]["real_model"] = false;
    run_scenario(parse_scenario(d), without);
    CHECK_FALSE(fs::exists(without / "plots" / "error.svg"));
    CHECK(fs::exists(without / "plots" / "order_parameter.svg"));
    const std::string r = slurp(without / "plots" / "order_parameter.csv");
    CHECK(r.substr(0, r.find('\n')).find("real") == std::string::npos);
    CHECK(slurp(with / "plots" / "order_parameter.csv").find("real") != std::string::npos);
    fs::remove_all(with);
    fs::remove_all(without);
}

TEST_CASE("unwritable output directory is an I/O error") {
    const fs::path dir = scratch("blocked");
    std::ofstream(dir) << "a file, not a directory";
    CHECK_THROWS_AS(run_scenario(parse_scenario(small_doc()), dir / "out"), IoError);
    fs::remove(dir);
}

TEST_CASE("failed checks raise an acceptance error after writing") {
    json d = small_doc();
    d["checks"] = {{"max_modulus_deviation", 1e-12}};
    const fs::path dir = scratch("failing");
    CHECK_THROWS_AS(run_scenario(parse_scenario(d), dir), AcceptanceError);
    CHECK(fs::exists(dir / "summary.json"));
    const RunSummary s = run_scenario(parse_scenario(d), dir, false);
    CHECK(s.failed_checks.size() == 1);
    fs::remove_all(dir);
}

TEST_CASE("summary fields") {
    const RunResult r = execute(parse_scenario(small_doc()));
    const RunSummary& s = r.summary;
    CHECK(s.controller == "ff_smc");
    CHECK(s.rng == "splitmix64");
    REQUIRE(s.reaching_time);
    REQUIRE(s.reaching_bound);
    CHECK(*s.reaching_time <= *s.reaching_bound);
    CHECK(s.final_e);
    CHECK(s.failed_checks.empty());
    const json j = s.to_json();
    CHECK(j["hash"] == s.hash);
    CHECK(j["epsilon2"].is_null());
}

TEST_CASE("validate reports gain conditions") {
    json d = small_doc();
    d["controller"] = {{"type", "complex_smc"}, {"K", 50.0}, {"omega_bar", 12.566370614359172}};
    CHECK(validate_scenario(parse_scenario(d)).ok);
    d["controller"]["K"] = 5.0;
    const ValidationReport bad = validate_scenario(parse_scenario(d));
    CHECK_FALSE(bad.ok);

    d["controller"] = {{"type", "roberts"}, {"mu", "degree"}};
    d["network"]["p"] = 0.8;
    CHECK(validate_scenario(parse_scenario(d)).ok);

    d["controller"] = {{"type", "hybrid_reset"}, {"window", 0.00025}};
    CHECK_THROWS_AS(validate_scenario(parse_scenario(d)), ConfigError);
}

TEST_CASE("sweep runs the Cartesian product") {
    const fs::path dir = scratch("sweep");
    json sw;
    sw["base"] = small_doc();
    sw["axes"] = {{"controller.alpha", {1.0, 10.0}}, {"sigma", {0.1, 0.2, 0.3}}};
    sw["replicates"] = 2;
    sw["master_seed"] = 5;
    const auto rows = sweep(sw, dir);
    CHECK(rows.size() == 12);
    for (const auto& row : rows) CHECK(row.summary);
    CHECK(rows[0].axis_values[0].second == 1.0);
    CHECK(rows[0].axis_values[1].second == 0.1);
    CHECK(rows[2].axis_values[1].second == 0.2);
    // Replicates of one axis point draw different seeds.
    CHECK(rows[0].summary->hash != rows[1].summary->hash);
    CHECK(fs::exists(dir / "aggregate.csv"));
    CHECK(fs::exists(dir / "run_011" / "summary.json"));
    std::istringstream agg(slurp(dir / "aggregate.csv"));
    std::string line;
    std::size_t lines = 0;
    while (std::getline(agg, line)) ++lines;
    CHECK(lines == 13);
    fs::remove_all(dir);
}

TEST_CASE("sweep errors") {
    const fs::path dir = scratch("sweep_err");
    json sw;
    sw["base"] = small_doc();
    sw["axes"] = {{"controller.alpha", json::array()}};
    CHECK_THROWS_AS(sweep(sw, dir), ConfigError);

    // A bad value fails its own row only.
    sw["axes"] = {{"controller.alpha", {-1.0, 10.0}}};
    const auto rows = sweep(sw, dir);
    REQUIRE(rows.size() == 2);
    CHECK_FALSE(rows[0].summary);
    CHECK_FALSE(rows[0].error.empty());
    CHECK(rows[1].summary);

    json both = sw;
    both["preset"] = "fig1";
    CHECK_THROWS_AS(sweep(both, dir), ConfigError);
    fs::remove_all(dir);
}
