#include <cstdio>
#include <fstream>
#include <sstream>

#include "cxk/errors.hpp"
#include "cxk/output.hpp"
#include "cxk/scenario.hpp"

namespace cxk {

namespace fs = std::filesystem;

namespace {

void set_path(json& doc, const std::string& dotted, const json& value) {
    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = dotted.find('.', start);
        const std::string key = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) throw ConfigError("sweep axis '" + dotted + "' has an empty path segment");
        if (!node->is_object()) throw ConfigError("sweep axis '" + dotted + "' does not address an object member");
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

std::string cell(const json& v) {
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    for (char& c : s) {
        if (c == ',') c = ';';
    }
    return s;
}

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

void write_aggregate(const fs::path& path, const std::vector<std::string>& axes, const std::vector<SweepRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "index,replicate";
    for (const auto& a : axes) out << ',' << a;
    out << ",status,hash,reaching_time,reaching_bound,tail_mean_r,real_tail_mean_r,steady_e,max_modulus_deviation,"
           "failed_checks,error\n";
    for (const auto& row : rows) {
        out << row.index << ',' << row.replicate;
        for (const auto& [_, v] : row.axis_values) out << ',' << cell(v);
        if (row.summary) {
            const RunSummary& s = *row.summary;
            out << ',' << (s.failed_checks.empty() ? "ok" : "checks_failed") << ',' << s.hash << ','
                << cell(s.reaching_time) << ',' << cell(s.reaching_bound) << ',' << format_double(s.tail_mean_r)
                << ',' << cell(s.real_tail_mean_r) << ',' << cell(s.steady_e) << ','
                << format_double(s.max_modulus_deviation) << ',' << s.failed_checks.size() << ',';
        } else {
            out << ",error,,,,,,,,,";
        }
        out << cell(json(row.error)) << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

std::vector<SweepRow> sweep(const json& sweep_doc, const fs::path& outdir, const fs::path& base_dir) {
    if (!sweep_doc.is_object()) throw ConfigError("sweep: expected a JSON object");
    for (const auto& [key, _] : sweep_doc.items()) {
        if (key != "base" && key != "preset" && key != "axes" && key != "replicates" && key != "master_seed" &&
            key != "outputs") {
            throw ConfigError("sweep: unknown key '" + key + "'");
        }
    }
    json base;
    if (sweep_doc.contains("base") == sweep_doc.contains("preset")) {
        throw ConfigError("sweep: exactly one of 'base' or 'preset' is required");
    }
    if (sweep_doc.contains("base")) {
        base = sweep_doc["base"];
    } else {
        if (!sweep_doc["preset"].is_string()) throw ConfigError("sweep.preset must be a string");
        base = preset_document(sweep_doc["preset"].get<std::string>());
    }
    base["outputs"] = sweep_doc.value("outputs", json::array({"summary"}));

    std::vector<std::string> axis_names;
    std::vector<std::vector<json>> axis_values;
    if (sweep_doc.contains("axes")) {
        const json& axes = sweep_doc["axes"];
        if (!axes.is_object()) throw ConfigError("sweep.axes must be an object of dotted path -> array");
        for (const auto& [key, values] : axes.items()) {
            if (!values.is_array() || values.empty()) {
                throw ConfigError("sweep axis '" + key + "' must be a non-empty array");
            }
            axis_names.push_back(key);
            axis_values.emplace_back(values.begin(), values.end());
        }
    }
    std::size_t replicates = 1;
    if (sweep_doc.contains("replicates")) {
        const json& r = sweep_doc["replicates"];
        if (!r.is_number_integer() || r.get<std::int64_t>() < 1) {
            throw ConfigError("sweep.replicates must be a positive integer");
        }
        replicates = r.get<std::size_t>();
    }
    std::optional<std::uint64_t> master;
    if (sweep_doc.contains("master_seed")) {
        const json& m = sweep_doc["master_seed"];
        if (!m.is_number_unsigned() && !(m.is_number_integer() && m.get<std::int64_t>() >= 0)) {
            throw ConfigError("sweep.master_seed must be a non-negative integer");
        }
        master = sweep_doc["master_seed"].get<std::uint64_t>();
    }

    std::error_code ec;
    fs::create_directories(outdir, ec);
    if (ec || !fs::is_directory(outdir)) throw IoError("cannot create output directory " + outdir.string());

    std::size_t combos = 1;
    for (const auto& v : axis_values) combos *= v.size();

    std::vector<SweepRow> rows;
    std::vector<std::size_t> digit(axis_values.size(), 0);
    for (std::size_t c = 0; c < combos; ++c) {
        // Mixed-radix counter, last axis fastest.
        std::size_t rem = c;
        for (std::size_t a = axis_values.size(); a-- > 0;) {
            digit[a] = rem % axis_values[a].size();
            rem /= axis_values[a].size();
        }
        for (std::size_t r = 0; r < replicates; ++r) {
            SweepRow row{rows.size(), {}, r, std::nullopt, {}};
            json doc = base;
            for (std::size_t a = 0; a < axis_values.size(); ++a) {
                row.axis_values.emplace_back(axis_names[a], axis_values[a][digit[a]]);
            }
            char dir[32];
            std::snprintf(dir, sizeof(dir), "run_%03zu", row.index);
            try {
                for (const auto& [name, value] : row.axis_values) set_path(doc, name, value);
                if (master) apply_overrides(doc, {derive_seed(*master, r), std::nullopt, std::nullopt});
                const Scenario scenario = parse_scenario(doc, base_dir);
                row.summary = run_scenario(scenario, outdir / dir, false);
            } catch (const IoError&) {
                throw;
            } catch (const Error& e) {
                row.error = e.what();
            }
            rows.push_back(std::move(row));
        }
    }
    write_aggregate(outdir / "aggregate.csv", axis_names, rows);
    return rows;
}

std::vector<SweepRow> sweep_file(const fs::path& path, const fs::path& outdir) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    json doc;
    try {
        doc = json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return sweep(doc, outdir, path.parent_path());
}

}  // namespace cxk
