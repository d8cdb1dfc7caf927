#include "cxk/network.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>

#include "cxk/errors.hpp"
#include "cxk/rng.hpp"

namespace cxk {

Network::Network(std::size_t n, std::vector<double> adjacency)
    : n_(n), adjacency_(std::move(adjacency)), degrees_(n, 0) {
    if (n_ == 0) throw ValidationError("network: node count must be positive");
    if (adjacency_.size() != n_ * n_) throw ValidationError("network: adjacency must be n*n");
    for (std::size_t k = 0; k < n_; ++k) {
        if (adjacency_[k * n_ + k] != 0.0) {
            throw ValidationError("network: self-loop at node " + std::to_string(k));
        }
        for (std::size_t j = 0; j < n_; ++j) {
            const double akj = adjacency_[k * n_ + j];
            if (akj != 0.0 && akj != 1.0) throw ValidationError("network: adjacency entries must be 0 or 1");
            if (akj != adjacency_[j * n_ + k]) {
                throw ValidationError("network: asymmetric adjacency at (" + std::to_string(k) + ", " +
                                      std::to_string(j) + ")");
            }
            if (akj != 0.0) ++degrees_[k];
        }
    }
}

Network Network::from_edges(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges) {
    if (n == 0) throw ValidationError("network: node count must be positive");
    std::vector<double> adj(n * n, 0.0);
    for (const auto& [k, j] : edges) {
        if (k >= n || j >= n) throw ValidationError("network: edge index out of range");
        if (k == j) throw ValidationError("network: self-loop at node " + std::to_string(k));
        if (adj[k * n + j] != 0.0) {
            throw ValidationError("network: duplicate edge " + std::to_string(k) + " " + std::to_string(j));
        }
        adj[k * n + j] = 1.0;
        adj[j * n + k] = 1.0;
    }
    return Network(n, std::move(adj));
}

Network Network::complete(std::size_t n) {
    std::vector<double> adj(n * n, 1.0);
    for (std::size_t k = 0; k < n; ++k) adj[k * n + k] = 0.0;
    return Network(n, std::move(adj));
}

Network Network::empty(std::size_t n) { return Network(n, std::vector<double>(n * n, 0.0)); }

std::size_t Network::edge_count() const noexcept {
    return std::accumulate(degrees_.begin(), degrees_.end(), std::size_t{0}) / 2;
}

std::vector<std::pair<std::size_t, std::size_t>> Network::edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(edge_count());
    for (std::size_t k = 0; k < n_; ++k) {
        for (std::size_t j = k + 1; j < n_; ++j) {
            if (a(k, j) != 0.0) out.emplace_back(k, j);
        }
    }
    return out;
}

std::size_t Network::component_count() const {
    std::vector<bool> seen(n_, false);
    std::vector<std::size_t> stack;
    std::size_t components = 0;
    for (std::size_t start = 0; start < n_; ++start) {
        if (seen[start]) continue;
        ++components;
        seen[start] = true;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::size_t k = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < n_; ++j) {
                if (a(k, j) != 0.0 && !seen[j]) {
                    seen[j] = true;
                    stack.push_back(j);
                }
            }
        }
    }
    return components;
}

bool Network::is_connected() const { return component_count() == 1; }

void OscParams::validate(std::size_t n) const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("sigma must be positive and finite");
    if (omega.size() != n) {
        throw ValidationError("omega has " + std::to_string(omega.size()) + " entries, expected " + std::to_string(n));
    }
    for (double w : omega) {
        if (!std::isfinite(w)) throw ValidationError("omega must be finite");
    }
}

Network erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
    if (n == 0) throw ValidationError("erdos_renyi: n must be >= 1");
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("erdos_renyi: p must lie in [0, 1]");
    SplitMix64 gen(derive_seed(seed, streams::kNetwork));
    std::vector<double> adj(n * n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = k + 1; j < n; ++j) {
            if (gen.uniform() < p) {
                adj[k * n + j] = 1.0;
                adj[j * n + k] = 1.0;
            }
        }
    }
    return Network(n, std::move(adj));
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool parse_index(std::string_view token, std::size_t& out) {
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, out);
    return ec == std::errc() && ptr == end;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace

Network parse_adjacency(std::string_view text) {
    std::optional<std::size_t> n;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        const std::string_view raw = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        const std::string_view line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        const auto tokens = split_ws(line);
        const auto where = " (line " + std::to_string(line_no) + ")";
        if (!n) {
            std::size_t count = 0;
            if (tokens.size() != 2 || tokens[0] != "n" || !parse_index(tokens[1], count) || count == 0) {
                throw ParseError("adjacency: expected header 'n <count>'" + where);
            }
            n = count;
            continue;
        }
        std::size_t k = 0;
        std::size_t j = 0;
        if (tokens.size() != 2 || !parse_index(tokens[0], k) || !parse_index(tokens[1], j)) {
            throw ParseError("adjacency: expected 'k j'" + where);
        }
        if (k == j) throw ValidationError("adjacency: self-loop " + std::to_string(k) + where);
        if (k > j) throw ValidationError("adjacency: edges must be written with k < j" + where);
        if (j >= *n) throw ValidationError("adjacency: node index out of range" + where);
        edges.emplace_back(k, j);
    }
    if (!n) throw ParseError("adjacency: missing header 'n <count>'");
    return Network::from_edges(*n, edges);
}

Network load_adjacency(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("adjacency: cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_adjacency(buf.str());
}

void save_adjacency(const Network& net, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "n " << net.size() << '\n';
    for (const auto& [k, j] : net.edges()) out << k << ' ' << j << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

RealVec sample_frequencies(std::size_t n, const FrequencyDist& dist, std::uint64_t seed) {
    RealVec out(n);
    if (const auto* c = std::get_if<ConstantDist>(&dist)) {
        std::fill(out.begin(), out.end(), c->value);
        return out;
    }
    const auto& normal = std::get<NormalDist>(dist);
    if (!(normal.std >= 0.0)) throw ValidationError("sample_frequencies: std must be >= 0");
    SplitMix64 gen(derive_seed(seed, streams::kFrequencies));
    for (auto& w : out) w = normal.mean + normal.std * gen.normal();
    return out;
}

}  // namespace cxk
