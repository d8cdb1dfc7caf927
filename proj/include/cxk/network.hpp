#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "cxk/types.hpp"

namespace cxk {

/// Undirected simple graph on `n` nodes. The adjacency is kept dense (0.0 /
/// 1.0 doubles) because the coupling products are dense matrix-vector
/// products. Construction validates symmetry and the zero diagonal; an
/// existing Network is immutable.
class Network {
public:
    /// Validates and adopts a row-major n*n 0/1 adjacency matrix.
    /// Throws ValidationError on asymmetry, self-loops or entries other than 0/1.
    Network(std::size_t n, std::vector<double> adjacency);

    static Network from_edges(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges);
    static Network complete(std::size_t n);
    static Network empty(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    double a(std::size_t k, std::size_t j) const noexcept { return adjacency_[k * n_ + j]; }
    const std::vector<double>& adjacency() const noexcept { return adjacency_; }
    std::span<const double> row(std::size_t k) const noexcept { return {adjacency_.data() + k * n_, n_}; }
    const std::vector<std::size_t>& degrees() const noexcept { return degrees_; }
    std::size_t edge_count() const noexcept;
    std::vector<std::pair<std::size_t, std::size_t>> edges() const;

    bool is_connected() const;
    std::size_t component_count() const;

    bool operator==(const Network&) const = default;

private:
    std::size_t n_;
    std::vector<double> adjacency_;
    std::vector<std::size_t> degrees_;
};

/// Natural frequencies (rad/s) and coupling strength.
struct OscParams {
    RealVec omega;
    double sigma;

    /// Throws ValidationError unless sigma > 0, omega is finite and has n entries.
    void validate(std::size_t n) const;
};

/// Each pair {k, j}, k < j, in row-major order is an edge with probability
/// p, drawn from a fresh SplitMix64 stream derived from `seed`.
Network erdos_renyi(std::size_t n, double p, std::uint64_t seed);

/// Reads the plain-text edge-list format:
///
///     # comment
///     n 4
///     0 1
///     1 3
///
/// Indices are 0-based with k < j. Throws ParseError for malformed content
/// and ValidationError for self-loops, out-of-range or duplicate edges.
Network load_adjacency(const std::filesystem::path& path);
Network parse_adjacency(std::string_view text);

void save_adjacency(const Network& net, const std::filesystem::path& path);

struct ConstantDist {
    double value;
};
struct NormalDist {
    double mean;
    double std;
};
using FrequencyDist = std::variant<ConstantDist, NormalDist>;

RealVec sample_frequencies(std::size_t n, const FrequencyDist& dist, std::uint64_t seed);

}  // namespace cxk
