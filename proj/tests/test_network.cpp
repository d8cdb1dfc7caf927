#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "doctest.h"

#include "cxk/errors.hpp"
#include "cxk/network.hpp"
#include "cxk/rng.hpp"

using namespace cxk;

namespace {

// Exact Binomial(m, p) CDF via log-gamma.
double binomial_cdf(long m, double p, long k) {
    double acc = 0.0;
    for (long i = 0; i <= k; ++i) {
        const double logpmf = std::lgamma(m + 1.0) - std::lgamma(i + 1.0) - std::lgamma(m - i + 1.0) +
                              i * std::log(p) + (m - i) * std::log1p(-p);
        acc += std::exp(logpmf);
    }
    return acc;
}

long binomial_quantile(long m, double p, double q) {
    long k = 0;
    while (binomial_cdf(m, p, k) < q) ++k;
    return k;
}

}  // namespace

TEST_CASE("splitmix64 reference stream") {
    // First outputs for seed 0 of the published SplitMix64 generator.
    SplitMix64 g(0);
    CHECK(g.next() == 0xE220A8397B1DCDAFULL);
    CHECK(g.next() == 0x6E789E6AA1B965F4ULL);
    CHECK(g.next() == 0x06C45D188009454FULL);
}

TEST_CASE("derived streams are distinct and stable") {
    CHECK(derive_seed(42, 1) == derive_seed(42, 1));
    CHECK(derive_seed(42, 1) != derive_seed(42, 2));
    CHECK(derive_seed(42, 1) != derive_seed(43, 1));
    SplitMix64 g(derive_seed(5, streams::kPhases));
    for (int i = 0; i < 1000; ++i) {
        const double u = g.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("normal variates have the requested moments") {
    SplitMix64 g(99);
    const int n = 200000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = g.normal();
        sum += z;
        sq += z * z;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(std::abs(mean) < 5.0 / std::sqrt(n));
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("network construction validates the adjacency") {
    CHECK_THROWS_AS(Network(0, RealVec{}), ValidationError);
    CHECK_THROWS_AS(Network(2, RealVec{0, 1, 0, 0}), ValidationError);  // asymmetric
    CHECK_THROWS_AS(Network(2, RealVec{1, 0, 0, 0}), ValidationError);  // self-loop
    CHECK_THROWS_AS(Network(2, RealVec{0, 0.5, 0.5, 0}), ValidationError);  // weighted
    CHECK_THROWS_AS(Network(2, RealVec{0, 1, 1}), ValidationError);

    const std::pair<std::size_t, std::size_t> dup[] = {{0, 1}, {1, 0}};
    CHECK_THROWS_AS(Network::from_edges(3, dup), ValidationError);
    const std::pair<std::size_t, std::size_t> loop[] = {{1, 1}};
    CHECK_THROWS_AS(Network::from_edges(3, loop), ValidationError);
    const std::pair<std::size_t, std::size_t> far[] = {{0, 3}};
    CHECK_THROWS_AS(Network::from_edges(3, far), ValidationError);
}

TEST_CASE("degrees, edges and connectivity") {
    const std::pair<std::size_t, std::size_t> path[] = {{0, 1}, {1, 2}, {3, 4}};
    const Network net = Network::from_edges(5, path);
    CHECK(net.edge_count() == 3);
    CHECK(net.degrees() == std::vector<std::size_t>({1, 2, 1, 1, 1}));
    CHECK(net.component_count() == 2);
    CHECK_FALSE(net.is_connected());
    const std::vector<std::pair<std::size_t, std::size_t>> want{{0, 1}, {1, 2}, {3, 4}};
    CHECK(net.edges() == want);

    const Network k5 = Network::complete(5);
    CHECK(k5.edge_count() == 10);
    CHECK(k5.is_connected());
    for (auto d : k5.degrees()) CHECK(d == 4);
    CHECK(Network::empty(3).component_count() == 3);
}

TEST_CASE("erdos_renyi extremes and determinism") {
    CHECK(erdos_renyi(10, 0.0, 1).edge_count() == 0);
    CHECK(erdos_renyi(10, 1.0, 1) == Network::complete(10));
    CHECK(erdos_renyi(50, 0.3, 7) == erdos_renyi(50, 0.3, 7));
    CHECK_FALSE(erdos_renyi(50, 0.3, 7) == erdos_renyi(50, 0.3, 8));
    CHECK_THROWS_AS(erdos_renyi(10, 1.5, 1), ValidationError);
    CHECK_THROWS_AS(erdos_renyi(0, 0.5, 1), ValidationError);
}

TEST_CASE("erdos_renyi edge counts follow Binomial(n(n-1)/2, p)") {
    const long pairs = 100 * 99 / 2;
    const long lo = binomial_quantile(pairs, 0.2, 1e-4);
    const long hi = binomial_quantile(pairs, 0.2, 1.0 - 1e-4);
    double mean = 0.0;
    const int seeds = 200;
    for (int s = 0; s < seeds; ++s) {
        const long e = static_cast<long>(erdos_renyi(100, 0.2, 1000 + s).edge_count());
        CHECK(e >= lo);
        CHECK(e <= hi);
        mean += static_cast<double>(e) / seeds;
    }
    // Mean of 200 draws: standard error sqrt(pairs p (1-p) / 200) ~ 2.0.
    CHECK(std::abs(mean - pairs * 0.2) < 8.0);
}

TEST_CASE("adjacency text format round trip") {
    const Network net = erdos_renyi(30, 0.2, 3);
    const auto path = std::filesystem::temp_directory_path() / "cxk_test_adj.txt";
    save_adjacency(net, path);
    CHECK(load_adjacency(path) == net);
    std::filesystem::remove(path);

    const Network parsed = parse_adjacency("# triangle\nn 3\n0 1\n1 2 # trailing\n0 2\n");
    CHECK(parsed == Network::complete(3));
}

TEST_CASE("adjacency parse errors") {
    CHECK_THROWS_AS(parse_adjacency("0 1\n"), ParseError);
    CHECK_THROWS_AS(parse_adjacency("n 3\n0 x\n"), ParseError);
    CHECK_THROWS_AS(parse_adjacency("n 3\n0 1 2\n"), ParseError);
    CHECK_THROWS_AS(parse_adjacency("n 3\n1 1\n"), ValidationError);
    CHECK_THROWS_AS(parse_adjacency("n 3\n2 1\n"), ValidationError);
    CHECK_THROWS_AS(parse_adjacency("n 3\n0 3\n"), ValidationError);
    CHECK_THROWS_AS(load_adjacency("/nonexistent/adj.txt"), ConfigError);
}

TEST_CASE("frequency sampling") {
    const RealVec c = sample_frequencies(4, ConstantDist{2.0 * std::numbers::pi}, 0);
    for (double w : c) CHECK(w == 2.0 * std::numbers::pi);

    const RealVec a = sample_frequencies(5000, NormalDist{1.0, 0.5}, 11);
    CHECK(a == sample_frequencies(5000, NormalDist{1.0, 0.5}, 11));
    double mean = 0.0;
    for (double w : a) mean += w / a.size();
    CHECK(mean == doctest::Approx(1.0).epsilon(0.05));
    CHECK_THROWS_AS(sample_frequencies(3, NormalDist{0.0, -1.0}, 1), ValidationError);
}

TEST_CASE("oscillator parameter validation") {
    const OscParams ok{{1.0, 2.0}, 0.1};
    const OscParams short_omega{{1.0}, 0.1};
    const OscParams zero_sigma{{1.0, 2.0}, 0.0};
    const OscParams nan_omega{{1.0, NAN}, 0.1};
    CHECK_NOTHROW(ok.validate(2));
    CHECK_THROWS_AS(short_omega.validate(2), ValidationError);
    CHECK_THROWS_AS(zero_sigma.validate(2), ValidationError);
    CHECK_THROWS_AS(nan_omega.validate(2), ValidationError);
}
