#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"

#include "cxk/complex_core.hpp"
#include "cxk/errors.hpp"
#include "cxk/rng.hpp"

using namespace cxk;

namespace {

constexpr double kPi = std::numbers::pi;

ComplexVec random_state(std::size_t n, std::uint64_t seed, double rmin = 0.1, double rmax = 2.0) {
    SplitMix64 g(seed);
    ComplexVec x(n);
    for (auto& v : x) v = std::polar(g.uniform(rmin, rmax), g.uniform(-kPi, kPi));
    return x;
}

ComplexMatrix random_matrix(std::size_t n, std::uint64_t seed, double scale) {
    SplitMix64 g(seed);
    ComplexMatrix m(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) m(r, c) = scale * Complex(g.normal(), g.normal());
    }
    return m;
}

Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
    Eigen::MatrixXcd e(m.size(), m.size());
    for (std::size_t r = 0; r < m.size(); ++r) {
        for (std::size_t c = 0; c < m.size(); ++c) e(r, c) = m(r, c);
    }
    return e;
}

double max_diff(const ComplexMatrix& a, const Eigen::MatrixXcd& b) {
    double d = 0.0;
    for (std::size_t r = 0; r < a.size(); ++r) {
        for (std::size_t c = 0; c < a.size(); ++c) d = std::max(d, std::abs(a(r, c) - b(r, c)));
    }
    return d;
}

double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return max_diff(a, to_eigen(b)); }

}  // namespace

TEST_CASE("complex signum") {
    CHECK(csign(Complex(0.0, 0.0)) == Complex(0.0, 0.0));
    CHECK(std::abs(csign(Complex(3.0, 4.0)) - Complex(0.6, 0.8)) < 1e-15);
    CHECK(csign(Complex(-2.0, 0.0)) == Complex(-1.0, 0.0));
    // Boundary layer: z / (|z| + delta), continuous through zero.
    CHECK(std::abs(csign(Complex(0.0, 1e-3), 1e-3) - Complex(0.0, 0.5)) < 1e-15);
    CHECK(csign(Complex(0.0, 0.0), 0.1) == Complex(0.0, 0.0));
    CHECK(rsign(-2.0) == -1.0);
    CHECK(rsign(0.0) == 0.0);
    CHECK(rsign(0.5, 0.5) == doctest::Approx(0.5));
}

TEST_CASE("signum reconstruction |w| csign(w) = w") {
    const ComplexVec w = random_state(10000, 17, 1e-8, 1e8);
    const ComplexVec s = csign(w);
    for (std::size_t k = 0; k < w.size(); ++k) {
        REQUIRE(std::abs(s[k]) == doctest::Approx(1.0).epsilon(1e-15));
        REQUIRE(std::abs(std::abs(w[k]) * s[k] - w[k]) <= 1e-12 * std::abs(w[k]));
    }
}

TEST_CASE("principal argument range and modarg") {
    CHECK(principal_arg(Complex(-1.0, 0.0)) == doctest::Approx(kPi));
    CHECK(principal_arg(Complex(-1.0, -0.0)) == doctest::Approx(kPi));
    CHECK(principal_arg(Complex(0.0, 0.0)) == 0.0);
    const ComplexVec x = random_state(500, 3);
    const ModArg ma = modarg(x);
    for (std::size_t k = 0; k < x.size(); ++k) {
        CHECK(ma.args[k] > -kPi);
        CHECK(ma.args[k] <= kPi);
        CHECK(std::abs(std::polar(ma.moduli[k], ma.args[k]) - x[k]) < 1e-14);
    }
}

TEST_CASE("coupling drifts match the literal polar sums") {
    const std::size_t n = 40;
    const Network net = erdos_renyi(n, 0.3, 5);
    SplitMix64 g(8);
    OscParams params{RealVec(n), 0.37};
    for (auto& w : params.omega) w = g.uniform(-3.0, 3.0);
    const ComplexVec x = random_state(n, 21);

    const RealVec f = coupling_f(x, net, params);
    const RealVec gg = coupling_g(x, net, params);
    for (std::size_t k = 0; k < n; ++k) {
        double fk = 0.0, gk = 0.0;
        const double rk = std::abs(x[k]), pk = std::arg(x[k]);
        for (std::size_t j = 0; j < n; ++j) {
            const double rj = std::abs(x[j]), pj = std::arg(x[j]);
            fk += net.a(k, j) * rj * std::cos(pj - pk);
            gk += net.a(k, j) * rj / rk * std::sin(pj - pk);
        }
        CHECK(f[k] == doctest::Approx(params.sigma * fk).epsilon(1e-12).scale(1.0));
        CHECK(gg[k] == doctest::Approx(params.omega[k] + params.sigma * gk).epsilon(1e-12).scale(1.0));
    }

    const ComplexVec c = coupling_field(x, net, params.sigma);
    for (std::size_t k = 0; k < n; ++k) {
        Complex ck = 0.0;
        for (std::size_t j = 0; j < n; ++j) ck += params.sigma * net.a(k, j) * x[j];
        CHECK(std::abs(c[k] - ck) < 1e-12);
    }
}

TEST_CASE("coupling drifts reject degenerate magnitudes") {
    const Network net = Network::complete(3);
    const OscParams params{{1.0, 1.0, 1.0}, 0.1};
    const ComplexVec x{1.0, 0.0, Complex(0.0, 1.0)};
    CHECK_THROWS_AS(coupling_f(x, net, params), DegenerateMagnitudeError);
    CHECK_THROWS_AS(coupling_g(x, net, params), DegenerateMagnitudeError);
    CHECK_THROWS_AS(require_nondegenerate(x, "test"), SimulationError);
}

TEST_CASE("matexp agrees with an independent implementation") {
    for (double scale : {0.01, 0.3, 2.0, 25.0}) {
        const ComplexMatrix m = random_matrix(12, 40 + static_cast<std::uint64_t>(scale * 100), scale);
        const Eigen::MatrixXcd ref = to_eigen(m).exp();
        const double rel = max_diff(matexp(m, 1.0), ref) / std::max(1.0, ref.cwiseAbs().maxCoeff());
        CAPTURE(scale);
        CHECK(rel < 1e-10);
    }
}

TEST_CASE("matexp of a diagonal matrix is the elementwise exponential") {
    const ComplexVec d{Complex(0.0, 2.0 * kPi), Complex(-1.0, 0.5), Complex(0.3, -4.0), Complex(-20.0, 0.0)};
    const ComplexMatrix e = matexp(ComplexMatrix::diagonal(d), 0.7);
    for (std::size_t r = 0; r < d.size(); ++r) {
        for (std::size_t c = 0; c < d.size(); ++c) {
            const Complex want = r == c ? std::exp(d[r] * 0.7) : Complex(0.0);
            CHECK(std::abs(e(r, c) - want) <= 1e-8 * std::max(1.0, std::abs(want)));
        }
    }
}

TEST_CASE("matexp semigroup and identity properties") {
    const ComplexMatrix m = random_matrix(10, 77, 0.8);
    const ComplexMatrix a = matexp(m, 0.3);
    const ComplexMatrix b = matexp(m, 0.5);
    const ComplexMatrix ab = matexp(m, 0.8);
    CHECK(max_diff(a * b, ab) < 1e-8 * std::max(1.0, ab.norm1()));
    CHECK(max_diff(matexp(m, 0.0), ComplexMatrix::identity(10)) < 1e-15);
    CHECK(max_diff(matexp(m, 0.4) * matexp(m, -0.4), ComplexMatrix::identity(10)) < 1e-8);
}

TEST_CASE("matexp of a 1x1 rotation matches the power series") {
    ComplexMatrix m(1);
    m(0, 0) = Complex(0.0, 1.0);
    Complex series = 0.0, term = 1.0;
    for (int k = 1; k < 30; ++k) {
        series += term;
        term *= Complex(0.0, 0.1) / static_cast<double>(k);
    }
    CHECK(std::abs(matexp(m, 0.1)(0, 0) - series) < 1e-15);
}

TEST_CASE("matexp overflow is reported") {
    ComplexMatrix m(2);
    m(0, 0) = 1e4;
    m(1, 1) = 1.0;
    CHECK_THROWS_AS(matexp(m, 1.0), OverflowError);
}

TEST_CASE("eigen_spectrum residuals and agreement with an independent solver") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const ComplexMatrix m = random_matrix(25, seed, 1.0);
        const auto pairs = eigen_spectrum(m);
        REQUIRE(pairs.size() == 25);
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(to_eigen(m), false);
        std::vector<Complex> ours, ref;
        for (const auto& p : pairs) {
            ours.push_back(p.value);
            const ComplexVec mv = m.apply(p.vector);
            double res = 0.0, norm = 0.0;
            for (std::size_t k = 0; k < mv.size(); ++k) {
                res += std::norm(mv[k] - p.value * p.vector[k]);
                norm += std::norm(p.vector[k]);
            }
            CHECK(std::sqrt(norm) == doctest::Approx(1.0));
            CHECK(std::sqrt(res) < 1e-9 * m.norm_frobenius());
        }
        for (int k = 0; k < solver.eigenvalues().size(); ++k) ref.push_back(solver.eigenvalues()(k));
        // Match each reference eigenvalue to the nearest unused one of ours.
        std::vector<bool> used(ours.size(), false);
        for (const Complex& r : ref) {
            std::size_t best = 0;
            double dist = INFINITY;
            for (std::size_t k = 0; k < ours.size(); ++k) {
                if (!used[k] && std::abs(ours[k] - r) < dist) {
                    dist = std::abs(ours[k] - r);
                    best = k;
                }
            }
            used[best] = true;
            CHECK(dist < 1e-9);
        }
    }
}

TEST_CASE("eigenvalues of a Hermitian matrix are real") {
    ComplexMatrix h = random_matrix(15, 9, 1.0);
    ComplexMatrix hh(15);
    for (std::size_t r = 0; r < 15; ++r) {
        for (std::size_t c = 0; c < 15; ++c) hh(r, c) = h(r, c) + std::conj(h(c, r));
    }
    for (const Complex& v : eigenvalues(hh)) CHECK(std::abs(v.imag()) < 1e-10);
}
