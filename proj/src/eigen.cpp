#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cxk/complex_core.hpp"
#include "cxk/errors.hpp"

namespace cxk {

namespace {

struct Schur {
    ComplexMatrix t;  // upper triangular
    ComplexMatrix q;  // unitary, M = Q T Q^H
};

// Householder reduction to upper Hessenberg form, accumulating Q.
void hessenberg(ComplexMatrix& h, ComplexMatrix& q) {
    const std::size_t n = h.size();
    ComplexVec v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double xnorm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) xnorm += std::norm(h(i, k));
        xnorm = std::sqrt(xnorm);
        if (xnorm == 0.0) continue;
        const Complex x0 = h(k + 1, k);
        const Complex phase = x0 == Complex{} ? Complex(1.0) : x0 / std::abs(x0);
        const Complex alpha = -phase * xnorm;

        std::fill(v.begin(), v.end(), Complex{});
        for (std::size_t i = k + 1; i < n; ++i) v[i] = h(i, k);
        v[k + 1] -= alpha;
        double vnorm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vnorm += std::norm(v[i]);
        vnorm = std::sqrt(vnorm);
        if (vnorm == 0.0) continue;
        for (std::size_t i = k + 1; i < n; ++i) v[i] /= vnorm;

        // H <- P H P with P = I - 2 v v^H.
        for (std::size_t j = 0; j < n; ++j) {
            Complex dot{};
            for (std::size_t i = k + 1; i < n; ++i) dot += std::conj(v[i]) * h(i, j);
            for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= 2.0 * v[i] * dot;
        }
        for (std::size_t i = 0; i < n; ++i) {
            Complex dot{};
            for (std::size_t j = k + 1; j < n; ++j) dot += h(i, j) * v[j];
            for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= 2.0 * dot * std::conj(v[j]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            Complex dot{};
            for (std::size_t j = k + 1; j < n; ++j) dot += q(i, j) * v[j];
            for (std::size_t j = k + 1; j < n; ++j) q(i, j) -= 2.0 * dot * std::conj(v[j]);
        }
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = Complex{};
    }
}

Complex wilkinson_shift(const ComplexMatrix& h, std::size_t hi) {
    const Complex a = h(hi - 1, hi - 1);
    const Complex b = h(hi - 1, hi);
    const Complex c = h(hi, hi - 1);
    const Complex d = h(hi, hi);
    const Complex half_tr = 0.5 * (a + d);
    const Complex disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
    const Complex l1 = half_tr + disc;
    const Complex l2 = half_tr - disc;
    return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}

// Single-shift complex QR iteration on the Hessenberg matrix, applied to the
// whole matrix so the result is a full Schur form.
void schur_qr(ComplexMatrix& h, ComplexMatrix& q) {
    const std::size_t n = h.size();
    if (n < 2) return;
    const double eps = std::numeric_limits<double>::epsilon();
    const double scale = std::max(h.norm_frobenius(), std::numeric_limits<double>::min());
    const std::size_t max_iter = 100 * n;

    std::vector<Complex> cs(n);
    std::vector<Complex> sn(n);

    std::size_t hi = n - 1;
    std::size_t iter = 0;
    std::size_t total = 0;
    while (hi > 0) {
        std::size_t lo = hi;
        while (lo > 0) {
            const double sub = std::abs(h(lo, lo - 1));
            const double diag = std::abs(h(lo, lo)) + std::abs(h(lo - 1, lo - 1));
            if (sub <= eps * (diag > 0.0 ? diag : scale)) {
                h(lo, lo - 1) = Complex{};
                break;
            }
            --lo;
        }
        if (lo == hi) {
            --hi;
            iter = 0;
            continue;
        }
        if (++total > max_iter) throw ConvergenceError("eigen_spectrum: QR iteration did not converge");
        ++iter;

        Complex mu = wilkinson_shift(h, hi);
        if (iter % 11 == 0) {
            // Exceptional shift to break rare cycles.
            mu = h(hi, hi) + Complex(std::abs(h(hi, hi - 1)), 0.0) * 0.75;
        }

        for (std::size_t i = lo; i <= hi; ++i) h(i, i) -= mu;
        for (std::size_t k = lo; k < hi; ++k) {
            const Complex a = h(k, k);
            const Complex b = h(k + 1, k);
            const double r = std::hypot(std::abs(a), std::abs(b));
            const Complex c = r == 0.0 ? Complex(1.0) : a / r;
            const Complex s = r == 0.0 ? Complex{} : b / r;
            cs[k] = c;
            sn[k] = s;
            // Rows k, k+1 <- G rows, G = [[conj c, conj s], [-s, c]].
            for (std::size_t j = k; j < n; ++j) {
                const Complex x = h(k, j);
                const Complex y = h(k + 1, j);
                h(k, j) = std::conj(c) * x + std::conj(s) * y;
                h(k + 1, j) = -s * x + c * y;
            }
        }
        for (std::size_t k = lo; k < hi; ++k) {
            const Complex c = cs[k];
            const Complex s = sn[k];
            // Columns k, k+1 <- columns G^H.
            const std::size_t rows = std::min(k + 2, hi + 1);
            for (std::size_t i = 0; i < rows; ++i) {
                const Complex x = h(i, k);
                const Complex y = h(i, k + 1);
                h(i, k) = c * x + s * y;
                h(i, k + 1) = -std::conj(s) * x + std::conj(c) * y;
            }
            for (std::size_t i = 0; i < n; ++i) {
                const Complex x = q(i, k);
                const Complex y = q(i, k + 1);
                q(i, k) = c * x + s * y;
                q(i, k + 1) = -std::conj(s) * x + std::conj(c) * y;
            }
        }
        for (std::size_t i = lo; i <= hi; ++i) h(i, i) += mu;
    }
}

Schur schur(const ComplexMatrix& m) {
    Schur out{m, ComplexMatrix::identity(m.size())};
    hessenberg(out.t, out.q);
    schur_qr(out.t, out.q);
    return out;
}

}  // namespace

ComplexVec eigenvalues(const ComplexMatrix& m) {
    if (!m.all_finite()) throw ConvergenceError("eigen_spectrum: non-finite matrix");
    const Schur s = schur(m);
    ComplexVec out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) out[i] = s.t(i, i);
    return out;
}

std::vector<EigenPair> eigen_spectrum(const ComplexMatrix& m, double tol) {
    const std::size_t n = m.size();
    if (!m.all_finite()) throw ConvergenceError("eigen_spectrum: non-finite matrix");
    const Schur s = schur(m);
    const double mnorm = m.norm_frobenius();
    const double tiny = std::max(mnorm, 1.0) * std::numeric_limits<double>::epsilon();

    std::vector<EigenPair> pairs;
    pairs.reserve(n);
    ComplexVec y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Complex lambda = s.t(i, i);
        // Solve (T - lambda I) y = 0 with y_i = 1 and y_j = 0 for j > i.
        std::fill(y.begin(), y.end(), Complex{});
        y[i] = 1.0;
        for (std::size_t j = i; j-- > 0;) {
            Complex acc{};
            for (std::size_t l = j + 1; l <= i; ++l) acc += s.t(j, l) * y[l];
            Complex denom = s.t(j, j) - lambda;
            if (std::abs(denom) < tiny) denom = tiny;
            y[j] = -acc / denom;
        }
        ComplexVec v = s.q.apply(y);
        double vnorm = 0.0;
        for (const auto& e : v) vnorm += std::norm(e);
        vnorm = std::sqrt(vnorm);
        for (auto& e : v) e /= vnorm;

        const ComplexVec mv = m.apply(v);
        double res = 0.0;
        for (std::size_t k = 0; k < n; ++k) res += std::norm(mv[k] - lambda * v[k]);
        res = std::sqrt(res);
        if (res > tol * std::max(mnorm, 1.0)) {
            throw ConvergenceError("eigen_spectrum: residual " + std::to_string(res) + " exceeds tolerance for pair " +
                                   std::to_string(i));
        }
        pairs.push_back({lambda, std::move(v)});
    }
    return pairs;
}

}  // namespace cxk
