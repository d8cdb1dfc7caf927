#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "cxk/complex_core.hpp"
#include "cxk/errors.hpp"

namespace cxk {

namespace {

// Coefficients of the [13/13] Pade approximant to exp (Higham 2005, Table 2.3
// numerators b_0..b_13) and the matching 1-norm scaling threshold theta_13.
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;

// Solves A X = B in place (B overwritten by X) with partial pivoting.
void lu_solve(ComplexMatrix a, ComplexMatrix& b) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::abs(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::abs(a(r, col));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best == 0.0) throw OverflowError("matexp: singular Pade denominator");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(col, j), a(piv, j));
                std::swap(b(col, j), b(piv, j));
            }
        }
        const Complex inv = 1.0 / a(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const Complex factor = a(r, col) * inv;
            if (factor == Complex{}) continue;
            for (std::size_t j = col; j < n; ++j) a(r, j) -= factor * a(col, j);
            for (std::size_t j = 0; j < n; ++j) b(r, j) -= factor * b(col, j);
        }
    }
    for (std::size_t col = n; col-- > 0;) {
        const Complex inv = 1.0 / a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            Complex acc = b(col, j);
            for (std::size_t k = col + 1; k < n; ++k) acc -= a(col, k) * b(k, j);
            b(col, j) = acc * inv;
        }
    }
}

}  // namespace

ComplexMatrix matexp(const ComplexMatrix& m, double t) {
    const std::size_t n = m.size();
    if (!m.all_finite() || !std::isfinite(t)) throw OverflowError("matexp: non-finite input");
    ComplexMatrix a = m * Complex(t);
    const double norm = a.norm1();

    int squarings = 0;
    if (norm > kTheta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
        a *= Complex(std::ldexp(1.0, -squarings));
    }

    const auto& b = kPade13;
    const ComplexMatrix ident = ComplexMatrix::identity(n);
    const ComplexMatrix a2 = a * a;
    const ComplexMatrix a4 = a2 * a2;
    const ComplexMatrix a6 = a4 * a2;

    const ComplexMatrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 +
                                  b[1] * ident;
    const ComplexMatrix u = a * u_inner;
    const ComplexMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 +
                            b[0] * ident;

    ComplexMatrix result = v + u;
    lu_solve(v - u, result);
    for (int s = 0; s < squarings; ++s) {
        result = result * result;
        if (!result.all_finite()) {
            throw OverflowError("matexp: non-finite value after squaring " + std::to_string(s + 1));
        }
    }
    if (!result.all_finite()) throw OverflowError("matexp: non-finite result");
    return result;
}

}  // namespace cxk
