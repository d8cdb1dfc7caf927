#include "cxk/complex_core.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cxk/errors.hpp"

namespace cxk {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> d) {
    ComplexMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    for (auto& v : data_) v *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t n = a.size();
    ComplexMatrix c(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

ComplexVec ComplexMatrix::apply(std::span<const Complex> v) const {
    ComplexVec out(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        Complex acc{};
        const Complex* r = data_.data() + i * n_;
        for (std::size_t j = 0; j < n_; ++j) acc += r[j] * v[j];
        out[i] = acc;
    }
    return out;
}

double ComplexMatrix::norm1() const noexcept {
    double best = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < n_; ++i) col += std::abs((*this)(i, j));
        best = std::max(best, col);
    }
    return best;
}

double ComplexMatrix::norm_frobenius() const noexcept {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
}

bool ComplexMatrix::all_finite() const noexcept {
    for (const auto& v : data_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
    return true;
}

Complex csign(Complex z) noexcept {
    const double m = std::abs(z);
    return m == 0.0 ? Complex{} : z / m;
}

Complex csign(Complex z, double delta) noexcept {
    if (delta <= 0.0) return csign(z);
    return z / (std::abs(z) + delta);
}

double rsign(double v, double delta) noexcept {
    if (delta <= 0.0) return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
    return v / (std::abs(v) + delta);
}

ComplexVec csign(std::span<const Complex> w) {
    ComplexVec out(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) out[k] = csign(w[k]);
    return out;
}

double principal_arg(Complex z) noexcept {
    if (z == Complex{}) return 0.0;
    const double a = std::arg(z);
    // atan2 returns -pi for (-x, -0.0); fold onto the upper-closed branch.
    return a == -std::numbers::pi ? std::numbers::pi : a;
}

ModArg modarg(std::span<const Complex> x) {
    ModArg out{RealVec(x.size()), RealVec(x.size())};
    for (std::size_t k = 0; k < x.size(); ++k) {
        out.moduli[k] = std::abs(x[k]);
        out.args[k] = principal_arg(x[k]);
    }
    return out;
}

ComplexVec coupling_field(std::span<const Complex> x, const Network& net, double sigma) {
    const std::size_t n = net.size();
    ComplexVec c(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto row = net.row(k);
        double re = 0.0;
        double im = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            re += row[j] * x[j].real();
            im += row[j] * x[j].imag();
        }
        c[k] = Complex(sigma * re, sigma * im);
    }
    return c;
}

void require_nondegenerate(std::span<const Complex> x, const char* what) {
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (std::abs(x[k]) < kDegenerateMagnitude) {
            throw DegenerateMagnitudeError(std::string(what) + ": |x_" + std::to_string(k) +
                                           "| below the degenerate-magnitude threshold");
        }
    }
}

// With c = sigma A x and x_k = |x_k| e^{i phi_k}:
//   f_k = Re(e^{-i phi_k} c_k),   g_k - omega_k = Im(e^{-i phi_k} c_k) / |x_k|.
RealVec coupling_f(std::span<const Complex> x, const Network& net, const OscParams& params) {
    require_nondegenerate(x, "coupling_f");
    const ComplexVec c = coupling_field(x, net, params.sigma);
    RealVec f(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) f[k] = (std::conj(csign(x[k])) * c[k]).real();
    return f;
}

RealVec coupling_g(std::span<const Complex> x, const Network& net, const OscParams& params) {
    require_nondegenerate(x, "coupling_g");
    const ComplexVec c = coupling_field(x, net, params.sigma);
    RealVec g(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        g[k] = params.omega[k] + (std::conj(x[k]) * c[k]).imag() / std::norm(x[k]);
    }
    return g;
}

}  // namespace cxk
