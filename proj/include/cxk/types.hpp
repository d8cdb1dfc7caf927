#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace cxk {

using Complex = std::complex<double>;
using ComplexVec = std::vector<Complex>;
using RealVec = std::vector<double>;

// Magnitudes below this make the argument (and anything divided by |x_k|)
// ill-defined.
inline constexpr double kDegenerateMagnitude = 1e-12;

/// Dense square complex matrix, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t n) : n_(n), data_(n * n) {}

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const Complex> d);

    std::size_t size() const noexcept { return n_; }

    Complex& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * n_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * n_ + c]; }

    std::span<const Complex> row(std::size_t r) const noexcept { return {data_.data() + r * n_, n_}; }
    const std::vector<Complex>& data() const noexcept { return data_; }

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

    ComplexVec apply(std::span<const Complex> v) const;

    double norm1() const noexcept;         // max column sum
    double norm_frobenius() const noexcept;
    bool all_finite() const noexcept;

private:
    std::size_t n_ = 0;
    std::vector<Complex> data_;
};

}  // namespace cxk
