#pragma once

#include <span>
#include <vector>

#include "cxk/network.hpp"
#include "cxk/types.hpp"

namespace cxk {

/// Complex signum: z/|z|, and 0 at z = 0.
Complex csign(Complex z) noexcept;
ComplexVec csign(std::span<const Complex> w);

/// Boundary-layer signum z/(|z| + delta). delta = 0 is the exact signum.
Complex csign(Complex z, double delta) noexcept;
double rsign(double v, double delta = 0.0) noexcept;

/// Principal argument in (-pi, pi]; arg(0) = 0.
double principal_arg(Complex z) noexcept;

struct ModArg {
    RealVec moduli;
    RealVec args;
};
ModArg modarg(std::span<const Complex> x);

/// sigma * A x, the coupling term shared by every complex right-hand side.
ComplexVec coupling_field(std::span<const Complex> x, const Network& net, double sigma);

/// Radial coupling drift f_k(x) = sigma sum_j a_kj |x_j| cos(phi_j - phi_k).
/// Throws DegenerateMagnitudeError if some |x_k| < kDegenerateMagnitude.
RealVec coupling_f(std::span<const Complex> x, const Network& net, const OscParams& params);

/// Angular drift g_k(x) = omega_k + sigma sum_j a_kj |x_j|/|x_k| sin(phi_j - phi_k).
RealVec coupling_g(std::span<const Complex> x, const Network& net, const OscParams& params);

/// Throws DegenerateMagnitudeError naming the first offending component.
void require_nondegenerate(std::span<const Complex> x, const char* what);

/// exp(M t) by scaling and squaring with the degree-13 diagonal Pade
/// approximant (Higham 2005). Throws OverflowError on non-finite output.
ComplexMatrix matexp(const ComplexMatrix& m, double t);

struct EigenPair {
    Complex value;
    ComplexVec vector;  // unit 2-norm
};

/// All eigenpairs of a dense matrix: Householder reduction to Hessenberg
/// form, Wilkinson-shifted complex QR to Schur form, then back-substitution
/// for the Schur vectors. Each pair is checked for
/// ||M v - lambda v||_2 <= tol * ||M||_F.
/// Throws ConvergenceError if QR stalls or a residual check fails.
std::vector<EigenPair> eigen_spectrum(const ComplexMatrix& m, double tol = 1e-8);

/// Eigenvalues only (the Schur diagonal), in QR deflation order.
ComplexVec eigenvalues(const ComplexMatrix& m);

}  // namespace cxk
