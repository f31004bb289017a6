#pragma once

#include <complex>

namespace qecbath {

// Special functions needed by the bath formulas. Targets: absolute error
// <= 1e-10 for |argument| <= 1e3; Lambert W residual |w e^w - z| <= 1e-12 |z|.

// psi(z), complex arguments away from the poles at 0, -1, -2, ...
// (recurrence shift to |z| >= 16, then the asymptotic Bernoulli series).
std::complex<double> digamma(std::complex<double> z);

// psi'(z), same domain and method.
std::complex<double> trigamma(std::complex<double> z);

// Hurwitz zeta(s, z) for real s != 1 and Re z > 0, by Euler-Maclaurin with
// eight correction terms.
std::complex<double> hurwitz_zeta(double s, std::complex<double> z);

double zeta_three_halves();  // zeta(3/2)

// Fresnel integrals in the plain-quadratic convention
//   C(x) = int_0^x cos(t^2) dt,  S(x) = int_0^x sin(t^2) dt.
double fresnel_c(double x);
double fresnel_s(double x);

// Lower branch W_-1 on [-1/e, 0); Halley iteration seeded at
// log(-z) - log(-log(-z)), branch-point series near -1/e.
double lambert_w_m1(double z);

// h(p) = -p log2 p - (1-p) log2 (1-p), with h(0) = h(1) = 0.
double binary_entropy(double p);

}  // namespace qecbath
