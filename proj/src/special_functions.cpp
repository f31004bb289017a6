#include "qecbath/special_functions.hpp"

#include <cmath>
#include <stdexcept>

namespace qecbath {

namespace {

using cd = std::complex<double>;

bool at_pole(cd z) {
    return z.imag() == 0.0 && z.real() <= 0.0 &&
           z.real() == std::floor(z.real());
}

// pi * cot(pi z), saturating to -i sign(Im z) far from the real axis where
// the naive quotient would overflow
cd pi_cot_pi(cd z) {
    if (std::fabs(z.imag()) > 20.0)
        return cd(0.0, z.imag() > 0 ? -M_PI : M_PI);
    return M_PI * std::cos(M_PI * z) / std::sin(M_PI * z);
}

}  // namespace

std::complex<double> digamma(std::complex<double> z) {
    if (at_pole(z)) throw std::domain_error("digamma: pole at non-positive integer");
    cd result = 0.0;
    if (z.real() < 0.5) {
        result -= pi_cot_pi(z);
        z = 1.0 - z;
    }
    while (std::abs(z) < 16.0) {
        result -= 1.0 / z;
        z += 1.0;
    }
    cd inv = 1.0 / z, inv2 = inv * inv;
    result += std::log(z) - 0.5 * inv;
    // B_{2k} / (2k), k = 1..7
    static constexpr double coef[7] = {1.0 / 12,  -1.0 / 120,      1.0 / 252,
                                       -1.0 / 240, 1.0 / 132,      -691.0 / 32760,
                                       1.0 / 12};
    cd p = inv2;
    for (double ck : coef) {
        result -= ck * p;
        p *= inv2;
    }
    return result;
}

std::complex<double> trigamma(std::complex<double> z) {
    if (at_pole(z)) throw std::domain_error("trigamma: pole at non-positive integer");
    cd result = 0.0;
    double sign = 1.0;
    if (z.real() < 0.5) {
        // psi'(z) = pi^2 / sin^2(pi z) - psi'(1 - z)
        if (std::fabs(z.imag()) <= 20.0) {
            cd s = std::sin(M_PI * z);
            result += M_PI * M_PI / (s * s);
        }  // else the reflection term is below 1e-50
        sign = -1.0;
        z = 1.0 - z;
    }
    cd acc = 0.0;
    while (std::abs(z) < 16.0) {
        acc += 1.0 / (z * z);
        z += 1.0;
    }
    cd inv = 1.0 / z, inv2 = inv * inv;
    cd tail = inv + 0.5 * inv2;
    // B_{2k}, k = 1..7
    static constexpr double bern[7] = {1.0 / 6,  -1.0 / 30, 1.0 / 42, -1.0 / 30,
                                       5.0 / 66, -691.0 / 2730, 7.0 / 6};
    cd p = inv2 * inv;
    for (double bk : bern) {
        tail += bk * p;
        p *= inv2;
    }
    return result + sign * (acc + tail);
}

std::complex<double> hurwitz_zeta(double s, std::complex<double> z) {
    if (s == 1.0) throw std::domain_error("hurwitz_zeta: s = 1");
    if (!(z.real() > 0.0))
        throw std::domain_error("hurwitz_zeta: requires Re z > 0");
    cd sum = 0.0;
    int shift = 0;
    while (std::abs(z + cd(shift)) < 25.0) ++shift;
    for (int k = 0; k < shift; ++k) sum += std::pow(z + cd(k), -s);
    cd w = z + cd(shift);
    sum += std::pow(w, 1.0 - s) / (s - 1.0);
    sum += 0.5 * std::pow(w, -s);
    // Euler-Maclaurin, eight correction terms: B_{2j}/(2j)! (s)_{2j-1} w^{-s-2j+1}
    static constexpr double b_over_fact[8] = {
        1.0 / 12,
        -1.0 / 720,
        1.0 / 30240,
        -1.0 / 1209600,
        1.0 / 47900160,
        -691.0 / 1307674368000.0,
        1.0 / 74724249600.0,
        -3617.0 / 10670622842880000.0};
    double poch = s;
    cd wp = std::pow(w, -s - 1.0);
    cd w2 = 1.0 / (w * w);
    for (int j = 1; j <= 8; ++j) {
        sum += b_over_fact[j - 1] * poch * wp;
        poch *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
        wp *= w2;
    }
    return sum;
}

double zeta_three_halves() {
    static const double value = hurwitz_zeta(1.5, 1.0).real();
    return value;
}

namespace {

// |x| <= 5: power series in extended precision (cancellation at the upper
// end stays below 1e-10 in 80-bit arithmetic)
void fresnel_taylor(double x, double* c, double* s) {
    const long double xl = x;
    const long double x2 = xl * xl, x4 = x2 * x2;
    long double u = 1.0L;   // x^{4n} / (2n)!
    long double v = x2;     // x^{4n+2} / (2n+1)!
    long double cs = 0.0L, ss = 0.0L;
    long double sign = 1.0L;
    for (int n = 0; n < 80; ++n) {
        long double tc = sign * u / (4 * n + 1);
        long double ts = sign * v / (4 * n + 3);
        cs += tc;
        ss += ts;
        if (std::fabs(static_cast<double>(tc)) < 1e-24 &&
            std::fabs(static_cast<double>(ts)) < 1e-24 && n > 2)
            break;
        u *= x4 / ((2 * n + 1) * (2 * n + 2));
        v *= x4 / ((2 * n + 2) * (2 * n + 3));
        sign = -sign;
    }
    *c = static_cast<double>(cs * xl);
    *s = static_cast<double>(ss * xl);
}

// x > 5: C + iS = sqrt(pi/8)(1 + i) - int_x^inf e^{it^2} dt, with the tail
// from the asymptotic series e^{ix^2} sum_m c_m, c_0 = i/(2x),
// c_m = c_{m-1} (2m-1)/(2x^2) * (-i); truncation error ~ e^{-x^2}
void fresnel_asymptotic(double x, double* c, double* s) {
    const std::complex<double> rot(0.0, -1.0);
    std::complex<double> term(0.0, 1.0 / (2.0 * x));
    std::complex<double> acc = term;
    double prev = std::abs(term);
    for (int m = 1; m < 60; ++m) {
        term *= (2.0 * m - 1.0) / (2.0 * x * x) * rot;
        double mag = std::abs(term);
        if (mag >= prev) break;  // asymptotic minimum reached
        acc += term;
        prev = mag;
        if (mag < 1e-19) break;
    }
    std::complex<double> tail =
        std::complex<double>(std::cos(x * x), std::sin(x * x)) * acc;
    const double half = std::sqrt(M_PI / 8.0);
    *c = half - tail.real();
    *s = half - tail.imag();
}

void fresnel_both(double x, double* c, double* s) {
    double ax = std::fabs(x);
    if (ax <= 5.0)
        fresnel_taylor(ax, c, s);
    else
        fresnel_asymptotic(ax, c, s);
    if (x < 0) {
        *c = -*c;
        *s = -*s;
    }
}

}  // namespace

double fresnel_c(double x) {
    double c, s;
    fresnel_both(x, &c, &s);
    return c;
}

double fresnel_s(double x) {
    double c, s;
    fresnel_both(x, &c, &s);
    return s;
}

double lambert_w_m1(double z) {
    const double kInvE = 0.36787944117144233;
    if (!(z >= -kInvE - 1e-16 && z < 0.0))
        throw std::domain_error("lambert_w_m1: z must lie in [-1/e, 0)");
    double t = 2.0 * (1.0 + std::exp(1.0) * z);  // p^2 of the branch expansion
    if (t <= 0.0) return -1.0;
    double w;
    if (t < 0.5) {
        double p = -std::sqrt(t);
        w = -1.0 +
            p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0))));
    } else {
        double l1 = std::log(-z);
        w = l1 - std::log(-l1);
    }
    for (int it = 0; it < 80; ++it) {
        double ew = std::exp(w);
        double f = w * ew - z;
        if (std::fabs(f) <= 1e-13 * std::fabs(z)) break;
        double d1 = ew * (w + 1.0);
        w -= f / (d1 - f * (w + 2.0) / (2.0 * (w + 1.0)));
        if (w > -1.0) w = -1.0 - 1e-12;  // stay on the lower branch
    }
    return w;
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("binary_entropy: p must be in [0, 1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -(p * std::log2(p) + (1.0 - p) * std::log2(1.0 - p));
}

}  // namespace qecbath
