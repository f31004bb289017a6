#include "qecbath/rng.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace qecbath {

uint64_t RandomStream::below(uint64_t n) {
    if (n == 0) throw std::invalid_argument("RandomStream::below: n == 0");
    uint64_t bound = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
        x = eng_();
    } while (x >= bound);
    return x % n;
}

long RandomStream::poisson(double mean) {
    if (mean < 0 || !std::isfinite(mean))
        throw std::invalid_argument("poisson: bad mean");
    if (mean == 0) return 0;
    return mean < 30 ? poisson_inversion(mean) : poisson_ptrs(mean);
}

long RandomStream::poisson_inversion(double mean) {
    double p = std::exp(-mean);
    double cum = p;
    double u = uniform();
    long k = 0;
    // hard cap far beyond any realistic tail for mean < 30
    while (u > cum && k < 400) {
        ++k;
        p *= mean / static_cast<double>(k);
        cum += p;
    }
    return k;
}

// Hoermann's PTRS transformed rejection; valid for mean >= ~10.
long RandomStream::poisson_ptrs(double mean) {
    const double slog = std::log(mean);
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    while (true) {
        double u = uniform() - 0.5;
        double v = uniform();
        double us = 0.5 - std::fabs(u);
        double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<long>(kf);
        if (kf < 0 || (us < 0.013 && v > us)) continue;
        long k = static_cast<long>(kf);
        double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
        double rhs = kf * slog - mean - log_factorial(k);
        if (lhs <= rhs) return k;
    }
}

double log_factorial(long k) {
    if (k < 0) throw std::invalid_argument("log_factorial: negative argument");
    constexpr int kTable = 1024;
    static const std::array<double, kTable> table = [] {
        std::array<double, kTable> t{};
        t[0] = 0.0;
        for (int i = 1; i < kTable; ++i)
            t[static_cast<size_t>(i)] =
                t[static_cast<size_t>(i - 1)] + std::log(static_cast<double>(i));
        return t;
    }();
    if (k < kTable) return table[static_cast<size_t>(k)];
    // Stirling with the first three corrections; relative error < 1e-16 here
    double x = static_cast<double>(k);
    double inv = 1.0 / x;
    return x * std::log(x) - x + 0.5 * std::log(2.0 * M_PI * x) +
           inv / 12.0 - inv * inv * inv / 360.0 +
           inv * inv * inv * inv * inv / 1260.0;
}

}  // namespace qecbath
