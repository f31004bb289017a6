#pragma once

#include <cstdint>
#include <random>

namespace qecbath {

// splitmix64 step; also used to fan a master seed out into independent
// per-trial stream seeds.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t master, uint64_t a, uint64_t b = 0) {
    uint64_t s = master;
    uint64_t x = splitmix64(s);
    s = x ^ a;
    x = splitmix64(s);
    s = x ^ b;
    return splitmix64(s);
}

// Deterministic random stream. std::mt19937_64 output is pinned by the
// standard; the distribution helpers below avoid std::uniform_*_distribution
// and std::poisson_distribution, whose algorithms differ between standard
// library implementations.
class RandomStream {
public:
    explicit RandomStream(uint64_t seed) : eng_(seed) {}

    uint64_t bits() { return eng_(); }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n), unbiased by rejection
    uint64_t below(uint64_t n);

    // Poisson deviate: sequential inversion for small means, transformed
    // rejection (PTRS) above mean 30.
    long poisson(double mean);

private:
    long poisson_inversion(double mean);
    long poisson_ptrs(double mean);

    std::mt19937_64 eng_;
};

// log(k!) without touching std::lgamma (table below 1024, Stirling above);
// keeps the rejection sampler's accept decisions identical everywhere.
double log_factorial(long k);

}  // namespace qecbath
