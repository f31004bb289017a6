#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "qecbath/lattice.hpp"
#include "qecbath/rng.hpp"

namespace qecbath {

// Error models. Ballistic and diffusive noise start anyon pairs that leave
// string-like trails; cluster noise flips groups of nearby qubits; pair
// noise adds correlated two-qubit events on top of independent ones.

struct IidNoise {
    double p = 0;
};

// n ~ Poisson(2 f L^2) events; each picks a uniform site and direction
// angle phi, then flips l_h ~ Poisson(l |cos phi|) horizontal bonds followed
// by l_v ~ Poisson(l |sin phi|) vertical bonds, walking in the direction of
// the respective sign.
struct BallisticNoise {
    double f = 0;  // creation density
    double l = 0;  // mean trail length
};

// n ~ Poisson(2 f L^2) events; each performs a Poisson(l)-step random walk
// from a uniform site, flipping every traversed bond.
struct DiffusiveNoise {
    double f = 0;
    double l = 0;
};

// For each of the 2L^2 translates of an m x m square of qubits in the bond
// lattice (a diamond of m^2 bonds; for m = 2 these are the plaquettes and
// the stars), with probability f flip l distinct qubits chosen uniformly
// from the block. Every qubit is covered by m^2 blocks.
struct ClusterNoise {
    int m = 1;     // block edge
    int l = 1;     // errors per firing block, 1 <= l <= m^2
    double f = 0;  // block firing probability
};

// Each qubit flips independently with probability p1; each qubit pair of
// the given separation flips jointly with probability p2. Separation 0
// means the 4L^2 nearest-neighbor pairs (perpendicular bonds sharing a
// site); separation d > 0 means same-orientation pairs offset by (d, 0).
struct PairNoise {
    double p1 = 0;
    double p2 = 0;
    int separation = 0;
};

using NoiseModel =
    std::variant<IidNoise, BallisticNoise, DiffusiveNoise, ClusterNoise, PairNoise>;

// throws std::invalid_argument on out-of-range parameters or m > L
void validate_model(const NoiseModel& model, const CodeParams& c);

// All unordered pairs of perpendicular bonds sharing a site; 4L^2 of them,
// four per qubit. A joint flip of such a pair creates anyons at diagonal
// displacement (+-1, +-1).
std::vector<std::pair<QubitId, QubitId>> neighbor_pairs(const CodeParams& c);

// Same-orientation pairs offset by (d, 0), deduplicated (relevant when
// 2d = 0 mod L).
std::vector<std::pair<QubitId, QubitId>> offset_pairs(const CodeParams& c, int d);

ErrorConfig sample(const NoiseModel& model, const CodeParams& c, RandomStream& rng);

// Analytic single-qubit error rate; defined for IID and pair noise only
// (throws std::invalid_argument otherwise). For pair noise with k pairs per
// qubit this is 1/2 - (1/2)(1 - 2 p1)(1 - 2 p2)^k, with k = 4 at
// separation 0.
double single_qubit_rate(const NoiseModel& model);

struct RateEstimate {
    double p_hat = 0;
    double stderr_ = 0;  // sqrt(p_hat (1 - p_hat) / samples)
    long samples = 0;    // trials * n_qubits
};

// Mean fraction of flipped qubits over independently seeded trials.
RateEstimate estimate_px(const NoiseModel& model, const CodeParams& c,
                         long trials, uint64_t seed);

}  // namespace qecbath
