#pragma once

#include <variant>
#include <vector>

#include "qecbath/lattice.hpp"
#include "qecbath/matching.hpp"
#include "qecbath/noise.hpp"

namespace qecbath {

// Matching-based decoding: pair up the anyons, apply a correction chain per
// pair, and judge success by the homology class of error + correction.

struct ManhattanWeights {};

// Edge weights -log p_ij where p_ij sums the dominant error chains
// connecting two anyons, including correlated pair events with rates
// (p1, p2) on nearest neighbors.
struct CorrelationAwareWeights {
    double p1 = 0;
    double p2 = 0;
};

using DecoderKind = std::variant<ManhattanWeights, CorrelationAwareWeights>;

WeightedGraph weights_manhattan(const Syndrome& s, const CodeParams& c);

// Relative probability (against the no-error configuration) of connecting
// two anyons whose sorted absolute displacements are (a, b), a <= b,
// a + b >= 1. Sums the chain families that dominate for p1 >> p2 or
// p1 << p2: pure single-qubit chains, pure diagonal pair chains, and the
// two leading mixed families. Returns 0 when no family applies (flagged to
// the caller for p1 = 0 with odd a + b).
double pair_chain_probability(int a, int b, double p1, double p2);

// log of the same quantity, safe against underflow for tiny rates;
// -infinity when the probability is 0.
double log_pair_chain_probability(int a, int b, double p1, double p2);

struct CorrelatedGraph {
    WeightedGraph graph;
    std::vector<Displacement> route;  // n*n: argmax image per anyon pair
};

// For each anyon pair, evaluates the chain probability on the four
// candidate torus images {dx, dx-L} x {dy, dy-L} and assigns
// w = -log(max image probability), remembering the best image for routing
// the correction. Throws if every image of some pair has probability 0.
// Weights are shifted up by a common constant if any is negative (constant
// shifts never change the argmin matching).
CorrelatedGraph weights_correlation_aware(const Syndrome& s, const CodeParams& c,
                                          double p1, double p2);

// Correction whose syndrome equals s: match the anyons, then XOR the
// staircase chains along each matched pair's selected image.
ErrorConfig decode(const Syndrome& s, const DecoderKind& kind, const CodeParams& c);

struct TrialOutcome {
    bool success = true;
    int anyon_count = 0;
    WindingClass residual;
};

TrialOutcome outcome_for_config(const ErrorConfig& e, const DecoderKind& kind,
                                const CodeParams& c);

TrialOutcome trial(const NoiseModel& model, const DecoderKind& kind,
                   const CodeParams& c, RandomStream& rng);

}  // namespace qecbath
