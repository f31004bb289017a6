#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "qecbath/decoder.hpp"
#include "qecbath/harness.hpp"

using namespace qecbath;

namespace {

Syndrome random_syndrome(const CodeParams& c, int n_anyons, RandomStream& rng) {
    std::set<Site> sites;
    while (static_cast<int>(sites.size()) < n_anyons)
        sites.insert({static_cast<int>(rng.below(static_cast<uint64_t>(c.L))),
                      static_cast<int>(rng.below(static_cast<uint64_t>(c.L)))});
    Syndrome s;
    s.anyons.assign(sites.begin(), sites.end());
    std::sort(s.anyons.begin(), s.anyons.end());
    return s;
}

double logit(double p) { return std::log(p) - std::log1p(-p); }

}  // namespace

TEST_CASE("manhattan weights") {
    CodeParams c(8);
    Syndrome s;
    s.anyons = {{0, 0}, {0, 1}};
    CHECK(weights_manhattan(s, c).at(0, 1) == doctest::Approx(1.0));
    s.anyons = {{0, 0}, {0, 5}};
    CHECK(weights_manhattan(s, c).at(0, 1) == doctest::Approx(3.0));
    s.anyons = {{0, 0}, {2, 1}};
    CHECK(weights_manhattan(s, c).at(0, 1) == doctest::Approx(3.0));
    s.anyons = {{0, 0}, {1, 1}, {2, 2}};
    CHECK_THROWS_AS(weights_manhattan(s, c), std::invalid_argument);
}

TEST_CASE("pair chain probabilities") {
    const double p1 = 0.05, p2 = 0.1;
    const double q1 = p1 / (1 - p1), q2 = p2 / (1 - p2);
    CHECK(pair_chain_probability(0, 1, p1, p2) == doctest::Approx(q1).epsilon(1e-12));
    CHECK(pair_chain_probability(1, 1, 0.0, p2) == doctest::Approx(q2).epsilon(1e-12));
    CHECK(pair_chain_probability(0, 2, 0.0, 0.1) ==
          doctest::Approx(2.0 / 81.0).epsilon(1e-12));
    {
        // a case where three families contribute: (a, b) = (2, 3)
        double row1 = 10.0 * std::pow(q1, 5);            // binom(5,2) q1^5
        double row3 = 3.0 * 1.0 * q1 * std::pow(q2, 2);  // (5+1)/2 binom(3,0) q1 q2^2
        double row4 = 4.0 * 3.0 * std::pow(q1, 3) * q2;  // (a+b-1) binom(3,1) q1^3 q2
        CHECK(pair_chain_probability(2, 3, p1, p2) ==
              doctest::Approx(row1 + row3 + row4).epsilon(1e-12));
    }
    CHECK(pair_chain_probability(1, 1, 0.0, 0.0) == 0.0);
    CHECK_THROWS_AS(pair_chain_probability(0, 0, p1, p2), std::invalid_argument);
    CHECK_THROWS_AS(pair_chain_probability(2, 1, p1, p2), std::invalid_argument);
    CHECK_THROWS_AS(pair_chain_probability(0, 1, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("correlation-aware weights reduce to single-qubit chains as p2 -> 0") {
    CodeParams c(8);
    const double p1 = 1e-6;
    RandomStream rng(71);
    for (int rep = 0; rep < 20; ++rep) {
        Syndrome s = random_syndrome(c, 6, rng);
        CorrelatedGraph cg = weights_correlation_aware(s, c, p1, 0.0);
        for (int i = 0; i < 6; ++i)
            for (int j = i + 1; j < 6; ++j) {
                // only the single-qubit family survives: the weight is the
                // best image's Manhattan length times -log q1, reduced by the
                // log binomial path degeneracy
                double best = -1e300;
                Site ai = s.anyons[static_cast<size_t>(i)];
                Site aj = s.anyons[static_cast<size_t>(j)];
                int dx = c.wrap(aj.x - ai.x), dy = c.wrap(aj.y - ai.y);
                for (int dxc : {dx, dx - c.L})
                    for (int dyc : {dy, dy - c.L}) {
                        int a = std::abs(dxc), b = std::abs(dyc);
                        double lp = std::lgamma(a + b + 1.0) - std::lgamma(a + 1.0) -
                                    std::lgamma(b + 1.0) + (a + b) * logit(p1);
                        best = std::max(best, lp);
                    }
                CHECK(cg.graph.at(i, j) == doctest::Approx(-best).epsilon(1e-9));
            }
    }
}

TEST_CASE("correlation-aware weight of a diagonal pair is -log q2 when p1 -> 0") {
    CodeParams c(8);
    Syndrome s;
    s.anyons = {{0, 0}, {1, 1}};
    std::sort(s.anyons.begin(), s.anyons.end());
    const double p2 = 0.04;
    CorrelatedGraph cg = weights_correlation_aware(s, c, 0.0, p2);
    CHECK(cg.graph.at(0, 1) ==
          doctest::Approx(-std::log(p2 / (1 - p2))).epsilon(1e-12));
    CHECK_THROWS_AS(weights_correlation_aware(s, c, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("decode returns a correction with the requested syndrome") {
    CodeParams c(8);
    CHECK(decode(Syndrome{}, ManhattanWeights{}, c).empty());

    ErrorConfig e(c);
    e.flip(c.qubit_index({Orientation::V, 3, 5}));
    Syndrome s = syndrome_of(e, c);
    ErrorConfig corr = decode(s, ManhattanWeights{}, c);
    CHECK(corr.weight() == 1);
    CHECK(syndrome_of(corr, c) == s);

    RandomStream rng(83);
    for (int done = 0; done < 1000; ++done) {
        int n = 2 * (1 + static_cast<int>(rng.below(6)));
        Syndrome rs = random_syndrome(c, n, rng);
        ErrorConfig m = decode(rs, ManhattanWeights{}, c);
        CHECK(syndrome_of(m, c) == rs);
        ErrorConfig cw = decode(rs, CorrelationAwareWeights{0.03, 0.01}, c);
        CHECK(syndrome_of(cw, c) == rs);
    }
}

TEST_CASE("trial outcomes") {
    CodeParams c(8);
    RandomStream rng(3);
    CHECK(trial(IidNoise{0.0}, ManhattanWeights{}, c, rng).success);

    // non-contractible loop: trivial syndrome, winding (1,0), unfixable
    ErrorConfig loop(c);
    for (int x = 0; x < c.L; ++x) loop.flip(c.qubit_index({Orientation::H, x, 0}));
    TrialOutcome out = outcome_for_config(loop, ManhattanWeights{}, c);
    CHECK(!out.success);
    CHECK(out.anyon_count == 0);
    CHECK(out.residual == WindingClass{1, 0});
}

TEST_CASE("success is invariant under stabilizer deformation of the error") {
    CodeParams c(6);
    RandomStream rng(29);
    for (int rep = 0; rep < 20; ++rep) {
        ErrorConfig e = sample(IidNoise{0.08}, c, rng);
        ErrorConfig deformed = e;
        for (int k = 0; k < 3; ++k)
            deformed ^= plaquette_boundary(
                {static_cast<int>(rng.below(6)), static_cast<int>(rng.below(6))}, c);
        TrialOutcome a = outcome_for_config(e, ManhattanWeights{}, c);
        TrialOutcome b = outcome_for_config(deformed, ManhattanWeights{}, c);
        CHECK(a.success == b.success);
        CHECK(a.residual == b.residual);
    }
}

TEST_CASE("manhattan and correlation-aware matchings agree on tie-free instances") {
    CodeParams c(8);
    RandomStream rng(59);
    int compared = 0;
    for (int rep = 0; rep < 400 && compared < 50; ++rep) {
        Syndrome s = random_syndrome(c, 6, rng);
        WeightedGraph gm = weights_manhattan(s, c);
        Matching best = brute_force_matching(gm);
        // keep only instances whose optimal pairing is unique: enumerate all
        // 15 pairings of six vertices
        int optima = 0;
        for (int j = 1; j < 6; ++j) {
            std::vector<int> rest;
            for (int k = 1; k < 6; ++k)
                if (k != j) rest.push_back(k);
            for (int m2 = 1; m2 < 4; ++m2) {
                double w = gm.at(0, j) + gm.at(rest[0], rest[static_cast<size_t>(m2)]);
                std::vector<int> last;
                for (int k = 1; k < 4; ++k)
                    if (k != m2) last.push_back(rest[static_cast<size_t>(k)]);
                w += gm.at(last[0], last[1]);
                if (std::fabs(w - best.total_weight) < 1e-9) ++optima;
            }
        }
        if (optima != 1) continue;
        ++compared;
        Matching via_corr = min_weight_perfect_matching(
            weights_correlation_aware(s, c, 1e-6, 0.0).graph);
        CHECK(via_corr.pairs == best.pairs);
    }
    CHECK(compared >= 30);
}

TEST_CASE("below threshold the failure rate falls with code size") {
    const NoiseModel m = IidNoise{0.06};
    long fails8 = 0, fails16 = 0;
    const long trials = 4000;
    CodeParams c8(8), c16(16);
    for (long i = 0; i < trials; ++i) {
        RandomStream r1(derive_seed(1717, static_cast<uint64_t>(i), 8));
        RandomStream r2(derive_seed(1717, static_cast<uint64_t>(i), 16));
        fails8 += !trial(m, ManhattanWeights{}, c8, r1).success;
        fails16 += !trial(m, ManhattanWeights{}, c16, r2).success;
    }
    double rate8 = static_cast<double>(fails8) / trials;
    double rate16 = static_cast<double>(fails16) / trials;
    CHECK(rate8 < 0.25);  // far below 1/2
    auto iv8 = wilson_interval(fails8, trials);
    auto iv16 = wilson_interval(fails16, trials);
    CHECK(iv16.hi < iv8.lo);  // decreasing with L, beyond the intervals
    CHECK(rate16 < rate8);
}
