#include "qecbath/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qecbath/rng.hpp"

namespace qecbath {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_binom(int n, int k) {
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double log_odds(double p, const char* name) {
    if (!(p >= 0.0 && p < 1.0))
        throw std::invalid_argument(std::string(name) + " must be in [0, 1)");
    return p == 0.0 ? kNegInf : std::log(p) - std::log1p(-p);
}

}  // namespace

WeightedGraph weights_manhattan(const Syndrome& s, const CodeParams& c) {
    if (s.size() % 2 != 0)
        throw std::invalid_argument("weights_manhattan: odd syndrome");
    WeightedGraph g(s.size());
    for (int i = 0; i < g.n; ++i)
        for (int j = i + 1; j < g.n; ++j) {
            Displacement d = torus_displacement(s.anyons[static_cast<size_t>(i)],
                                                s.anyons[static_cast<size_t>(j)], c);
            g.set(i, j, std::abs(d.dx) + std::abs(d.dy));
        }
    return g;
}

double log_pair_chain_probability(int a, int b, double p1, double p2) {
    if (a < 0 || b < a) throw std::invalid_argument("pair_chain: need 0 <= a <= b");
    if (a + b < 1) throw std::invalid_argument("pair_chain: a + b must be >= 1");
    const double lq1 = log_odds(p1, "p1");
    const double lq2 = log_odds(p2, "p2");

    double rows[4];
    int n_rows = 0;
    // single-qubit chain: a+b steps, binom(a+b, a) paths
    if (lq1 > kNegInf)
        rows[n_rows++] = log_binom(a + b, a) + (a + b) * lq1;
    // pure pair chain: b diagonal moves reach (a, b) when a+b is even
    if ((a + b) % 2 == 0 && lq2 > kNegInf)
        rows[n_rows++] = log_binom(b, (b - a) / 2) + b * lq2;
    // one single-qubit event completing a pair chain (odd total distance)
    if ((a + b) % 2 == 1 && a + b >= 3 && lq1 > kNegInf && lq2 > kNegInf)
        rows[n_rows++] = std::log((a + b + 1) / 2.0) +
                         log_binom(b, (b - a - 1) / 2) + lq1 + (b - 1) * lq2;
    // one pair event inside a single-qubit chain
    if (a >= 1 && a + b >= 4 && lq1 > kNegInf && lq2 > kNegInf)
        rows[n_rows++] = std::log(static_cast<double>(a + b - 1)) +
                         log_binom(a + b - 2, a - 1) + (a + b - 2) * lq1 + lq2;

    if (n_rows == 0) return kNegInf;
    double m = *std::max_element(rows, rows + n_rows);
    if (m == kNegInf) return kNegInf;
    double acc = 0;
    for (int i = 0; i < n_rows; ++i) acc += std::exp(rows[i] - m);
    return m + std::log(acc);
}

double pair_chain_probability(int a, int b, double p1, double p2) {
    return std::exp(log_pair_chain_probability(a, b, p1, p2));
}

CorrelatedGraph weights_correlation_aware(const Syndrome& s, const CodeParams& c,
                                          double p1, double p2) {
    if (s.size() % 2 != 0)
        throw std::invalid_argument("weights_correlation_aware: odd syndrome");
    if (p1 == 0.0 && p2 == 0.0)
        throw std::invalid_argument("weights_correlation_aware: p1 = p2 = 0");
    // image displacements satisfy |dx|, |dy| <= L; tabulate the chain log
    // probabilities once instead of per anyon pair
    std::vector<double> table(static_cast<size_t>(c.L + 1) * (c.L + 1), kNegInf);
    for (int lo = 0; lo <= c.L; ++lo)
        for (int hi = lo; hi <= c.L; ++hi) {
            if (lo + hi == 0) continue;
            table[static_cast<size_t>(lo) * (c.L + 1) + hi] =
                log_pair_chain_probability(lo, hi, p1, p2);
        }
    auto chain_lp = [&](int a, int b) {
        if (a > b) std::swap(a, b);
        return table[static_cast<size_t>(a) * (c.L + 1) + b];
    };
    CorrelatedGraph out;
    out.graph = WeightedGraph(s.size());
    out.route.assign(static_cast<size_t>(s.size()) * s.size(), Displacement{});
    const int n = s.size();
    double min_w = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Site ai = s.anyons[static_cast<size_t>(i)];
            Site aj = s.anyons[static_cast<size_t>(j)];
            int dx = c.wrap(aj.x - ai.x);
            int dy = c.wrap(aj.y - ai.y);
            double best = kNegInf;
            Displacement best_d{};
            for (int dxc : {dx, dx - c.L})
                for (int dyc : {dy, dy - c.L}) {
                    int lo = std::abs(dxc), hi = std::abs(dyc);
                    if (lo + hi == 0) continue;
                    double lp = chain_lp(lo, hi);
                    if (lp > best) {
                        best = lp;
                        best_d = {dxc, dyc};
                    }
                }
            if (best == kNegInf)
                throw std::runtime_error(
                    "weights_correlation_aware: every image of an anyon pair has "
                    "probability 0; so correction cannot rank the pairing");
            out.graph.set(i, j, -best);
            out.route[static_cast<size_t>(i) * n + j] = best_d;
            out.route[static_cast<size_t>(j) * n + i] = {-best_d.dx, -best_d.dy};
            min_w = std::min(min_w, -best);
        }
    if (min_w < 0) {
        // constant shift keeps the argmin matching and restores nonnegativity
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) out.graph.at(i, j) -= min_w;
    }
    return out;
}

ErrorConfig decode(const Syndrome& s, const DecoderKind& kind, const CodeParams& c) {
    if (s.size() % 2 != 0) throw std::invalid_argument("decode: odd syndrome");
    ErrorConfig correction(c);
    if (s.empty()) return correction;

    const int n = s.size();
    Matching m;
    std::vector<Displacement> route;
    if (std::holds_alternative<ManhattanWeights>(kind)) {
        m = min_weight_perfect_matching(weights_manhattan(s, c));
    } else {
        const auto& k = std::get<CorrelationAwareWeights>(kind);
        CorrelatedGraph cg = weights_correlation_aware(s, c, k.p1, k.p2);
        route = std::move(cg.route);
        m = min_weight_perfect_matching(cg.graph);
    }
    for (auto [i, j] : m.pairs) {
        Site ai = s.anyons[static_cast<size_t>(i)];
        Displacement d = route.empty()
                             ? torus_displacement(ai, s.anyons[static_cast<size_t>(j)], c)
                             : route[static_cast<size_t>(i) * n + j];
        correction ^= path_with_displacement(ai, d, c);
    }
    return correction;
}

TrialOutcome outcome_for_config(const ErrorConfig& e, const DecoderKind& kind,
                                const CodeParams& c) {
    Syndrome s = syndrome_of(e, c);
    ErrorConfig correction = decode(s, kind, c);
    TrialOutcome out;
    out.anyon_count = s.size();
    out.residual = winding_class(e ^ correction, c);
    out.success = out.residual.trivial();
    return out;
}

TrialOutcome trial(const NoiseModel& model, const DecoderKind& kind,
                   const CodeParams& c, RandomStream& rng) {
    return outcome_for_config(sample(model, c, rng), kind, c);
}

}  // namespace qecbath
