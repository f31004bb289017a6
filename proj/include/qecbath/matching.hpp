#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace qecbath {

// Dense symmetric weight table over an even number of vertices.
struct WeightedGraph {
    int n = 0;
    std::vector<double> w;  // n*n, row-major; diagonal unused

    WeightedGraph() = default;
    explicit WeightedGraph(int n_) : n(n_), w(static_cast<size_t>(n_) * n_, 0.0) {}

    double& at(int i, int j) { return w[static_cast<size_t>(i) * n + j]; }
    double at(int i, int j) const { return w[static_cast<size_t>(i) * n + j]; }
    void set(int i, int j, double v) { at(i, j) = at(j, i) = v; }
};

struct Matching {
    std::vector<std::pair<int, int>> pairs;  // i < j, sorted
    double total_weight = 0;
};

// Weights are fixed-pointed at this scale before matching so that ties are
// resolved identically on every platform.
inline constexpr double kWeightScale = 1e6;

// Exact minimum-weight perfect matching (blossom primal-dual, O(n^3)).
// Optimal with respect to the scaled-and-rounded weights; deterministic for
// identical inputs. knn > 0 restricts candidate edges to the knn nearest of
// either endpoint (an approximation for large graphs; remaining edges are
// demoted, not removed, so the matching stays perfect).
Matching min_weight_perfect_matching(const WeightedGraph& g, int knn = 0);

// Exhaustive oracle over all (n-1)!! perfect matchings, n <= 12. Among ties
// returns the lexicographically smallest pair set.
Matching brute_force_matching(const WeightedGraph& g);

}  // namespace qecbath
