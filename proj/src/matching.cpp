#include "qecbath/matching.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace qecbath {

namespace {

// Primal-dual blossom matcher for maximum-weight matching on a dense graph,
// O(n^3). Classical formulation: top-level nodes are vertices or contracted
// blossoms (ids above n); lab holds vertex duals and blossom duals, slack[x]
// remembers the outer vertex with the tightest edge into x, and each
// contracted node keeps its child cycle in flower. Minimization and
// perfectness are handled by the caller through a weight transform.
class Blossom {
public:
    Blossom(int n, const std::vector<int64_t>& weights) : n_(n) {
        int cap = 2 * n + 1;
        stride_ = cap;
        g_.assign(static_cast<size_t>(cap) * cap, EdgeRef{0, 0, 0});
        lab_.assign(static_cast<size_t>(cap), 0);
        match_.assign(static_cast<size_t>(cap), 0);
        slack_.assign(static_cast<size_t>(cap), 0);
        st_.assign(static_cast<size_t>(cap), 0);
        pa_.assign(static_cast<size_t>(cap), 0);
        state_.assign(static_cast<size_t>(cap), -1);
        vis_.assign(static_cast<size_t>(cap), 0);
        flower_.assign(static_cast<size_t>(cap), {});
        flower_from_.assign(static_cast<size_t>(cap),
                            std::vector<int>(static_cast<size_t>(n + 1), 0));
        for (int u = 1; u <= n_; ++u)
            for (int v = 1; v <= n_; ++v)
                edge(u, v) = EdgeRef{u, v, u == v ? 0 : weights[idx0(u - 1, v - 1)]};
    }

    void solve() {
        n_x_ = n_;
        int64_t w_max = 0;
        for (int u = 1; u <= n_; ++u) {
            st_[static_cast<size_t>(u)] = u;
            flower_from_[static_cast<size_t>(u)][static_cast<size_t>(u)] = u;
            for (int v = 1; v <= n_; ++v) w_max = std::max(w_max, edge(u, v).w);
        }
        for (int u = 1; u <= n_; ++u) lab_[static_cast<size_t>(u)] = w_max;
        while (grow()) {
        }
    }

    int mate(int u0) const { return match_[static_cast<size_t>(u0 + 1)] - 1; }

private:
    struct EdgeRef {
        int u, v;
        int64_t w;
    };

    size_t idx0(int i, int j) const {
        return static_cast<size_t>(i) * static_cast<size_t>(n_) +
               static_cast<size_t>(j);
    }
    EdgeRef& edge(int u, int v) {
        return g_[static_cast<size_t>(u) * static_cast<size_t>(stride_) +
                  static_cast<size_t>(v)];
    }

    int64_t slack_of(const EdgeRef& e) {
        return lab_[static_cast<size_t>(e.u)] + lab_[static_cast<size_t>(e.v)] -
               edge(e.u, e.v).w * 2;
    }

    void update_slack(int u, int x) {
        if (!slack_[static_cast<size_t>(x)] ||
            slack_of(edge(u, x)) < slack_of(edge(slack_[static_cast<size_t>(x)], x)))
            slack_[static_cast<size_t>(x)] = u;
    }

    void set_slack(int x) {
        slack_[static_cast<size_t>(x)] = 0;
        for (int u = 1; u <= n_; ++u)
            if (edge(u, x).w > 0 && st_[static_cast<size_t>(u)] != x &&
                state_[static_cast<size_t>(st_[static_cast<size_t>(u)])] == 0)
                update_slack(u, x);
    }

    void q_push(int x) {
        if (x <= n_) {
            q_.push_back(x);
        } else {
            for (int t : flower_[static_cast<size_t>(x)]) q_push(t);
        }
    }

    void set_st(int x, int b) {
        st_[static_cast<size_t>(x)] = b;
        if (x > n_)
            for (int t : flower_[static_cast<size_t>(x)]) set_st(t, b);
    }

    int get_pr(int b, int xr) {
        auto& f = flower_[static_cast<size_t>(b)];
        int pr = static_cast<int>(std::find(f.begin(), f.end(), xr) - f.begin());
        if (pr % 2 == 1) {  // keep the alternating structure: enter on an even slot
            std::reverse(f.begin() + 1, f.end());
            return static_cast<int>(f.size()) - pr;
        }
        return pr;
    }

    void set_match(int u, int v) {
        match_[static_cast<size_t>(u)] = edge(u, v).v;
        if (u <= n_) return;
        EdgeRef e = edge(u, v);
        int xr = flower_from_[static_cast<size_t>(u)][static_cast<size_t>(e.u)];
        int pr = get_pr(u, xr);
        auto& f = flower_[static_cast<size_t>(u)];
        for (int i = 0; i < pr; ++i) set_match(f[static_cast<size_t>(i)],
                                               f[static_cast<size_t>(i ^ 1)]);
        set_match(xr, v);
        std::rotate(f.begin(), f.begin() + pr, f.end());
    }

    void augment(int u, int v) {
        while (true) {
            int xnv = st_[static_cast<size_t>(match_[static_cast<size_t>(u)])];
            set_match(u, v);
            if (!xnv) return;
            set_match(xnv, st_[static_cast<size_t>(pa_[static_cast<size_t>(xnv)])]);
            u = st_[static_cast<size_t>(pa_[static_cast<size_t>(xnv)])];
            v = xnv;
        }
    }

    int get_lca(int u, int v) {
        for (++timestamp_; u || v; std::swap(u, v)) {
            if (u == 0) continue;
            if (vis_[static_cast<size_t>(u)] == timestamp_) return u;
            vis_[static_cast<size_t>(u)] = timestamp_;
            u = st_[static_cast<size_t>(match_[static_cast<size_t>(u)])];
            if (u) u = st_[static_cast<size_t>(pa_[static_cast<size_t>(u)])];
        }
        return 0;
    }

    void add_blossom(int u, int lca, int v) {
        int b = n_ + 1;
        while (b <= n_x_ && st_[static_cast<size_t>(b)]) ++b;
        if (b > n_x_) ++n_x_;
        lab_[static_cast<size_t>(b)] = 0;
        state_[static_cast<size_t>(b)] = 0;
        match_[static_cast<size_t>(b)] = match_[static_cast<size_t>(lca)];
        auto& f = flower_[static_cast<size_t>(b)];
        f.clear();
        f.push_back(lca);
        for (int x = u, y; x != lca; x = st_[static_cast<size_t>(pa_[static_cast<size_t>(y)])]) {
            f.push_back(x);
            f.push_back(y = st_[static_cast<size_t>(match_[static_cast<size_t>(x)])]);
            q_push(y);
        }
        std::reverse(f.begin() + 1, f.end());
        for (int x = v, y; x != lca; x = st_[static_cast<size_t>(pa_[static_cast<size_t>(y)])]) {
            f.push_back(x);
            f.push_back(y = st_[static_cast<size_t>(match_[static_cast<size_t>(x)])]);
            q_push(y);
        }
        set_st(b, b);
        for (int x = 1; x <= n_x_; ++x) edge(b, x).w = edge(x, b).w = 0;
        for (int x = 1; x <= n_; ++x)
            flower_from_[static_cast<size_t>(b)][static_cast<size_t>(x)] = 0;
        for (int xs : f) {
            for (int x = 1; x <= n_x_; ++x)
                if (edge(b, x).w == 0 || slack_of(edge(xs, x)) < slack_of(edge(b, x))) {
                    edge(b, x) = edge(xs, x);
                    edge(x, b) = edge(x, xs);
                }
            for (int x = 1; x <= n_; ++x)
                if (flower_from_[static_cast<size_t>(xs)][static_cast<size_t>(x)])
                    flower_from_[static_cast<size_t>(b)][static_cast<size_t>(x)] = xs;
        }
        set_slack(b);
    }

    void expand_blossom(int b) {  // state 1, dual exhausted
        auto& f = flower_[static_cast<size_t>(b)];
        for (int x : f) set_st(x, x);
        int xr = flower_from_[static_cast<size_t>(b)]
                             [static_cast<size_t>(edge(b, pa_[static_cast<size_t>(b)]).u)];
        int pr = get_pr(b, xr);
        for (int i = 0; i < pr; i += 2) {
            int xs = f[static_cast<size_t>(i)];
            int xns = f[static_cast<size_t>(i + 1)];
            pa_[static_cast<size_t>(xs)] = edge(xns, xs).u;
            state_[static_cast<size_t>(xs)] = 1;
            state_[static_cast<size_t>(xns)] = 0;
            slack_[static_cast<size_t>(xs)] = 0;
            set_slack(xns);
            q_push(xns);
        }
        state_[static_cast<size_t>(xr)] = 1;
        pa_[static_cast<size_t>(xr)] = pa_[static_cast<size_t>(b)];
        for (size_t i = static_cast<size_t>(pr) + 1; i < f.size(); ++i) {
            state_[static_cast<size_t>(f[i])] = -1;
            set_slack(f[i]);
        }
        st_[static_cast<size_t>(b)] = 0;
    }

    bool on_found_edge(const EdgeRef& e) {
        int u = st_[static_cast<size_t>(e.u)];
        int v = st_[static_cast<size_t>(e.v)];
        if (state_[static_cast<size_t>(v)] == -1) {
            pa_[static_cast<size_t>(v)] = e.u;
            state_[static_cast<size_t>(v)] = 1;
            int nu = st_[static_cast<size_t>(match_[static_cast<size_t>(v)])];
            slack_[static_cast<size_t>(v)] = 0;
            slack_[static_cast<size_t>(nu)] = 0;
            state_[static_cast<size_t>(nu)] = 0;
            q_push(nu);
        } else if (state_[static_cast<size_t>(v)] == 0) {
            int lca = get_lca(u, v);
            if (!lca) {
                augment(u, v);
                augment(v, u);
                return true;
            }
            add_blossom(u, lca, v);
        }
        return false;
    }

    // one phase: grow alternating trees from every free node until an
    // augmenting path appears or the duals certify optimality
    bool grow() {
        std::fill(state_.begin(), state_.begin() + n_x_ + 1, -1);
        std::fill(slack_.begin(), slack_.begin() + n_x_ + 1, 0);
        q_.clear();
        for (int x = 1; x <= n_x_; ++x)
            if (st_[static_cast<size_t>(x)] == x && !match_[static_cast<size_t>(x)]) {
                pa_[static_cast<size_t>(x)] = 0;
                state_[static_cast<size_t>(x)] = 0;
                q_push(x);
            }
        if (q_.empty()) return false;
        while (true) {
            while (!q_.empty()) {
                int u = q_.front();
                q_.pop_front();
                if (state_[static_cast<size_t>(st_[static_cast<size_t>(u)])] == 1)
                    continue;
                for (int v = 1; v <= n_; ++v)
                    if (edge(u, v).w > 0 &&
                        st_[static_cast<size_t>(u)] != st_[static_cast<size_t>(v)]) {
                        if (slack_of(edge(u, v)) == 0) {
                            if (on_found_edge(edge(u, v))) return true;
                        } else {
                            update_slack(u, st_[static_cast<size_t>(v)]);
                        }
                    }
            }
            int64_t d = std::numeric_limits<int64_t>::max();
            for (int b = n_ + 1; b <= n_x_; ++b)
                if (st_[static_cast<size_t>(b)] == b && state_[static_cast<size_t>(b)] == 1)
                    d = std::min(d, lab_[static_cast<size_t>(b)] / 2);
            for (int x = 1; x <= n_x_; ++x)
                if (st_[static_cast<size_t>(x)] == x && slack_[static_cast<size_t>(x)]) {
                    if (state_[static_cast<size_t>(x)] == -1)
                        d = std::min(d, slack_of(edge(slack_[static_cast<size_t>(x)], x)));
                    else if (state_[static_cast<size_t>(x)] == 0)
                        d = std::min(d,
                                     slack_of(edge(slack_[static_cast<size_t>(x)], x)) / 2);
                }
            for (int u = 1; u <= n_; ++u) {
                int su = st_[static_cast<size_t>(u)];
                if (state_[static_cast<size_t>(su)] == 0) {
                    if (lab_[static_cast<size_t>(u)] <= d) return false;
                    lab_[static_cast<size_t>(u)] -= d;
                } else if (state_[static_cast<size_t>(su)] == 1) {
                    lab_[static_cast<size_t>(u)] += d;
                }
            }
            for (int b = n_ + 1; b <= n_x_; ++b)
                if (st_[static_cast<size_t>(b)] == b) {
                    if (state_[static_cast<size_t>(b)] == 0)
                        lab_[static_cast<size_t>(b)] += d * 2;
                    else if (state_[static_cast<size_t>(b)] == 1)
                        lab_[static_cast<size_t>(b)] -= d * 2;
                }
            q_.clear();
            for (int x = 1; x <= n_x_; ++x)
                if (st_[static_cast<size_t>(x)] == x && slack_[static_cast<size_t>(x)] &&
                    st_[static_cast<size_t>(slack_[static_cast<size_t>(x)])] != x &&
                    slack_of(edge(slack_[static_cast<size_t>(x)], x)) == 0)
                    if (on_found_edge(edge(slack_[static_cast<size_t>(x)], x)))
                        return true;
            for (int b = n_ + 1; b <= n_x_; ++b)
                if (st_[static_cast<size_t>(b)] == b &&
                    state_[static_cast<size_t>(b)] == 1 &&
                    lab_[static_cast<size_t>(b)] == 0)
                    expand_blossom(b);
        }
    }

    int n_, n_x_ = 0, stride_, timestamp_ = 0;
    std::vector<EdgeRef> g_;
    std::vector<int64_t> lab_;
    std::vector<int> match_, slack_, st_, pa_, state_, vis_;
    std::vector<std::vector<int>> flower_, flower_from_;
    std::deque<int> q_;
};

std::vector<int64_t> scaled_weights(const WeightedGraph& g) {
    std::vector<int64_t> wi(static_cast<size_t>(g.n) * g.n, 0);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            if (i == j) continue;
            double w = g.at(i, j);
            if (!std::isfinite(w))
                throw std::invalid_argument("matching: non-finite weight");
            if (w < 0) throw std::invalid_argument("matching: negative weight");
            wi[static_cast<size_t>(i) * g.n + j] =
                static_cast<int64_t>(std::llround(w * kWeightScale));
        }
    return wi;
}

Matching finish(const WeightedGraph& g, std::vector<std::pair<int, int>> pairs) {
    Matching m;
    std::sort(pairs.begin(), pairs.end());
    m.pairs = std::move(pairs);
    for (auto [i, j] : m.pairs) m.total_weight += g.at(i, j);
    return m;
}

}  // namespace

Matching min_weight_perfect_matching(const WeightedGraph& g, int knn) {
    if (g.n % 2 != 0)
        throw std::invalid_argument("matching: odd number of vertices");
    if (g.n == 0) return {};
    auto wi = scaled_weights(g);

    if (knn > 0 && knn < g.n - 1) {
        // keep each vertex's knn cheapest partners (union over endpoints);
        // demote everything else so it is used only when unavoidable
        std::vector<char> keep(static_cast<size_t>(g.n) * g.n, 0);
        std::vector<int> order(static_cast<size_t>(g.n - 1));
        int64_t kept_max = 0;
        for (int i = 0; i < g.n; ++i) {
            int k = 0;
            for (int j = 0; j < g.n; ++j)
                if (j != i) order[static_cast<size_t>(k++)] = j;
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                int64_t wa = wi[static_cast<size_t>(i) * g.n + a];
                int64_t wb = wi[static_cast<size_t>(i) * g.n + b];
                return wa != wb ? wa < wb : a < b;
            });
            for (int t = 0; t < knn; ++t) {
                int j = order[static_cast<size_t>(t)];
                keep[static_cast<size_t>(i) * g.n + j] = 1;
                keep[static_cast<size_t>(j) * g.n + i] = 1;
                kept_max = std::max(kept_max, wi[static_cast<size_t>(i) * g.n + j]);
            }
        }
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j)
                if (i != j && !keep[static_cast<size_t>(i) * g.n + j])
                    wi[static_cast<size_t>(i) * g.n + j] = kept_max + 1;
    }

    int64_t w_max = 0;
    for (int64_t w : wi) w_max = std::max(w_max, w);
    // maximize (w_max + 1 - w); every transformed weight is positive, so the
    // maximum-weight matching of the complete graph is perfect and minimizes
    // the original total
    std::vector<int64_t> transformed(wi.size());
    for (size_t k = 0; k < wi.size(); ++k) transformed[k] = w_max + 1 - wi[k];
    for (int i = 0; i < g.n; ++i)
        transformed[static_cast<size_t>(i) * g.n + i] = 0;

    Blossom solver(g.n, transformed);
    solver.solve();

    std::vector<std::pair<int, int>> pairs;
    for (int u = 0; u < g.n; ++u) {
        int v = solver.mate(u);
        if (v < 0) throw std::logic_error("matching: solver left a free vertex");
        if (u < v) pairs.emplace_back(u, v);
    }
    return finish(g, std::move(pairs));
}

Matching brute_force_matching(const WeightedGraph& g) {
    if (g.n % 2 != 0)
        throw std::invalid_argument("matching: odd number of vertices");
    if (g.n > 12)
        throw std::invalid_argument("brute_force_matching: n > 12");
    if (g.n == 0) return {};
    auto wi = scaled_weights(g);

    std::vector<std::pair<int, int>> current, best;
    int64_t best_w = std::numeric_limits<int64_t>::max();
    uint32_t used = 0;

    // fixing the lowest free vertex first enumerates pair sets in
    // lexicographic order, so keeping the first strict optimum yields the
    // lexicographically smallest among ties
    auto rec = [&](auto&& self, int64_t acc) -> void {
        if (static_cast<int>(current.size()) * 2 == g.n) {
            if (acc < best_w) {
                best_w = acc;
                best = current;
            }
            return;
        }
        int i = 0;
        while (used & (1u << i)) ++i;
        for (int j = i + 1; j < g.n; ++j) {
            if (used & (1u << j)) continue;
            used |= (1u << i) | (1u << j);
            current.emplace_back(i, j);
            self(self, acc + wi[static_cast<size_t>(i) * g.n + j]);
            current.pop_back();
            used &= ~((1u << i) | (1u << j));
        }
    };
    rec(rec, 0);
    return finish(g, std::move(best));
}

}  // namespace qecbath
