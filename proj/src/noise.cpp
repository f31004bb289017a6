#include "qecbath/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace qecbath {

namespace {

void check_prob(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument(std::string(name) + " must be in [0, 1]");
}

}  // namespace

void validate_model(const NoiseModel& model, const CodeParams& c) {
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, IidNoise>) {
                check_prob(m.p, "p");
            } else if constexpr (std::is_same_v<T, BallisticNoise> ||
                                 std::is_same_v<T, DiffusiveNoise>) {
                if (!(m.f >= 0) || !(m.l >= 0))
                    throw std::invalid_argument("f and l must be >= 0");
            } else if constexpr (std::is_same_v<T, ClusterNoise>) {
                check_prob(m.f, "f");
                if (m.m < 1) throw std::invalid_argument("cluster: m must be >= 1");
                if (m.m > c.L) throw std::invalid_argument("cluster: m > L");
                if (m.l < 1 || m.l > m.m * m.m)
                    throw std::invalid_argument("cluster: need 1 <= l <= m^2");
            } else if constexpr (std::is_same_v<T, PairNoise>) {
                check_prob(m.p1, "p1");
                check_prob(m.p2, "p2");
                if (m.separation < 0)
                    throw std::invalid_argument("pair: separation must be >= 0");
            }
        },
        model);
}

std::vector<std::pair<QubitId, QubitId>> neighbor_pairs(const CodeParams& c) {
    std::vector<std::pair<QubitId, QubitId>> pairs;
    pairs.reserve(static_cast<size_t>(4) * c.n_sites());
    for (int y = 0; y < c.L; ++y)
        for (int x = 0; x < c.L; ++x) {
            // the two H and two V bonds meeting at site (x, y)
            QubitId h[2] = {{Orientation::H, x, y},
                            {Orientation::H, c.wrap(x - 1), y}};
            QubitId v[2] = {{Orientation::V, x, y},
                            {Orientation::V, x, c.wrap(y - 1)}};
            for (const QubitId& a : h)
                for (const QubitId& b : v) pairs.emplace_back(a, b);
        }
    return pairs;
}

std::vector<std::pair<QubitId, QubitId>> offset_pairs(const CodeParams& c, int d) {
    if (d <= 0) throw std::invalid_argument("offset_pairs: d must be > 0");
    std::vector<std::pair<QubitId, QubitId>> pairs;
    const bool halfway = (2 * d) % c.L == 0;  // partner of the partner is us
    for (int o = 0; o < 2; ++o)
        for (int y = 0; y < c.L; ++y)
            for (int x = 0; x < c.L; ++x) {
                if (halfway && x >= c.wrap(x + d)) continue;
                pairs.push_back({{static_cast<Orientation>(o), x, y},
                                 {static_cast<Orientation>(o), c.wrap(x + d), y}});
            }
    return pairs;
}

namespace {

ErrorConfig sample_iid(const IidNoise& m, const CodeParams& c, RandomStream& rng) {
    ErrorConfig e(c);
    for (int q = 0; q < c.n_qubits(); ++q)
        if (rng.uniform() < m.p) e.flip(q);
    return e;
}

ErrorConfig sample_ballistic(const BallisticNoise& m, const CodeParams& c,
                             RandomStream& rng) {
    ErrorConfig e(c);
    long events = rng.poisson(2.0 * m.f * c.n_sites());
    for (long ev = 0; ev < events; ++ev) {
        int site = static_cast<int>(rng.below(static_cast<uint64_t>(c.n_sites())));
        int x = site % c.L, y = site / c.L;
        double phi = 2.0 * M_PI * rng.uniform();
        double cphi = std::cos(phi), sphi = std::sin(phi);
        long lh = rng.poisson(m.l * std::fabs(cphi));
        long lv = rng.poisson(m.l * std::fabs(sphi));
        int sx = cphi >= 0 ? 1 : -1;
        for (long i = 0; i < lh; ++i) {
            int bx = sx > 0 ? x : x - 1;
            e.flip(c.qubit_index({Orientation::H, c.wrap(bx), c.wrap(y)}));
            x += sx;
        }
        int sy = sphi >= 0 ? 1 : -1;
        for (long i = 0; i < lv; ++i) {
            int by = sy > 0 ? y : y - 1;
            e.flip(c.qubit_index({Orientation::V, c.wrap(x), c.wrap(by)}));
            y += sy;
        }
    }
    return e;
}

ErrorConfig sample_diffusive(const DiffusiveNoise& m, const CodeParams& c,
                             RandomStream& rng) {
    ErrorConfig e(c);
    long events = rng.poisson(2.0 * m.f * c.n_sites());
    for (long ev = 0; ev < events; ++ev) {
        int site = static_cast<int>(rng.below(static_cast<uint64_t>(c.n_sites())));
        int x = site % c.L, y = site / c.L;
        long steps = rng.poisson(m.l);
        for (long i = 0; i < steps; ++i) {
            switch (rng.below(4)) {
                case 0:
                    e.flip(c.qubit_index({Orientation::H, c.wrap(x), c.wrap(y)}));
                    ++x;
                    break;
                case 1:
                    e.flip(c.qubit_index({Orientation::H, c.wrap(x - 1), c.wrap(y)}));
                    --x;
                    break;
                case 2:
                    e.flip(c.qubit_index({Orientation::V, c.wrap(x), c.wrap(y)}));
                    ++y;
                    break;
                default:
                    e.flip(c.qubit_index({Orientation::V, c.wrap(x), c.wrap(y - 1)}));
                    --y;
                    break;
            }
            x = c.wrap(x);
            y = c.wrap(y);
        }
    }
    return e;
}

// Blocks are m x m squares of qubits in the bond lattice: anchored on every
// bond, stepping by (1,1) and (1,-1) in the half-unit bond-center frame, so
// each block is a diamond of m^2 qubits and every qubit lies in exactly m^2
// blocks. For m = 2 the blocks are precisely the plaquettes and the stars,
// so at l = 4 half of all firings apply a stabilizer.
ErrorConfig sample_cluster(const ClusterNoise& m, const CodeParams& c,
                           RandomStream& rng) {
    ErrorConfig e(c);
    const int cells = m.m * m.m;
    const int period = 2 * c.L;  // doubled (half-unit) coordinates
    std::vector<int> scratch(static_cast<size_t>(cells));
    auto flip_center = [&](int u, int v) {
        u = ((u % period) + period) % period;
        v = ((v % period) + period) % period;
        // u + v is odd for every bond center: u odd marks an H bond
        if (u & 1)
            e.flip(c.qubit_index({Orientation::H, (u - 1) / 2, v / 2}));
        else
            e.flip(c.qubit_index({Orientation::V, u / 2, (v - 1) / 2}));
    };
    for (int q = 0; q < c.n_qubits(); ++q) {
        if (rng.uniform() >= m.f) continue;
        QubitId anchor = c.qubit_at(q);
        bool horiz = anchor.orientation == Orientation::H;
        int cx = 2 * anchor.x + (horiz ? 1 : 0);
        int cy = 2 * anchor.y + (horiz ? 0 : 1);
        for (int i = 0; i < cells; ++i) scratch[static_cast<size_t>(i)] = i;
        // partial Fisher-Yates: l distinct cells of the block
        for (int i = 0; i < m.l; ++i) {
            int j = i + static_cast<int>(
                            rng.below(static_cast<uint64_t>(cells - i)));
            std::swap(scratch[static_cast<size_t>(i)],
                      scratch[static_cast<size_t>(j)]);
            int cell = scratch[static_cast<size_t>(i)];
            int di = cell % m.m, dj = cell / m.m;
            flip_center(cx + di + dj, cy + di - dj);
        }
    }
    return e;
}

ErrorConfig sample_pair(const PairNoise& m, const CodeParams& c, RandomStream& rng) {
    ErrorConfig e(c);
    for (int q = 0; q < c.n_qubits(); ++q)
        if (rng.uniform() < m.p1) e.flip(q);
    auto pairs = m.separation == 0 ? neighbor_pairs(c) : offset_pairs(c, m.separation);
    for (const auto& [a, b] : pairs)
        if (rng.uniform() < m.p2) {
            e.flip(c.qubit_index(a));
            e.flip(c.qubit_index(b));
        }
    return e;
}

}  // namespace

ErrorConfig sample(const NoiseModel& model, const CodeParams& c, RandomStream& rng) {
    validate_model(model, c);
    return std::visit(
        [&](const auto& m) -> ErrorConfig {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, IidNoise>) return sample_iid(m, c, rng);
            else if constexpr (std::is_same_v<T, BallisticNoise>)
                return sample_ballistic(m, c, rng);
            else if constexpr (std::is_same_v<T, DiffusiveNoise>)
                return sample_diffusive(m, c, rng);
            else if constexpr (std::is_same_v<T, ClusterNoise>)
                return sample_cluster(m, c, rng);
            else
                return sample_pair(m, c, rng);
        },
        model);
}

double single_qubit_rate(const NoiseModel& model) {
    if (const auto* iid = std::get_if<IidNoise>(&model)) return iid->p;
    if (const auto* pair = std::get_if<PairNoise>(&model)) {
        // pairs covering one qubit: 4 nearest neighbors at separation 0,
        // 2 partners at (d, 0) (assumes 2d != 0 mod L; the degenerate
        // half-period geometry has no L-independent rate)
        int k = pair->separation == 0 ? 4 : 2;
        double shrink = std::pow(1.0 - 2.0 * pair->p2, k);
        return 0.5 - 0.5 * (1.0 - 2.0 * pair->p1) * shrink;
    }
    throw std::invalid_argument(
        "single_qubit_rate: analytic only for iid and pair noise");
}

RateEstimate estimate_px(const NoiseModel& model, const CodeParams& c, long trials,
                         uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("estimate_px: trials must be >= 1");
    validate_model(model, c);
    double sum = 0;
    for (long i = 0; i < trials; ++i) {
        RandomStream rng(derive_seed(seed, static_cast<uint64_t>(i)));
        sum += sample(model, c, rng).weight();
    }
    RateEstimate est;
    est.samples = trials * c.n_qubits();
    est.p_hat = sum / static_cast<double>(est.samples);
    est.stderr_ =
        std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(est.samples));
    return est;
}

}  // namespace qecbath
