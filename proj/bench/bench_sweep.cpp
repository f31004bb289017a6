// Timing harness: the OpenMP trial loop against the serial reference, plus a
// matcher microbenchmark at syndrome sizes typical for L up to 24.
//
//   bench_sweep [trials-per-point]

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "qecbath/harness.hpp"
#include "qecbath/matching.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace qecbath;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void bench_matcher() {
    std::printf("matcher (complete graphs, torus-metric weights):\n");
    CodeParams c(24);
    for (int n : {50, 100, 150, 200, 250}) {
        RandomStream rng(static_cast<uint64_t>(n));
        double elapsed = 0;
        int reps = 0;
        while (elapsed < 0.5 && reps < 200) {
            std::vector<Site> pts;
            for (int i = 0; i < n; ++i)
                pts.push_back({static_cast<int>(rng.below(24)),
                               static_cast<int>(rng.below(24))});
            WeightedGraph g(n);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    Displacement d = torus_displacement(pts[static_cast<size_t>(i)],
                                                        pts[static_cast<size_t>(j)], c);
                    g.set(i, j, std::abs(d.dx) + std::abs(d.dy));
                }
            auto t0 = Clock::now();
            Matching m = min_weight_perfect_matching(g);
            elapsed += seconds_since(t0);
            ++reps;
            if (m.pairs.empty()) std::abort();
        }
        std::printf("  n = %3d: %8.2f ms/solve (%d solves)\n", n,
                    1e3 * elapsed / reps, reps);
    }
}

void bench_sweep(long trials) {
    SweepConfig cfg;
    cfg.code_sizes = {16};
    cfg.points = {{0.1, IidNoise{0.1}}};
    cfg.target_failures = 1000000;  // run to the trial cap
    cfg.max_trials = trials;
    cfg.batch_size = 256;
    cfg.seed = 99;

    cfg.workers = 1;
    auto t0 = Clock::now();
    SweepResult serial = run_sweep(cfg);
    double t_serial = seconds_since(t0);

    cfg.workers = 0;  // all threads
    t0 = Clock::now();
    SweepResult parallel = run_sweep(cfg);
    double t_parallel = seconds_since(t0);

    bool identical = serial.rows.size() == parallel.rows.size();
    for (size_t i = 0; identical && i < serial.rows.size(); ++i)
        identical = serial.rows[i].trials == parallel.rows[i].trials &&
                    serial.rows[i].failures == parallel.rows[i].failures;

    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    std::printf("sweep, iid p=0.1, L=16, %ld trials:\n", serial.rows[0].trials);
    std::printf("  serial reference: %7.2f s (%.2f ms/trial)\n", t_serial,
                1e3 * t_serial / serial.rows[0].trials);
    std::printf("  openmp x%-2d      : %7.2f s  speedup %.2f\n", threads, t_parallel,
                t_serial / t_parallel);
    std::printf("  results identical: %s\n", identical ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
    long trials = argc > 1 ? std::atol(argv[1]) : 2000;
    bench_matcher();
    bench_sweep(trials);
    return 0;
}
