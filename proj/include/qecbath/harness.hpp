#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qecbath/decoder.hpp"
#include "qecbath/noise.hpp"

namespace qecbath {

// Monte Carlo campaign runner. Trials are independent and seeded from
// (master seed, point, trial index), so results are bit-identical for any
// worker count; the OpenMP path and the serial path produce the same
// SweepResult.

enum class DecoderSpec { kManhattan, kCorrelated };

DecoderKind decoder_for(DecoderSpec spec, const NoiseModel& model);

struct SweepPoint {
    double param = 0;  // value along the swept axis, echoed in the output
    NoiseModel model;
};

struct SweepConfig {
    std::vector<int> code_sizes;  // ascending
    std::vector<SweepPoint> points;
    DecoderSpec decoder = DecoderSpec::kManhattan;
    long target_failures = 1000;  // >= 100
    long max_trials = 100000;     // cap, rounded up to a whole batch
    int batch_size = 256;
    uint64_t seed = 1;
    int workers = 1;  // 0 = all available
};

struct SweepRow {
    int L = 0;
    double param = 0;
    long trials = 0;
    long failures = 0;
    double rate = 0;
    double ci_lo = 0, ci_hi = 0;  // Wilson 95%
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

SweepResult run_sweep(const SweepConfig& cfg);

struct WilsonInterval {
    double lo = 0, hi = 0;
};

WilsonInterval wilson_interval(long successes, long trials, double z = 1.96);

// Replace the named parameter of a model: "p" (iid), "f"/"l" (ballistic,
// diffusive, cluster), "p1"/"p2" (pair).
NoiseModel with_axis(const NoiseModel& base, const std::string& axis, double value);

struct ThresholdConfig {
    NoiseModel base_model;
    std::string axis = "p";
    double bracket_lo = 0, bracket_hi = 0;
    double width = 1e-3;
    DecoderSpec decoder = DecoderSpec::kManhattan;
    std::vector<int> code_sizes;  // decision compares the largest two
    long target_failures = 1000;
    long max_trials = 12000;
    int batch_size = 256;
    uint64_t seed = 1;
    int workers = 1;
};

struct ThresholdResult {
    double estimate = 0;
    double lo = 0, hi = 0;  // final bracket
};

// Bisection on the swept parameter. A candidate counts as above threshold
// iff the logical rate at the largest code size exceeds the rate at the
// second largest: decisively when the Wilson intervals separate, by point
// estimates when the full trial budget still leaves them overlapping (an
// interval-separation requirement alone would bias the estimate upward by
// the minimal detectable gap). Candidates whose rates separate decisively
// early (99.9% intervals, after a floor of trials) stop before reaching
// the failure target; all stopping rules depend only on batch-boundary
// counts, preserving determinism. Throws std::invalid_argument when the
// bracket endpoints do not straddle the threshold. The upper endpoint must
// stay inside the scaling window: far above threshold every size saturates
// near the same rate and the crossing statistic goes blind.
ThresholdResult find_threshold(const ThresholdConfig& cfg);

// CSV with header L,param,trials,failures,rate,ci_lo,ci_hi
std::string emit_csv(const SweepResult& r);
std::string emit_json(const SweepResult& r);
SweepResult sweep_from_json(const std::string& text);

// "iid:0.1", "ballistic:f=0.01,l=2", "diffusive:f=0.01,l=2",
// "cluster:m=2,l=4,f=0.05", "pair:p1=0.03,p2=0.01[,sep=0]"
NoiseModel parse_noise_model(const std::string& text);
std::string describe(const NoiseModel& model);

}  // namespace qecbath
