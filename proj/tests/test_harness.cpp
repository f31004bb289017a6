#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qecbath/harness.hpp"

using namespace qecbath;

TEST_CASE("noiseless sweep reports zero rates") {
    SweepConfig cfg;
    cfg.code_sizes = {4, 6};
    cfg.points = {{0.0, IidNoise{0.0}}};
    cfg.target_failures = 100;
    cfg.max_trials = 600;
    cfg.seed = 5;
    SweepResult r = run_sweep(cfg);
    REQUIRE(r.rows.size() == 2);
    for (const SweepRow& row : r.rows) {
        CHECK(row.failures == 0);
        CHECK(row.rate == 0.0);
        CHECK(row.trials >= 600);
    }
}

TEST_CASE("sweep results are identical for any worker count") {
    SweepConfig cfg;
    cfg.code_sizes = {6, 8};
    cfg.points = {{0.09, IidNoise{0.09}}, {0.11, IidNoise{0.11}}};
    cfg.target_failures = 100;
    cfg.max_trials = 1500;
    cfg.batch_size = 128;
    cfg.seed = 12345;

    cfg.workers = 1;
    SweepResult serial = run_sweep(cfg);
    cfg.workers = 8;
    SweepResult parallel = run_sweep(cfg);

    REQUIRE(serial.rows.size() == parallel.rows.size());
    for (size_t i = 0; i < serial.rows.size(); ++i) {
        CHECK(serial.rows[i].trials == parallel.rows[i].trials);
        CHECK(serial.rows[i].failures == parallel.rows[i].failures);
        CHECK(serial.rows[i].rate == parallel.rows[i].rate);
        CHECK(serial.rows[i].ci_lo == parallel.rows[i].ci_lo);
        CHECK(serial.rows[i].ci_hi == parallel.rows[i].ci_hi);
    }
    CHECK(emit_csv(serial) == emit_csv(parallel));
}

TEST_CASE("super-critical rates grow with code size towards one half") {
    SweepConfig cfg;
    cfg.code_sizes = {8, 16};
    cfg.points = {{0.12, IidNoise{0.12}}};
    cfg.target_failures = 400;
    cfg.max_trials = 4000;
    cfg.seed = 99;
    SweepResult r = run_sweep(cfg);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[0].rate > 0.15);
    CHECK(r.rows[1].rate > r.rows[0].rate);
    CHECK(r.rows[1].rate < 0.75);
}

TEST_CASE("sub- and super-critical rates separate across sizes") {
    SweepConfig cfg;
    cfg.code_sizes = {8, 16};
    cfg.target_failures = 100;
    cfg.max_trials = 6000;
    cfg.seed = 31;
    cfg.points = {{0.08, IidNoise{0.08}}};
    SweepResult low = run_sweep(cfg);
    // below threshold the larger code is better, beyond the intervals
    CHECK(low.rows[1].ci_hi < low.rows[0].ci_lo);

    cfg.points = {{0.13, IidNoise{0.13}}};
    SweepResult high = run_sweep(cfg);
    CHECK(high.rows[1].ci_lo > high.rows[0].ci_hi);
}

TEST_CASE("sweep validation") {
    SweepConfig cfg;
    cfg.code_sizes = {8, 6};
    cfg.points = {{0.1, IidNoise{0.1}}};
    CHECK_THROWS_AS(run_sweep(cfg), std::invalid_argument);  // not ascending
    cfg.code_sizes = {6, 8};
    cfg.target_failures = 50;  // below the floor of 100
    CHECK_THROWS_AS(run_sweep(cfg), std::invalid_argument);
    cfg.target_failures = 100;
    cfg.decoder = DecoderSpec::kCorrelated;  // needs a pair model
    CHECK_THROWS_AS(run_sweep(cfg), std::invalid_argument);
}

TEST_CASE("csv and json emission") {
    SweepResult empty;
    CHECK(emit_csv(empty) == "L,param,trials,failures,rate,ci_lo,ci_hi\n");

    SweepResult r;
    r.rows.push_back({12, 0.105, 2048, 517, 517.0 / 2048, 0.231, 0.272});
    std::string csv = emit_csv(r);
    CHECK(csv.find("12,0.105,2048,517,") != std::string::npos);
    CHECK(csv == emit_csv(r));  // byte-stable

    SweepResult back = sweep_from_json(emit_json(r));
    REQUIRE(back.rows.size() == 1);
    CHECK(back.rows[0].L == r.rows[0].L);
    CHECK(back.rows[0].param == r.rows[0].param);
    CHECK(back.rows[0].trials == r.rows[0].trials);
    CHECK(back.rows[0].failures == r.rows[0].failures);
    CHECK(back.rows[0].rate == r.rows[0].rate);
    CHECK(back.rows[0].rate ==
          doctest::Approx(static_cast<double>(back.rows[0].failures) /
                          back.rows[0].trials));
}

TEST_CASE("model parsing") {
    CHECK(describe(parse_noise_model("iid:0.1")) == "iid:p=0.1");
    CHECK(describe(parse_noise_model("iid:p=0.1")) == "iid:p=0.1");
    CHECK(describe(parse_noise_model("ballistic:f=0.01,l=2")) ==
          "ballistic:f=0.01,l=2");
    CHECK(describe(parse_noise_model("diffusive:l=2,f=0.01")) ==
          "diffusive:f=0.01,l=2");
    CHECK(describe(parse_noise_model("cluster:m=2,l=4,f=0.05")) ==
          "cluster:m=2,l=4,f=0.05");
    CHECK(describe(parse_noise_model("pair:p1=0.03,p2=0.01")) ==
          "pair:p1=0.03,p2=0.01,sep=0");
    CHECK(describe(parse_noise_model("pair:p1=0.03,p2=0.01,sep=3")) ==
          "pair:p1=0.03,p2=0.01,sep=3");
    CHECK_THROWS_AS(parse_noise_model("warp:0.1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_noise_model("ballistic:f=0.01"), std::invalid_argument);
    CHECK_THROWS_AS(parse_noise_model("iid:zzz"), std::invalid_argument);
}

TEST_CASE("axis substitution") {
    NoiseModel base = PairNoise{0.01, 0.02, 0};
    NoiseModel m = with_axis(base, "p1", 0.07);
    CHECK(std::get<PairNoise>(m).p1 == 0.07);
    CHECK(std::get<PairNoise>(m).p2 == 0.02);
    CHECK_THROWS_AS(with_axis(base, "f", 0.1), std::invalid_argument);
    CHECK_THROWS_AS(with_axis(NoiseModel(IidNoise{0.1}), "p2", 0.1),
                    std::invalid_argument);
    CHECK(std::get<ClusterNoise>(with_axis(ClusterNoise{2, 4, 0.1}, "f", 0.3)).f ==
          0.3);
}

TEST_CASE("threshold bisection on small codes") {
    ThresholdConfig cfg;
    cfg.base_model = IidNoise{0.1};
    cfg.axis = "p";
    cfg.bracket_lo = 0.005;
    cfg.bracket_hi = 0.16;
    cfg.width = 0.02;
    cfg.code_sizes = {4, 8};
    cfg.target_failures = 400;
    cfg.max_trials = 3000;
    cfg.seed = 77;
    ThresholdResult res = find_threshold(cfg);
    CHECK(res.lo < res.estimate);
    CHECK(res.estimate < res.hi);
    CHECK(res.hi - res.lo <= 0.02 + 1e-12);
    // small codes put the apparent crossing in a broad but sane window
    CHECK(res.estimate > 0.03);
    CHECK(res.estimate < 0.25);

    // misconfigured brackets are rejected
    ThresholdConfig bad = cfg;
    bad.bracket_lo = 0.25;
    bad.bracket_hi = 0.45;
    CHECK_THROWS_AS(find_threshold(bad), std::invalid_argument);
}
