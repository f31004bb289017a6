#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "qecbath/bath.hpp"
#include "qecbath/rng.hpp"
#include "qecbath/special_functions.hpp"

using namespace qecbath;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g;
    for (int i = 0; i < n; ++i)
        g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return g;
}

Eigen::Matrix4cd random_density(RandomStream& rng) {
    Eigen::Matrix4cd g;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            g(i, j) = std::complex<double>(rng.uniform() - 0.5, rng.uniform() - 0.5);
    Eigen::Matrix4cd rho = g * g.adjoint();
    return rho / rho.trace();
}

Eigen::Matrix2cd trace_out_second(const Eigen::Matrix4cd& rho) {
    Eigen::Matrix2cd out;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            out(a, b) = rho(2 * a, 2 * b) + rho(2 * a + 1, 2 * b + 1);
    return out;
}

// exhaustive parity enumeration over every subset of pair couplings
double px_enumeration(double p_d, const std::vector<double>& js) {
    const size_t k = js.size();
    double p = 0;
    for (uint64_t mask = 0; mask < (uint64_t{1} << k); ++mask) {
        double w = 1;
        int parity = 0;
        for (size_t i = 0; i < k; ++i) {
            double s = std::sin(js[i]), c = std::cos(js[i]);
            if (mask >> i & 1) {
                w *= s * s;
                parity ^= 1;
            } else {
                w *= c * c;
            }
        }
        p += w * (parity ? 1.0 - p_d : p_d);
    }
    return p;
}

}  // namespace

TEST_CASE("decoherence exponent: zero time and basic validation") {
    for (double s : {0.5, 1.0, 2.0, 3.0}) {
        SpectralParams p{s, 0.01, 1.0, 30.0, 10.0};
        CHECK(decoherence_exponent(p, 0.0) == 0.0);
        CHECK(decoherence_exponent(p, 0.0, EvalMode::kQuadrature) == 0.0);
    }
    SpectralParams s0{0.0, 0.01, 1.0, kInf, kInf};
    CHECK(decoherence_exponent(s0, 0.0) == 0.0);

    SpectralParams s0_thermal{0.0, 0.01, 1.0, 30.0, 10.0};
    CHECK_THROWS_AS(decoherence_exponent(s0_thermal, 1.0), std::invalid_argument);
    SpectralParams bad{4.0, 0.01, 1.0, 30.0, 10.0};
    CHECK_THROWS_AS(decoherence_exponent(bad, 1.0), std::invalid_argument);
    SpectralParams ohmic_nocut{1.0, 0.01, 1.0, kInf, 10.0};
    CHECK_THROWS_AS(decoherence_exponent(ohmic_nocut, 1.0), std::invalid_argument);
}

TEST_CASE("scale-free bath grows linearly at zero temperature") {
    SpectralParams p{0.0, 0.02, 1.5, kInf, kInf};
    for (double t : {0.5, 2.0, 7.0}) {
        CHECK(decoherence_exponent(p, t) ==
              doctest::Approx(0.02 * M_PI * 1.5 * t).epsilon(1e-12));
        CHECK(decoherence_exponent(p, t, EvalMode::kQuadrature) ==
              doctest::Approx(0.02 * M_PI * 1.5 * t).epsilon(1e-7));
    }
}

TEST_CASE("closed forms match quadrature: ohmic") {
    // beta omega_c = 1000; small enough times that the approximation in the
    // thermal part stays below the comparison tolerance
    SpectralParams p{1.0, 0.01, 1.0, 30.0, 1000.0 / 30.0};
    for (double t : log_grid(0.02, 1.0, 20)) {
        double closed = decoherence_exponent(p, t);
        double quad = decoherence_exponent(p, t, EvalMode::kQuadrature);
        CHECK(closed == doctest::Approx(quad).epsilon(1e-6));
        CHECK(closed >= 0.0);
    }
    CHECK(closed_form_well_approximated(p));
    SpectralParams cold{1.0, 0.01, 1.0, 30.0, 1.0};
    CHECK(!closed_form_well_approximated(cold));
}

TEST_CASE("closed forms match quadrature: sub-ohmic s = 1/2") {
    SpectralParams p{0.5, 0.01, 1.0, kInf, 10.0};
    for (double t : log_grid(0.05, 20.0, 12)) {
        double closed = decoherence_exponent(p, t);
        double quad = decoherence_exponent(p, t, EvalMode::kQuadrature);
        CHECK(closed == doctest::Approx(quad).epsilon(1e-6));
        CHECK(closed >= 0.0);
    }
    // and at zero temperature
    SpectralParams cold{0.5, 0.01, 1.0, kInf, kInf};
    for (double t : {0.3, 3.0}) {
        CHECK(decoherence_exponent(cold, t) ==
              doctest::Approx(2 * 0.01 * std::sqrt(2 * M_PI * t)).epsilon(1e-12));
        CHECK(decoherence_exponent(cold, t, EvalMode::kQuadrature) ==
              doctest::Approx(decoherence_exponent(cold, t)).epsilon(1e-7));
    }
}

TEST_CASE("closed forms match quadrature: super-ohmic s = 2 and 3") {
    for (double s : {2.0, 3.0}) {
        SpectralParams p{s, 0.01, 1.0, 30.0, 5.0};
        for (double t : log_grid(0.02, 10.0, 12)) {
            double closed = decoherence_exponent(p, t);
            double quad = decoherence_exponent(p, t, EvalMode::kQuadrature);
            CHECK(closed == doctest::Approx(quad).epsilon(1e-6));
            CHECK(closed >= 0.0);
        }
        SpectralParams cold{s, 0.01, 1.0, 30.0, kInf};
        for (double t : {0.1, 2.0}) {
            double closed = decoherence_exponent(cold, t);
            double quad = decoherence_exponent(cold, t, EvalMode::kQuadrature);
            CHECK(closed == doctest::Approx(quad).epsilon(1e-6));
        }
    }
}

TEST_CASE("flip probability from the decoherence exponent") {
    CHECK(flip_probability(0.0) == 0.0);
    CHECK(flip_probability(1e6) == doctest::Approx(0.5));
    // the critical exponent 0.123 corresponds to the 10.9% threshold
    CHECK(flip_probability(0.123) == doctest::Approx(0.109).epsilon(1e-3));
    CHECK_THROWS_AS(flip_probability(-0.1), std::invalid_argument);
}

TEST_CASE("induced couplings: zero time, plateaus, light cones") {
    for (int dim : {2, 3})
        for (double r : {-0.5, 0.0, 0.5})
            CHECK(induced_coupling(dim, r, 1.0, 1.0, 30.0, 2.0, 0.0) == 0.0);
    CHECK(ferromagnet_coupling(1.0, 1.0, 2.0, 0.0) == 0.0);

    // 2D ohmic: rises with arcsin inside the cone, then locks at
    // lambda^2 / (4 pi v^2)
    const double lam = M_PI, v = 1.0;
    double plateau = induced_coupling(2, 0.0, lam, v, kInf, 1.0, 5.0);
    CHECK(plateau == doctest::Approx(M_PI / 4.0).epsilon(1e-12));
    CHECK(induced_coupling(2, 0.0, lam, v, kInf, 1.0, 0.5) ==
          doctest::Approx(lam * lam / (2 * M_PI * M_PI * v * v) * std::asin(0.5))
              .epsilon(1e-12));

    // strictly causal kinds vanish outside the cone
    CHECK(induced_coupling(3, -0.5, 1.0, 1.0, 30.0, 2.0, 1.0) == 0.0);
    CHECK(induced_coupling(2, -0.5, 1.0, 1.0, 30.0, 2.0, 1.0) == 0.0);
    CHECK(induced_coupling(2, 0.5, 1.0, 1.0, 30.0, 2.0, 1.0) == 0.0);

    // singular kinds reject the light-cone shell
    CHECK_THROWS_AS(induced_coupling(2, 0.5, 1.0, 1.0, 30.0, 2.0, 2.0 + 1e-9),
                    std::domain_error);
    CHECK_THROWS_AS(induced_coupling(3, 0.0, 1.0, 1.0, 30.0, 2.0, 2.0),
                    std::domain_error);
    CHECK_THROWS_AS(induced_coupling(3, 0.5, 1.0, 1.0, 30.0, 2.0, 2.0 - 1e-9),
                    std::domain_error);
}

TEST_CASE("3D couplings grow linearly far inside the cone") {
    const double lam = 0.7, v = 1.3, R = 2.0, omega_c = 25.0;
    // r = -1/2: exact slope -lambda^2 / (2 pi R v)
    {
        double t1 = 100.0, t2 = 200.0;
        double slope = (induced_coupling(3, -0.5, lam, v, omega_c, R, t2) -
                        induced_coupling(3, -0.5, lam, v, omega_c, R, t1)) /
                       (t2 - t1);
        CHECK(slope == doctest::Approx(-lam * lam / (2 * M_PI * R * v)).epsilon(1e-9));
    }
    // r = 0 and r = +1/2: constant increments at large times
    for (double r : {0.0, 0.5}) {
        double j1 = induced_coupling(3, r, lam, v, omega_c, R, 400.0);
        double j2 = induced_coupling(3, r, lam, v, omega_c, R, 800.0);
        double j3 = induced_coupling(3, r, lam, v, omega_c, R, 1200.0);
        CHECK((j3 - j2) == doctest::Approx(j2 - j1).epsilon(1e-3));
        CHECK(std::fabs(j2 - j1) > 0.0);
    }
}

TEST_CASE("ferromagnet coupling approaches its diffusive asymptote") {
    const double lam = 0.5, diff = 2.0, R = 1.0;
    double t = 5e4;
    double expect = -lam * lam * t / (2 * M_PI * diff * R);
    CHECK(ferromagnet_coupling(lam, diff, R, t) / expect ==
          doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("zero-temperature correlator of the 2D ohmic bath") {
    CHECK(ohmic_2d_correlator(1.0, 1.0, 1.0, 0.5) == 0.0);
    CHECK(ohmic_2d_correlator(1.0, 1.0, 1.0, 1.0) == 0.0);
    double c = ohmic_2d_correlator(1.0, 1.0, 1.0, 2.0);
    CHECK(c == doctest::Approx(-std::log(2.0 + std::sqrt(3.0)) / M_PI).epsilon(1e-12));
    CHECK(c == doctest::Approx(-0.41920).epsilon(5e-4));
    CHECK(c < 0.0);
}

TEST_CASE("two-qubit channel weights and trace preservation") {
    TwoQubitChannel id = two_qubit_channel(0.0, 0.0, 0.0);
    CHECK(id.weight_identity() == doctest::Approx(1.0));
    CHECK(id.weight_single() == doctest::Approx(0.0));
    CHECK(id.weight_double() == doctest::Approx(0.0));
    CHECK(id.weight_coherent() == doctest::Approx(0.0));
    CHECK(id.weight_cross() == doctest::Approx(0.0));

    RandomStream rng(2024);
    for (int rep = 0; rep < 200; ++rep) {
        double lam = 3.0 * rng.uniform();
        double corr = lam * (2.0 * rng.uniform() - 1.0);
        double j = 2.0 * M_PI * rng.uniform();
        TwoQubitChannel ch = two_qubit_channel(lam, corr, j);
        CHECK(std::fabs(ch.weight_identity() + 2 * ch.weight_single() +
                        ch.weight_double() - 1.0) < 1e-14);
    }
    CHECK_THROWS_AS(two_qubit_channel(0.5, 0.6, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(two_qubit_channel(-0.1, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("channel application: trace, hermiticity, reduced state") {
    RandomStream rng(555);
    for (int rep = 0; rep < 50; ++rep) {
        double lam = 2.0 * rng.uniform();
        double c1 = lam * (2.0 * rng.uniform() - 1.0);
        double c2 = lam * (2.0 * rng.uniform() - 1.0);
        double j = 2.0 * M_PI * rng.uniform();
        Eigen::Matrix4cd rho = random_density(rng);

        Eigen::Matrix4cd out = apply_channel(two_qubit_channel(lam, c1, j), rho);
        CHECK(std::abs(out.trace() - std::complex<double>(1.0)) < 1e-12);
        CHECK((out - out.adjoint()).norm() < 1e-12);

        // the reduced state of either qubit does not see the cross
        // correlator C
        Eigen::Matrix4cd out2 = apply_channel(two_qubit_channel(lam, c2, j), rho);
        CHECK((trace_out_second(out) - trace_out_second(out2)).norm() < 1e-12);
    }
}

TEST_CASE("channel flip weight reproduces the two-qubit recursion") {
    RandomStream rng(556);
    for (int rep = 0; rep < 100; ++rep) {
        double lam = 2.0 * rng.uniform();
        double corr = lam * (2.0 * rng.uniform() - 1.0);
        double j = 2.0 * M_PI * rng.uniform();
        TwoQubitChannel ch = two_qubit_channel(lam, corr, j);
        double p_d = flip_probability(lam);
        double flip = ch.weight_single() + ch.weight_double();
        double expect = combined_flip_probability(p_d, std::vector<double>{j});
        CHECK(std::fabs(flip - expect) < 1e-12);
    }
    // with the coherent part off, the marginal flip weight is p_d itself,
    // independent of C
    for (double lam : {0.0, 0.2, 1.5}) {
        for (double corr : {0.0, -0.9 * lam, 0.9 * lam}) {
            TwoQubitChannel ch = two_qubit_channel(lam, corr, 0.0);
            CHECK(std::fabs(ch.weight_single() + ch.weight_double() -
                            flip_probability(lam)) < 1e-14);
        }
    }
}

TEST_CASE("channel is completely positive across the valid region") {
    RandomStream rng(557);
    // Choi matrix from the channel's action on matrix units
    for (int rep = 0; rep < 40; ++rep) {
        double lam = 2.5 * rng.uniform();
        double corr = lam * (2.0 * rng.uniform() - 1.0);
        double j = 2.0 * M_PI * rng.uniform();
        TwoQubitChannel ch = two_qubit_channel(lam, corr, j);
        Eigen::MatrixXcd choi = Eigen::MatrixXcd::Zero(16, 16);
        for (int k = 0; k < 4; ++k)
            for (int l = 0; l < 4; ++l) {
                Eigen::Matrix4cd unit = Eigen::Matrix4cd::Zero();
                unit(k, l) = 1.0;
                Eigen::Matrix4cd mapped = apply_channel(ch, unit);
                choi.block(4 * k, 4 * l, 4, 4) = mapped;
            }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(choi);
        CHECK(es.eigenvalues().minCoeff() > -1e-10);
    }
}

TEST_CASE("ebit fidelities") {
    CHECK(ebit_fidelity(0.0, 0.0, M_PI / 4.0) == doctest::Approx(1.0));
    // nearby qubits, C = -Lambda
    for (double lam : {0.05, 0.1, 0.5, 2.0}) {
        double expect = 3.0 / 8.0 + std::exp(-8.0 * lam) / 8.0 +
                        std::exp(-2.0 * lam) / 2.0;
        CHECK(std::fabs(ebit_fidelity(lam, -lam, M_PI / 4.0) - expect) < 1e-12);
    }
    CHECK(ebit_fidelity(0.1, -0.1, M_PI / 4.0) == doctest::Approx(0.84054).epsilon(1e-4));

    // best maximally entangled state via the channel itself
    Eigen::Matrix4cd rho00 = Eigen::Matrix4cd::Zero();
    rho00(0, 0) = 1.0;
    double lam = 0.07, corr = -0.04, j = 0.9;
    Eigen::Matrix4cd out = apply_channel(two_qubit_channel(lam, corr, j), rho00);
    Eigen::Vector4cd psi_p, psi_m;
    psi_p << 1.0, 0.0, 0.0, std::complex<double>(0, 1);
    psi_m << 1.0, 0.0, 0.0, std::complex<double>(0, -1);
    psi_p /= std::sqrt(2.0);
    psi_m /= std::sqrt(2.0);
    double overlap = std::max((psi_p.adjoint() * out * psi_p)(0).real(),
                              (psi_m.adjoint() * out * psi_m)(0).real());
    CHECK(overlap == doctest::Approx(ebit_fidelity(lam, corr, j)).epsilon(1e-12));
}

TEST_CASE("combined flip probability: recursion, closed form, enumeration") {
    CHECK(combined_flip_probability(0.137, {}) == doctest::Approx(0.137));
    CHECK(combined_flip_probability(0.0, std::vector<double>{M_PI / 4.0}) ==
          doctest::Approx(0.5));

    RandomStream rng(31415);
    for (int rep = 0; rep < 300; ++rep) {
        double p_d = 0.5 * rng.uniform();
        size_t k = rng.below(12);
        std::vector<double> js;
        for (size_t i = 0; i < k; ++i) js.push_back(M_PI * (rng.uniform() - 0.5));
        double closed = combined_flip_probability(p_d, js);
        double recur = combined_flip_probability_recursive(p_d, js);
        double enumd = px_enumeration(p_d, js);
        CHECK(std::fabs(closed - recur) <= 1e-12);
        CHECK(std::fabs(closed - enumd) <= 1e-12);
        CHECK(closed >= 0.0);
        CHECK(closed <= 1.0);
    }
}

TEST_CASE("four equal pair couplings reproduce the pair-noise rate formula") {
    RandomStream rng(2718);
    for (int rep = 0; rep < 100; ++rep) {
        double p1 = 0.5 * rng.uniform();
        double p2 = rng.uniform();
        double j = std::asin(std::sqrt(p2));
        std::vector<double> js(4, j);
        double via_px = combined_flip_probability(p1, js);
        double direct = 0.5 - 0.5 * (1.0 - 2.0 * p1) * std::pow(1.0 - 2.0 * p2, 4);
        CHECK(std::fabs(via_px - direct) <= 1e-12);
    }
}

TEST_CASE("error budget mechanics") {
    BathParams bath{0.1, 1.0, 0.01, 30.0, 1.0, 2, 0.0};
    // t -> 0: the mediated terms vanish
    ErrorBudget tiny = error_budget(1e-8, 100.0, bath);
    CHECK(tiny.superluminal < 1e-12);
    CHECK(tiny.subluminal < 1e-12);
    CHECK(!tiny.direct_term_valid);

    ErrorBudget zero = error_budget(0.0, 100.0, bath);
    CHECK(zero.total() == 0.0);

    // once every qubit is inside every light cone, only the subluminal term
    // remains of the mediated noise, at its cap
    double L = 100.0;
    ErrorBudget late = error_budget(80.0, L, bath);
    CHECK(late.superluminal == 0.0);
    CHECK(late.subluminal ==
          doctest::Approx(std::pow(0.1, 4) * L * L / (64.0 * M_PI)).epsilon(1e-12));
    CHECK(late.light_cone == doctest::Approx(L / 2.0));
    CHECK(late.total() ==
          doctest::Approx(late.direct + late.superluminal + late.subluminal));

    BathParams wrong = bath;
    wrong.dim = 3;
    CHECK_THROWS_AS(error_budget(1.0, 100.0, wrong), std::invalid_argument);
}

TEST_CASE("cycle times: cutoffs, examples, round trips") {
    BathParams bath{0.1, 1.0, 0.01, 30.0, 1.0, 2, 0.0};
    const double scale = bath.v * bath.v / (bath.lambda * bath.lambda);
    QecTimes qt = qec_cycle_times(1e4, bath, 0.109);

    CHECK(std::fabs(qt.cutoff_sub / scale - 4.7) <= 0.05);
    CHECK(std::fabs(qt.cutoff_super / scale - 16.1) <= 0.05);

    REQUIRE(qt.tau_sub.has_value());
    CHECK(*qt.tau_sub == doctest::Approx(234.07).epsilon(5e-4));
    REQUIRE(qt.tau_super.has_value());
    CHECK(qt.regime == BreakdownRegime::kDirectOrSuper);

    // the direct term reaches p~c exactly at tau_d
    ErrorBudget at_tau = error_budget(qt.tau_d, 1e4, bath);
    CHECK(std::fabs(at_tau.direct - 0.109) < 1e-9);

    // the superluminal term reaches p~c exactly at tau_super
    ErrorBudget at_super = error_budget(*qt.tau_super, 1e4, bath);
    CHECK(std::fabs(at_super.superluminal - 0.109) < 1e-9);

    // and a bisection oracle on the superluminal term agrees
    {
        double lo = 1e-6, hi = 1e4 / (2 * bath.v) - 1e-9;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            (error_budget(mid, 1e4, bath).superluminal < 0.109 ? lo : hi) = mid;
        }
        CHECK(*qt.tau_super == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-9));
    }

    // the low/high temperature prefactor c
    double c_val = M_PI / 2.0 * std::log(1.0 / (1.0 - 2.0 * 0.109));
    CHECK(std::fabs(c_val - 0.4) <= 0.05);

    // below the cutoffs the mediated times disappear
    QecTimes small = qec_cycle_times(100.0, bath, 0.109);
    CHECK(small.regime == BreakdownRegime::kDirect);
    CHECK(!small.tau_sub.has_value());
    CHECK(!small.tau_super.has_value());
    QecTimes mid = qec_cycle_times(1000.0, bath, 0.109);
    CHECK(mid.regime == BreakdownRegime::kDirectOrSub);
    CHECK(mid.tau_sub.has_value());
    CHECK(!mid.tau_super.has_value());

    // zero-temperature branch round trip
    BathParams cold = bath;
    cold.temperature = 0.0;
    QecTimes qt0 = qec_cycle_times(1e4, cold, 0.109);
    CHECK(std::fabs(error_budget(qt0.tau_d, 1e4, cold).direct - 0.109) < 1e-9);
}

TEST_CASE("entropic boundary") {
    double p2_at_zero = entropic_boundary(0.0);
    CHECK(std::fabs(4.0 * binary_entropy(p2_at_zero) - 1.0) < 1e-9);
    CHECK(p2_at_zero == doctest::Approx(0.0417).epsilon(2e-3));

    double prev = p2_at_zero;
    for (double p1 : {0.01, 0.03, 0.06, 0.09}) {
        double p2 = entropic_boundary(p1);
        CHECK(std::fabs(4.0 * binary_entropy(p2) + 2.0 * binary_entropy(p1) - 1.0) <
              1e-9);
        CHECK(p2 < prev);  // monotone decreasing
        prev = p2;
    }
    // as 2 h(p1) -> 1 (p1 -> 0.110), the boundary collapses
    CHECK(entropic_boundary(0.1099) < 2e-3);
    CHECK_THROWS_AS(entropic_boundary(0.2), std::invalid_argument);
}
