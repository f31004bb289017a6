#include "qecbath/bath.hpp"

#include <cmath>
#include <complex>
#include <queue>
#include <stdexcept>

#include "qecbath/special_functions.hpp"

namespace qecbath {

double BathParams::beta() const {
    if (temperature < 0) throw std::invalid_argument("BathParams: T < 0");
    return temperature == 0 ? std::numeric_limits<double>::infinity()
                            : 1.0 / temperature;
}

double BathParams::alpha() const { return lambda * lambda / (2.0 * M_PI * v * v); }

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_spectral(const SpectralParams& p) {
    if (!(p.alpha >= 0) || !(p.omega_0 > 0) || !(p.omega_c > 0) || !(p.beta > 0))
        throw std::invalid_argument("SpectralParams: need alpha >= 0 and positive scales");
    if (!std::isfinite(p.omega_c) && p.s >= 1.0)
        throw std::invalid_argument(
            "SpectralParams: omega_c = inf only converges for s < 1");
}

// log(sinh(x) / x) for x > 0, safe for both tiny and huge x
double log_sinh_over_x(double x) {
    if (x < 1e-3) return std::log1p(x * x / 6.0 * (1.0 + x * x / 20.0));
    return x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0 * x);
}

double closed_form_lambda(const SpectralParams& p, double t) {
    const double s = p.s;
    const bool thermal = std::isfinite(p.beta);
    if (t == 0) return 0.0;
    if (s == 0.0) {
        if (thermal)
            throw std::invalid_argument(
                "decoherence_exponent: s = 0 needs an infrared cutoff at finite "
                "temperature");
        return p.alpha * M_PI * p.omega_0 * t;
    }
    if (s == 0.5) {
        double vac = 2.0 * p.alpha * std::sqrt(2.0 * M_PI * p.omega_0 * t);
        if (!thermal) return vac;
        std::complex<double> zt(1.0, t / p.beta);
        double hz = hurwitz_zeta(-0.5, zt).real();
        return vac + 2.0 * p.alpha * std::sqrt(p.beta * p.omega_0 / M_PI) *
                          (4.0 * M_PI * hz + zeta_three_halves());
    }
    if (s == 1.0) {
        double vac = p.alpha * std::log1p(p.omega_c * p.omega_c * t * t);
        if (!thermal) return vac;
        return vac + 2.0 * p.alpha * log_sinh_over_x(M_PI * t / p.beta);
    }
    const double u = p.omega_c * t * p.omega_c * t;
    if (s == 2.0) {
        // the rational term carries a factor omega_c, as the defining
        // integral requires (checked against the quadrature mode)
        double rational = -2.0 * p.omega_c * u / (1.0 + u);
        double therm;
        if (!thermal) {
            therm = 4.0 * p.omega_c * u / (1.0 + u);
        } else {
            double z0 = 1.0 / (p.beta * p.omega_c);
            std::complex<double> zt(z0, z0 * p.omega_c * t);
            therm = 4.0 / p.beta *
                    (digamma(zt).real() - digamma(std::complex<double>(z0)).real());
        }
        return p.alpha / p.omega_0 * (rational + therm);
    }
    if (s == 3.0) {
        double rational = -2.0 * p.omega_c * p.omega_c * u * (3.0 + u) /
                          ((1.0 + u) * (1.0 + u));
        double therm;
        if (!thermal) {
            // zero-temperature limit of the trigamma bracket
            therm = -2.0 * rational;
        } else {
            double z0 = 1.0 / (p.beta * p.omega_c);
            std::complex<double> zt(z0, z0 * p.omega_c * t);
            therm = 4.0 / (p.beta * p.beta) *
                    (trigamma(std::complex<double>(z0)).real() - trigamma(zt).real());
        }
        return p.alpha / (p.omega_0 * p.omega_0) * (rational + therm);
    }
    throw std::invalid_argument(
        "decoherence_exponent: closed forms exist for s in {0, 1/2, 1, 2, 3}");
}

// --- quadrature mode -------------------------------------------------------

// QUADPACK 15-point Gauss-Kronrod rule
template <class F>
std::pair<double, double> gk15(const F& f, double a, double b) {
    static constexpr double xgk[8] = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.0};
    static constexpr double wgk[8] = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static constexpr double wg[4] = {
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fc = f(c);
    double resk = fc * wgk[7], resg = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        double x = h * xgk[j];
        double f1 = f(c - x), f2 = f(c + x);
        resk += wgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += wg[j / 2] * (f1 + f2);
    }
    return {resk * h, std::fabs(resk - resg) * h};
}

template <class F>
double adaptive_integral(const F& f, double a, double b, int initial_panels,
                         double rel_tol) {
    struct Panel {
        double err, a, b, val;
        bool operator<(const Panel& o) const { return err < o.err; }
    };
    std::priority_queue<Panel> heap;
    double total = 0, total_err = 0;
    double h = (b - a) / initial_panels;
    for (int i = 0; i < initial_panels; ++i) {
        double pa = a + i * h, pb = a + (i + 1) * h;
        auto [v, e] = gk15(f, pa, pb);
        total += v;
        total_err += e;
        heap.push({e, pa, pb, v});
    }
    int rounds = 0;
    while (total_err > rel_tol * std::fabs(total) + 1e-300 && rounds < 200000) {
        Panel p = heap.top();
        heap.pop();
        double mid = 0.5 * (p.a + p.b);
        auto [v1, e1] = gk15(f, p.a, mid);
        auto [v2, e2] = gk15(f, mid, p.b);
        total += v1 + v2 - p.val;
        total_err += e1 + e2 - p.err;
        heap.push({e1, p.a, mid, v1});
        heap.push({e2, mid, p.b, v2});
        ++rounds;
    }
    return total;
}

double spectral_density(const SpectralParams& p, double omega) {
    double j = p.alpha * std::pow(omega, p.s) * std::pow(p.omega_0, 1.0 - p.s);
    if (std::isfinite(p.omega_c)) j *= std::exp(-omega / p.omega_c);
    return j;
}

// trailing part of the cutoff-free integral, int_Omega^inf, where coth ~ 1:
// 2 alpha w0^{1-s} int omega^{s-2} (1 - cos(omega t)) domega, the oscillatory
// piece by repeated integration by parts (Omega t >> 1)
double analytic_tail(const SpectralParams& p, double t, double Omega) {
    const double s = p.s;
    double pre = 2.0 * p.alpha * std::pow(p.omega_0, 1.0 - s);
    double smooth = std::pow(Omega, s - 1.0) / (1.0 - s);
    std::complex<double> it(0.0, t);
    std::complex<double> E(std::cos(Omega * t), std::sin(Omega * t));
    std::complex<double> term = -E * std::pow(Omega, s - 2.0) / it;
    std::complex<double> acc = term;
    for (int k = 1; k <= 6; ++k) {
        term *= -(s - 2.0 - (k - 1)) / (it * Omega);
        acc += term;
    }
    return pre * (smooth - acc.real());
}

double quadrature_lambda(const SpectralParams& p, double t) {
    if (t == 0) return 0.0;
    const bool tail = !std::isfinite(p.omega_c);
    double Omega;
    if (tail) {
        Omega = 1e4 / t;
        if (std::isfinite(p.beta)) Omega = std::max(Omega, 42.0 / p.beta);
    } else {
        Omega = 40.0 * p.omega_c;
    }
    auto f = [&](double u) {
        double omega = u * u;
        if (omega <= 0) return 0.0;
        double cothf = 1.0;
        if (std::isfinite(p.beta)) cothf += 2.0 / std::expm1(p.beta * omega);
        double x = 0.5 * omega * t;
        double sinc = std::fabs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
        return 2.0 * u * spectral_density(p, omega) * cothf * t * t * sinc * sinc;
    };
    int panels = static_cast<int>(std::min(3e5, Omega * t / M_PI)) + 32;
    double value = adaptive_integral(f, 0.0, std::sqrt(Omega), panels, 1e-10);
    if (tail) value += analytic_tail(p, t, Omega);
    return value;
}

}  // namespace

double decoherence_exponent(const SpectralParams& p, double t, EvalMode mode) {
    validate_spectral(p);
    if (t < 0) throw std::invalid_argument("decoherence_exponent: t < 0");
    return mode == EvalMode::kQuadrature ? quadrature_lambda(p, t)
                                         : closed_form_lambda(p, t);
}

bool closed_form_well_approximated(const SpectralParams& p) {
    if (p.s == 0.5 || p.s == 1.0)
        return !std::isfinite(p.beta) || p.beta * p.omega_c >= 100.0;
    return true;
}

double flip_probability(double lambda_t) {
    if (lambda_t < 0) throw std::invalid_argument("flip_probability: Lambda < 0");
    return -0.5 * std::expm1(-2.0 * lambda_t);
}

double induced_coupling(int dim, double r, double lambda, double v, double omega_c,
                        double R, double t) {
    if (dim != 2 && dim != 3)
        throw std::invalid_argument("induced_coupling: dim must be 2 or 3");
    if (r != -0.5 && r != 0.0 && r != 0.5)
        throw std::invalid_argument("induced_coupling: r must be -1/2, 0, or +1/2");
    if (!(R > 0) || !(t >= 0) || !(v > 0))
        throw std::invalid_argument("induced_coupling: need R > 0, t >= 0, v > 0");
    if (t == 0) return 0.0;
    const double vt = v * t;
    const bool singular_cone = (dim == 2 && r == 0.5) || (dim == 3 && r >= 0.0);
    if (singular_cone && std::fabs(vt - R) < 1e-6 * R)
        throw std::domain_error("induced_coupling: light-cone singularity");
    if (dim == 2) {
        const double pre = lambda * lambda / (2.0 * M_PI * M_PI * v * v);
        if (r == -0.5) {
            if (vt <= R) return 0.0;
            double sq = std::sqrt(vt * vt - R * R);
            return pre * (sq - vt * std::log((vt + sq) / R));
        }
        if (r == 0.0) return pre * (vt < R ? std::asin(vt / R) : M_PI / 2.0);
        return vt < R ? 0.0 : pre / std::sqrt(vt * vt - R * R);
    }
    if (r == -0.5)
        return vt <= R ? 0.0
                       : -lambda * lambda / (2.0 * M_PI * R * v * v) * (vt - R);
    if (r == 0.0)
        return lambda * lambda / (2.0 * M_PI * M_PI * R * v * v) *
               (std::log(std::fabs((R + vt) / (R - vt))) - 2.0 * vt / R);
    if (!(omega_c > 0) || !std::isfinite(omega_c))
        throw std::invalid_argument("induced_coupling: (3D, +1/2) needs a finite omega_c");
    double d = R * R - vt * vt;
    return 2.0 * lambda * lambda / (M_PI * M_PI * R * R * R * R * v * omega_c) *
           (2.0 * R * R - vt * vt) / (d * d) * vt * vt * vt;
}

double ferromagnet_coupling(double lambda, double diffusion, double R, double t) {
    if (!(R > 0) || !(diffusion > 0) || !(t >= 0))
        throw std::invalid_argument("ferromagnet_coupling: need R, D > 0 and t >= 0");
    if (t == 0) return 0.0;
    const double dt = diffusion * t;
    const double arg = R / std::sqrt(2.0 * M_PI * dt);
    const double phase = R * R / (4.0 * dt);
    double bracket = -2.0 * M_PI * dt -
                     M_PI * (R * R - 2.0 * dt) * fresnel_c(arg) +
                     M_PI * (R * R + 2.0 * dt) * fresnel_s(arg) +
                     std::sqrt(2.0 * M_PI * dt) * R * (std::cos(phase) + std::sin(phase));
    return lambda * lambda / (4.0 * M_PI * M_PI * diffusion * diffusion * R) * bracket;
}

double ohmic_2d_correlator(double lambda, double v, double R, double t) {
    if (!(R > 0)) throw std::invalid_argument("ohmic_2d_correlator: R must be > 0");
    const double vt = v * t;
    if (vt <= R) return 0.0;
    return -lambda * lambda / (M_PI * v * v) * std::acosh(vt / R);
}

// --- two-qubit channel ------------------------------------------------------

namespace {

// e^{-4 Lambda} cosh(4C) and sinh(4C), computed from one-sided exponentials
// so that large Lambda never meets an overflowing cosh
double decayed_cosh(double lambda_t, double corr) {
    return 0.5 * (std::exp(-4.0 * (lambda_t - corr)) +
                  std::exp(-4.0 * (lambda_t + corr)));
}
double decayed_sinh(double lambda_t, double corr) {
    return 0.5 * (std::exp(-4.0 * (lambda_t - corr)) -
                  std::exp(-4.0 * (lambda_t + corr)));
}

}  // namespace

double TwoQubitChannel::weight_identity() const {
    return 0.25 * (1.0 + decayed_cosh(lambda_t, corr)) +
           0.5 * std::exp(-2.0 * lambda_t) * std::cos(2.0 * coupling);
}
double TwoQubitChannel::weight_single() const {
    return 0.25 * (1.0 - decayed_cosh(lambda_t, corr));
}
double TwoQubitChannel::weight_double() const {
    return 0.25 * (1.0 + decayed_cosh(lambda_t, corr)) -
           0.5 * std::exp(-2.0 * lambda_t) * std::cos(2.0 * coupling);
}
double TwoQubitChannel::weight_coherent() const {
    return 0.5 * std::exp(-2.0 * lambda_t) * std::sin(2.0 * coupling);
}
double TwoQubitChannel::weight_cross() const {
    return 0.25 * decayed_sinh(lambda_t, corr);
}

TwoQubitChannel two_qubit_channel(double lambda_t, double corr, double coupling) {
    if (lambda_t < 0)
        throw std::invalid_argument("two_qubit_channel: Lambda must be >= 0");
    if (std::fabs(corr) > lambda_t * (1.0 + 1e-12) + 1e-15)
        throw std::invalid_argument("two_qubit_channel: requires |C| <= Lambda");
    return {lambda_t, corr, coupling};
}

Eigen::Matrix4cd apply_channel(const TwoQubitChannel& ch, const Eigen::Matrix4cd& rho) {
    using M = Eigen::Matrix4cd;
    // basis |q_i q_j>: X on qubit i swaps the upper and lower block, X on
    // qubit j swaps within each block
    static const M xi = [] {
        M m = M::Zero();
        m(0, 2) = m(2, 0) = m(1, 3) = m(3, 1) = 1;
        return m;
    }();
    static const M xj = [] {
        M m = M::Zero();
        m(0, 1) = m(1, 0) = m(2, 3) = m(3, 2) = 1;
        return m;
    }();
    static const M xx = xi * xj;
    const std::complex<double> i_unit(0.0, 1.0);
    M out = ch.weight_identity() * rho;
    out += ch.weight_single() * (xi * rho * xi + xj * rho * xj);
    out += ch.weight_double() * (xx * rho * xx);
    out += -i_unit * ch.weight_coherent() * (xx * rho - rho * xx);
    out += ch.weight_cross() * (xx * rho + rho * xx - xi * rho * xj - xj * rho * xi);
    return out;
}

double ebit_fidelity(double lambda_t, double corr, double coupling) {
    return 0.25 * (1.0 + decayed_cosh(lambda_t, corr)) +
           0.5 * std::exp(-2.0 * lambda_t) * std::fabs(std::sin(2.0 * coupling));
}

double combined_flip_probability(double p_direct, std::span<const double> couplings) {
    if (!(p_direct >= 0.0 && p_direct <= 1.0))
        throw std::invalid_argument("combined_flip_probability: p_d out of range");
    double prod = 1.0;
    for (double j : couplings) prod *= std::cos(2.0 * j);
    return 0.5 - 0.5 * (1.0 - 2.0 * p_direct) * prod;
}

double combined_flip_probability_recursive(double p_direct,
                                           std::span<const double> couplings) {
    if (!(p_direct >= 0.0 && p_direct <= 1.0))
        throw std::invalid_argument("combined_flip_probability: p_d out of range");
    double p = p_direct;
    for (double j : couplings) {
        double s = std::sin(j), c = std::cos(j);
        p = c * c * p + s * s * (1.0 - p);
    }
    return p;
}

// --- budget and cycle times --------------------------------------------------

namespace {

void require_ohmic_2d(const BathParams& bath, const char* who) {
    if (bath.dim != 2 || bath.r != 0.0)
        throw std::invalid_argument(std::string(who) +
                                    ": derived for the 2D Ohmic case (dim=2, r=0)");
    if (!(bath.lambda > 0) || !(bath.v > 0) || !(bath.omega_c > 0))
        throw std::invalid_argument(std::string(who) + ": need lambda, v, omega_c > 0");
}

// log[(beta omega_c / pi) sinh(pi t / beta)], with the T = 0 limit log(omega_c t)
double log_direct_bracket(double t, double beta, double omega_c) {
    if (!std::isfinite(beta)) return std::log(omega_c * t);
    double x = M_PI * t / beta;
    return std::log(beta * omega_c / M_PI) +
           (x < 1e-3 ? std::log(x) + std::log1p(x * x / 6.0)
                     : x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0));
}

}  // namespace

ErrorBudget error_budget(double t, double L, const BathParams& bath) {
    require_ohmic_2d(bath, "error_budget");
    if (t < 0 || !(L > 0)) throw std::invalid_argument("error_budget: bad t or L");
    ErrorBudget out;
    out.direct_term_valid = t * bath.omega_c >= 1.0;
    if (t == 0) return out;
    const double alpha = bath.alpha();
    out.direct = 0.5 - 0.5 * std::exp(-4.0 * alpha *
                                      log_direct_bracket(t, bath.beta(), bath.omega_c));
    const double vt = bath.v * t;
    out.light_cone = std::min(L / 2.0, vt);
    const double l4 = std::pow(bath.lambda, 4);
    if (vt < L / 2.0)
        out.superluminal = l4 * t * t / (2.0 * M_PI * M_PI * M_PI * bath.v * bath.v) *
                           std::log(L / (2.0 * vt));
    out.subluminal = l4 / (16.0 * M_PI * std::pow(bath.v, 4)) * out.light_cone *
                     out.light_cone;
    return out;
}

QecTimes qec_cycle_times(double L, const BathParams& bath, double p_tilde_c) {
    require_ohmic_2d(bath, "qec_cycle_times");
    if (!(p_tilde_c > 0 && p_tilde_c < 0.5))
        throw std::invalid_argument("qec_cycle_times: p_tilde_c must be in (0, 1/2)");
    if (!(L > 0)) throw std::invalid_argument("qec_cycle_times: L must be > 0");
    QecTimes out;
    const double alpha = bath.alpha();
    const double beta = bath.beta();
    const double growth = -std::log1p(-2.0 * p_tilde_c) / (4.0 * alpha);
    if (std::isfinite(beta)) {
        // tau_d = (beta/pi) asinh[(pi / beta omega_c) (1 - 2 p~c)^{-1/4 alpha}]
        double la = std::log(M_PI / (beta * bath.omega_c)) + growth;
        double as = la > 25.0 ? la + std::log(2.0) : std::asinh(std::exp(la));
        out.tau_d = beta / M_PI * as;
    } else {
        out.tau_d = std::exp(growth) / bath.omega_c;
    }
    const double scale = bath.v * bath.v / (bath.lambda * bath.lambda);
    const double root = std::sqrt(M_PI * p_tilde_c);
    out.cutoff_sub = 8.0 * root * scale;
    out.cutoff_super = out.cutoff_sub * std::exp(M_PI * M_PI / 8.0);
    if (L > out.cutoff_sub)
        out.tau_sub = 4.0 * root * bath.v / (bath.lambda * bath.lambda);
    if (L > out.cutoff_super) {
        double z = -16.0 * std::pow(M_PI, 3) * p_tilde_c *
                   std::pow(bath.v, 4) / (std::pow(bath.lambda, 4) * L * L);
        double w = lambert_w_m1(z);
        out.tau_super = 2.0 * M_PI * root * bath.v /
                        (bath.lambda * bath.lambda) / std::sqrt(-w);
    }
    out.regime = L < out.cutoff_sub      ? BreakdownRegime::kDirect
                 : L < out.cutoff_super  ? BreakdownRegime::kDirectOrSub
                                         : BreakdownRegime::kDirectOrSuper;
    return out;
}

double entropic_boundary(double p1) {
    const double target = (1.0 - 2.0 * binary_entropy(p1)) / 4.0;
    if (!(target > 0))
        throw std::invalid_argument("entropic_boundary: requires 2 h(p1) < 1");
    double lo = 0.0, hi = 0.5;
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        (binary_entropy(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace qecbath
