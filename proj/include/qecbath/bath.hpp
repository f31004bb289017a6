#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>

namespace qecbath {

// Analytics for qubits coupled to a bath of freely propagating bosonic
// modes with linear dispersion omega = v|k| and coupling |k|^r: single-qubit
// decoherence, bath-mediated two-qubit couplings and correlators, the exact
// two-qubit channel, error budgets, and maximal QEC cycle times.
// Units: hbar = k_B = 1, lattice constant 1.

struct BathParams {
    double lambda = 0;       // coupling strength
    double v = 1;            // mode velocity
    double temperature = 0;  // T; beta = 1/T, infinite at T = 0
    double omega_c = 1;      // high-frequency cutoff
    double omega_0 = 1;      // characteristic frequency
    int dim = 2;             // spatial dimension of the bath, 2 or 3
    double r = 0;            // coupling exponent, -1/2, 0, or +1/2

    double beta() const;
    // dimensionless strength lambda^2 / (2 pi v^2); the (dim=2, r=0) value
    double alpha() const;
    double spectral_exponent() const { return dim + 2 * r - 1; }
};

// Spectral density J(omega) = alpha omega^s omega_0^{1-s} e^{-omega/omega_c}.
// beta and omega_c may be infinity (omega_c only for s < 1, where the
// cutoff-free integral converges).
struct SpectralParams {
    double s = 1;
    double alpha = 0;
    double omega_0 = 1;
    double omega_c = 1;
    double beta = 1;
};

enum class EvalMode { kClosedForm, kQuadrature };

// Decoherence exponent
//   Lambda(t) = int_0^inf J(w) coth(beta w / 2) sin^2(w t / 2) / (w/2)^2 dw.
// Closed forms exist for s in {0 (beta = inf only), 1/2, 1, 2, 3};
// kQuadrature evaluates the integral directly by adaptive Gauss-Kronrod
// (relative tolerance ~1e-9) and serves as the oracle for the closed forms.
double decoherence_exponent(const SpectralParams& p, double t,
                            EvalMode mode = EvalMode::kClosedForm);

// The s = 1/2 and s = 1 closed forms assume beta omega_c >> 1; false when
// that assumption is violated (threshold 100).
bool closed_form_well_approximated(const SpectralParams& p);

// p_d = (1 - e^{-2 Lambda}) / 2, in [0, 1/2)
double flip_probability(double lambda_t);

// Bath-mediated pair coupling J_ij(t) for linear dispersion, closed forms
// per (dim, r). Three kinds diverge on the light cone vt = R:
// (2D, +1/2), (3D, 0), (3D, +1/2) reject |vt - R| < 1e-6 R. omega_c enters
// only for (3D, +1/2).
double induced_coupling(int dim, double r, double lambda, double v,
                        double omega_c, double R, double t);

// Pair coupling through an ordered ferromagnet (parabolic dispersion with
// diffusion constant D); built from the Fresnel integrals. Grows like
// -lambda^2 t / (2 pi D R) once R << sqrt(D t).
double ferromagnet_coupling(double lambda, double diffusion, double R, double t);

// Zero-temperature cross correlator for the 2D Ohmic bath:
//   C_ij(t) = -(lambda^2 / pi v^2) theta(vt - R) arccosh(vt / R).
double ohmic_2d_correlator(double lambda, double v, double R, double t);

// Exact two-qubit map for qubits i, j jointly coupled to the bath,
// parameterized by Lambda = Lambda(t), C = C_ij(t), J = J_ij(t).
// Output density matrix:
//   id * rho + single * (X_i rho X_i + X_j rho X_j) + dbl * XX rho XX
//   - i coherent (XX rho - rho XX) + cross (XX rho + rho XX - X_i rho X_j
//   - X_j rho X_i)
struct TwoQubitChannel {
    double lambda_t = 0, corr = 0, coupling = 0;

    double weight_identity() const;
    double weight_single() const;
    double weight_double() const;
    double weight_coherent() const;
    double weight_cross() const;
};

// requires Lambda >= 0 and |C| <= Lambda (Cauchy-Schwarz on the correlators)
TwoQubitChannel two_qubit_channel(double lambda_t, double corr, double coupling);

Eigen::Matrix4cd apply_channel(const TwoQubitChannel& ch, const Eigen::Matrix4cd& rho);

// Fidelity of the best maximally entangled state reachable from |00> at
// this (Lambda, C, J):
//   F = (1 + e^{-4 Lambda} cosh 4C) / 4 + e^{-2 Lambda} |sin 2J| / 2.
double ebit_fidelity(double lambda_t, double corr, double coupling);

// Net bit-flip probability of one qubit given its direct flip probability
// p_d and the couplings J to every other qubit:
//   p_x = 1/2 - (1/2)(1 - 2 p_d) prod_i cos(2 J_i).
double combined_flip_probability(double p_direct, std::span<const double> couplings);

// Same via the pair-by-pair recursion p' = cos^2(J) p + sin^2(J) (1 - p).
double combined_flip_probability_recursive(double p_direct,
                                           std::span<const double> couplings);

// Error-rate budget for the 2D Ohmic bath at time t on a code of linear
// size L, split by mechanism. With m(t) = min(L/2, vt):
//   direct       = 1/2 - (1/2) [(beta omega_c / pi) sinh(pi t / beta)]^{-4 alpha}
//   superluminal = (lambda^4 t^2 / 2 pi^3 v^2) log(L / 2 m(t))
//   subluminal   = (lambda^4 / 16 pi v^4) m(t)^2
struct ErrorBudget {
    double direct = 0;
    double superluminal = 0;
    double subluminal = 0;
    double light_cone = 0;  // m(t)
    bool direct_term_valid = true;  // requires t >= 1/omega_c

    double total() const { return direct + superluminal + subluminal; }
};

ErrorBudget error_budget(double t, double L, const BathParams& bath);

enum class BreakdownRegime { kDirect, kDirectOrSub, kDirectOrSuper };

// Times at which each budget term reaches the critical rate p_tilde_c, and
// which mechanism can dominate at this code size. The mediated terms only
// reach criticality above the size cutoffs
//   cutoff_sub   = 8 sqrt(pi p~c) v^2 / lambda^2
//   cutoff_super = 8 e^{pi^2/8} sqrt(pi p~c) v^2 / lambda^2.
struct QecTimes {
    double tau_d = 0;
    std::optional<double> tau_sub;
    std::optional<double> tau_super;
    BreakdownRegime regime = BreakdownRegime::kDirect;
    double cutoff_sub = 0;
    double cutoff_super = 0;
};

QecTimes qec_cycle_times(double L, const BathParams& bath, double p_tilde_c = 0.109);

// The p2 < 1/2 solving 2 h(p1) + 4 h(p2) = 1, the line where the stabilizer
// measurements can no longer supply enough information about the noise.
// Requires 2 h(p1) < 1.
double entropic_boundary(double p1);

}  // namespace qecbath
