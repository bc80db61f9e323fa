// analytic.hpp — closed-form on-resonance solution of the optical Bloch
// equations via Laplace-transform coefficients, asymptotic equilibrium,
// damping-regime classification, and the strong-field purity special case.

#pragma once

#include <complex>
#include <utility>

#include "bloch/types.hpp"

namespace bloch::analytic {

// Damping regimes of the coupled R1/R3 motion, split by the sign of the
// discriminant beta^2 = ((Gamma2 - Gamma1)^2 - 4 Omega^2)/4:
//   overdamped  2*Omega < |Gamma2 - Gamma1| : two real decay rates
//   underdamped 2*Omega > |Gamma2 - Gamma1| : oscillatory decay
//   critical    coalesced roots, decay envelopes linear in t
enum class DampingRegime { overdamped, critical, underdamped };

const char* to_string(DampingRegime regime);

// Classification with a relative tolerance band around the critical locus
// 2*Omega = |Gamma2 - Gamma1|. Throws OffResonanceError if Delta != 0.
DampingRegime classify_regime(const SystemParams& p, double rel_tol = 1e-9);

// Stable cosh/sinhc pair evaluated from the discriminant:
//   cosh_term  = cosh(beta t)            (= cos(|beta| t) for beta^2 < 0)
//   sinhc_term = sinh(beta t)/(beta t)   (= sin(|beta| t)/(|beta| t))
// Near-degenerate arguments |beta^2 t^2| < 1e-8 are evaluated by a truncated
// series in beta^2 t^2 (through the 8th-order term, relative error < 1e-16),
// which covers both signs and the critical limit in one expression.
struct CoshSinhc {
    double cosh_term;
    double sinhc_term;
};

CoshSinhc cosh_sinhc(double beta_sq, double t);

// Coefficients of the closed-form solution in the degeneracy-stable form
//   R3(t) = D3 + e^{-alpha t} [P3 C(beta t) + M3 t S(beta t)]
//   R1(t) = D1 + e^{-alpha t} [P1 C(beta t) + M1 t S(beta t)]
//   R2(t) = R2(0) e^{-Gamma2 t}
// The raw partial-fraction amplitudes B, C individually diverge as beta -> 0
// (their denominators are ±2 beta); the P = B + C and M = beta (C - B)
// combinations stay finite in every regime.
struct SolutionCoefficients {
    double alpha;    // (Gamma1 + Gamma2)/2
    double beta_sq;  // ((Gamma2 - Gamma1)^2 - 4 Omega^2)/4, any sign
    std::complex<double> s_plus;   // -alpha + beta
    std::complex<double> s_minus;  // -alpha - beta
    double d1, d3;   // asymptotic offsets
    double p1, p3;   // cosh amplitudes, fixed by the value at t = 0
    double m1, m3;   // t*sinhc amplitudes, fixed by the derivative at t = 0
    double lambda;   // Omega R1(0) + Gamma2 R3(0) + Gamma1 R3_tilde
    bool decoupled;  // small-field branch: exact field-free solutions
};

// Builds the coefficients for initial state r0. Throws OffResonanceError if
// Delta != 0. For Omega < 1e-12 * max(Gamma1, Gamma2) the decoupled branch
// is flagged and evaluate() uses the exact field-free solutions.
SolutionCoefficients solve_coefficients(const SystemParams& p,
                                        const BlochVector& r0);

// Evaluates the closed-form solution at t >= 0 (throws std::domain_error for
// negative t). Coefficients must come from the same (p, r0).
BlochVector evaluate(const SolutionCoefficients& c, const SystemParams& p,
                     const BlochVector& r0, double t);

// Time derivative of the closed-form solution; used by the derivative
// consistency checks against the ODE right-hand side.
BlochVector evaluate_derivative(const SolutionCoefficients& c,
                                const SystemParams& p, const BlochVector& r0,
                                double t);

// Asymptotic state: R_eq = (D1, 0, D3) and the corresponding density matrix.
// The reported equilibrium coherence carries the lab-frame drive-phase
// factor e^{i(2 phi - pi/2)}; with phi = 0 it reduces to the rotating-frame
// value (R2 + i R1)/2. Throws OffResonanceError if Delta != 0.
struct Equilibrium {
    BlochVector bloch;
    DensityMatrix rho;
};

Equilibrium equilibrium_state(const SystemParams& p);

// Residual of the identity rho12_eq = -(1/2) T2 Omega e^{i(2 phi + pi/2)}
// (rho11_eq - rho22_eq); zero (to rounding) for all physical parameters.
double equilibrium_relation_residual(const SystemParams& p);

// Rabi frequency maximizing the asymptotic coherence, Omega_r = 1/sqrt(T1 T2),
// and the maximum |rho12_eq| = sqrt(T2/T1) * R3_tilde / 4 attained there.
struct OptimalRabi {
    double omega_r;
    double max_coherence;
};

OptimalRabi optimal_rabi(double t1, double t2, double r3_tilde);

// Closed-form purity for the system prepared entirely in one level,
// R0 = (0, 0, 1), at infinite temperature:
//   chi(t) = 1/2 + e^{-2 alpha t} [1 + ((Gamma2-Gamma1)^2/2) t^2 S^2
//                                  + (Gamma2-Gamma1) t S C] / 2.
// In the underdamped regime this is the trigonometric strong-field
// expression with oscillation frequency |beta|; elsewhere it is the same
// function analytically continued. Approaches 1/2 + e^{-2 alpha t}/2 as
// Omega -> infinity. Throws OffResonanceError if Delta != 0.
double purity_excited_initial(const SystemParams& p, double t);

}  // namespace bloch::analytic
