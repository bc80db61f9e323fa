// types.hpp — domain types for the driven, damped two-level system:
// relaxation/drive/thermal parameters, Bloch vector, reduced density matrix.

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace bloch {

// Default slack for floating-point state invariants (|R| <= 1 + eps, trace,
// positive semidefiniteness). Overridable per call site.
inline constexpr double kDefaultSlack = 1e-12;

// ---------------------------------------------------------------------------
// Error categories surfaced by the library.

struct InvalidDensityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnphysicalStateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown by closed-form routines when called with a detuned drive; the
// analytic solution exists only on resonance.
struct OffResonanceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularSystemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Parameters

// Phenomenological relaxation times. T1 governs population relaxation at
// rate Gamma1 = 1/T1, T2 decoherence at rate Gamma2 = 1/T2. Time units are
// arbitrary but must be used consistently everywhere.
struct RelaxationParams {
    double t1;
    double t2;

    RelaxationParams(double t1_, double t2_) : t1(t1_), t2(t2_) {
        if (!(t1 > 0.0) || !(t2 > 0.0)) {
            throw std::invalid_argument(
                "RelaxationParams: T1 and T2 must be positive, got T1=" +
                std::to_string(t1_) + " T2=" + std::to_string(t2_));
        }
    }

    double gamma1() const { return 1.0 / t1; }
    double gamma2() const { return 1.0 / t2; }

    // Complete-positivity region 2*T1 >= T2. The dynamics is well defined
    // outside it, but purity may exceed one.
    bool physical() const { return 2.0 * t1 >= t2; }
};

// Continuous-wave drive: Rabi frequency Omega >= 0, detuning Delta (any
// sign), field phase phi. Negative Omega is rejected rather than folded into
// a sign flip of R1: all observables are invariant under (Omega, R1) ->
// (-Omega, -R1), so admitting both signs only creates ambiguity.
struct DriveParams {
    double omega;
    double delta = 0.0;
    double phi = 0.0;

    explicit DriveParams(double omega_, double delta_ = 0.0, double phi_ = 0.0)
        : omega(omega_), delta(delta_), phi(phi_) {
        if (!(omega >= 0.0)) {
            throw std::invalid_argument(
                "DriveParams: Omega must be >= 0, got " + std::to_string(omega_));
        }
    }

    bool on_resonance() const { return delta == 0.0; }
};

// Thermal equilibrium population difference the bath relaxes R3 toward.
// 0 (infinite temperature) .. 1 (zero temperature). R3_tilde is the primary
// input; from_temperature_ratio is a convenience for callers holding the
// dimensionless ratio hbar*omega21 / (kB*T) instead.
struct ThermalParams {
    double r3_tilde;

    explicit ThermalParams(double r3_tilde_) : r3_tilde(r3_tilde_) {
        if (!(r3_tilde >= 0.0 && r3_tilde <= 1.0)) {
            throw std::invalid_argument(
                "ThermalParams: R3_tilde must lie in [0, 1], got " +
                std::to_string(r3_tilde_));
        }
    }

    static ThermalParams from_temperature_ratio(double x);
};

struct SystemParams {
    RelaxationParams relaxation;
    DriveParams drive;
    ThermalParams thermal;

    SystemParams(RelaxationParams r, DriveParams d, ThermalParams th)
        : relaxation(r), drive(d), thermal(th) {}

    double t1() const { return relaxation.t1; }
    double t2() const { return relaxation.t2; }
    double gamma1() const { return relaxation.gamma1(); }
    double gamma2() const { return relaxation.gamma2(); }
    double omega() const { return drive.omega; }
    double delta() const { return drive.delta; }
    double phi() const { return drive.phi; }
    double r3_tilde() const { return thermal.r3_tilde; }
};

// Convenience factory used throughout tests and the CLI.
inline SystemParams make_params(double t1, double t2, double omega,
                                double r3_tilde, double delta = 0.0,
                                double phi = 0.0) {
    return SystemParams(RelaxationParams(t1, t2),
                        DriveParams(omega, delta, phi),
                        ThermalParams(r3_tilde));
}

// ---------------------------------------------------------------------------
// States

// Rotating-frame Bloch vector: R1, R2 are the imaginary and real parts of
// twice the coherence, R3 the population difference rho11 - rho22.
// Physical states satisfy |R| <= 1 (up to slack).
struct BlochVector {
    double r1 = 0.0;
    double r2 = 0.0;
    double r3 = 0.0;

    double norm_sq() const { return r1 * r1 + r2 * r2 + r3 * r3; }
    double norm() const { return std::sqrt(norm_sq()); }
};

// Reduced 2x2 density matrix; rho21 is implied as conj(rho12).
struct DensityMatrix {
    double rho11 = 0.5;
    double rho22 = 0.5;
    std::complex<double> rho12{0.0, 0.0};

    std::complex<double> rho21() const { return std::conj(rho12); }
    double trace() const { return rho11 + rho22; }
};

}  // namespace bloch
