// core.hpp — Bloch-vector <-> density-matrix transform, thermal equilibrium,
// coherence measures, and physicality validation.

#pragma once

#include <vector>

#include "bloch/types.hpp"

namespace bloch {

// Change of variables R1 = 2 Im[rho12], R2 = 2 Re[rho12], R3 = rho11 - rho22.
// Throws InvalidDensityError if trace or positivity invariants are violated
// beyond the slack.
BlochVector bloch_from_density(const DensityMatrix& rho,
                               double slack = kDefaultSlack);

// Exact inverse of bloch_from_density (rotating frame, no drive-phase
// factor). Throws UnphysicalStateError if |R| > 1 + slack.
DensityMatrix density_from_bloch(const BlochVector& r,
                                 double slack = kDefaultSlack);

// Thermal equilibrium population difference (1 - e^-x)/(1 + e^-x) as a
// function of x = hbar*omega21 / (kB*T) >= 0. Monotone increasing, range
// [0, 1); x = +inf (T -> 0) gives exactly 1. Throws std::domain_error for
// x < 0: equilibrium population inversion is out of scope.
double thermal_population_difference(double x);

// Purity chi = Tr[rho^2] = 1/2 + |R|^2/2; 1/2 for the maximally mixed state,
// 1 for pure states.
double purity(const BlochVector& r);

// Interference contribution zeta = |rho12|^2 = (R1^2 + R2^2)/4; the
// energy-basis coherence measure, in [0, 1/4].
double interference(const BlochVector& r);

// Report-style physicality check; never throws. Callers decide whether to
// proceed, since the equations stay mathematically well defined outside the
// physical region.
struct PhysicalityReport {
    bool rates_positive = true;       // T1 > 0 and T2 > 0
    bool thermal_in_range = true;     // 0 <= R3_tilde <= 1
    bool positivity_condition = true; // 2*T1 >= T2
    std::vector<std::string> violations;

    bool physical() const { return violations.empty(); }
};

PhysicalityReport validate_physicality(double t1, double t2, double r3_tilde);
PhysicalityReport validate_physicality(const SystemParams& p);

}  // namespace bloch
