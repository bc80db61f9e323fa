// numeric.hpp — independent brute-force oracle: fixed-step RK4 integration of
// the full Bloch equations (detuning included) with a mandatory step-halving
// self-check, plus a direct steady-state linear solve.

#pragma once

#include <cstddef>
#include <vector>

#include "bloch/types.hpp"

namespace bloch::numeric {

struct IntegratorConfig {
    double dt;                        // fixed step, > 0
    double t_max;                     // horizon, >= 0 (0 = single sample)
    double convergence_factor = 2.0;  // step ratio for the self-check run
    double tolerance = 1e-8;          // allowed dt-vs-dt/f discrepancy
};

struct Trajectory {
    std::vector<double> times;        // 0, dt, 2 dt, ...
    std::vector<BlochVector> states;
    SystemParams params;

    std::size_t size() const { return times.size(); }
    const BlochVector& back() const { return states.back(); }
};

// Right-hand side of the optical Bloch equations:
//   dR1/dt = -Gamma2 R1 + Delta R2 - Omega R3
//   dR2/dt = -Delta  R1 - Gamma2 R2
//   dR3/dt =  Omega  R1 - Gamma1 (R3 - R3_tilde)
// The Omega-coupling signs here are the ones consistent with the analytic
// module's equilibrium (R1_eq < 0 for positive drive); flipping both is
// equivalent to R1 -> -R1 and leaves every observable unchanged.
BlochVector bloch_rhs(const SystemParams& p, const BlochVector& r);

// Spacing that resolves the fastest timescale with >= 100 points:
// min(T1, T2, 1/max(Omega, |Delta|, 1)) / 100.
double default_time_step(const SystemParams& p);

// Classical RK4 on a fixed grid. The trajectory is re-integrated at
// dt / convergence_factor and compared at shared sample points; a mismatch
// above cfg.tolerance throws NonConvergenceError.
Trajectory integrate(const SystemParams& p, const BlochVector& r0,
                     const IntegratorConfig& cfg);

// Steady state from the 3x3 linear system bloch_rhs = 0, solved by direct
// elimination with partial pivoting (valid for any detuning). Unique for
// positive rates; SingularSystemError guards the impossible pivot breakdown.
BlochVector steady_state(const SystemParams& p);

}  // namespace bloch::numeric
