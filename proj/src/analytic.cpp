#include "bloch/analytic.hpp"

#include <algorithm>
#include <cmath>

namespace bloch::analytic {

namespace {

void require_on_resonance(const SystemParams& p, const char* who) {
    if (!p.drive.on_resonance()) {
        throw OffResonanceError(std::string(who) +
                                ": closed forms exist only for Delta = 0 "
                                "(use the numeric integrator off resonance)");
    }
}

// Below this the drive is numerically indistinguishable from 0 and the
// field-free decoupled solutions are exact.
bool small_field(const SystemParams& p) {
    return p.omega() < 1e-12 * std::max(p.gamma1(), p.gamma2());
}

// e^{-alpha t} (P C(beta t) + M t S(beta t)) and its time derivative. For
// strongly overdamped arguments (beta t > 30) cosh alone would overflow
// long before the damped product does, so the mode is rewritten as the
// explicit pair of decaying exponentials e^{s± t}; beta < alpha always
// holds since alpha^2 - beta^2 = Gamma1 Gamma2 + Omega^2 > 0.
struct DampedMode {
    double value;
    double derivative;
};

DampedMode damped_mode(double alpha, double beta_sq, double p, double m,
                       double t) {
    if (beta_sq > 0.0 && beta_sq * t * t > 900.0) {
        const double beta = std::sqrt(beta_sq);
        const double slow = 0.5 * (p + m / beta);   // e^{(beta-alpha) t}
        const double fast = 0.5 * (p - m / beta);   // e^{-(alpha+beta) t}
        const double es = std::exp((beta - alpha) * t);
        const double ef = std::exp(-(alpha + beta) * t);
        return {slow * es + fast * ef,
                slow * (beta - alpha) * es - fast * (alpha + beta) * ef};
    }
    const auto [cc, ss] = cosh_sinhc(beta_sq, t);
    const double env = std::exp(-alpha * t);
    return {env * (p * cc + m * t * ss),
            env * (-alpha * (p * cc + m * t * ss) + p * beta_sq * t * ss +
                   m * cc)};
}

}  // namespace

const char* to_string(DampingRegime regime) {
    switch (regime) {
        case DampingRegime::overdamped: return "overdamped";
        case DampingRegime::critical: return "critical";
        case DampingRegime::underdamped: return "underdamped";
    }
    return "unknown";
}

DampingRegime classify_regime(const SystemParams& p, double rel_tol) {
    require_on_resonance(p, "classify_regime");
    const double gap = std::abs(p.gamma2() - p.gamma1());
    const double two_omega = 2.0 * p.omega();
    if (two_omega < gap * (1.0 - rel_tol)) return DampingRegime::overdamped;
    if (two_omega > gap * (1.0 + rel_tol)) return DampingRegime::underdamped;
    return DampingRegime::critical;
}

CoshSinhc cosh_sinhc(double beta_sq, double t) {
    const double z = beta_sq * t * t;  // (beta t)^2, sign carries the regime
    if (std::abs(z) < 1e-8) {
        // Truncated series in z; both functions are entire in z, so one
        // expression serves the hyperbolic, trigonometric, and critical
        // cases. |z| < 1e-8 keeps the dropped z^5 term below 1e-16 relative.
        const double c = 1.0 + z * (1.0 / 2 + z * (1.0 / 24 + z * (1.0 / 720 + z / 40320)));
        const double s = 1.0 + z * (1.0 / 6 + z * (1.0 / 120 + z * (1.0 / 5040 + z / 362880)));
        return {c, s};
    }
    if (beta_sq > 0.0) {
        const double x = std::sqrt(beta_sq) * t;
        return {std::cosh(x), std::sinh(x) / x};
    }
    const double x = std::sqrt(-beta_sq) * t;
    return {std::cos(x), std::sin(x) / x};
}

SolutionCoefficients solve_coefficients(const SystemParams& p,
                                        const BlochVector& r0) {
    require_on_resonance(p, "solve_coefficients");
    const double g1 = p.gamma1();
    const double g2 = p.gamma2();
    const double omega = p.omega();
    const double r3t = p.r3_tilde();

    SolutionCoefficients c{};
    c.alpha = 0.5 * (g1 + g2);
    const double gap = g2 - g1;
    c.beta_sq = 0.25 * (gap * gap - 4.0 * omega * omega);

    const std::complex<double> beta =
        std::sqrt(std::complex<double>(c.beta_sq, 0.0));
    c.s_plus = -c.alpha + beta;
    c.s_minus = -c.alpha - beta;

    // Gamma1*Gamma2 + Omega^2 > 0 always holds for positive rates; the
    // D coefficients need no singularity guard.
    const double denom = g1 * g2 + omega * omega;
    c.d3 = g1 * g2 * r3t / denom;
    c.d1 = -g1 * omega * r3t / denom;

    c.p3 = r0.r3 - c.d3;
    c.p1 = r0.r1 - c.d1;

    c.lambda = omega * r0.r1 + g2 * r0.r3 + g1 * r3t;
    // Stable limits of beta*(C - B); fixed by matching dR/dt at t = 0 to the
    // equations of motion, free of division by beta or Omega.
    c.m3 = c.lambda - c.alpha * (r0.r3 + c.d3);
    c.m1 = (c.alpha - g2) * r0.r1 - c.alpha * c.d1 - omega * r0.r3;

    c.decoupled = small_field(p);
    return c;
}

BlochVector evaluate(const SolutionCoefficients& c, const SystemParams& p,
                     const BlochVector& r0, double t) {
    if (t < 0.0) {
        throw std::domain_error("evaluate: time must be >= 0");
    }
    const double g1 = p.gamma1();
    const double g2 = p.gamma2();

    BlochVector r;
    r.r2 = r0.r2 * std::exp(-g2 * t);

    if (c.decoupled) {
        // Field-free limit: coherences decay at Gamma2, population relaxes
        // to the thermal value at Gamma1.
        r.r1 = r0.r1 * std::exp(-g2 * t);
        r.r3 = p.r3_tilde() + (r0.r3 - p.r3_tilde()) * std::exp(-g1 * t);
        return r;
    }

    r.r1 = c.d1 + damped_mode(c.alpha, c.beta_sq, c.p1, c.m1, t).value;
    r.r3 = c.d3 + damped_mode(c.alpha, c.beta_sq, c.p3, c.m3, t).value;
    return r;
}

BlochVector evaluate_derivative(const SolutionCoefficients& c,
                                const SystemParams& p, const BlochVector& r0,
                                double t) {
    if (t < 0.0) {
        throw std::domain_error("evaluate_derivative: time must be >= 0");
    }
    const double g1 = p.gamma1();
    const double g2 = p.gamma2();

    BlochVector dr;
    dr.r2 = -g2 * r0.r2 * std::exp(-g2 * t);

    if (c.decoupled) {
        dr.r1 = -g2 * r0.r1 * std::exp(-g2 * t);
        dr.r3 = -g1 * (r0.r3 - p.r3_tilde()) * std::exp(-g1 * t);
        return dr;
    }

    // d/dt cosh(beta t) = beta_sq * t * sinhc, d/dt [t sinhc] = cosh.
    dr.r1 = damped_mode(c.alpha, c.beta_sq, c.p1, c.m1, t).derivative;
    dr.r3 = damped_mode(c.alpha, c.beta_sq, c.p3, c.m3, t).derivative;
    return dr;
}

Equilibrium equilibrium_state(const SystemParams& p) {
    require_on_resonance(p, "equilibrium_state");
    const double g1 = p.gamma1();
    const double g2 = p.gamma2();
    const double omega = p.omega();
    const double r3t = p.r3_tilde();
    const double denom = g1 * g2 + omega * omega;

    Equilibrium eq;
    eq.bloch = {-g1 * omega * r3t / denom, 0.0, g1 * g2 * r3t / denom};

    eq.rho.rho11 = 0.5 * (1.0 + eq.bloch.r3);
    eq.rho.rho22 = 0.5 * (1.0 - eq.bloch.r3);
    // Lab-frame coherence with the drive-phase factor e^{i(2 phi - pi/2)};
    // |rho12| is phase independent.
    const double t1t2om2 = p.t1() * p.t2() * omega * omega;
    const double magnitude = 0.5 * p.t2() * omega * r3t / (1.0 + t1t2om2);
    eq.rho.rho12 = magnitude * std::polar(1.0, 2.0 * p.phi() - M_PI / 2.0);
    return eq;
}

double equilibrium_relation_residual(const SystemParams& p) {
    const Equilibrium eq = equilibrium_state(p);
    const std::complex<double> rhs =
        0.5 * p.t2() * p.omega() * std::polar(1.0, 2.0 * p.phi() + M_PI / 2.0) *
        (eq.rho.rho11 - eq.rho.rho22);
    return std::abs(eq.rho.rho12 + rhs);
}

OptimalRabi optimal_rabi(double t1, double t2, double r3_tilde) {
    if (!(t1 > 0.0) || !(t2 > 0.0)) {
        throw std::invalid_argument("optimal_rabi: T1 and T2 must be positive");
    }
    return {1.0 / std::sqrt(t1 * t2), std::sqrt(t2 / t1) * r3_tilde / 4.0};
}

double purity_excited_initial(const SystemParams& p, double t) {
    require_on_resonance(p, "purity_excited_initial");
    if (t < 0.0) {
        throw std::domain_error("purity_excited_initial: time must be >= 0");
    }
    const double g1 = p.gamma1();
    const double g2 = p.gamma2();
    const double alpha = 0.5 * (g1 + g2);
    const double gap = g2 - g1;
    const double omega = p.omega();
    const double beta_sq = 0.25 * (gap * gap - 4.0 * omega * omega);

    // chi = 1/2 + [e^{-2at} + (gap^2/2) u^2 + gap u w]/2 with the damped
    // factors u = e^{-at} t S, w = e^{-at} C kept overflow-free.
    const double u = damped_mode(alpha, beta_sq, 0.0, 1.0, t).value;
    const double w = damped_mode(alpha, beta_sq, 1.0, 0.0, t).value;
    return 0.5 + 0.5 * (std::exp(-2.0 * alpha * t) +
                        0.5 * gap * gap * u * u + gap * u * w);
}

}  // namespace bloch::analytic
