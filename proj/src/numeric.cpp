#include "bloch/numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace bloch::numeric {

namespace {

void validate_config(const IntegratorConfig& cfg) {
    if (!(cfg.dt > 0.0)) {
        throw std::invalid_argument("IntegratorConfig: dt must be positive");
    }
    if (!(cfg.t_max >= 0.0)) {
        throw std::invalid_argument("IntegratorConfig: t_max must be >= 0");
    }
    if (cfg.t_max > 0.0 && cfg.dt > cfg.t_max * (1.0 + 1e-12)) {
        throw std::invalid_argument("IntegratorConfig: dt must not exceed t_max");
    }
    if (!(cfg.tolerance > 0.0)) {
        throw std::invalid_argument("IntegratorConfig: tolerance must be positive");
    }
    if (!(cfg.convergence_factor >= 2.0)) {
        throw std::invalid_argument(
            "IntegratorConfig: convergence_factor must be >= 2");
    }
}

std::size_t sample_count(double t_max, double dt) {
    if (t_max <= 0.0) return 0;
    const double raw = t_max / dt;
    const double rounded = std::round(raw);
    // Snap to the grid when t_max is an exact multiple of dt up to rounding.
    if (std::abs(raw - rounded) < 1e-9 * std::max(1.0, rounded)) {
        return static_cast<std::size_t>(rounded);
    }
    return static_cast<std::size_t>(std::floor(raw));
}

BlochVector rk4_step(const SystemParams& p, const BlochVector& r, double dt) {
    const BlochVector k1 = bloch_rhs(p, r);
    const BlochVector k2 = bloch_rhs(
        p, {r.r1 + 0.5 * dt * k1.r1, r.r2 + 0.5 * dt * k1.r2, r.r3 + 0.5 * dt * k1.r3});
    const BlochVector k3 = bloch_rhs(
        p, {r.r1 + 0.5 * dt * k2.r1, r.r2 + 0.5 * dt * k2.r2, r.r3 + 0.5 * dt * k2.r3});
    const BlochVector k4 =
        bloch_rhs(p, {r.r1 + dt * k3.r1, r.r2 + dt * k3.r2, r.r3 + dt * k3.r3});
    return {r.r1 + dt / 6.0 * (k1.r1 + 2.0 * k2.r1 + 2.0 * k3.r1 + k4.r1),
            r.r2 + dt / 6.0 * (k1.r2 + 2.0 * k2.r2 + 2.0 * k3.r2 + k4.r2),
            r.r3 + dt / 6.0 * (k1.r3 + 2.0 * k2.r3 + 2.0 * k3.r3 + k4.r3)};
}

std::vector<BlochVector> rk4_run(const SystemParams& p, const BlochVector& r0,
                                 double dt, std::size_t steps) {
    std::vector<BlochVector> states;
    states.reserve(steps + 1);
    states.push_back(r0);
    BlochVector r = r0;
    for (std::size_t i = 0; i < steps; ++i) {
        r = rk4_step(p, r, dt);
        states.push_back(r);
    }
    return states;
}

}  // namespace

BlochVector bloch_rhs(const SystemParams& p, const BlochVector& r) {
    const double g1 = p.gamma1();
    const double g2 = p.gamma2();
    const double omega = p.omega();
    const double delta = p.delta();
    return {-g2 * r.r1 + delta * r.r2 - omega * r.r3,
            -delta * r.r1 - g2 * r.r2,
            omega * r.r1 - g1 * (r.r3 - p.r3_tilde())};
}

double default_time_step(const SystemParams& p) {
    const double fastest = std::min(
        {p.t1(), p.t2(), 1.0 / std::max({p.omega(), std::abs(p.delta()), 1.0})});
    return fastest / 100.0;
}

Trajectory integrate(const SystemParams& p, const BlochVector& r0,
                     const IntegratorConfig& cfg) {
    validate_config(cfg);

    const std::size_t steps = sample_count(cfg.t_max, cfg.dt);
    Trajectory traj{{}, {}, p};
    traj.times.resize(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) {
        traj.times[i] = static_cast<double>(i) * cfg.dt;
    }
    traj.states = rk4_run(p, r0, cfg.dt, steps);

    if (steps > 0) {
        // Self-check: the same horizon at dt/f must reproduce the coarse
        // samples to within tolerance, otherwise dt does not resolve the
        // dynamics.
        const auto factor =
            static_cast<std::size_t>(std::llround(cfg.convergence_factor));
        const std::vector<BlochVector> fine =
            rk4_run(p, r0, cfg.dt / static_cast<double>(factor), steps * factor);
        double worst = 0.0;
        for (std::size_t i = 0; i <= steps; ++i) {
            const BlochVector& a = traj.states[i];
            const BlochVector& b = fine[i * factor];
            worst = std::max({worst, std::abs(a.r1 - b.r1),
                              std::abs(a.r2 - b.r2), std::abs(a.r3 - b.r3)});
        }
        if (worst > cfg.tolerance) {
            std::ostringstream msg;
            msg << "integrate: step-halving check failed, dt=" << cfg.dt
                << " disagrees with dt/" << factor << " by " << worst
                << " (tolerance " << cfg.tolerance << ")";
            throw NonConvergenceError(msg.str());
        }
    }
    return traj;
}

BlochVector steady_state(const SystemParams& p) {
    const double g1 = p.gamma1();
    const double g2 = p.gamma2();
    const double omega = p.omega();
    const double delta = p.delta();

    // bloch_rhs(R) = 0 as A R = b.
    std::array<std::array<double, 4>, 3> m{{
        {-g2, delta, -omega, 0.0},
        {-delta, -g2, 0.0, 0.0},
        {omega, 0.0, -g1, -g1 * p.r3_tilde()},
    }};

    // Gaussian elimination with partial pivoting.
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int row = col + 1; row < 3; ++row) {
            if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
        }
        if (std::abs(m[pivot][col]) < 1e-300) {
            throw SingularSystemError(
                "steady_state: singular coefficient matrix (rates must be "
                "positive)");
        }
        std::swap(m[col], m[pivot]);
        for (int row = col + 1; row < 3; ++row) {
            const double f = m[row][col] / m[col][col];
            for (int k = col; k < 4; ++k) m[row][k] -= f * m[col][k];
        }
    }
    std::array<double, 3> x{};
    for (int row = 2; row >= 0; --row) {
        double acc = m[row][3];
        for (int k = row + 1; k < 3; ++k) acc -= m[row][k] * x[k];
        x[row] = acc / m[row][row];
    }
    return {x[0], x[1], x[2]};
}

}  // namespace bloch::numeric
