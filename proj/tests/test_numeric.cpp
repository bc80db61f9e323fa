#include <doctest.h>

#include <cmath>

#include "bloch/analytic.hpp"
#include "bloch/core.hpp"
#include "bloch/numeric.hpp"
#include "test_util.hpp"

using namespace bloch;
using namespace bloch::numeric;

namespace {

double max_abs_diff(const BlochVector& a, const BlochVector& b) {
    return std::max({std::abs(a.r1 - b.r1), std::abs(a.r2 - b.r2),
                     std::abs(a.r3 - b.r3)});
}

}  // namespace

TEST_CASE("bloch_rhs reference values") {
    // equilibrium is a fixed point
    const SystemParams p = make_params(1.5, 0.5, 1.0, 1.0);
    const auto eq = analytic::equilibrium_state(p);
    const BlochVector at_eq = bloch_rhs(p, eq.bloch);
    CHECK(std::abs(at_eq.r1) <= 1e-14);
    CHECK(std::abs(at_eq.r2) <= 1e-14);
    CHECK(std::abs(at_eq.r3) <= 1e-14);

    // pure decay without a field
    const SystemParams decay = make_params(1.0, 1.0, 0.0, 0.0);
    const BlochVector d = bloch_rhs(decay, {1.0, 1.0, 1.0});
    CHECK(d.r1 == -1.0);
    CHECK(d.r2 == -1.0);
    CHECK(d.r3 == -1.0);

    // hand-evaluated driven case
    const BlochVector g = bloch_rhs(p, {0.0, 0.0, 1.0});
    CHECK(g.r1 == -1.0);
    CHECK(g.r2 == 0.0);
    CHECK(g.r3 == 0.0);

    // detuning couples R1 and R2
    const SystemParams det = make_params(1.0, 1.0, 0.0, 0.0, 2.0);
    const BlochVector v = bloch_rhs(det, {1.0, 0.0, 0.0});
    CHECK(v.r1 == -1.0);
    CHECK(v.r2 == -2.0);
}

TEST_CASE("default_time_step resolves the fastest timescale") {
    CHECK(default_time_step(make_params(1.5, 0.5, 1.0, 0.0)) ==
          doctest::Approx(0.005).epsilon(1e-12));
    CHECK(default_time_step(make_params(10.0, 10.0, 50.0, 0.0)) ==
          doctest::Approx(1.0 / 50.0 / 100.0).epsilon(1e-12));
    CHECK(default_time_step(make_params(10.0, 10.0, 1.0, 0.0, 25.0)) ==
          doctest::Approx(1.0 / 25.0 / 100.0).epsilon(1e-12));
}

TEST_CASE("integrator config validation") {
    const SystemParams p = make_params(1.5, 0.5, 1.0, 0.0);
    CHECK_THROWS_AS(integrate(p, {0, 0, 1}, {-0.1, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate(p, {0, 0, 1}, {0.5, 0.1}),
                    std::invalid_argument);
    IntegratorConfig bad_tol{1e-2, 1.0};
    bad_tol.tolerance = 0.0;
    CHECK_THROWS_AS(integrate(p, {0, 0, 1}, bad_tol), std::invalid_argument);
}

TEST_CASE("zero horizon yields the single-sample trajectory") {
    const SystemParams p = make_params(1.5, 0.5, 1.0, 0.0);
    const Trajectory traj = integrate(p, {0.1, 0.2, 0.3}, {1e-3, 0.0});
    REQUIRE(traj.size() == 1);
    CHECK(traj.times[0] == 0.0);
    CHECK(traj.states[0].r1 == 0.1);
    CHECK(traj.states[0].r2 == 0.2);
    CHECK(traj.states[0].r3 == 0.3);
}

TEST_CASE("integrate matches the exponential closed form") {
    // Omega = 0: R2(t) = e^{-Gamma2 t} with Gamma2 = 2
    const SystemParams p = make_params(1.0, 0.5, 0.0, 0.0);
    const Trajectory traj = integrate(p, {0.0, 1.0, 0.0}, {1e-3, 1.0});
    const BlochVector& end = traj.back();
    CHECK(traj.times.back() == doctest::Approx(1.0));
    CHECK(std::abs(end.r2 - std::exp(-2.0)) <= 1e-8);
    CHECK(std::abs(end.r1) <= 1e-12);
    // first sample is the initial condition, exactly
    CHECK(traj.states[0].r2 == 1.0);
}

TEST_CASE("integrate reaches the driven equilibrium") {
    const SystemParams p = make_params(1.5, 0.5, 1.0, 1.0);
    const Trajectory traj = integrate(p, {0, 0, 1}, {1e-3, 50.0});
    const auto eq = analytic::equilibrium_state(p);
    CHECK(max_abs_diff(traj.back(), eq.bloch) <= 1e-8);
}

TEST_CASE("step-halving self-check flags an unresolved step") {
    const SystemParams p = make_params(1.5, 0.5, 5.0, 0.0);
    IntegratorConfig cfg{0.5, 10.0};
    cfg.tolerance = 1e-12;
    CHECK_THROWS_AS(integrate(p, {0, 0, 1}, cfg), NonConvergenceError);
}

TEST_CASE("global error shrinks at fourth order") {
    const SystemParams p = make_params(1.5, 0.5, 1.0, 0.0);
    const BlochVector r0{0, 0, 1};
    const auto coeffs = analytic::solve_coefficients(p, r0);

    auto max_error = [&](double dt) {
        // deliberately coarse steps: relax the self-check so the truncation
        // error under study is observable
        IntegratorConfig cfg{dt, 10.0};
        cfg.tolerance = 1e-4;
        const Trajectory traj = integrate(p, r0, cfg);
        double worst = 0.0;
        for (std::size_t i = 0; i < traj.size(); ++i) {
            worst = std::max(worst,
                             max_abs_diff(traj.states[i],
                                          analytic::evaluate(coeffs, p, r0,
                                                             traj.times[i])));
        }
        return worst;
    };

    const double e1 = max_error(0.04);
    const double e2 = max_error(0.02);
    const double e3 = max_error(0.01);
    CHECK(e1 / e2 >= 12.0);
    CHECK(e1 / e2 <= 20.0);
    CHECK(e2 / e3 >= 12.0);
    CHECK(e2 / e3 <= 20.0);
}

TEST_CASE("steady_state reference values") {
    const BlochVector on_res = steady_state(make_params(1.5, 0.5, 1.0, 1.0));
    CHECK(on_res.r1 == doctest::Approx(-2.0 / 7).epsilon(1e-14));
    CHECK(std::abs(on_res.r2) <= 1e-15);
    CHECK(on_res.r3 == doctest::Approx(4.0 / 7).epsilon(1e-14));

    const BlochVector no_field = steady_state(make_params(1.5, 0.5, 0.0, 0.8));
    CHECK(no_field.r1 == 0.0);
    CHECK(no_field.r2 == 0.0);
    CHECK(no_field.r3 == doctest::Approx(0.8).epsilon(1e-15));

    // detuned: cross-checked against the long-time integration and the
    // hand-solved rational values (-2/11, 2/11, 8/11)
    const SystemParams det = make_params(1.5, 0.5, 1.0, 1.0, 2.0);
    const BlochVector ss = steady_state(det);
    CHECK(ss.r1 == doctest::Approx(-2.0 / 11).epsilon(1e-13));
    CHECK(ss.r2 == doctest::Approx(2.0 / 11).epsilon(1e-13));
    CHECK(ss.r3 == doctest::Approx(8.0 / 11).epsilon(1e-13));
    const Trajectory traj = integrate(det, {0, 0, 1}, {1e-3, 50.0});
    CHECK(max_abs_diff(traj.back(), ss) <= 1e-8);
}

TEST_CASE("trajectory states reconstruct unit-trace density matrices") {
    const SystemParams p = make_params(1.5, 0.5, 2.0, 0.5, 0.7);
    const Trajectory traj = integrate(p, {0, 0, 1}, {1e-2, 5.0});
    for (std::size_t i = 0; i < traj.size(); i += 50) {
        const DensityMatrix rho = density_from_bloch(traj.states[i]);
        CHECK(rho.trace() == 1.0);
    }
}

TEST_CASE("physical trajectories stay inside the Bloch ball") {
    auto rng = testutil::make_rng(37);
    for (int i = 0; i < 50; ++i) {
        const SystemParams p = testutil::random_physical_params(rng, 4.0);
        const BlochVector r0 = testutil::random_state(rng);
        IntegratorConfig cfg{default_time_step(p) * 5.0, 5.0};
        cfg.tolerance = 1e-5;
        const Trajectory traj = integrate(p, r0, cfg);
        for (const BlochVector& r : traj.states) {
            CHECK(r.norm() <= 1.0 + 1e-9);
        }
    }
}
