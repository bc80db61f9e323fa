#include <doctest.h>

#include <cmath>
#include <vector>

#include "bloch/analytic.hpp"
#include "bloch/core.hpp"
#include "bloch/numeric.hpp"
#include "test_util.hpp"

using namespace bloch;
using namespace bloch::analytic;

namespace {

const SystemParams kFig1(make_params(1.5, 0.5, 1.0, 0.0));
const BlochVector kGround{0.0, 0.0, 1.0};

double max_abs_diff(const BlochVector& a, const BlochVector& b) {
    return std::max({std::abs(a.r1 - b.r1), std::abs(a.r2 - b.r2),
                     std::abs(a.r3 - b.r3)});
}

}  // namespace

TEST_CASE("classify_regime across the three cases") {
    // |Gamma2 - Gamma1| = 2 - 2/3 = 4/3 for T1=1.5, T2=0.5
    CHECK(classify_regime(make_params(1.5, 0.5, 0.2, 0.0)) ==
          DampingRegime::overdamped);
    CHECK(classify_regime(make_params(1.5, 0.5, 2.0 / 3.0, 0.0)) ==
          DampingRegime::critical);
    CHECK(classify_regime(make_params(1.5, 0.5, 5.0, 0.0)) ==
          DampingRegime::underdamped);

    // tolerance band is relative
    CHECK(classify_regime(make_params(1.5, 0.5, (2.0 / 3.0) * (1 - 1e-7), 0.0)) ==
          DampingRegime::overdamped);
    CHECK(classify_regime(make_params(1.5, 0.5, (2.0 / 3.0) * (1 + 1e-7), 0.0)) ==
          DampingRegime::underdamped);

    CHECK_THROWS_AS(classify_regime(make_params(1.5, 0.5, 1.0, 0.0, 0.5)),
                    OffResonanceError);
}

TEST_CASE("cosh_sinhc matches library functions away from degeneracy") {
    // hyperbolic branch
    auto [ch, sh] = cosh_sinhc(4.0, 0.7);          // beta = 2
    CHECK(ch == doctest::Approx(std::cosh(1.4)).epsilon(1e-15));
    CHECK(sh == doctest::Approx(std::sinh(1.4) / 1.4).epsilon(1e-15));
    // trigonometric branch
    auto [c, s] = cosh_sinhc(-9.0, 0.5);           // |beta| = 3
    CHECK(c == doctest::Approx(std::cos(1.5)).epsilon(1e-15));
    CHECK(s == doctest::Approx(std::sin(1.5) / 1.5).epsilon(1e-15));
    // exact degeneracy
    auto [c0, s0] = cosh_sinhc(0.0, 123.0);
    CHECK(c0 == 1.0);
    CHECK(s0 == 1.0);
}

TEST_CASE("cosh_sinhc series joins the closed forms continuously") {
    // straddle the |beta^2 t^2| = 1e-8 series boundary on both signs
    for (double beta_sq : {1.0, -1.0}) {
        for (double t : {0.99e-4, 1.01e-4}) {
            auto [c, s] = cosh_sinhc(beta_sq, t);
            const double x = std::sqrt(std::abs(beta_sq)) * t;
            const double c_ref = beta_sq > 0 ? std::cosh(x) : std::cos(x);
            const double s_ref =
                beta_sq > 0 ? std::sinh(x) / x : std::sin(x) / x;
            CHECK(c == doctest::Approx(c_ref).epsilon(1e-15));
            CHECK(s == doctest::Approx(s_ref).epsilon(1e-15));
        }
    }
}

TEST_CASE("solve_coefficients reference values") {
    const SystemParams p = make_params(1.5, 0.5, 1.0, 1.0);
    const SolutionCoefficients c = solve_coefficients(p, kGround);
    CHECK(c.d3 == doctest::Approx(4.0 / 7).epsilon(1e-15));   // 0.571429
    CHECK(c.d1 == doctest::Approx(-2.0 / 7).epsilon(1e-15));  // -0.285714
    CHECK(c.beta_sq == doctest::Approx(-5.0 / 9).epsilon(1e-15));
    CHECK(std::sqrt(-c.beta_sq) ==
          doctest::Approx(std::sqrt(5.0) / 3.0).epsilon(1e-15));  // 0.745356
    CHECK(c.alpha == doctest::Approx(4.0 / 3).epsilon(1e-15));
    CHECK_FALSE(c.decoupled);

    // field-free limit
    const SolutionCoefficients c0 =
        solve_coefficients(make_params(1.5, 0.5, 0.0, 0.7), kGround);
    CHECK(c0.d3 == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(c0.d1 == 0.0);
    CHECK(c0.decoupled);

    CHECK_THROWS_AS(solve_coefficients(make_params(1.5, 0.5, 1.0, 0.0, 1.0),
                                       kGround),
                    OffResonanceError);
}

TEST_CASE("coefficient invariants hold for random draws") {
    auto rng = testutil::make_rng(11);
    for (int i = 0; i < 1000; ++i) {
        const SystemParams p = testutil::random_physical_params(rng);
        const BlochVector r0 = testutil::random_state(rng);
        const SolutionCoefficients c = solve_coefficients(p, r0);

        CHECK(c.alpha ==
              doctest::Approx(0.5 * (p.gamma1() + p.gamma2())).epsilon(1e-14));
        // product of Laplace roots
        const std::complex<double> prod = c.s_plus * c.s_minus;
        const double expected = p.gamma1() * p.gamma2() + p.omega() * p.omega();
        CHECK(std::abs(prod.real() - expected) <= 1e-10 * std::abs(expected));
        CHECK(std::abs(prod.imag()) <= 1e-10 * std::abs(expected));
        // value-at-0 consistency
        CHECK(c.p3 == doctest::Approx(r0.r3 - c.d3).epsilon(1e-14));
        CHECK(c.p1 == doctest::Approx(r0.r1 - c.d1).epsilon(1e-14));
    }
}

TEST_CASE("evaluate reproduces the initial condition and R2 decay") {
    auto rng = testutil::make_rng(13);
    for (int i = 0; i < 100; ++i) {
        const SystemParams p = testutil::random_physical_params(rng);
        const BlochVector r0 = testutil::random_state(rng);
        const SolutionCoefficients c = solve_coefficients(p, r0);
        const BlochVector at0 = evaluate(c, p, r0, 0.0);
        CHECK(max_abs_diff(at0, r0) <= 1e-14);
    }

    // R2(t) = R2(0) e^{-Gamma2 t}: T2 = 0.5, t = 0.5 -> e^{-1}
    const SystemParams p = make_params(1.5, 0.5, 1.0, 0.0);
    const BlochVector r0{0.0, 1.0, 0.0};
    const SolutionCoefficients c = solve_coefficients(p, r0);
    CHECK(evaluate(c, p, r0, 0.5).r2 ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-15));  // 0.367879

    CHECK_THROWS_AS(evaluate(c, p, r0, -0.1), std::domain_error);
}

TEST_CASE("long-time limit at infinite temperature is the mixed state") {
    const SolutionCoefficients c = solve_coefficients(kFig1, kGround);
    const BlochVector late = evaluate(c, kFig1, kGround, 50.0);
    CHECK(std::abs(late.r1) <= 1e-12);
    CHECK(std::abs(late.r2) <= 1e-12);
    CHECK(std::abs(late.r3) <= 1e-12);
    CHECK(purity(late) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("derivative of the closed form equals the equations of motion") {
    // pins down the M1, M3 limit coefficients and the sign convention
    auto rng = testutil::make_rng(17);
    for (int i = 0; i < 1000; ++i) {
        const SystemParams p = testutil::random_physical_params(rng);
        const BlochVector r0 = testutil::random_state(rng);
        const SolutionCoefficients c = solve_coefficients(p, r0);

        const BlochVector lhs0 = evaluate_derivative(c, p, r0, 0.0);
        const BlochVector rhs0 = numeric::bloch_rhs(p, r0);
        const double scale =
            std::max({1e-3, std::abs(rhs0.r1), std::abs(rhs0.r2),
                      std::abs(rhs0.r3)});
        CHECK(max_abs_diff(lhs0, rhs0) <= 1e-9 * scale);

        // also at a later point along the trajectory
        const double t = 0.37;
        const BlochVector rt = evaluate(c, p, r0, t);
        const BlochVector lhs = evaluate_derivative(c, p, r0, t);
        const BlochVector rhs = numeric::bloch_rhs(p, rt);
        CHECK(max_abs_diff(lhs, rhs) <= 1e-9 * scale);
    }
}

TEST_CASE("closed form tracks the RK4 oracle in every regime") {
    const numeric::IntegratorConfig cfg{1e-3, 10.0};
    for (double omega : {0.1, 2.0 / 3.0, 1.0, 5.0}) {
        for (double r3t : {0.0, 1.0}) {
            const SystemParams p = make_params(1.5, 0.5, omega, r3t);
            const SolutionCoefficients c = solve_coefficients(p, kGround);
            const numeric::Trajectory traj =
                numeric::integrate(p, kGround, cfg);
            double worst = 0.0;
            for (std::size_t i = 0; i < traj.size(); i += 10) {
                const BlochVector a = evaluate(c, p, kGround, traj.times[i]);
                worst = std::max(worst, max_abs_diff(a, traj.states[i]));
            }
            CAPTURE(omega);
            CAPTURE(r3t);
            CHECK(worst <= 1e-6);
        }
    }
}

TEST_CASE("trajectories are continuous across the critical point") {
    const double omega_c = 2.0 / 3.0;
    const BlochVector r0 = kGround;
    for (double r3t : {0.0, 1.0}) {
        const SystemParams lo = make_params(1.5, 0.5, omega_c * (1 - 1e-7), r3t);
        const SystemParams mid = make_params(1.5, 0.5, omega_c, r3t);
        const SystemParams hi = make_params(1.5, 0.5, omega_c * (1 + 1e-7), r3t);
        REQUIRE(classify_regime(mid) == DampingRegime::critical);

        const auto c_lo = solve_coefficients(lo, r0);
        const auto c_mid = solve_coefficients(mid, r0);
        const auto c_hi = solve_coefficients(hi, r0);
        for (double t = 0.0; t <= 10.0; t += 0.01) {
            const BlochVector a = evaluate(c_lo, lo, r0, t);
            const BlochVector b = evaluate(c_hi, hi, r0, t);
            const BlochVector m = evaluate(c_mid, mid, r0, t);
            CHECK(max_abs_diff(a, b) <= 1e-5);
            // the critical branch lies between the flanking regimes
            CHECK(m.r1 >= std::min(a.r1, b.r1) - 1e-9);
            CHECK(m.r1 <= std::max(a.r1, b.r1) + 1e-9);
            CHECK(m.r3 >= std::min(a.r3, b.r3) - 1e-9);
            CHECK(m.r3 <= std::max(a.r3, b.r3) + 1e-9);
        }
    }
}

TEST_CASE("evaluate converges to equilibrium_state") {
    for (double omega : {0.1, 2.0 / 3.0, 1.0, 5.0}) {
        for (double r3t : {0.0, 0.5, 1.0}) {
            const SystemParams p = make_params(1.5, 0.5, omega, r3t);
            const SolutionCoefficients c = solve_coefficients(p, kGround);
            const double t = 50.0 * std::max(p.t1(), p.t2());
            const BlochVector late = evaluate(c, p, kGround, t);
            const Equilibrium eq = equilibrium_state(p);
            CHECK(max_abs_diff(late, eq.bloch) <= 1e-10);
        }
    }
}

TEST_CASE("equilibrium_state reference values") {
    // no field: coherence fully lost, population at the thermal value
    const Equilibrium free = equilibrium_state(make_params(1.5, 0.5, 0.0, 0.8));
    CHECK(std::abs(free.rho.rho12) == 0.0);
    CHECK(free.bloch.r3 == doctest::Approx(0.8).epsilon(1e-15));

    const Equilibrium eq = equilibrium_state(make_params(1.5, 0.5, 1.0, 1.0));
    CHECK(eq.bloch.r1 == doctest::Approx(-2.0 / 7).epsilon(1e-14));
    CHECK(eq.bloch.r2 == 0.0);
    CHECK(eq.bloch.r3 == doctest::Approx(4.0 / 7).epsilon(1e-14));
    CHECK(eq.rho.rho11 == doctest::Approx(11.0 / 14).epsilon(1e-14));
    CHECK(eq.rho.rho12.imag() == doctest::Approx(-1.0 / 7).epsilon(1e-14));
    CHECK(std::abs(eq.rho.rho12.real()) <= 1e-15);
    CHECK(eq.rho.rho11 >= eq.rho.rho22);

    // population relaxation switched off: all coherence lost
    const Equilibrium frozen = equilibrium_state(make_params(1e12, 0.5, 1.0, 1.0));
    CHECK(std::abs(frozen.rho.rho12) <= 1e-9);

    CHECK_THROWS_AS(equilibrium_state(make_params(1.5, 0.5, 1.0, 1.0, 2.0)),
                    OffResonanceError);
}

TEST_CASE("equilibrium cross-checks") {
    // both sides of the relation vanish without a field
    CHECK(equilibrium_relation_residual(make_params(1.5, 0.5, 0.0, 1.0)) ==
          0.0);
    CHECK(equilibrium_relation_residual(make_params(1.5, 0.5, 1.0, 1.0)) <=
          1e-12);

    auto rng = testutil::make_rng(23);
    for (int i = 0; i < 1000; ++i) {
        const SystemParams p = testutil::random_physical_params(rng);
        // residual of the coherence-population relation
        CHECK(equilibrium_relation_residual(p) <= 1e-12);
        // matches the independent linear solve
        const Equilibrium eq = equilibrium_state(p);
        const BlochVector ss = numeric::steady_state(p);
        CHECK(max_abs_diff(eq.bloch, ss) <= 1e-12);
        // fixed point of the equations of motion
        const BlochVector rate = numeric::bloch_rhs(p, eq.bloch);
        CHECK(std::max({std::abs(rate.r1), std::abs(rate.r2),
                        std::abs(rate.r3)}) <= 1e-12);
    }
}

TEST_CASE("equilibrium coherence is proportional to the thermal difference") {
    const Equilibrium half = equilibrium_state(make_params(1.5, 0.5, 1.0, 0.3));
    const Equilibrium full = equilibrium_state(make_params(1.5, 0.5, 1.0, 0.6));
    CHECK(full.rho.rho12 == 2.0 * half.rho.rho12);  // exact scaling
    CHECK(full.bloch.r1 == 2.0 * half.bloch.r1);
}

TEST_CASE("optimal_rabi") {
    const OptimalRabi best = optimal_rabi(1.5, 0.5, 1.0);
    CHECK(best.omega_r == doctest::Approx(1.0 / std::sqrt(0.75)).epsilon(1e-15));
    CHECK(best.omega_r == doctest::Approx(1.1547).epsilon(1e-4));
    CHECK(best.max_coherence ==
          doctest::Approx(std::sqrt(1.0 / 3.0) / 4.0).epsilon(1e-15));  // 0.144338

    const OptimalRabi sym = optimal_rabi(2.0, 2.0, 0.8);
    CHECK(sym.max_coherence == doctest::Approx(0.2).epsilon(1e-15));

    // |rho12_eq|(Omega) rises to the optimum and falls beyond it
    auto coherence_at = [](double omega) {
        return std::abs(
            equilibrium_state(make_params(1.5, 0.5, omega, 1.0)).rho.rho12);
    };
    double prev = coherence_at(0.01);
    for (double omega = 0.05; omega < best.omega_r; omega += 0.05) {
        const double cur = coherence_at(omega);
        CHECK(cur > prev);
        prev = cur;
    }
    prev = coherence_at(best.omega_r);
    for (double omega = best.omega_r + 0.05; omega < 8.0; omega += 0.05) {
        const double cur = coherence_at(omega);
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK(coherence_at(best.omega_r) ==
          doctest::Approx(best.max_coherence).epsilon(1e-14));
}

TEST_CASE("argmax of the asymptotic coherence lands on omega_r") {
    auto rng = testutil::make_rng(29);
    std::uniform_real_distribution<double> logt(-0.7, 0.7);
    for (int trial = 0; trial < 20; ++trial) {
        const double t1 = std::pow(10.0, logt(rng));
        const double t2 = std::min(2.0 * t1, std::pow(10.0, logt(rng)));
        const OptimalRabi best = optimal_rabi(t1, t2, 1.0);
        const double omega_hi = 3.0 * best.omega_r;
        const std::size_t n = 1200;
        double best_val = -1.0, best_omega = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            const double omega = omega_hi * static_cast<double>(i) / n;
            const double val = std::abs(
                equilibrium_state(make_params(t1, t2, omega, 1.0)).rho.rho12);
            if (val > best_val) {
                best_val = val;
                best_omega = omega;
            }
        }
        CHECK(std::abs(best_omega - best.omega_r) <= omega_hi / n + 1e-12);
        CHECK(best_val <= best.max_coherence + 1e-12);
    }
}

TEST_CASE("purity_excited_initial") {
    CHECK(purity_excited_initial(kFig1, 0.0) == 1.0);
    CHECK(purity_excited_initial(kFig1, 60.0) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(
        purity_excited_initial(make_params(1.5, 0.5, 1.0, 0.0, 1.0), 1.0),
        OffResonanceError);

    // agrees with the general evaluate -> purity pipeline
    for (double omega : {0.2, 2.0 / 3.0, 1.0, 5.0}) {
        const SystemParams p = make_params(1.5, 0.5, omega, 0.0);
        const SolutionCoefficients c = solve_coefficients(p, kGround);
        for (double t = 0.0; t <= 5.0; t += 0.05) {
            const double via_pipeline = purity(evaluate(c, p, kGround, t));
            CHECK(std::abs(purity_excited_initial(p, t) - via_pipeline) <=
                  1e-12);
        }
    }

    // matches the literal trigonometric strong-field expression when
    // underdamped
    const SystemParams p5 = make_params(1.5, 0.5, 5.0, 0.0);
    const double gap = p5.gamma2() - p5.gamma1();
    const double b = 0.5 * std::sqrt(4.0 * 25.0 - gap * gap);
    const double alpha = 0.5 * (p5.gamma1() + p5.gamma2());
    for (double t = 0.01; t <= 3.0; t += 0.037) {
        const double ratio = gap / (2.0 * b);
        const double sin_bt = std::sin(b * t);
        const double literal =
            0.5 + 0.5 *
                      (1.0 + 2.0 * ratio * ratio * sin_bt * sin_bt +
                       ratio * std::sin(2.0 * b * t)) *
                      std::exp(-2.0 * alpha * t);
        CHECK(purity_excited_initial(p5, t) ==
              doctest::Approx(literal).epsilon(1e-13));
    }
}

TEST_CASE("purity never exceeds one in the physical region") {
    auto rng = testutil::make_rng(31);
    for (int i = 0; i < 1000; ++i) {
        const SystemParams p = testutil::random_physical_params(rng, 6.0);
        const BlochVector r0 = testutil::random_state(rng);
        const SolutionCoefficients c = solve_coefficients(p, r0);
        const double horizon = 20.0 * std::max(p.t1(), p.t2());
        for (int k = 0; k <= 40; ++k) {
            const double t = horizon * k / 40.0;
            CHECK(purity(evaluate(c, p, r0, t)) <= 1.0 + 1e-10);
        }
    }
}

TEST_CASE("strongly overdamped evaluation stays finite at long times") {
    // beta t ~ 2500 here: the naive e^{-alpha t} cosh(beta t) product is
    // 0 * inf; the exponential-pair branch must keep it finite and on the
    // RK4 oracle
    const SystemParams p = make_params(1.0, 1e-3, 0.1, 1.0);
    const BlochVector r0{0.2, -0.1, 0.9};
    const SolutionCoefficients c = solve_coefficients(p, r0);
    REQUIRE(classify_regime(p) == DampingRegime::overdamped);

    const BlochVector late = evaluate(c, p, r0, 5.0);
    CHECK(std::isfinite(late.r1));
    CHECK(std::isfinite(late.r3));
    CHECK(late.norm() <= 1.0 + 1e-9);

    numeric::IntegratorConfig cfg{1e-5, 5.0};
    const numeric::Trajectory traj = numeric::integrate(p, r0, cfg);
    CHECK(max_abs_diff(late, traj.back()) <= 1e-7);

    const BlochVector d = evaluate_derivative(c, p, r0, 5.0);
    const BlochVector rhs = numeric::bloch_rhs(p, late);
    CHECK(max_abs_diff(d, rhs) <= 1e-9);

    CHECK(std::isfinite(purity_excited_initial(p, 50.0)));
    CHECK(purity_excited_initial(p, 5000.0) ==
          doctest::Approx(0.5).epsilon(1e-12));

    // smoothness across the exponential-pair switch at beta t = 30: the
    // value step across the boundary matches the derivative times the
    // bracket width
    const double beta = std::sqrt(c.beta_sq);
    const double t_switch = 30.0 / beta;
    const double dt = 2e-5 * t_switch;
    const BlochVector before = evaluate(c, p, r0, t_switch - 0.5 * dt);
    const BlochVector after = evaluate(c, p, r0, t_switch + 0.5 * dt);
    const BlochVector slope = evaluate_derivative(c, p, r0, t_switch - 0.5 * dt);
    CHECK(std::abs(after.r3 - before.r3 - dt * slope.r3) <= 1e-10);
    CHECK(std::abs(after.r1 - before.r1 - dt * slope.r1) <= 1e-10);
}

TEST_CASE("small-field branch joins the driven branch continuously") {
    const double threshold_omega = 1e-12 * 2.0;  // max gamma = 1/T2 = 2
    const BlochVector r0{0.3, -0.2, 0.8};

    const SystemParams below =
        make_params(1.5, 0.5, threshold_omega * 0.5, 0.9);
    const SystemParams above =
        make_params(1.5, 0.5, threshold_omega * 2.0, 0.9);
    const auto c_below = solve_coefficients(below, r0);
    const auto c_above = solve_coefficients(above, r0);
    CHECK(c_below.decoupled);
    CHECK_FALSE(c_above.decoupled);

    for (double t : {0.1, 1.0, 5.0, 20.0}) {
        CHECK(max_abs_diff(evaluate(c_below, below, r0, t),
                           evaluate(c_above, above, r0, t)) <= 1e-9);
    }

    // the decoupled branch is the exact field-free solution
    const auto [cc, ss] =
        std::pair{std::exp(-below.gamma2() * 2.0), std::exp(-below.gamma1() * 2.0)};
    const BlochVector v = evaluate(c_below, below, r0, 2.0);
    CHECK(v.r1 == doctest::Approx(r0.r1 * cc).epsilon(1e-15));
    CHECK(v.r2 == doctest::Approx(r0.r2 * cc).epsilon(1e-15));
    CHECK(v.r3 ==
          doctest::Approx(0.9 + (r0.r3 - 0.9) * ss).epsilon(1e-15));
}
