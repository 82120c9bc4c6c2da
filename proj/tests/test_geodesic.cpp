#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fermat/errors.hpp"
#include "fermat/geodesic.hpp"
#include "fermat/rng.hpp"

using namespace fermat;

namespace {

Domain centered_box(double half) {
    Domain d;
    d.kind = DomainKind::Box;
    d.lo = {-half, -half};
    d.hi = {half, half};
    return d;
}

const double kP = 3.0;  // alpha = 2 on flat 2-D domains

}  // namespace

TEST_CASE("constant density geodesics are straight lines") {
    const DensityModel m = DensityModel::uniform(centered_box(0.5));
    const Vec b{std::sqrt(0.5), std::sqrt(0.5)};
    GeodesicState s = geodesic_initial_state(m, {0.0, 0.0}, b, kP);
    const double rho0 = m.eval({0.0, 0.0});
    const double speed = std::pow(rho0, 0.5 * 2.0);
    s = geodesic_integrate(m, s, kP, 0.3, 1e-3);
    CHECK(s.position[0] == doctest::Approx(speed * b[0] * 0.3).epsilon(1e-12));
    CHECK(s.position[1] == doctest::Approx(speed * b[1] * 0.3).epsilon(1e-12));
}

TEST_CASE("second-order coefficient of the linear-density geodesic") {
    const DensityModel m = DensityModel::linear(centered_box(0.5), 1.0);
    const Vec b{0.0, 1.0};
    // v = alpha rho^{alpha-1} (<b, grad> b / 2 - grad / 4) = (-0.5, 0).
    const LocalDensityJet jet = m.jet({0.0, 0.0});
    const double alpha = 2.0;
    Vec v(2);
    double gb = 0.0;
    for (int d = 0; d < 2; ++d) gb += jet.grad[d] * b[d];
    for (int d = 0; d < 2; ++d)
        v[d] = alpha * std::pow(jet.rho0, alpha - 1.0) * (0.5 * gb * b[d] - 0.25 * jet.grad[d]);
    CHECK(v[0] == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(v[1] == doctest::Approx(0.0).epsilon(1e-12));

    // The integrated path matches position = rho^{alpha/2} b t + v t^2 + O(t^3).
    for (const double t : {0.01, 0.02, 0.04}) {
        GeodesicState s = geodesic_initial_state(m, {0.0, 0.0}, b, kP);
        s = geodesic_integrate(m, s, kP, t, 1e-5);
        const double lin0 = std::pow(jet.rho0, 1.0) * b[0] * t;
        const double lin1 = std::pow(jet.rho0, 1.0) * b[1] * t;
        const double err = std::hypot(s.position[0] - (lin0 + v[0] * t * t),
                                      s.position[1] - (lin1 + v[1] * t * t));
        CHECK(err < 10.0 * t * t * t);
    }

    // Along e1 the quadratic term is +alpha/4 e1 direction.
    const Vec b1{1.0, 0.0};
    double gb1 = 1.0;
    Vec v1(2);
    for (int d = 0; d < 2; ++d)
        v1[d] = alpha * (0.5 * gb1 * b1[d] - 0.25 * jet.grad[d]);
    CHECK(v1[0] == doctest::Approx(alpha * 0.25).epsilon(1e-12));
}

TEST_CASE("taylor expansion matches the integrator to fourth order") {
    const DensityModel m = DensityModel::linear(centered_box(0.5), 1.0);
    const LocalDensityJet jet = m.jet({0.0, 0.0});
    const Vec b{0.0, 1.0};
    double ratio0 = 0.0;
    for (const double t : {0.05, 0.1, 0.2}) {
        GeodesicState s = geodesic_initial_state(m, {0.0, 0.0}, b, kP);
        s = geodesic_integrate(m, s, kP, t, 1e-4);
        const Vec taylor = geodesic_taylor(jet, b, t, kP, 2);
        const double err = std::hypot(s.position[0] - taylor[0], s.position[1] - taylor[1]);
        const double ratio = err / (t * t * t * t);
        if (t == 0.05) ratio0 = ratio;
        CHECK(ratio <= 2.0 * ratio0 + 1e-9);
    }
    // Zero jet beyond the value: expansion collapses to the linear term.
    LocalDensityJet flat;
    flat.rho0 = 1.7;
    flat.grad = {0.0, 0.0};
    flat.hess = Mat(2, 2, 0.0);
    const Vec lin = geodesic_taylor(flat, b, 0.3, kP, 2);
    CHECK(lin[0] == doctest::Approx(0.0));
    CHECK(lin[1] == doctest::Approx(std::pow(1.7, 1.0) * 0.3).epsilon(1e-14));
}

TEST_CASE("rk4 self-convergence is fourth order") {
    const DensityModel m = DensityModel::linear(centered_box(0.5), 1.0);
    const Vec b{0.6, 0.8};
    const double T = 0.2;
    const auto endpoint = [&](double dt) {
        GeodesicState s = geodesic_initial_state(m, {0.0, 0.0}, b, kP);
        s = geodesic_integrate(m, s, kP, T, dt);
        return s.position;
    };
    const Vec ref = endpoint(1e-4);
    const Vec c1 = endpoint(4e-3);
    const Vec c2 = endpoint(2e-3);
    const double e1 = std::hypot(c1[0] - ref[0], c1[1] - ref[1]);
    const double e2 = std::hypot(c2[0] - ref[0], c2[1] - ref[1]);
    CHECK(e1 / e2 > 12.0);
    CHECK(e1 / e2 < 20.0);
}

TEST_CASE("unit g_p speed is conserved") {
    const DensityModel m = DensityModel::linear(centered_box(0.5), 1.0);
    GeodesicState s = geodesic_initial_state(m, {0.0, 0.0}, {0.0, 1.0}, kP);
    CHECK(gp_speed(m, s, kP) == doctest::Approx(1.0).epsilon(1e-12));
    double worst = 0.0;
    for (int step = 0; step < 500; ++step) {
        s = geodesic_ode_step(m, s, kP, 1e-3);
        worst = std::max(worst, std::abs(gp_speed(m, s, kP) - 1.0));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("leaving the domain is loud") {
    const DensityModel m = DensityModel::uniform(centered_box(0.05));
    GeodesicState s = geodesic_initial_state(m, {0.0, 0.0}, {1.0, 0.0}, kP);
    CHECK_THROWS_AS(geodesic_integrate(m, s, kP, 1.0, 1e-2), LeftDomain);
}

TEST_CASE("fermat balls: round, anisotropic, nested") {
    const DensityModel flat = DensityModel::uniform(centered_box(0.5));
    const FermatBall round = fermat_ball(flat, {0.0, 0.0}, 0.15, 64, kP, 1e-3);
    const double radius = std::pow(flat.eval({0.0, 0.0}), 1.0) * 0.15;
    for (const Vec& q : round.boundary)
        CHECK(std::abs(std::hypot(q[0], q[1]) - radius) < 1e-8);

    const DensityModel slope = DensityModel::linear(centered_box(0.5), 1.0);
    const FermatBall small = fermat_ball(slope, {0.0, 0.0}, 0.15, 128, kP, 1e-3);
    const FermatBall large = fermat_ball(slope, {0.0, 0.0}, 0.35, 128, kP, 1e-3);
    double plus = 0.0, minus = 0.0;
    for (const Vec& q : small.boundary) {
        plus = std::max(plus, q[0]);
        minus = std::max(minus, -q[0]);
    }
    CHECK(plus > minus);  // wider toward increasing density

    // Nesting: every small-ball vertex lies strictly inside the large ball's
    // radius along the same launch angle.
    for (std::size_t i = 0; i < 128; ++i) {
        const double rs = std::hypot(small.boundary[i][0], small.boundary[i][1]);
        const double rl = std::hypot(large.boundary[i][0], large.boundary[i][1]);
        CHECK(rs < rl);
    }
}

TEST_CASE("grid distance on a uniform density is near-euclidean") {
    Domain box = centered_box(0.5);
    const DensityModel flat = DensityModel::uniform(box);
    const Vec x{-0.3, -0.2}, y{0.25, 0.3};
    const double d = continuum_fermat_grid(flat, x, y, 2.0, 256);
    const double euclid_d = std::hypot(y[0] - x[0], y[1] - x[1]);
    const double expected = std::pow(flat.eval(x), -0.5) * euclid_d;
    CHECK(std::abs(d - expected) / expected < 0.08);
    CHECK(continuum_fermat_grid(flat, x, x, 2.0, 64) == doctest::Approx(0.0));
    CHECK_THROWS_AS(continuum_fermat_grid(flat, x, y, 2.0, 16), GridTooCoarse);
}

TEST_CASE("grid distance agrees with the local expansion on a linear density") {
    const DensityModel m = DensityModel::linear(centered_box(0.5), 1.0);
    const Vec x{0.0, 0.0}, y{0.0, 0.1};
    const double grid = continuum_fermat_grid(m, x, y, 3.0, 256);
    const LocalDensityJet jet = m.jet(x);
    const ExpansionPair series = euclid_fermat_expansions(jet, x, y, 3.0, 2);
    const double expected = series.L_from_euclid(0.1);
    CHECK(std::abs(grid - expected) / expected < 0.09);
}

TEST_CASE("expansion pair coefficients and composition") {
    LocalDensityJet jet;
    jet.rho0 = 1.0;
    jet.grad = {1.0, 0.0};
    jet.hess = Mat(2, 2, 0.0);
    const Vec x{0.0, 0.0};
    const Vec y1{0.1, 0.0};
    for (const double p : {1.5, 2.0, 3.0}) {
        const ExpansionPair pair = euclid_fermat_expansions(jet, x, y1, p, 2);
        const double pm = (p - 1.0) / 2.0;
        CHECK(pair.d2 == doctest::Approx(-0.5 * pm).epsilon(1e-12));
    }

    // Uniform density: exact mutual inverses.
    LocalDensityJet flat;
    flat.rho0 = 2.3;
    flat.grad = {0.0, 0.0};
    flat.hess = Mat(2, 2, 0.0);
    const ExpansionPair pair = euclid_fermat_expansions(flat, x, y1, 2.5, 2);
    const double L = 0.37;
    CHECK(pair.L_from_euclid(pair.euclid_from_L(L)) == doctest::Approx(L).epsilon(1e-12));
    CHECK(pair.c2 == 0.0);
    CHECK(pair.c3 == 0.0);
}

TEST_CASE("composed expansions are identity up to third order on random jets") {
    CounterRng rng(9, 0);
    for (int t = 0; t < 20; ++t) {
        LocalDensityJet jet;
        jet.rho0 = 0.5 + rng.uniform();
        jet.grad = {rng.normal() * 0.3, rng.normal() * 0.3};
        jet.hess = Mat(2, 2, 0.0);
        const double hval = rng.normal() * 0.2;
        jet.hess(0, 0) = rng.normal() * 0.2;
        jet.hess(1, 1) = rng.normal() * 0.2;
        jet.hess(0, 1) = hval;
        jet.hess(1, 0) = hval;
        const Vec x{0.0, 0.0}, y{0.3, 0.4};
        const ExpansionPair pair = euclid_fermat_expansions(jet, x, y, 2.0, 2);
        double prev_ratio = -1.0;
        for (const double L : {0.02, 0.01, 0.005}) {
            const double back = pair.L_from_euclid(pair.euclid_from_L(L));
            const double ratio = std::abs(back - L) / (L * L * L);
            if (prev_ratio >= 0.0) CHECK(ratio < prev_ratio * 4.0 + 1.0);
            prev_ratio = ratio;
        }
    }
}

TEST_CASE("sectional curvature bound") {
    CHECK(sectional_curvature_bound(1.3, 2.0, 0.7, 0.9, 1.0, 2) == doctest::Approx(1.3));
    CHECK(sectional_curvature_bound(1.0, 2.0, 1.0, 1.0, 2.0, 2) ==
          doctest::Approx(18.0).epsilon(1e-13));
    // Monotone nondecreasing in each argument.
    const double base = sectional_curvature_bound(1.0, 1.5, 0.8, 0.6, 2.5, 3);
    CHECK(sectional_curvature_bound(1.1, 1.5, 0.8, 0.6, 2.5, 3) >= base);
    CHECK(sectional_curvature_bound(1.0, 1.6, 0.8, 0.6, 2.5, 3) >= base);
    CHECK(sectional_curvature_bound(1.0, 1.5, 0.9, 0.6, 2.5, 3) >= base);
    CHECK(sectional_curvature_bound(1.0, 1.5, 0.8, 0.7, 2.5, 3) >= base);
}
