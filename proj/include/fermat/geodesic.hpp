#pragma once

#include <cstddef>
#include <vector>

#include "fermat/density.hpp"
#include "fermat/linalg.hpp"

namespace fermat {

struct GeodesicState {
    Vec position;
    Vec velocity;
    double t = 0.0;
};

// Unit-speed initial state at y in unit direction b: velocity rho(y)^{alpha/2} b.
GeodesicState geodesic_initial_state(const DensityModel& model, const Vec& y, const Vec& b,
                                     double p);

// One fixed-step RK4 step of the conformal-metric geodesic equation
//   x'' = alpha <x', grad log rho> x' - (alpha/2) <x', x'> grad log rho,
// alpha = 2(p-1)/m.  Throws LeftDomain when the step exits the support.
GeodesicState geodesic_ode_step(const DensityModel& model, const GeodesicState& state, double p,
                                double dt);

// Integrate to time T with fixed dt.
GeodesicState geodesic_integrate(const DensityModel& model, GeodesicState state, double p,
                                 double T, double dt);

// |gamma'|_{g_p} = rho^{-alpha/2} ||gamma'||; stays at 1 along unit-speed runs.
double gp_speed(const DensityModel& model, const GeodesicState& state, double p);

// Degree-3 expansion of the unit-speed geodesic from the density jet:
//   rho^{a/2} b t + a rho^{a-1} (<b,grad>b/2 - grad/4) t^2
//   + (C1' b + C2' H b + C3' grad) t^3.
Vec geodesic_taylor(const LocalDensityJet& jet, const Vec& b, double t, double p, std::size_t m);

struct FermatBall {
    std::vector<Vec> boundary;   // endpoints in launch-angle order, closed
    std::vector<bool> escaped;   // rays flagged when they left the domain
};

// Endpoints of n_dirs unit-speed geodesics integrated to time T.
FermatBall fermat_ball(const DensityModel& model, const Vec& center, double T,
                       std::size_t n_dirs, double p, double dt);

// L_p^p(x, y) on a regular grid with the 8-connected stencil (m = 2) or its
// 26-connected analogue (m = 3): Dijkstra with edge cost
// length * rho(midpoint)^{(1-p)/m}.  The octile metrication overhead (about
// 8% worst case in 2-D) is part of the advertised tolerance.
double continuum_fermat_grid(const DensityModel& model, const Vec& x, const Vec& y, double p,
                             std::size_t grid_res);

struct ExpansionPair {
    // ||y-x|| from L := L_p^p(x,y), degree three.
    double euclid_from_L(double L) const;
    // L_p^p from eps := ||y-x||, degree two.
    double L_from_euclid(double eps) const;

    double c1 = 0.0;  // rho^{(p-1)/m}
    double c2 = 0.0;  // second-order coefficient of euclid_from_L
    double c3 = 0.0;  // third-order coefficient (the C of the L^{3p} term)
    double d1 = 0.0;  // rho^{-(p-1)/m}
    double d2 = 0.0;  // second-order coefficient of L_from_euclid
};

// Both local expansions relating Euclidean and Fermat distance at x, in the
// direction u = (y-x)/||y-x||.
ExpansionPair euclid_fermat_expansions(const LocalDensityJet& jet, const Vec& x, const Vec& y,
                                       double p, std::size_t m);

// beta^alpha (K + 3 beta^2 (p-1)^2 L1^2/m^2 + 2 beta^2 (p-1) L1^2/m
//             + beta (p-1) L2/m).
double sectional_curvature_bound(double K, double beta, double L1, double L2, double p,
                                 std::size_t m);

}  // namespace fermat
