#pragma once

#include <string>
#include <vector>

#include "fermat/linalg.hpp"

namespace fermat {

enum class DomainKind { Box, Disk, Circle };

// Supported supports: an axis-aligned box in R^m, the closed unit disk in
// R^2, and the circle of unit circumference embedded in R^2 (radius 1/2pi,
// parameterized by arclength x in [0,1)).
struct Domain {
    DomainKind kind = DomainKind::Box;
    Vec lo, hi;  // box bounds; unused for disk/circle

    std::size_t ambient_dim() const;
    std::size_t intrinsic_dim() const;
    bool contains(const Vec& x, double tol = 1e-9) const;
    double measure() const;  // Lebesgue (box/disk) or arclength (circle)
};

enum class DensityKind { Uniform, Linear, DiskValley, GaussianMixtureBg, CustomGrid, SineCircle };

// Density value with its first two derivatives at a point, in ambient
// coordinates for flat domains and in the arclength coordinate for the
// circle.
struct LocalDensityJet {
    double rho0 = 1.0;
    Vec grad;
    Mat hess;
};

// Evaluatable probability density on one of the supported domains.  The raw
// closed forms are normalized numerically at construction (tensor-grid
// Gauss-Legendre quadrature, 512 nodes per axis; trapezoid in the periodic
// directions) so that the model integrates to one against the domain
// measure.  beta() reports the Assumption-style sandwich constant: rho is
// within [1/beta, beta] everywhere on the domain.
class DensityModel {
  public:
    static DensityModel uniform(Domain domain);
    // rho proportional to 1 + slope * x1 on the given box.
    static DensityModel linear(Domain box, double slope);
    // rho proportional to (tau + x1^2)^{-1} on the unit disk.
    static DensityModel disk_valley(double tau);
    // Two isotropic Gaussians plus a constant background of weight tau,
    // truncated to the box.
    static DensityModel gaussian_mixture_bg(Domain box, Vec mean1, Vec mean2, double sigma,
                                            double tau);
    // Bilinear interpolation of a value grid over a box; values.size() ==
    // nx*ny, row-major over a regular node lattice.
    static DensityModel custom_grid(Domain box, std::size_t nx, std::size_t ny, Vec values);
    // rho proportional to 1 + amplitude * sin(2 pi x) on the unit-circumference circle.
    static DensityModel sine_circle(double amplitude);

    DensityKind kind() const { return kind_; }
    const Domain& domain() const { return domain_; }
    double beta() const { return beta_; }
    double normalizer() const { return normalizer_; }
    double max_density() const { return rho_max_; }
    bool has_analytic_jet() const { return analytic_jet_; }
    std::string tag() const;

    // Normalized density at an ambient point; throws OutOfDomain off the
    // support.
    double eval(const Vec& x) const;

    // Density in the intrinsic coordinate (circle only).
    double eval_arclength(double x) const;

    // Value, gradient and Hessian at x.  Analytic when the kind declares
    // them, central finite differences (step 1e-5) otherwise.  For the
    // circle the jet is in the arclength coordinate.
    LocalDensityJet jet(const Vec& x) const;
    LocalDensityJet jet_arclength(double x) const;

    // Round-trippable flat key=value description.
    std::string config_text() const;
    static DensityModel from_config_text(const std::string& text);

  private:
    DensityModel() = default;
    void finalize();  // compute normalizer, rho_max, beta
    double raw(const Vec& x) const;
    double raw_arclength(double x) const;

    DensityKind kind_ = DensityKind::Uniform;
    Domain domain_;
    Vec params_;          // kind-specific scalars
    Vec grid_values_;     // CustomGrid only
    std::size_t grid_nx_ = 0, grid_ny_ = 0;
    double normalizer_ = 1.0;
    double rho_max_ = 1.0;
    double rho_min_ = 1.0;
    double beta_ = 1.0;
    bool analytic_jet_ = true;
};

// Volume of the m-dimensional Euclidean unit ball, pi^{m/2} / Gamma(m/2+1).
double unit_ball_volume(std::size_t m);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(std::size_t n, Vec& nodes, Vec& weights);

}  // namespace fermat
