#pragma once

#include <cstddef>
#include <vector>

#include "fermat/density.hpp"
#include "fermat/eigs.hpp"
#include "fermat/graph.hpp"
#include "fermat/linalg.hpp"

namespace fermat {

// Bottom of a generalized spectrum.  Eigenvectors are orthonormal in the
// mass inner product <u,v>_m = (1/n) sum_i mass_i u_i v_i; residuals record
// ||A v - lambda B v|| / ||B v|| per pair.  Near-degenerate eigenvalues
// (gap < 1e-9) share a cluster id: inside a cluster only the spanned
// subspace is meaningful.
struct SpectralDecomposition {
    Vec eigenvalues;
    Mat eigenvectors;  // n x K
    Vec mass;
    Vec residuals;
    std::vector<int> cluster_id;

    std::size_t size() const { return eigenvalues.size(); }
    double mass_inner(const Vec& u, const Vec& v) const;
};

struct EigOptions {
    std::size_t dense_cutoff = 1200;  // dense tridiagonal route up to here
    double tol = 1e-10;
    bool require_connected = true;
    double scale = 1.0;  // eigenvalues are reported as scale * pencil values
};

// Smallest K eigenpairs of the pencil (D - W, diag(mass)) for the given
// symmetric graph: the random-walk-type problem solved through the
// symmetric conjugate M = B^{-1/2} (D - W) B^{-1/2} (dense tridiagonal +
// implicit-shift iteration up to the cutoff, Lanczos above), back-transform
// v = B^{-1/2} vt, mass renormalization, and the deterministic sign
// convention (largest-magnitude entry positive).
SpectralDecomposition eig_smallest(const SparseWeightedGraph& g, std::size_t K,
                                   const EigOptions& opts = {});

// Same pencil with an explicit mass diagonal (used by the degree-normalized
// Laplacian families whose conjugating weight is a power of the degrees).
SpectralDecomposition eig_smallest_pencil(const SparseWeightedGraph& g, const Vec& mass,
                                          std::size_t K, const EigOptions& opts = {});

// Smallest K of a Laplacian-family operator; throws for normalizations that
// are not conjugate-symmetrizable.
SpectralDecomposition eig_smallest(const OperatorMatrix& op, std::size_t K,
                                   const EigOptions& opts = {});

// Convenience wrapper resolving a LaplacianSpec against a kernel graph.
SpectralDecomposition eig_smallest(const LaplacianSpec& spec, const SparseWeightedGraph& g,
                                   std::size_t K, const EigOptions& opts = {});

// Max relative gap between eigenvalues computed from the Dirichlet-form /
// mass-matrix pencil (dense, independent arithmetic path) and eig_smallest
// on the same graph.  Oracle-scale sizes only.
double rayleigh_minmax_check(const SparseWeightedGraph& g, double h, std::size_t m,
                             std::size_t K);

// Reference eigenvalues of the weighted operator
//   -rho^{2(p-1)/m} [ Delta + (p(s-1)+1+2(p-1)/m) (rho'/rho) d/dx ]
// on the unit-circumference circle: central differences on a periodic grid,
// conjugated by the weight rho^{p(s-1)+1} that makes the operator
// self-adjoint, then symmetrized and solved densely.
Vec continuum_spectrum_1d(const DensityModel& model, double p, double s, std::size_t grid_n,
                          std::size_t K);

struct Interval {
    double lo;  // exclusive
    double hi;  // inclusive
    bool contains(double x) const { return x > lo && x <= hi; }
};

// Mass-inner-product projection of u onto span{v_k : lambda_k in J}.
Vec spectral_projection(const SpectralDecomposition& dec, const Interval& J, const Vec& u);

// Report of the eigenvector-perturbation bound checker.
struct DiscrepancyReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    double audit_max = 0.0;      // max |b1(u)-b2(u)| over the audited unit vectors
    double lemma_energy = 0.0;   // b2-energy of the Lemma residual
    double lemma_energy_bound = 0.0;
    double lemma_norm = 0.0;     // squared norm of the Lemma residual
    double lemma_norm_bound = 0.0;
};

// Checks the projection bound
//   ||u1_k - P2_{(l1_k-gamma, l1_k+alpha]} u1_k||^2
//     <= delta l1_k / beta + alpha/gamma + delta l1_k (l1_k + beta)/(gamma beta)
// for quadratic forms b1(u) = u^T A1 u, b2(u) = u^T A2 u, after auditing the
// delta hypothesis on n_audit random unit vectors and the spectral gap
// condition (no b2 eigenvalue in (l1_k + alpha, l1_k + beta)).  `a` is the
// separate window parameter of the projection lemma, which the source notes
// keep distinct from alpha.  k is a 0-based index into the ascending b1
// spectrum.
DiscrepancyReport eigvec_discrepancy_check(const Mat& a1, const Mat& a2, std::size_t k,
                                           double delta, double alpha, double beta, double gamma,
                                           double a, std::size_t n_audit = 1000);

// Explicit Euler for du/dt = u Q with Q = -L (row-vector convention).
// Checks the rate-matrix sanity (row sums of L near zero) and the stability
// bound dt <= 1/max|diag Q|.  Total mass of u is conserved.
Vec diffusion_evolve(const OperatorMatrix& l, const Vec& u0, double T, double dt);

}  // namespace fermat
