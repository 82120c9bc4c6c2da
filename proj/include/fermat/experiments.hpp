#pragma once

#include <string>
#include <vector>

#include "fermat/clustering.hpp"
#include "fermat/io.hpp"
#include "fermat/percolation.hpp"

namespace fermat {

// Elongated box with a low-density vertical strip running the long way:
// [0,1] x [0,4], rho = ratio inside |x1 - 0.5| < width/2, 1 outside
// (before normalization).  The geometric reference partition cuts the box
// short at x2 = 2; the density reference splits along the strip at x1 = 0.5.
DensityModel make_two_partitions_model(double ratio, double strip_width);

std::vector<int> geometric_reference(const PointCloud& cloud);
std::vector<int> density_reference(const PointCloud& cloud);

// Off-diagonal quantile of a distance table; the experiments' default
// bandwidth when no explicit h is configured.
double distance_quantile(const Mat& distances, double q);

struct TwoPartitionsResult {
    std::vector<double> p_grid;
    std::vector<double> acc_geometric;
    std::vector<double> acc_density;
};

struct EigConvergenceResult {
    std::vector<std::size_t> n_values;
    // CSV rows (n, k, lambda_fermat, lambda_dn_euclid, lambda_plain_euclid);
    // the Fermat column carries the mu_hat^2 rescaling recorded below.
    std::vector<Vec> rows;
    std::vector<double> median_gap_by_n;  // fermat vs dn, k = 2..K (1-based)
    std::vector<double> seconds_fermat, seconds_dn, seconds_plain;
    double mu_hat = 1.0;
};

struct CircleConvergenceResult {
    std::vector<std::size_t> n_values;
    std::vector<Vec> rows;  // (n, k, lambda_graph, lambda_fd_reference)
    std::vector<std::vector<double>> rel_err_lambda2;  // per n, per seed
    std::vector<double> median_rel_err_lambda2;
    double mu_hat = 1.0;
};

// Each driver consumes its keys from cfg, writes CSV/SVG plus a config
// sidecar into out_dir, and returns the summary the acceptance suite reads.
TwoPartitionsResult run_two_partitions(Config& cfg, const std::string& out_dir);
EigConvergenceResult run_eig_convergence(Config& cfg, const std::string& out_dir);
CircleConvergenceResult run_circle_convergence(Config& cfg, const std::string& out_dir);
void run_fermat_ball(Config& cfg, const std::string& out_dir);

}  // namespace fermat
