#pragma once

#include <cstdint>
#include <vector>

#include "fermat/metric.hpp"
#include "fermat/spectral.hpp"

namespace fermat {

struct ClusterAssignment {
    std::vector<int> labels;
    double inertia = 0.0;
    std::uint64_t seed = 0;
    std::size_t iterations = 0;
};

// k-means++ seeding, Lloyd iterations until center drift < 1e-9 or max_iter,
// best of `restarts` runs by (inertia, restart index).  Restarts draw from
// split RNG streams, so the reduction is deterministic.
ClusterAssignment kmeans(const Mat& embedding, std::size_t k, std::uint64_t seed,
                         std::size_t max_iter = 300, std::size_t restarts = 10);

// Max over label permutations of the matching fraction (k <= 8).
double accuracy(const std::vector<int>& labels, const std::vector<int>& reference);

struct PipelineResult {
    std::vector<int> labels;
    SpectralDecomposition spectrum;
    Mat embedding;
    double h = 0.0;       // bandwidth actually used
    double mu_hat = 1.0;  // recorded when a percolation correction is applied
};

struct PipelineOptions {
    FermatParams::Mode mode = FermatParams::Mode::Exact;
    std::size_t knn_k = 0;           // 0: ceil(2 ln n)
    std::size_t exact_cap = 2000;    // Auto mode switches to knn above this
    bool auto_mode = true;
    bool raw_lp = false;             // kernel on raw l_p instead of normalized l_p^p
    bool row_normalize = false;      // row-normalize the spectral embedding
    std::size_t dense_cutoff = 1200;
};

// Fermat-distance spectral clustering: pairwise l_p^p, normalization,
// kernel weights at bandwidth h, the (p, s) Laplacian, bottom r
// eigenvectors (the constant one included), k-means.
PipelineResult spectral_cluster_fd(const PointCloud& cloud, double p, double s, double h,
                                   std::size_t r, std::size_t k, std::uint64_t seed,
                                   const PipelineOptions& opts = {});

// Degree-normalized Euclidean spectral clustering with the clustering
// algorithm's exponent slots (q, j).
PipelineResult spectral_cluster_dn(const PointCloud& cloud, double q, double j, double h,
                                   std::size_t r, std::size_t k, std::uint64_t seed,
                                   const PipelineOptions& opts = {});

// Euclidean pairwise distance matrix (the p = 1 Fermat table).
Mat euclidean_pairwise(const PointCloud& cloud);

}  // namespace fermat
