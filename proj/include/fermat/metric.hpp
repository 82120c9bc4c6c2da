#pragma once

#include <cstddef>
#include <optional>

#include "fermat/graph.hpp"
#include "fermat/linalg.hpp"
#include "fermat/sampling.hpp"

namespace fermat {

struct FermatParams {
    double p = 2.0;          // >= 1; the sub-unit regime is out of scope
    std::size_t m = 2;       // intrinsic dimension, drives the normalization
    enum class Mode { Exact, Knn } mode = Mode::Exact;
    std::size_t k = 0;       // 0 in knn mode means ceil(2 ln n)
};

// Pairwise table of l_p^p values (pth powers of the Fermat distances).
struct DistanceMatrix {
    Mat values;
    double p = 1.0;
    std::size_t m = 1;
    bool normalized = false;
    double scale = 1.0;  // applied factor n^{(p-1)/m} once normalized
};

// Symmetrized k-nearest-neighbor graph with exact Euclidean edge lengths
// (edge present if either endpoint lists the other).  Brute-force search up
// to 2000 points, grid buckets beyond.
SparseWeightedGraph knn_graph(const PointCloud& cloud, std::size_t k);

// Single-source l_p^p to every point.  Exact mode relaxes the complete
// graph with edge costs |x_i-x_j|^p; knn mode restricts Dijkstra to the
// symmetrized k-NN graph and reports unreachable targets instead of
// returning infinities.  Ties break lexicographically on (distance, node).
Vec fermat_sssp(const PointCloud& cloud, const FermatParams& params, std::size_t source);

// l_p^p between two arbitrary endpoints routed through the cloud (the
// endpoints are appended to the point set for the search).
double fermat_between(const PointCloud& cloud, const FermatParams& params, const Vec& x,
                      const Vec& y);

// All pairs via repeated Dijkstra.  In knn mode the default k is
// ceil(2 ln n); on disconnection k doubles once and then the failure is
// reported.
DistanceMatrix fermat_pairwise(const PointCloud& cloud, const FermatParams& params,
                               std::size_t size_cap = 20000);

// Multiplies the stored pth powers by n^{(p-1)/m} and records the factor.
DistanceMatrix normalize_fermat(const DistanceMatrix& dm, std::size_t n,
                                const FermatParams& params);

std::size_t default_knn_k(std::size_t n);

}  // namespace fermat
