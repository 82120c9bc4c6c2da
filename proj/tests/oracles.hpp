#pragma once

// Test-only oracles, kept independent of the library's production paths.

#include <algorithm>
#include <cmath>
#include <vector>

#include "fermat/graph.hpp"
#include "fermat/linalg.hpp"
#include "fermat/rng.hpp"
#include "fermat/sampling.hpp"

#ifdef FERMAT_HAVE_EIGEN
#include <Eigen/Dense>
#endif

namespace oracles {

// All-pairs l_p^p by Floyd-Warshall on the complete graph.
inline fermat::Mat floyd_warshall(const fermat::Mat& pts, double p) {
    const std::size_t n = pts.rows();
    const std::size_t dim = pts.cols();
    fermat::Mat d(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j)
                d(i, j) = std::pow(fermat::sq_dist(pts.row(i), pts.row(j), dim), 0.5 * p);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            const double dik = d(i, k);
            for (std::size_t j = 0; j < n; ++j)
                d(i, j) = std::min(d(i, j), dik + d(k, j));
        }
    return d;
}

inline fermat::PointCloud random_cloud(std::size_t n, std::size_t dim, std::uint64_t seed) {
    fermat::CounterRng rng(seed, 0);
    fermat::PointCloud cloud;
    cloud.points = fermat::Mat(n, dim);
    cloud.intrinsic_dim = dim;
    cloud.seed = seed;
    cloud.model_tag = "test";
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t d = 0; d < dim; ++d) cloud.points(i, d) = rng.uniform();
    return cloud;
}

// Random connected weighted graph with self-loops, for Laplacian tests.
inline fermat::SparseWeightedGraph random_graph(std::size_t n, std::uint64_t seed,
                                                double edge_prob = 0.4) {
    fermat::CounterRng rng(seed, 0);
    std::vector<std::size_t> is, js;
    fermat::Vec ws;
    for (std::size_t i = 0; i < n; ++i) {
        is.push_back(i);
        js.push_back(i);
        ws.push_back(0.1 + rng.uniform());
        if (i + 1 < n) {  // spanning path keeps it connected
            is.push_back(i);
            js.push_back(i + 1);
            ws.push_back(0.1 + rng.uniform());
        }
        for (std::size_t j = i + 2; j < n; ++j)
            if (rng.uniform() < edge_prob) {
                is.push_back(i);
                js.push_back(j);
                ws.push_back(0.1 + rng.uniform());
            }
    }
    return fermat::SparseWeightedGraph::from_pairs(n, is, js, ws, true);
}

#ifdef FERMAT_HAVE_EIGEN
// Smallest K of the pencil (D - W, diag(mass)) by Eigen's generalized
// solver; the production route never touches this code.
inline fermat::Vec dense_pencil_eigenvalues(const fermat::SparseWeightedGraph& g,
                                            const fermat::Vec& mass, std::size_t K) {
    const std::size_t n = g.size();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    const fermat::Vec& d = g.degrees();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t e = g.row_begin(i); e < g.row_end(i); ++e)
            a(i, g.col(e)) -= g.value(e);
        a(i, i) += d[i];
        b(i, i) = mass[i];
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, b);
    fermat::Vec out(K);
    for (std::size_t k = 0; k < K; ++k) out[k] = solver.eigenvalues()(static_cast<long>(k));
    return out;
}

inline void dense_sym_eigen(const fermat::Mat& m, fermat::Vec& evals, fermat::Mat& evecs) {
    const std::size_t n = m.rows();
    Eigen::MatrixXd a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = m(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    evals.resize(n);
    evecs = fermat::Mat(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        evals[i] = solver.eigenvalues()(static_cast<long>(i));
        for (std::size_t j = 0; j < n; ++j) evecs(i, j) = solver.eigenvectors()(i, j);
    }
}
#endif

}  // namespace oracles
