#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fermat/linalg.hpp"

namespace fermat {

// Symmetric nonnegative weight structure in CSR form (both directions of
// every edge stored; the diagonal carries self-loops).  Degrees are cached
// row sums including the self-loop, matching the paper's degree sums.
class SparseWeightedGraph {
  public:
    SparseWeightedGraph() = default;

    static SparseWeightedGraph from_pairs(std::size_t n,
                                          const std::vector<std::size_t>& is,
                                          const std::vector<std::size_t>& js,
                                          const Vec& ws, bool includes_self_loops);

    std::size_t size() const { return n_; }
    bool includes_self_loops() const { return self_loops_; }
    const Vec& degrees() const { return degrees_; }
    Vec recompute_degrees() const;

    std::size_t row_begin(std::size_t i) const { return row_ptr_[i]; }
    std::size_t row_end(std::size_t i) const { return row_ptr_[i + 1]; }
    std::size_t col(std::size_t e) const { return col_idx_[e]; }
    double value(std::size_t e) const { return values_[e]; }
    std::size_t entry_count() const { return col_idx_.size(); }

    // W'_ij = W_ij / (d_i^e d_j^e) with d the cached degrees of *this.
    SparseWeightedGraph reweight(double exponent) const;

    Vec multiply(const Vec& x) const;  // W x
    bool connected() const;            // via off-diagonal edges
    Mat dense() const;

  private:
    std::size_t n_ = 0;
    bool self_loops_ = false;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::uint32_t> col_idx_;
    Vec values_;
    Vec degrees_;
    void rebuild_degrees();
    friend SparseWeightedGraph build_weights(const Mat&, double, std::size_t);
};

// Indicator kernel eta(t) = 1/omega_m on [0,1] (closed at 1), 0 beyond.
double kernel_eta(double t, std::size_t m);

// w_ij = (1/(n h^m)) eta(d_ij / h); self-loops included (d_ii = 0).
SparseWeightedGraph build_weights(const Mat& distances, double h, std::size_t m);

Vec degrees(const SparseWeightedGraph& g);

// Laplacian represented as L = scale * pre . (Dq - Wq) . post with diagonal
// pre/post factors; dense materialization only for oracle-scale tests.
struct OperatorMatrix {
    SparseWeightedGraph graph;  // the (possibly reweighted) symmetric weights
    Vec pre, post;              // diagonal factors; empty means identity
    double scale = 1.0;

    std::size_t size() const { return graph.size(); }
    Vec apply(const Vec& x) const;            // L x
    Vec apply_transpose(const Vec& x) const;  // L^T x
    Vec row_sums() const;
    Mat dense() const;
};

// L_{j,q,r} with the base-family exponent convention: (W_q)_ij =
// W_ij / (D_i^q D_j^q), and L = D_q^{(1-j)/(q-1)} (D_q - W_q) D_q^{-r/(q-1)}
// for q != 1, plain D - W for q = 1.
OperatorMatrix laplacian_jqr(const SparseWeightedGraph& w, double j, double q, double r);

// Degree-normalized Laplacian with the clustering-algorithm exponent
// convention: (W_q)_ij = W_ij / (d_i^{1-q/2} d_j^{1-q/2}),
// L = D_q^{(1-j)/(q-1)} (D_q - W_q).  The two conventions coincide only
// after translating parameter slots; both are kept literal.
OperatorMatrix laplacian_dn(const SparseWeightedGraph& w, double q, double j);

// Fermat spectral-clustering normalization: W_{p,s} = W / (d^{1-s/2} d^{1-s/2}),
// L = D_{p,s}^{-1} (D_{p,s} - W_{p,s}).  Rows of D^{-1} W_{p,s} sum to one.
OperatorMatrix laplacian_ps(const SparseWeightedGraph& w_fermat, double s);

// Random-walk Laplacian (2(m+2)/h^2) (I - D^{-1} W).
OperatorMatrix rw_laplacian(const SparseWeightedGraph& w, double h, std::size_t m);

// ((m+2)/(n h^2)) sum_ij w_ij (u_i-u_j)(v_i-v_j).
double dirichlet_form(const SparseWeightedGraph& w, double h, std::size_t m, std::size_t n,
                      const Vec& u, const Vec& v);

// cut(Z, Z^c) / min(vol Z, vol Z^c); self-loops never cross the cut but do
// count toward volumes.
double ncut(const SparseWeightedGraph& w, const std::vector<int>& labels);

// Corollary lower bound 4 mu beta^{(p-1)/m} (n beta / 2)^{-(1/m)(1/3-eps)},
// adopted as the default bandwidth.
double bandwidth_rule(std::size_t n, std::size_t m, double eps, double p, double beta, double mu);

// Normalization metadata for serialized Laplacians.
struct LaplacianSpec {
    enum class Mode { Jqr, FermatPs };
    Mode mode = Mode::FermatPs;
    double j = 2, q = 2, r = 0;
    double p = 1, s = 2;
    double h = 1;
    std::size_t m = 2;
    std::size_t n = 0;
    std::string mode_name() const;
};

}  // namespace fermat
