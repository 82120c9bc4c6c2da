#include "fermat/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fermat/density.hpp"
#include "fermat/errors.hpp"

namespace fermat {

SparseWeightedGraph SparseWeightedGraph::from_pairs(std::size_t n,
                                                    const std::vector<std::size_t>& is,
                                                    const std::vector<std::size_t>& js,
                                                    const Vec& ws, bool includes_self_loops) {
    SparseWeightedGraph g;
    g.n_ = n;
    g.self_loops_ = includes_self_loops;
    std::vector<std::size_t> count(n + 1, 0);
    for (std::size_t e = 0; e < is.size(); ++e) {
        ++count[is[e] + 1];
        if (is[e] != js[e]) ++count[js[e] + 1];
    }
    g.row_ptr_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) g.row_ptr_[i + 1] = g.row_ptr_[i] + count[i + 1];
    g.col_idx_.assign(g.row_ptr_[n], 0);
    g.values_.assign(g.row_ptr_[n], 0.0);
    std::vector<std::size_t> cursor(g.row_ptr_.begin(), g.row_ptr_.end() - 1);
    for (std::size_t e = 0; e < is.size(); ++e) {
        const std::size_t i = is[e], j = js[e];
        g.col_idx_[cursor[i]] = static_cast<std::uint32_t>(j);
        g.values_[cursor[i]++] = ws[e];
        if (i != j) {
            g.col_idx_[cursor[j]] = static_cast<std::uint32_t>(i);
            g.values_[cursor[j]++] = ws[e];
        }
    }
    g.rebuild_degrees();
    return g;
}

void SparseWeightedGraph::rebuild_degrees() {
    degrees_.assign(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e) degrees_[i] += values_[e];
}

Vec SparseWeightedGraph::recompute_degrees() const {
    Vec d(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e) d[i] += values_[e];
    return d;
}

SparseWeightedGraph SparseWeightedGraph::reweight(double exponent) const {
    SparseWeightedGraph g(*this);
    if (exponent == 0.0) return g;
    Vec dpow(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        if (!(degrees_[i] > 0.0)) throw ZeroDegree("degree vanishes at node " + std::to_string(i));
        dpow[i] = std::pow(degrees_[i], exponent);
    }
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e)
            g.values_[e] = values_[e] / (dpow[i] * dpow[col_idx_[e]]);
    g.rebuild_degrees();
    return g;
}

Vec SparseWeightedGraph::multiply(const Vec& x) const {
    Vec y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        double s = 0.0;
        for (std::size_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e) s += values_[e] * x[col_idx_[e]];
        y[i] = s;
    }
    return y;
}

bool SparseWeightedGraph::connected() const {
    if (n_ == 0) return true;
    std::vector<char> seen(n_, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        for (std::size_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e) {
            const std::size_t j = col_idx_[e];
            if (j != i && values_[e] > 0.0 && !seen[j]) {
                seen[j] = 1;
                ++reached;
                stack.push_back(j);
            }
        }
    }
    return reached == n_;
}

Mat SparseWeightedGraph::dense() const {
    Mat w(n_, n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e) w(i, col_idx_[e]) = values_[e];
    return w;
}

double kernel_eta(double t, std::size_t m) {
    if (t < 0.0) throw NegativeArgument("kernel argument must be nonnegative");
    return t <= 1.0 ? 1.0 / unit_ball_volume(m) : 0.0;
}

SparseWeightedGraph build_weights(const Mat& distances, double h, std::size_t m) {
    if (!(h > 0.0)) throw Error("bandwidth must be positive");
    const std::size_t n = distances.rows();
    const double w0 = 1.0 / (static_cast<double>(n) * std::pow(h, static_cast<double>(m)) *
                             unit_ball_volume(m));
    SparseWeightedGraph g;
    g.n_ = n;
    g.self_loops_ = true;
    g.row_ptr_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t cnt = 0;
        const double* row = distances.row(i);
        for (std::size_t jj = 0; jj < n; ++jj)
            if (row[jj] <= h) ++cnt;
        g.row_ptr_[i + 1] = g.row_ptr_[i] + cnt;
    }
    g.col_idx_.assign(g.row_ptr_[n], 0);
    g.values_.assign(g.row_ptr_[n], w0);
    std::size_t cursor = 0;
    bool any_offdiag = false;
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = distances.row(i);
        for (std::size_t jj = 0; jj < n; ++jj)
            if (row[jj] <= h) {
                g.col_idx_[cursor++] = static_cast<std::uint32_t>(jj);
                any_offdiag |= (jj != i);
            }
    }
    if (!any_offdiag) throw EmptyGraph("every off-diagonal kernel weight is zero");
    g.rebuild_degrees();
    return g;
}

Vec degrees(const SparseWeightedGraph& g) { return g.degrees(); }

Vec OperatorMatrix::apply(const Vec& x) const {
    const std::size_t n = graph.size();
    Vec t(x);
    if (!post.empty())
        for (std::size_t i = 0; i < n; ++i) t[i] *= post[i];
    Vec y = graph.multiply(t);
    const Vec& d = graph.degrees();
    for (std::size_t i = 0; i < n; ++i) y[i] = d[i] * t[i] - y[i];
    if (!pre.empty())
        for (std::size_t i = 0; i < n; ++i) y[i] *= pre[i];
    for (std::size_t i = 0; i < n; ++i) y[i] *= scale;
    return y;
}

Vec OperatorMatrix::apply_transpose(const Vec& x) const {
    const std::size_t n = graph.size();
    Vec t(x);
    if (!pre.empty())
        for (std::size_t i = 0; i < n; ++i) t[i] *= pre[i];
    Vec y = graph.multiply(t);  // W symmetric
    const Vec& d = graph.degrees();
    for (std::size_t i = 0; i < n; ++i) y[i] = d[i] * t[i] - y[i];
    if (!post.empty())
        for (std::size_t i = 0; i < n; ++i) y[i] *= post[i];
    for (std::size_t i = 0; i < n; ++i) y[i] *= scale;
    return y;
}

Vec OperatorMatrix::row_sums() const {
    Vec ones(graph.size(), 1.0);
    return apply(ones);
}

Mat OperatorMatrix::dense() const {
    const std::size_t n = graph.size();
    Mat l(n, n, 0.0);
    const Vec& d = graph.degrees();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t e = graph.row_begin(i); e < graph.row_end(i); ++e)
            l(i, graph.col(e)) -= graph.value(e);
        l(i, i) += d[i];
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double v = l(i, j) * scale;
            if (!pre.empty()) v *= pre[i];
            if (!post.empty()) v *= post[j];
            l(i, j) = v;
        }
    return l;
}

namespace {
Vec degree_power(const SparseWeightedGraph& g, double e) {
    const Vec& d = g.degrees();
    Vec out(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (!(d[i] > 0.0)) throw ZeroDegree("degree vanishes at node " + std::to_string(i));
        out[i] = std::pow(d[i], e);
    }
    return out;
}
}  // namespace

OperatorMatrix laplacian_jqr(const SparseWeightedGraph& w, double j, double q, double r) {
    OperatorMatrix op;
    if (q == 1.0) {
        op.graph = w;
        return op;
    }
    op.graph = w.reweight(q);
    op.pre = degree_power(op.graph, (1.0 - j) / (q - 1.0));
    if (r != 0.0) op.post = degree_power(op.graph, -r / (q - 1.0));
    return op;
}

OperatorMatrix laplacian_dn(const SparseWeightedGraph& w, double q, double j) {
    OperatorMatrix op;
    op.graph = w.reweight(1.0 - 0.5 * q);
    if (q != 1.0) op.pre = degree_power(op.graph, (1.0 - j) / (q - 1.0));
    return op;
}

OperatorMatrix laplacian_ps(const SparseWeightedGraph& w_fermat, double s) {
    OperatorMatrix op;
    op.graph = w_fermat.reweight(1.0 - 0.5 * s);
    op.pre = degree_power(op.graph, -1.0);
    return op;
}

OperatorMatrix rw_laplacian(const SparseWeightedGraph& w, double h, std::size_t m) {
    OperatorMatrix op;
    op.graph = w;
    op.pre = degree_power(op.graph, -1.0);
    op.scale = 2.0 * (static_cast<double>(m) + 2.0) / (h * h);
    return op;
}

double dirichlet_form(const SparseWeightedGraph& w, double h, std::size_t m, std::size_t n,
                      const Vec& u, const Vec& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t e = w.row_begin(i); e < w.row_end(i); ++e) {
            const std::size_t j = w.col(e);
            s += w.value(e) * (u[i] - u[j]) * (v[i] - v[j]);
        }
    return (static_cast<double>(m) + 2.0) / (static_cast<double>(n) * h * h) * s;
}

double ncut(const SparseWeightedGraph& w, const std::vector<int>& labels) {
    double cut = 0.0, vol0 = 0.0, vol1 = 0.0;
    std::size_t n0 = 0, n1 = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        (labels[i] == 0 ? n0 : n1)++;
        for (std::size_t e = w.row_begin(i); e < w.row_end(i); ++e) {
            const std::size_t j = w.col(e);
            (labels[i] == 0 ? vol0 : vol1) += w.value(e);
            if (j != i && labels[i] != labels[j]) cut += w.value(e);
        }
    }
    if (n0 == 0 || n1 == 0) throw EmptySide("both sides of the partition must be nonempty");
    cut *= 0.5;  // each crossing edge visited from both endpoints
    return cut / std::min(vol0, vol1);
}

double bandwidth_rule(std::size_t n, std::size_t m, double eps, double p, double beta,
                      double mu) {
    if (!(eps > 0.0) || !(eps < 1.0 / (8.0 * p + 6.0)))
        throw EpsOutOfRange("eps must lie in (0, 1/(8p+6))");
    const double md = static_cast<double>(m);
    return 4.0 * mu * std::pow(beta, (p - 1.0) / md) *
           std::pow(static_cast<double>(n) * beta / 2.0, -(1.0 / md) * (1.0 / 3.0 - eps));
}

std::string LaplacianSpec::mode_name() const {
    return mode == Mode::Jqr ? "jqr" : "fermat_ps";
}

}  // namespace fermat
