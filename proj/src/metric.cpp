#include "fermat/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "fermat/errors.hpp"

namespace fermat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double hop_cost(double sq, double p) {
    if (p == 1.0) return std::sqrt(sq);
    if (p == 2.0) return sq;
    return std::pow(sq, 0.5 * p);
}

// Lazy-deletion binary heap Dijkstra over the complete graph.  Costs are
// recomputed from coordinates on demand; rows are never materialized.
void dijkstra_complete(const Mat& pts, double p, std::size_t source, Vec& dist,
                       std::ptrdiff_t target = -1) {
    const std::size_t n = pts.rows();
    const std::size_t dim = pts.cols();
    dist.assign(n, kInf);
    std::vector<char> done(n, 0);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[source] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
        const auto [d, i] = heap.top();
        heap.pop();
        if (done[i]) continue;
        done[i] = 1;
        if (target >= 0 && static_cast<std::size_t>(target) == i) return;
        const double* xi = pts.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            if (done[j]) continue;
            const double sq = sq_dist(xi, pts.row(j), dim);
            const double nd = d + hop_cost(sq, p);
            if (nd < dist[j]) {
                dist[j] = nd;
                heap.emplace(nd, j);
            }
        }
    }
}

void dijkstra_graph(const SparseWeightedGraph& g, double p, std::size_t source, Vec& dist) {
    const std::size_t n = g.size();
    dist.assign(n, kInf);
    std::vector<char> done(n, 0);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[source] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
        const auto [d, i] = heap.top();
        heap.pop();
        if (done[i]) continue;
        done[i] = 1;
        for (std::size_t e = g.row_begin(i); e < g.row_end(i); ++e) {
            const std::size_t j = g.col(e);
            if (done[j]) continue;
            const double len = g.value(e);
            const double nd = d + std::pow(len, p);
            if (nd < dist[j]) {
                dist[j] = nd;
                heap.emplace(nd, j);
            }
        }
    }
}

void knn_brute(const Mat& pts, std::size_t k, std::vector<std::size_t>& is,
               std::vector<std::size_t>& js, Vec& lens) {
    const std::size_t n = pts.rows();
    const std::size_t dim = pts.cols();
    std::vector<std::pair<double, std::size_t>> cand(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            cand[j] = {j == i ? kInf : sq_dist(pts.row(i), pts.row(j), dim), j};
        std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
        for (std::size_t t = 0; t < k; ++t) {
            is.push_back(i);
            js.push_back(cand[t].second);
            lens.push_back(std::sqrt(cand[t].first));
        }
    }
}

// Uniform grid buckets; rings expand until the kth best neighbor is closer
// than the next ring can offer.
void knn_grid(const Mat& pts, std::size_t k, std::vector<std::size_t>& is,
              std::vector<std::size_t>& js, Vec& lens) {
    const std::size_t n = pts.rows();
    const std::size_t dim = pts.cols();
    Vec lo(dim, kInf), hi(dim, -kInf);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t d = 0; d < dim; ++d) {
            lo[d] = std::min(lo[d], pts(i, d));
            hi[d] = std::max(hi[d], pts(i, d));
        }
    double vol = 1.0;
    for (std::size_t d = 0; d < dim; ++d) vol *= std::max(hi[d] - lo[d], 1e-12);
    const double cell = std::max(std::pow(vol * static_cast<double>(k) / n, 1.0 / dim), 1e-9);
    std::vector<std::size_t> dims(dim);
    std::size_t ncells = 1;
    for (std::size_t d = 0; d < dim; ++d) {
        dims[d] = std::max<std::size_t>(1, static_cast<std::size_t>((hi[d] - lo[d]) / cell) + 1);
        ncells *= dims[d];
    }
    const auto cell_of = [&](std::size_t i, std::size_t d) {
        return std::min<std::size_t>(dims[d] - 1,
                                     static_cast<std::size_t>((pts(i, d) - lo[d]) / cell));
    };
    const auto flat = [&](const std::vector<std::size_t>& c) {
        std::size_t f = 0;
        for (std::size_t d = 0; d < dim; ++d) f = f * dims[d] + c[d];
        return f;
    };
    std::vector<std::vector<std::uint32_t>> buckets(ncells);
    std::vector<std::size_t> c(dim);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < dim; ++d) c[d] = cell_of(i, d);
        buckets[flat(c)].push_back(static_cast<std::uint32_t>(i));
    }

    std::vector<std::pair<double, std::size_t>> best;
    for (std::size_t i = 0; i < n; ++i) {
        best.clear();
        for (std::size_t d = 0; d < dim; ++d) c[d] = cell_of(i, d);
        for (std::size_t ring = 0;; ++ring) {
            // Visit cells whose Chebyshev ring index equals `ring`.
            std::vector<std::size_t> idx(dim, 0);
            std::vector<long> off(dim, -static_cast<long>(ring));
            bool any_cell = false;
            for (;;) {
                long cheb = 0;
                for (std::size_t d = 0; d < dim; ++d) cheb = std::max(cheb, std::abs(off[d]));
                if (cheb == static_cast<long>(ring)) {
                    bool ok = true;
                    std::size_t f = 0;
                    for (std::size_t d = 0; d < dim; ++d) {
                        const long cd = static_cast<long>(c[d]) + off[d];
                        if (cd < 0 || cd >= static_cast<long>(dims[d])) { ok = false; break; }
                        f = f * dims[d] + static_cast<std::size_t>(cd);
                    }
                    if (ok) {
                        any_cell = true;
                        for (const std::uint32_t j : buckets[f]) {
                            if (j == i) continue;
                            best.emplace_back(sq_dist(pts.row(i), pts.row(j), dim), j);
                        }
                    }
                }
                std::size_t d = 0;
                for (; d < dim; ++d) {
                    if (off[d] < static_cast<long>(ring)) { ++off[d]; break; }
                    off[d] = -static_cast<long>(ring);
                }
                if (d == dim) break;
            }
            if (best.size() >= k) {
                std::nth_element(best.begin(), best.begin() + (k - 1), best.end());
                const double kth = best[k - 1].first;
                const double ring_min = static_cast<double>(ring) * cell;  // next ring lower bound
                if (kth <= ring_min * ring_min) break;
            }
            if (!any_cell && ring > dims[0] + dims[dim - 1] + 2 && best.size() >= k) break;
            if (ring > 4 * (*std::max_element(dims.begin(), dims.end())) + 4) break;
        }
        const std::size_t take = std::min(best.size(), k);
        std::partial_sort(best.begin(), best.begin() + take, best.end());
        for (std::size_t t = 0; t < take; ++t) {
            is.push_back(i);
            js.push_back(best[t].second);
            lens.push_back(std::sqrt(best[t].first));
        }
    }
}

SparseWeightedGraph knn_graph_of(const Mat& pts, std::size_t k) {
    const std::size_t n = pts.rows();
    std::vector<std::size_t> is, js;
    Vec lens;
    is.reserve(n * k);
    js.reserve(n * k);
    lens.reserve(n * k);
    if (n <= 2000 || pts.cols() > 3)
        knn_brute(pts, k, is, js, lens);
    else
        knn_grid(pts, k, is, js, lens);
    // Deduplicate (i,j)/(j,i) into one undirected edge.
    std::vector<std::size_t> ui, uj;
    Vec ul;
    std::vector<std::pair<std::uint64_t, double>> keyed(is.size());
    for (std::size_t e = 0; e < is.size(); ++e) {
        const std::uint64_t a = std::min(is[e], js[e]);
        const std::uint64_t b = std::max(is[e], js[e]);
        keyed[e] = {(a << 32) | b, lens[e]};
    }
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t e = 0; e < keyed.size(); ++e) {
        if (e > 0 && keyed[e].first == keyed[e - 1].first) continue;
        ui.push_back(keyed[e].first >> 32);
        uj.push_back(keyed[e].first & 0xFFFFFFFFu);
        ul.push_back(keyed[e].second);
    }
    return SparseWeightedGraph::from_pairs(n, ui, uj, ul, false);
}

}  // namespace

std::size_t default_knn_k(std::size_t n) {
    return static_cast<std::size_t>(std::ceil(2.0 * std::log(static_cast<double>(n))));
}

SparseWeightedGraph knn_graph(const PointCloud& cloud, std::size_t k) {
    if (k < 1 || k >= cloud.size()) throw Error("knn_graph requires 1 <= k < n");
    return knn_graph_of(cloud.points, k);
}

Vec fermat_sssp(const PointCloud& cloud, const FermatParams& params, std::size_t source) {
    const std::size_t n = cloud.size();
    if (n < 2) throw Error("fermat_sssp requires at least two points");
    if (source >= n) throw Error("source index out of range");
    Vec dist;
    if (params.mode == FermatParams::Mode::Exact) {
        dijkstra_complete(cloud.points, params.p, source, dist);
        return dist;
    }
    std::size_t k = params.k ? params.k : default_knn_k(n);
    for (int attempt = 0;; ++attempt) {
        const SparseWeightedGraph g = knn_graph_of(cloud.points, std::min(k, n - 1));
        dijkstra_graph(g, params.p, source, dist);
        const bool reached_all =
            std::none_of(dist.begin(), dist.end(), [](double d) { return d == kInf; });
        if (reached_all) return dist;
        if (attempt == 1)
            throw DisconnectedGraph("knn graph disconnected after doubling k to " +
                                    std::to_string(k));
        k = std::min(2 * k, n - 1);
    }
}

double fermat_between(const PointCloud& cloud, const FermatParams& params, const Vec& x,
                      const Vec& y) {
    const std::size_t n = cloud.size();
    const std::size_t dim = cloud.ambient_dim();
    Mat pts(n + 2, dim);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t d = 0; d < dim; ++d) pts(i, d) = cloud.points(i, d);
    for (std::size_t d = 0; d < dim; ++d) {
        pts(n, d) = x[d];
        pts(n + 1, d) = y[d];
    }
    Vec dist;
    dijkstra_complete(pts, params.p, n, dist, static_cast<std::ptrdiff_t>(n + 1));
    return dist[n + 1];
}

DistanceMatrix fermat_pairwise(const PointCloud& cloud, const FermatParams& params,
                               std::size_t size_cap) {
    const std::size_t n = cloud.size();
    if (n > size_cap)
        throw SizeCapExceeded("pairwise table of " + std::to_string(n) +
                              " points exceeds cap " + std::to_string(size_cap));
    if (n < 2) throw Error("fermat_pairwise requires at least two points");
    DistanceMatrix dm;
    dm.p = params.p;
    dm.m = params.m;
    dm.values = Mat(n, n, 0.0);

    if (params.mode == FermatParams::Mode::Exact && params.p == 1.0) {
        // At p = 1 the direct hop is optimal for every pair.
        const std::size_t dim = cloud.ambient_dim();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double d = euclid(cloud.point(i), cloud.point(j), dim);
                dm.values(i, j) = d;
                dm.values(j, i) = d;
            }
        return dm;
    }

    if (params.mode == FermatParams::Mode::Exact) {
        Vec dist;
        for (std::size_t i = 0; i < n; ++i) {
            dijkstra_complete(cloud.points, params.p, i, dist);
            for (std::size_t j = 0; j < n; ++j) dm.values(i, j) = dist[j];
        }
    } else {
        std::size_t k = params.k ? params.k : default_knn_k(n);
        for (int attempt = 0;; ++attempt) {
            const SparseWeightedGraph g = knn_graph_of(cloud.points, std::min(k, n - 1));
            if (g.connected()) {
                Vec dist;
                for (std::size_t i = 0; i < n; ++i) {
                    dijkstra_graph(g, params.p, i, dist);
                    for (std::size_t j = 0; j < n; ++j) dm.values(i, j) = dist[j];
                }
                break;
            }
            if (attempt == 1)
                throw DisconnectedGraph("knn graph disconnected after doubling k to " +
                                        std::to_string(k));
            k = std::min(2 * k, n - 1);
        }
    }
    // Symmetrize away heap-order rounding; entries agree to ~1e-15 already.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (dm.values(i, j) + dm.values(j, i));
            dm.values(i, j) = v;
            dm.values(j, i) = v;
        }
    return dm;
}

DistanceMatrix normalize_fermat(const DistanceMatrix& dm, std::size_t n,
                                const FermatParams& params) {
    if (dm.normalized) throw DoubleNormalization("distance matrix is already normalized");
    DistanceMatrix out(dm);
    const double scale = std::pow(static_cast<double>(n),
                                  (params.p - 1.0) / static_cast<double>(params.m));
    for (double& v : out.values.data()) v *= scale;
    out.normalized = true;
    out.scale = scale;
    return out;
}

}  // namespace fermat
